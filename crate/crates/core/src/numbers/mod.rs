//! Exact scalars: rationals, one real quadratic extension, and positive reals
//! written as products of rational prime powers.

mod factor;
mod quad;
mod radical;
mod rational;
mod scalar;

pub use factor::{factor_positive_rational, factor_positive_rational_with, FactorLimit};
pub use quad::{fold_sqrt, QuadExt};
pub use radical::{quadext_ratio_to_radical, radical_from_power, RadicalReal};
pub use rational::Rational;
pub use scalar::ExactScalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed quadratic fields: sqrt({0}) and sqrt({1})")]
    FieldMismatch(u64, u64),
    #[error("sqrt({0}) does not define a real quadratic field")]
    BadField(u64),
    #[error("expected a strictly positive value, got {0}")]
    NotPositive(String),
    #[error("integer {0} exceeds the factorization limit (2^64)")]
    TooLarge(String),
    #[error("invalid literal `{0}`")]
    Parse(String),
}
