use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{NumError, QuadExt, Rational};

/// A weight or state value: a rational, or an irrational element of Q(sqrt(d)).
///
/// Canonical: the `Quad` variant always has a nonzero irrational part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(Rational),
    Quad(QuadExt),
}

impl ExactScalar {
    pub fn rational(n: i64, d: i64) -> Self {
        ExactScalar::Rational(Rational::new(n, d))
    }

    pub fn zero() -> Self {
        ExactScalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rational(Rational::one())
    }

    fn normalize(q: QuadExt) -> Self {
        if q.b().is_zero() {
            ExactScalar::Rational(q.a().clone())
        } else {
            ExactScalar::Quad(q)
        }
    }

    pub fn from_quad(q: QuadExt) -> Self {
        Self::normalize(q)
    }

    pub fn field_d(&self) -> Option<u64> {
        match self {
            ExactScalar::Rational(_) => None,
            ExactScalar::Quad(q) => Some(q.d()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            ExactScalar::Quad(_) => None,
        }
    }

    fn to_quad(&self, d: u64) -> QuadExt {
        match self {
            ExactScalar::Rational(r) => QuadExt::new(r.clone(), Rational::zero(), d).expect("valid field"),
            ExactScalar::Quad(q) => q.clone(),
        }
    }

    fn binop(
        &self,
        rhs: &ExactScalar,
        rat: impl FnOnce(&Rational, &Rational) -> Result<Rational, NumError>,
        quad: impl FnOnce(&QuadExt, &QuadExt) -> Result<QuadExt, NumError>,
    ) -> Result<ExactScalar, NumError> {
        match (self, rhs) {
            (ExactScalar::Rational(x), ExactScalar::Rational(y)) => rat(x, y).map(ExactScalar::Rational),
            (x, y) => {
                let d = x.field_d().or(y.field_d()).expect("one side is quadratic");
                quad(&x.to_quad(d), &y.to_quad(d)).map(Self::normalize)
            }
        }
    }

    pub fn add(&self, rhs: &ExactScalar) -> Result<ExactScalar, NumError> {
        self.binop(rhs, |x, y| Ok(x + y), |x, y| x.add(y))
    }

    pub fn sub(&self, rhs: &ExactScalar) -> Result<ExactScalar, NumError> {
        self.binop(rhs, |x, y| Ok(x - y), |x, y| x.sub(y))
    }

    pub fn mul(&self, rhs: &ExactScalar) -> Result<ExactScalar, NumError> {
        self.binop(rhs, |x, y| Ok(x * y), |x, y| x.mul(y))
    }

    pub fn div(&self, rhs: &ExactScalar) -> Result<ExactScalar, NumError> {
        self.binop(rhs, |x, y| x.checked_div(y), |x, y| x.div(y))
    }

    pub fn recip(&self) -> Result<ExactScalar, NumError> {
        ExactScalar::one().div(self)
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::Quad(q) => ExactScalar::Quad(q.mul_rational(&-Rational::one())),
        }
    }

    pub fn sign(&self) -> Ordering {
        match self {
            ExactScalar::Rational(r) => r.signum(),
            ExactScalar::Quad(q) => q.sign(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn try_cmp(&self, rhs: &ExactScalar) -> Result<Ordering, NumError> {
        Ok(self.sub(rhs)?.sign())
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a ExactScalar>) -> Result<ExactScalar, NumError> {
        items.into_iter().try_fold(ExactScalar::zero(), |acc, x| acc.add(x))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational(r) => r.to_f64(),
            ExactScalar::Quad(q) => q.to_f64(),
        }
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::Rational(r)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => r.fmt(f),
            ExactScalar::Quad(q) => q.fmt(f),
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for ExactScalar {
    type Err = NumError;

    /// Parses the canonical `Display` forms: `p/q`, `a+b*sqrt(d)`,
    /// `a-b*sqrt(d)` and `b*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumError::Parse(s.to_string());
        let s = s.trim();
        let Some(body) = s.strip_suffix(')') else {
            return s.parse().map(ExactScalar::Rational);
        };
        let (head, d) = body.rsplit_once("*sqrt(").ok_or_else(bad)?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        // Split at the last sign that is not the leading one.
        let split = head.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').last();
        let (a, b) = match split {
            Some((i, _)) => (head[..i].parse::<Rational>()?, head[i..].trim_start_matches('+').parse::<Rational>()?),
            None => (Rational::zero(), head.parse::<Rational>()?),
        };
        QuadExt::new(a, b, d).map(Self::normalize)
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
