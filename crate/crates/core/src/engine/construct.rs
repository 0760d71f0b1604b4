use crate::algebra::{default_algebra_name, default_summand_label, Algebra, MatrixSummand};
use crate::numbers::{ExactScalar, RadicalReal, Rational};

use super::EngineError;

/// Free factors realizing a prescribed Sd group: one
/// `M2[1/(1+l), l/(1+l)]` per generator `l`, duplicated when there is only
/// one so the product has two factors. Generators must be rationals in (0,1).
pub fn construct_with_sd(gens: &[RadicalReal]) -> Result<Vec<Algebra>, EngineError> {
    if gens.is_empty() {
        return Err(EngineError::Construct("at least one generator is required".into()));
    }
    let mut lambdas = Vec::with_capacity(gens.len());
    for g in gens {
        let Some(l) = g.to_rational() else {
            return Err(EngineError::Construct(format!("generator {g} is not rational")));
        };
        if !l.is_positive() || l >= Rational::one() {
            return Err(EngineError::Construct(format!("generator {g} must lie in (0,1)")));
        }
        lambdas.push(l);
    }
    if lambdas.len() == 1 {
        lambdas.push(lambdas[0].clone());
    }
    Ok(lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let total = Rational::one() + l;
            let top = Rational::one() / &total;
            let bottom = l / &total;
            let summand = MatrixSummand::new(
                vec![ExactScalar::Rational(top), ExactScalar::Rational(bottom)],
                default_summand_label(0),
            );
            Algebra::new(default_algebra_name(i), vec![summand], vec![])
        })
        .collect())
}

/// Whether the algebras have the shape produced by [`construct_with_sd`]:
/// each a single non-tracial `M2` with rational weights, heavier one first.
pub(crate) fn has_construct_shape(algebras: &[Algebra]) -> bool {
    algebras.len() >= 2
        && algebras.iter().all(|a| {
            a.atoms.is_empty()
                && matches!(a.matrix_summands.as_slice(), [s] if s.size == 2
                    && s.weights.iter().all(|w| w.as_rational().is_some())
                    && s.weights[0].try_cmp(&s.weights[1]).is_ok_and(|o| o.is_gt()))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rad(s: &str) -> RadicalReal {
        s.parse().unwrap()
    }

    #[test]
    fn single_generator_is_duplicated() {
        let algs = construct_with_sd(&[rad("1/2")]).unwrap();
        assert_eq!(algs.len(), 2);
        for a in &algs {
            assert_eq!(a.matrix_summands[0].weights, vec![ExactScalar::rational(2, 3), ExactScalar::rational(1, 3)]);
            assert!(a.validate(0).is_ok());
        }
        assert!(has_construct_shape(&algs));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(construct_with_sd(&[]).is_err());
        assert!(construct_with_sd(&[rad("2")]).is_err());
        assert!(construct_with_sd(&[rad("1")]).is_err());
        assert!(construct_with_sd(&[rad("2^(-1/2)")]).is_err());
    }
}
