//! Mating rules: which tuples of simple summands leave a finite-dimensional
//! summand in the free product, and with which weights.

use super::labels::offspring_labels;
use super::trace::{Inequality, MatingRule};
use super::{Offspring, SummandRef};
use crate::algebra::MatrixSummand;
use crate::numbers::{ExactScalar, NumError};

/// A simple summand picked from one of the algebras.
#[derive(Debug, Clone, Copy)]
pub struct Choice<'a> {
    pub at: SummandRef,
    pub summand: &'a MatrixSummand,
}

impl<'a> Choice<'a> {
    pub fn new(at: SummandRef, summand: &'a MatrixSummand) -> Self {
        Choice { at, summand }
    }

    fn size(&self) -> usize {
        self.summand.size
    }

    fn alpha(&self) -> &ExactScalar {
        &self.summand.weights[0]
    }
}

/// Result of evaluating one applicable mating.
#[derive(Debug, Clone)]
pub(crate) struct MatingOutcome {
    pub rule: MatingRule,
    pub inequality: Inequality,
    pub offspring: Option<Offspring>,
}

fn one() -> ExactScalar {
    ExactScalar::one()
}

fn reciprocal_sum(weights: &[ExactScalar]) -> Result<ExactScalar, NumError> {
    weights.iter().try_fold(ExactScalar::zero(), |acc, w| acc.add(&w.recip()?))
}

fn sorted_parents(choices: &[Choice<'_>]) -> Vec<SummandRef> {
    let mut parents: Vec<SummandRef> = choices.iter().map(|c| c.at).collect();
    parents.sort();
    parents
}

fn build(
    parents: Vec<SummandRef>,
    minimal: Vec<SummandRef>,
    dist: Option<(SummandRef, usize)>,
    weights: Vec<ExactScalar>,
) -> Offspring {
    let mut minimal = minimal;
    minimal.sort();
    Offspring { size: weights.len(), labels: offspring_labels(&minimal, dist), weights, parents }
}

/// Two-party mating. `C[alpha]` with `M_m[beta]` has offspring iff
/// `sum_i 1/beta_i < 1/(1 - alpha)`, and then
/// `gamma_i = beta_i (1 - (1 - alpha) sum_p 1/beta_p)`; two copies of C have
/// offspring `C[alpha + beta - 1]` iff `alpha + beta > 1`. Absent when both
/// summands have size at least 2.
pub fn mate_pair(a: Choice<'_>, b: Choice<'_>) -> Result<Option<Offspring>, NumError> {
    Ok(mate_pair_traced(a, b)?.and_then(|o| o.offspring))
}

pub(crate) fn mate_pair_traced(a: Choice<'_>, b: Choice<'_>) -> Result<Option<MatingOutcome>, NumError> {
    let (c, other) = match (a.size(), b.size()) {
        (1, _) => (a, b),
        (_, 1) => (b, a),
        _ => return Ok(None),
    };
    let parents = sorted_parents(&[a, b]);
    let alpha = c.alpha();

    if other.size() == 1 {
        let total = alpha.add(other.alpha())?;
        let holds = total.try_cmp(&one())?.is_gt();
        let offspring = holds
            .then(|| Ok::<_, NumError>(build(parents.clone(), vec![c.at, other.at], None, vec![total.sub(&one())?])));
        return Ok(Some(MatingOutcome {
            rule: MatingRule::Abelian,
            inequality: Inequality { lhs: one(), rhs: total, holds },
            offspring: offspring.transpose()?,
        }));
    }

    let betas = &other.summand.weights;
    let deficit = one().sub(alpha)?;
    let lhs = reciprocal_sum(betas)?;
    let rhs = deficit.recip()?;
    let holds = lhs.try_cmp(&rhs)?.is_lt();
    let offspring = if holds {
        let factor = one().sub(&deficit.mul(&lhs)?)?;
        let gammas = betas.iter().map(|b| b.mul(&factor)).collect::<Result<Vec<_>, _>>()?;
        Some(build(parents, vec![c.at], Some((other.at, other.size())), gammas))
    } else {
        None
    };
    Ok(Some(MatingOutcome { rule: MatingRule::Pair, inequality: Inequality { lhs, rhs, holds }, offspring }))
}

/// Mating one summand from each of `|I| >= 2` algebras. Requires all but one
/// choice to be C; with `iota'` the remaining one, offspring exists iff
/// `sum_j 1/alpha_{iota',j} < 1 / sum_{iota != iota'} (1 - alpha_iota)` and
/// `gamma_i = alpha_{iota',i} (1 - S sum_p 1/alpha_{iota',p})` with `S` that sum.
/// When every choice is C, the first one plays `iota'`.
pub fn mate_family(choices: &[Choice<'_>]) -> Result<Option<Offspring>, NumError> {
    Ok(mate_family_traced(choices)?.and_then(|o| o.offspring))
}

pub(crate) fn mate_family_traced(choices: &[Choice<'_>]) -> Result<Option<MatingOutcome>, NumError> {
    if choices.len() < 2 {
        return Ok(None);
    }
    let big: Vec<usize> = (0..choices.len()).filter(|&i| choices[i].size() > 1).collect();
    let dist = match big.as_slice() {
        [] => 0,
        [i] => *i,
        _ => return Ok(None),
    };
    let d = choices[dist];
    let others: Vec<Choice<'_>> = choices.iter().enumerate().filter(|&(i, _)| i != dist).map(|(_, c)| *c).collect();

    let deficit = others.iter().try_fold(ExactScalar::zero(), |acc, c| acc.add(&one().sub(c.alpha())?))?;
    let lhs = reciprocal_sum(&d.summand.weights)?;
    let rhs = deficit.recip()?;
    let holds = lhs.try_cmp(&rhs)?.is_lt();
    let offspring = if holds {
        let factor = one().sub(&deficit.mul(&lhs)?)?;
        let gammas = d.summand.weights.iter().map(|a| a.mul(&factor)).collect::<Result<Vec<_>, _>>()?;
        let parents = sorted_parents(choices);
        Some(if d.size() == 1 {
            build(parents.clone(), parents, None, gammas)
        } else {
            build(parents, others.iter().map(|c| c.at).collect(), Some((d.at, d.size())), gammas)
        })
    } else {
        None
    };
    Ok(Some(MatingOutcome { rule: MatingRule::Family, inequality: Inequality { lhs, rhs, holds }, offspring }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64, d: i64) -> ExactScalar {
        ExactScalar::rational(n, d)
    }

    fn s(weights: &[ExactScalar]) -> MatrixSummand {
        MatrixSummand::new(weights.to_vec(), "s")
    }

    fn at(algebra: usize, summand: usize) -> SummandRef {
        SummandRef { algebra, summand }
    }

    fn pair(x: &MatrixSummand, y: &MatrixSummand) -> Option<Vec<ExactScalar>> {
        mate_pair(Choice::new(at(0, 0), x), Choice::new(at(1, 0), y)).unwrap().map(|o| o.weights)
    }

    #[test]
    fn pair_examples() {
        let m2 = s(&[w(2, 3), w(1, 3)]);
        assert_eq!(pair(&s(&[w(4, 5)]), &m2), Some(vec![w(1, 15), w(1, 30)]));
        assert_eq!(pair(&s(&[w(1, 4)]), &m2), None);
        assert_eq!(pair(&s(&[w(3, 4)]), &s(&[w(1, 2)])), Some(vec![w(1, 4)]));
        assert_eq!(pair(&s(&[w(1, 2)]), &s(&[w(1, 2)])), None);
        assert_eq!(pair(&s(&[w(40, 41)]), &s(&[w(1, 40), w(9, 40)])), None);
        assert_eq!(pair(&m2, &m2), None);
    }

    #[test]
    fn pair_is_symmetric_in_roles() {
        let m2 = s(&[w(2, 3), w(1, 3)]);
        let c = s(&[w(4, 5)]);
        let ab = mate_pair(Choice::new(at(0, 1), &c), Choice::new(at(1, 0), &m2)).unwrap().unwrap();
        let ba = mate_pair(Choice::new(at(1, 0), &m2), Choice::new(at(0, 1), &c)).unwrap().unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.parents, vec![at(0, 1), at(1, 0)]);
        assert_eq!(ab.labels.len(), 2);
    }

    #[test]
    fn family_matches_pair_on_two() {
        let m2 = s(&[w(2, 3), w(1, 3)]);
        let c = s(&[w(4, 5)]);
        let fam = mate_family(&[Choice::new(at(0, 1), &c), Choice::new(at(1, 0), &m2)]).unwrap();
        let pr = mate_pair(Choice::new(at(0, 1), &c), Choice::new(at(1, 0), &m2)).unwrap();
        assert_eq!(fam, pr);
        assert_eq!(fam.unwrap().weights, vec![w(1, 15), w(1, 30)]);
    }

    #[test]
    fn family_three_parties() {
        // deficit 1/10 + 1/10 = 1/5, condition 20/9 + 20 < 5 fails.
        let c = s(&[w(9, 10)]);
        let m2 = s(&[w(9, 20), w(1, 20)]);
        let choices = [Choice::new(at(0, 0), &c), Choice::new(at(1, 0), &c), Choice::new(at(2, 0), &m2)];
        assert_eq!(mate_family(&choices).unwrap(), None);

        // deficit 1/20 + 1/20 = 1/10, sum 1/beta = 4 + 4 = 8 < 10: gamma = beta (1 - 8/10).
        let c = s(&[w(19, 20)]);
        let m2 = s(&[w(1, 4), w(1, 4)]);
        let choices = [Choice::new(at(0, 0), &c), Choice::new(at(1, 0), &m2), Choice::new(at(2, 0), &c)];
        let o = mate_family(&choices).unwrap().unwrap();
        assert_eq!(o.weights, vec![w(1, 20), w(1, 20)]);
        assert_eq!(o.parents, vec![at(0, 0), at(1, 0), at(2, 0)]);
    }

    #[test]
    fn family_rejects_two_matrix_choices() {
        let m2 = s(&[w(1, 2), w(1, 2)]);
        let c = s(&[w(99, 100)]);
        let choices = [Choice::new(at(0, 0), &m2), Choice::new(at(1, 0), &m2), Choice::new(at(2, 0), &c)];
        assert_eq!(mate_family(&choices).unwrap(), None);
    }

    #[test]
    fn all_abelian_family() {
        let c = s(&[w(9, 10)]);
        let choices = [Choice::new(at(0, 0), &c), Choice::new(at(1, 0), &c), Choice::new(at(2, 0), &c)];
        let o = mate_family(&choices).unwrap().unwrap();
        assert_eq!(o.weights, vec![w(7, 10)]);
        assert_eq!(o.labels[0].to_string(), "meet(p0.0.0, p1.0.0, p2.0.0)");
    }
}
