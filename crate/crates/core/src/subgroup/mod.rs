//! Finitely generated multiplicative subgroups of the positive reals whose
//! generators are products of rational prime powers.
//!
//! A subgroup is stored as an integer lattice: each element `prod p^e_p`
//! maps to the vector `D * (e_p)` over the sorted prime support, and the
//! lattice is kept in Hermite normal form with the smallest admissible scale
//! `D`. That makes the representation canonical, so two subgroups are equal
//! exactly when their stored forms are.

mod hnf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use hnf::{hermite_normal_form, pivot_column};

use crate::numbers::{RadicalReal, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("lambda must differ from 1")]
    LambdaIsOne,
    #[error("malformed subgroup lattice: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultSubgroup {
    primes: Vec<u64>,
    basis: Vec<Vec<BigInt>>,
    scale: BigInt,
}

/// The cyclic/dense dichotomy for subgroups of the positive reals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubgroupClass {
    Trivial,
    /// Generated by `lambda`, with `0 < lambda < 1`.
    Cyclic {
        lambda: RadicalReal,
    },
    /// Rank at least 2; such a subgroup is dense.
    Dense {
        rank: usize,
    },
}

/// The subgroup `{n : lambda^n in G}` of the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclicIntersection {
    /// Only `n = 0`.
    Trivial,
    /// All multiples of `N`, with `N >= 1` minimal.
    PowerIndex(u64),
}

impl MultSubgroup {
    pub fn trivial() -> Self {
        MultSubgroup { primes: Vec::new(), basis: Vec::new(), scale: BigInt::one() }
    }

    /// The subgroup generated by `gens`.
    pub fn generate(gens: &[RadicalReal]) -> Self {
        let primes: Vec<u64> =
            gens.iter().flat_map(|g| g.exponents().keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        let scale = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.exponent_denominator()));
        let rows = gens.iter().filter(|g| !g.is_one()).map(|g| scaled_vector(g, &primes, &scale)).collect();
        Self::canonical(primes, hermite_normal_form(rows), scale)
    }

    /// Rebuilds from stored parts, re-deriving the canonical form.
    pub fn from_parts(primes: Vec<u64>, basis: Vec<Vec<BigInt>>, scale: BigInt) -> Result<Self, SubgroupError> {
        if scale <= BigInt::zero() {
            return Err(SubgroupError::Malformed("scale must be positive".into()));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SubgroupError::Malformed("primes must be strictly increasing".into()));
        }
        if basis.iter().any(|row| row.len() != primes.len()) {
            return Err(SubgroupError::Malformed("basis row length differs from prime count".into()));
        }
        let gens: Vec<RadicalReal> = basis.iter().map(|row| to_radical(row, &primes, &scale)).collect();
        let g = Self::generate(&gens);
        if g.primes != primes {
            return Err(SubgroupError::Malformed("prime list is not the support of the lattice".into()));
        }
        Ok(g)
    }

    fn canonical(primes: Vec<u64>, mut basis: Vec<Vec<BigInt>>, mut scale: BigInt) -> Self {
        let content = basis.iter().flatten().fold(scale.clone(), |acc, x| acc.gcd(x));
        if !content.is_one() {
            for x in basis.iter_mut().flatten() {
                *x /= &content;
            }
            scale /= &content;
        }
        let support: Vec<usize> = (0..primes.len()).filter(|&c| basis.iter().any(|r| !r[c].is_zero())).collect();
        if support.len() != primes.len() {
            basis = basis.into_iter().map(|r| support.iter().map(|&c| r[c].clone()).collect()).collect();
        }
        let primes = support.iter().map(|&c| primes[c]).collect();
        MultSubgroup { primes, basis, scale }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Hermite normal form rows over [`Self::primes`], scaled by [`Self::scale`].
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// The denominator `D`: stored vectors divided by `D` are exponent vectors.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The basis rows as group elements.
    pub fn generators(&self) -> Vec<RadicalReal> {
        self.basis.iter().map(|row| to_radical(row, &self.primes, &self.scale)).collect()
    }

    pub fn classify(&self) -> SubgroupClass {
        match self.rank() {
            0 => SubgroupClass::Trivial,
            1 => SubgroupClass::Cyclic { lambda: to_radical(&self.basis[0], &self.primes, &self.scale).below_one() },
            rank => SubgroupClass::Dense { rank },
        }
    }

    /// Coordinates of `x` in the basis, over the rationals, or `None` when `x`
    /// is outside the rational span of the lattice.
    fn coordinates(&self, x: &RadicalReal) -> Option<Vec<Rational>> {
        if x.exponents().keys().any(|p| self.primes.binary_search(p).is_err()) {
            return None;
        }
        let scale = Rational::from_integer(self.scale.clone());
        let mut v: Vec<Rational> = self.primes.iter().map(|&p| x.exponent(p) * &scale).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let c = pivot_column(row).expect("basis rows are nonzero");
            let k = &v[c] / Rational::from_integer(row[c].clone());
            for (vi, bi) in v.iter_mut().zip(row) {
                *vi = &*vi - &k * Rational::from_integer(bi.clone());
            }
            coords.push(k);
        }
        v.iter().all(Rational::is_zero).then_some(coords)
    }

    pub fn contains(&self, x: &RadicalReal) -> bool {
        self.coordinates(x).is_some_and(|c| c.iter().all(Rational::is_integer))
    }

    /// Computes `{n : lambda^n in G} = N Z` by solving for the rational
    /// coordinates of `lambda` and clearing their denominators.
    pub fn cyclic_intersection(&self, lambda: &RadicalReal) -> Result<CyclicIntersection, SubgroupError> {
        if lambda.is_one() {
            return Err(SubgroupError::LambdaIsOne);
        }
        Ok(match self.coordinates(lambda) {
            None => CyclicIntersection::Trivial,
            Some(coords) => {
                let n = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                CyclicIntersection::PowerIndex(u64::try_from(n).expect("power index exceeds u64"))
            }
        })
    }

    /// The subgroup generated by `self` and `other`.
    pub fn join(&self, other: &MultSubgroup) -> MultSubgroup {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Self::generate(&gens)
    }
}

fn scaled_vector(g: &RadicalReal, primes: &[u64], scale: &BigInt) -> Vec<BigInt> {
    primes
        .iter()
        .map(|&p| {
            let e = g.exponent(p);
            e.numer() * scale / e.denom()
        })
        .collect()
}

fn to_radical(row: &[BigInt], primes: &[u64], scale: &BigInt) -> RadicalReal {
    let exps: BTreeMap<u64, Rational> = primes
        .iter()
        .zip(row)
        .map(|(&p, x)| (p, Rational::try_new(x.clone(), scale.clone()).expect("positive scale")))
        .collect();
    RadicalReal::from_exponents(exps)
}

impl fmt::Debug for MultSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Display for SubgroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupClass::Trivial => write!(f, "trivial"),
            SubgroupClass::Cyclic { lambda } => write!(f, "cyclic lambda={lambda}"),
            SubgroupClass::Dense { rank } => write!(f, "dense (rank {rank})"),
        }
    }
}

impl SubgroupClass {
    pub fn tag(&self) -> &'static str {
        match self {
            SubgroupClass::Trivial => "trivial",
            SubgroupClass::Cyclic { .. } => "cyclic",
            SubgroupClass::Dense { .. } => "dense",
        }
    }
}

/// JSON form: `{class, lambda?, rank, generators, primes, basis, D}`, with big
/// integers as decimal strings.
#[derive(Serialize, Deserialize)]
struct SubgroupWire {
    class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<RadicalReal>,
    rank: usize,
    generators: Vec<RadicalReal>,
    primes: Vec<u64>,
    basis: Vec<Vec<String>>,
    #[serde(rename = "D")]
    scale: String,
}

impl Serialize for MultSubgroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let class = self.classify();
        SubgroupWire {
            class: class.tag().to_string(),
            lambda: match class {
                SubgroupClass::Cyclic { lambda } => Some(lambda),
                _ => None,
            },
            rank: self.rank(),
            generators: self.generators(),
            primes: self.primes.clone(),
            basis: self.basis.iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect(),
            scale: self.scale.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultSubgroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = SubgroupWire::deserialize(d)?;
        let int = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
        let basis = w
            .basis
            .iter()
            .map(|r| r.iter().map(|x| int(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let g = MultSubgroup::from_parts(w.primes, basis, int(&w.scale)?).map_err(D::Error::custom)?;
        let class = g.classify();
        if class.tag() != w.class || g.rank() != w.rank {
            return Err(D::Error::custom("subgroup class does not match its lattice"));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rad(s: &str) -> RadicalReal {
        s.parse().unwrap()
    }

    fn gen(list: &[&str]) -> MultSubgroup {
        MultSubgroup::generate(&list.iter().map(|s| rad(s)).collect::<Vec<_>>())
    }

    #[test]
    fn generate_examples() {
        assert_eq!(gen(&[]).rank(), 0);
        let half = gen(&["1/2"]);
        assert_eq!(half.rank(), 1);
        assert_eq!(half.primes(), &[2]);
        assert_eq!(half.basis(), &[vec![BigInt::from(1)]]);
        let root = gen(&["2^(3/2)", "2"]);
        assert_eq!(root.scale(), &BigInt::from(2));
        assert_eq!(root.rank(), 1);
        assert_eq!(root.generators(), vec![rad("2^(1/2)")]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(gen(&["1/3", "1/2"]).classify(), SubgroupClass::Dense { rank: 2 });
        assert_eq!(gen(&["2^(3/2)", "2"]).classify(), SubgroupClass::Cyclic { lambda: rad("2^(-1/2)") });
        assert_eq!(gen(&["1/4", "1/2"]).classify(), SubgroupClass::Cyclic { lambda: rad("1/2") });
        assert_eq!(gen(&["2", "9"]).classify(), SubgroupClass::Dense { rank: 2 });
        assert_eq!(gen(&["1"]).classify(), SubgroupClass::Trivial);
    }

    #[test]
    fn membership() {
        assert!(gen(&["1/2"]).contains(&rad("1/8")));
        assert!(!gen(&["1/2"]).contains(&rad("1/3")));
        assert!(gen(&["2^(1/2)"]).contains(&rad("2^(3/2)")));
        assert!(!gen(&["2"]).contains(&rad("2^(1/2)")));
        assert!(gen(&["2"]).contains(&RadicalReal::one()));
    }

    #[test]
    fn cyclic_intersection_examples() {
        let half = rad("1/2");
        assert_eq!(gen(&["1/8"]).cyclic_intersection(&half), Ok(CyclicIntersection::PowerIndex(3)));
        assert_eq!(gen(&["1/3"]).cyclic_intersection(&half), Ok(CyclicIntersection::Trivial));
        assert_eq!(gen(&["1/2", "1/3"]).cyclic_intersection(&half), Ok(CyclicIntersection::PowerIndex(1)));
        assert_eq!(gen(&["1/2"]).cyclic_intersection(&RadicalReal::one()), Err(SubgroupError::LambdaIsOne));
        // 6 = 2*3 is in the span of <4, 9> at index 2.
        assert_eq!(gen(&["4", "9"]).cyclic_intersection(&rad("1/6")), Ok(CyclicIntersection::PowerIndex(2)));
    }

    #[test]
    fn canonical_equality() {
        assert_eq!(gen(&["2^(3/2)", "2"]), gen(&["2^(1/2)"]));
        assert_eq!(gen(&["6", "2"]), gen(&["1/3", "1/2"]));
        assert_ne!(gen(&["4"]), gen(&["2"]));
    }

    #[test]
    fn json_round_trip() {
        let g = gen(&["2^(3/2)", "9", "1/3"]);
        let s = serde_json::to_string(&g).unwrap();
        let back: MultSubgroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(s.contains("\"class\":\"dense\""));
    }
}
