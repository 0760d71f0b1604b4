use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{factor_positive_rational, ExactScalar, NumError, Rational};

/// A positive real `prod p^e_p` over primes `p` with rational exponents.
///
/// Canonical: every key is prime and no exponent is zero; the empty map is 1.
/// The derived `Ord` is structural (for sets and maps), not the order of values;
/// use [`RadicalReal::cmp_value`] for that.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RadicalReal {
    exps: BTreeMap<u64, Rational>,
}

impl RadicalReal {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds from a prime-to-exponent map, dropping zero exponents.
    /// Keys are trusted to be prime.
    pub fn from_exponents(mut exps: BTreeMap<u64, Rational>) -> Self {
        exps.retain(|_, e| !e.is_zero());
        RadicalReal { exps }
    }

    pub fn exponents(&self) -> &BTreeMap<u64, Rational> {
        &self.exps
    }

    pub fn exponent(&self, p: u64) -> Rational {
        self.exps.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, rhs: &RadicalReal) -> RadicalReal {
        let mut exps = self.exps.clone();
        for (p, e) in &rhs.exps {
            let slot = exps.entry(*p).or_insert_with(Rational::zero);
            *slot = &*slot + e;
        }
        Self::from_exponents(exps)
    }

    pub fn inv(&self) -> RadicalReal {
        RadicalReal { exps: self.exps.iter().map(|(p, e)| (*p, -e)).collect() }
    }

    pub fn div(&self, rhs: &RadicalReal) -> RadicalReal {
        self.mul(&rhs.inv())
    }

    pub fn pow(&self, k: &Rational) -> RadicalReal {
        Self::from_exponents(self.exps.iter().map(|(p, e)| (*p, e * k)).collect())
    }

    /// Least common denominator of the exponents.
    pub fn exponent_denominator(&self) -> BigInt {
        self.exps.values().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// Exact comparison with 1: raise to the common exponent denominator and
    /// compare the two resulting integers.
    pub fn cmp_one(&self) -> Ordering {
        let den = self.exponent_denominator();
        let (mut up, mut down) = (BigUint::one(), BigUint::one());
        for (p, e) in &self.exps {
            let k = (e.numer() * &den / e.denom()).abs().to_u32().expect("exponent too large to compare");
            let pk = num_traits::Pow::pow(BigUint::from(*p), k);
            if e.is_positive() {
                up *= pk;
            } else {
                down *= pk;
            }
        }
        up.cmp(&down)
    }

    pub fn cmp_value(&self, rhs: &RadicalReal) -> Ordering {
        self.div(rhs).cmp_one()
    }

    /// `x` or `1/x`, whichever is at least 1.
    pub fn above_one(&self) -> RadicalReal {
        if self.cmp_one() == Ordering::Less {
            self.inv()
        } else {
            self.clone()
        }
    }

    /// `x` or `1/x`, whichever is at most 1.
    pub fn below_one(&self) -> RadicalReal {
        if self.cmp_one() == Ordering::Greater {
            self.inv()
        } else {
            self.clone()
        }
    }

    /// The rational value when every exponent is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        let mut acc = Rational::one();
        for (p, e) in &self.exps {
            if !e.is_integer() {
                return None;
            }
            let k = e.numer().to_i32()?;
            acc = acc * Rational::from_integer(*p).pow(k);
        }
        Some(acc)
    }

    pub fn to_f64(&self) -> f64 {
        self.exps.iter().map(|(p, e)| e.to_f64() * (*p as f64).ln()).sum::<f64>().exp()
    }
}

/// `base^exponent` for a positive rational base.
pub fn radical_from_power(base: &Rational, exponent: &Rational) -> Result<RadicalReal, NumError> {
    Ok(factor_positive_rational(base)?.pow(exponent))
}

/// Converts a positive exact scalar to a radical when it is rational or of
/// the pure form `b*sqrt(d)`; `None` for mixed `a + b*sqrt(d)`.
pub fn quadext_ratio_to_radical(x: &ExactScalar) -> Result<Option<RadicalReal>, NumError> {
    if !x.is_positive() {
        return Err(NumError::NotPositive(x.to_string()));
    }
    match x {
        ExactScalar::Rational(r) => factor_positive_rational(r).map(Some),
        ExactScalar::Quad(q) if q.a().is_zero() => {
            let coef = factor_positive_rational(q.b())?;
            let root = radical_from_power(&Rational::from_integer(q.d()), &Rational::new(1, 2))?;
            Ok(Some(coef.mul(&root)))
        }
        ExactScalar::Quad(_) => Ok(None),
    }
}

impl fmt::Display for RadicalReal {
    /// Rational values print as `p/q`; otherwise a `*`-joined product of
    /// `p^(e)` factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (p, e) in &self.exps {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RadicalReal {
    type Err = NumError;

    /// `factor ("*" factor)*` with `factor := rational ("^(" rational ")")?`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumError::Parse(s.to_string());
        let mut acc = RadicalReal::one();
        let mut rest = s.trim();
        while !rest.is_empty() {
            // A factor ends at a '*' that is not inside parentheses.
            let mut depth = 0i32;
            let end = rest
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    c == '*' && depth == 0
                })
                .map_or(rest.len(), |(i, _)| i);
            let factor = rest[..end].trim();
            rest = rest.get(end + 1..).unwrap_or("");
            if factor.is_empty() {
                return Err(bad());
            }
            let value = match factor.split_once("^(") {
                Some((base, exp)) => {
                    let exp = exp.strip_suffix(')').ok_or_else(bad)?;
                    radical_from_power(&base.parse()?, &exp.parse()?)?
                }
                None => factor_positive_rational(&factor.parse()?)?,
            };
            acc = acc.mul(&value);
        }
        if s.trim().is_empty() {
            return Err(bad());
        }
        Ok(acc)
    }
}

impl Serialize for RadicalReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RadicalReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rad(pairs: &[(u64, i64, i64)]) -> RadicalReal {
        RadicalReal::from_exponents(pairs.iter().map(|&(p, n, d)| (p, Rational::new(n, d))).collect())
    }

    #[test]
    fn powers() {
        assert_eq!(radical_from_power(&Rational::from(8), &Rational::new(1, 2)).unwrap(), rad(&[(2, 3, 2)]));
        assert_eq!(radical_from_power(&Rational::from(2), &Rational::new(1, 3)).unwrap(), rad(&[(2, 1, 3)]));
        assert!(radical_from_power(&Rational::from(5), &Rational::zero()).unwrap().is_one());
        assert!(radical_from_power(&Rational::zero(), &Rational::one()).is_err());
    }

    #[test]
    fn quad_ratios() {
        let two_root_two: ExactScalar = "2*sqrt(2)".parse().unwrap();
        assert_eq!(quadext_ratio_to_radical(&two_root_two).unwrap(), Some(rad(&[(2, 3, 2)])));
        let third = ExactScalar::rational(1, 3);
        assert_eq!(quadext_ratio_to_radical(&third).unwrap(), Some(rad(&[(3, -1, 1)])));
        let mixed: ExactScalar = "1+1*sqrt(2)".parse().unwrap();
        assert_eq!(quadext_ratio_to_radical(&mixed).unwrap(), None);
        let neg: ExactScalar = "1-1*sqrt(2)".parse().unwrap();
        assert!(quadext_ratio_to_radical(&neg).is_err());
    }

    #[test]
    fn compare_with_one() {
        assert_eq!(rad(&[(2, -1, 2)]).cmp_one(), Ordering::Less);
        assert_eq!(rad(&[(2, 1, 2), (3, -1, 3)]).cmp_one(), Ordering::Less); // 1.414 < 1.442
        assert_eq!(rad(&[(2, 3, 1), (3, -2, 1)]).cmp_one(), Ordering::Less);
        assert_eq!(RadicalReal::one().cmp_one(), Ordering::Equal);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(rad(&[(2, -1, 1)]).to_string(), "1/2");
        assert_eq!(rad(&[(2, -1, 2)]).to_string(), "2^(-1/2)");
        assert_eq!(rad(&[(2, 1, 2), (3, -1, 1)]).to_string(), "2^(1/2)*3^(-1)");
        for s in ["1/2", "2^(-1/2)", "2^(1/2)*3^(-1)", "9", "12^(1/3)", "1/2^(1/3)"] {
            let x: RadicalReal = s.parse().unwrap();
            assert_eq!(x.to_string().parse::<RadicalReal>().unwrap(), x, "{s}");
        }
        assert_eq!("1/2^(1/3)".parse::<RadicalReal>().unwrap(), rad(&[(2, -1, 3)]));
        assert!("".parse::<RadicalReal>().is_err());
        assert!("2^(1/2".parse::<RadicalReal>().is_err());
        assert!("-2".parse::<RadicalReal>().is_err());
    }

    proptest! {
        #[test]
        fn power_is_additive_in_exponent(
            n in 1i64..500, d in 1i64..500, e1 in -20i64..20, f1 in 1i64..7, e2 in -20i64..20, f2 in 1i64..7
        ) {
            let base = Rational::new(n, d);
            let (x, y) = (Rational::new(e1, f1), Rational::new(e2, f2));
            let lhs = radical_from_power(&base, &(&x + &y)).unwrap();
            let rhs = radical_from_power(&base, &x).unwrap().mul(&radical_from_power(&base, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cmp_one_matches_float(a in -6i64..6, b in 1i64..5, c in -6i64..6, d in 1i64..5) {
            let x = rad(&[(2, a, b), (3, c, d)]);
            let f = x.to_f64();
            prop_assume!((f - 1.0).abs() > 1e-9);
            prop_assert_eq!(x.cmp_one(), if f > 1.0 { Ordering::Greater } else { Ordering::Less });
        }
    }
}
