use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{NumError, RadicalReal, Rational};

/// Input-size guard for trial-division factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorLimit {
    /// Reject numerators or denominators above 2^64.
    #[default]
    U64,
    /// Accept any size; still fails if a prime factor exceeds 2^64.
    Unbounded,
}

/// Factors `q > 0` into integer prime powers.
pub fn factor_positive_rational(q: &Rational) -> Result<RadicalReal, NumError> {
    factor_positive_rational_with(q, FactorLimit::U64)
}

pub fn factor_positive_rational_with(q: &Rational, limit: FactorLimit) -> Result<RadicalReal, NumError> {
    if !q.is_positive() {
        return Err(NumError::NotPositive(q.to_string()));
    }
    let mut exps: BTreeMap<u64, Rational> = BTreeMap::new();
    for (n, sign) in [(q.numer(), 1i64), (q.denom(), -1i64)] {
        for (p, e) in factor_integer(n, limit)? {
            *exps.entry(p).or_insert_with(Rational::zero) = Rational::from(sign * e as i64);
        }
    }
    Ok(RadicalReal::from_exponents(exps))
}

fn factor_integer(n: &BigInt, limit: FactorLimit) -> Result<Vec<(u64, u32)>, NumError> {
    let n = n.magnitude();
    if let Some(small) = n.to_u64() {
        return Ok(factor_u64(small));
    }
    if limit == FactorLimit::U64 {
        return Err(NumError::TooLarge(n.to_string()));
    }
    factor_big(n.clone())
}

/// Candidate divisors 2, 3, 5, 7, 11, 13, ... (2, 3, then 6k +- 1).
fn wheel() -> impl Iterator<Item = u64> {
    [2u64, 3].into_iter().chain((1u64..).flat_map(|k| [6 * k - 1, 6 * k + 1]))
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in wheel() {
        if p.checked_mul(p).is_none_or(|sq| sq > n) {
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn factor_big(mut n: BigUint) -> Result<Vec<(u64, u32)>, NumError> {
    let mut out = Vec::new();
    for p in wheel() {
        if let Some(small) = n.to_u64() {
            let mut rest = factor_u64(small);
            // Primes found so far are all below p, so merging keeps the order.
            out.append(&mut rest);
            return Ok(merge(out));
        }
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        loop {
            let (quo, rem) = n.div_rem(&bp);
            if !rem.is_zero() {
                break;
            }
            n = quo;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if n.is_one() {
        Ok(out)
    } else {
        n.to_u64()
            .map(|p| {
                out.push((p, 1));
                out
            })
            .ok_or_else(|| NumError::TooLarge(n.to_string()))
    }
}

fn merge(v: Vec<(u64, u32)>) -> Vec<(u64, u32)> {
    let mut m: BTreeMap<u64, u32> = BTreeMap::new();
    for (p, e) in v {
        *m.entry(p).or_default() += e;
    }
    m.into_iter().collect()
}
