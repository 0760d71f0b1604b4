//! Independent lattice computations used to check the subgroup code: rank by
//! fraction-free Gaussian elimination, and membership through determinantal
//! divisors (gcd of all maximal minors), with no Hermite normal form.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fpcalc_core::{RadicalReal, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exponent vectors over the union of primes, all scaled by one common
/// denominator so that they are integral.
pub fn integer_rows(gens: &[RadicalReal]) -> Vec<Vec<BigInt>> {
    let primes: BTreeSet<u64> = gens.iter().flat_map(|g| g.exponents().keys().copied()).collect();
    let mut scale = BigInt::one();
    for g in gens {
        for e in g.exponents().values() {
            scale = scale.lcm(e.denom());
        }
    }
    gens.iter()
        .map(|g| {
            primes
                .iter()
                .map(|&p| {
                    let e: Rational = g.exponent(p);
                    e.numer() * &scale / e.denom()
                })
                .collect()
        })
        .collect()
}

/// Rank over Q by Bareiss elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for c in col + 1..ncols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix, by Bareiss elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all `r x r` minors.
pub fn determinantal_divisor(rows: &[Vec<BigInt>], r: usize) -> BigInt {
    if r == 0 {
        return BigInt::one();
    }
    let ncols = rows[0].len();
    let mut g = BigInt::zero();
    for rs in subsets(rows.len(), r) {
        for cs in subsets(ncols, r) {
            let minor: Vec<Vec<BigInt>> =
                rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            g = g.gcd(&det(minor));
        }
    }
    g.abs()
}

/// Whether `x` lies in the subgroup generated by `gens`: adding it must keep
/// both the rank and the product of invariant factors.
pub fn in_subgroup(gens: &[RadicalReal], x: &RadicalReal) -> bool {
    if x.is_one() {
        return true;
    }
    let mut all = gens.to_vec();
    all.push(x.clone());
    let rows = integer_rows(&all);
    let base = &rows[..gens.len()];
    let r = bareiss_rank(base);
    if bareiss_rank(&rows) != r {
        return false;
    }
    determinantal_divisor(base, r) == determinantal_divisor(&rows, r)
}

/// Least `n` in `1..=limit` with `lambda^n` in the subgroup, by trying each.
pub fn brute_power_index(gens: &[RadicalReal], lambda: &RadicalReal, limit: u64) -> Option<u64> {
    (1..=limit).find(|&n| in_subgroup(gens, &lambda.pow(&Rational::from(n as i64))))
}

/// Smallest positive `|q log x - p log y|` found along the continued
/// fraction convergents `p/q` of `log x / log y` with `q <= max_q`.
pub fn smallest_word(x: f64, y: f64, max_q: f64) -> f64 {
    let (lx, ly) = (x.ln().abs(), y.ln().abs());
    let mut t = lx / ly;
    let (mut p0, mut q0, mut p1, mut q1) = (1.0f64, 0.0f64, t.floor(), 1.0f64);
    let mut best = f64::INFINITY;
    loop {
        let v = (q1 * lx - p1 * ly).abs();
        if v > 1e-12 {
            best = best.min(v);
        }
        let frac = t - t.floor();
        if frac < 1e-12 || q1 > max_q {
            return best;
        }
        t = 1.0 / frac;
        let a = t.floor();
        (p0, q0, p1, q1) = (p1, q1, a * p1 + p0, a * q1 + q0);
    }
}
