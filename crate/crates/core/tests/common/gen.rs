//! Seeded random inputs.

#![allow(dead_code)]

use std::collections::BTreeMap;

use fpcalc_core::numbers::QuadExt;
use fpcalc_core::{
    Algebra, AtomKind, Centralizer, ExactScalar, MatrixSummand, ProblemDoc, RadicalReal, Rational, SpecialAtom,
};
use rand::rngs::StdRng;
use rand::Rng;

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn radical(rng: &mut StdRng) -> RadicalReal {
    let mut exps = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let e = Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=4));
        exps.insert(p, e);
    }
    RadicalReal::from_exponents(exps)
}

pub fn radicals(rng: &mut StdRng, max: usize) -> Vec<RadicalReal> {
    (0..rng.gen_range(1..=max)).map(|_| radical(rng)).collect()
}

fn label(j: usize) -> String {
    format!("p{}", j + 1)
}

/// A valid algebra made of matrix summands with rational weights.
pub fn finite_algebra(rng: &mut StdRng, name: &str) -> Algebra {
    loop {
        let sizes: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=3)).collect();
        if sizes == [1] {
            continue;
        }
        let raw: Vec<Vec<i64>> = sizes.iter().map(|&n| (0..n).map(|_| rng.gen_range(1..=12)).collect()).collect();
        let total: i64 = raw.iter().flatten().sum();
        let summands = raw
            .iter()
            .enumerate()
            .map(|(j, ws)| MatrixSummand::new(ws.iter().map(|&x| ExactScalar::rational(x, total)).collect(), label(j)))
            .collect();
        return Algebra::new(name, summands, vec![]);
    }
}

/// A valid algebra where some summand is `C[alpha]` with `alpha` drawn
/// close to 1, so that matings actually happen.
pub fn mating_algebra(rng: &mut StdRng, name: &str) -> Algebra {
    let den = rng.gen_range(10..=40);
    let heavy = rng.gen_range(den / 2..den);
    let mut rest = den - heavy;
    let mut summands = vec![MatrixSummand::new(vec![ExactScalar::rational(heavy, den)], label(0))];
    while rest > 0 {
        let n = rng.gen_range(1..=3).min(rest as usize);
        let mut ws = Vec::new();
        for i in 0..n {
            let left = n - i - 1;
            let take = if left == 0 { rest } else { rng.gen_range(1..=rest - left as i64) };
            rest -= take;
            ws.push(ExactScalar::rational(take, den));
        }
        summands.push(MatrixSummand::new(ws, label(summands.len())));
    }
    Algebra::new(name, summands, vec![])
}

pub fn any_rational(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-50..=50), rng.gen_range(1..=30))
}

fn scalar(rng: &mut StdRng, field: Option<u64>) -> ExactScalar {
    match field {
        Some(d) if rng.gen_bool(0.3) => {
            ExactScalar::from_quad(QuadExt::new(any_rational(rng), any_rational(rng), d).expect("squarefree"))
        }
        _ => ExactScalar::Rational(any_rational(rng)),
    }
}

fn positive(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(1..=50), rng.gen_range(1..=30))
}

/// Arbitrary documents: weights need not be valid, only expressible.
pub fn document(rng: &mut StdRng) -> ProblemDoc {
    let field = [None, Some(2), Some(3), Some(5), Some(6)][rng.gen_range(0..5)];
    let n = rng.gen_range(2..=4);
    let algebras = (0..n)
        .map(|i| {
            let mats = (0..rng.gen_range(0..=3))
                .map(|j| {
                    let size = rng.gen_range(1..=3);
                    MatrixSummand::new((0..size).map(|_| scalar(rng, field)).collect(), label(j))
                })
                .collect::<Vec<_>>();
            let mut atoms = Vec::new();
            let want = if mats.is_empty() { rng.gen_range(1..=2) } else { rng.gen_range(0..=2) };
            for _ in 0..want {
                let mass = scalar(rng, field);
                atoms.push(match rng.gen_range(0..4) {
                    0 => SpecialAtom::bh_geometric(mass, positive(rng)).unwrap(),
                    1 => SpecialAtom {
                        kind: AtomKind::TypeIII {
                            sd_generators: radicals(rng, 3),
                            centralizer: if rng.gen_bool(0.5) {
                                Centralizer::HyperfiniteR
                            } else {
                                Centralizer::LFreeInfinity
                            },
                        },
                        mass,
                    },
                    2 => SpecialAtom { kind: AtomKind::DiffuseTracial, mass },
                    _ => SpecialAtom {
                        kind: AtomKind::FreeGroupFactor { param: rng.gen_bool(0.5).then(|| positive(rng)) },
                        mass,
                    },
                });
            }
            Algebra::new(format!("A{}", i + 1), mats, atoms)
        })
        .collect();
    let mut metadata = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=2) {
        let key: String = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(b'a'..=b'z') as char).collect();
        let alphabet = ['a', 'Z', '0', ' ', '"', '\\', '\n', 'é', '#', '(', '+', ')'];
        let value: String = (0..rng.gen_range(0..=8)).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        metadata.insert(key, value);
    }
    ProblemDoc { field_d: field, algebras, metadata }
}
