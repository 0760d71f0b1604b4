//! Problems shared by the benchmarks.

/// `(name, problem text)` pairs covering every mating rule and both Sd classes.
pub const PROBLEMS: [(&str, &str); 6] = [
    ("atom-m2", "(C:1/5 (+) C:4/5) * M2:[2/3,1/3]"),
    ("two-m2", "M2:[1/4,3/4] * M2:[2/3,1/3]"),
    ("quadratic", "field sqrt(2); (M2:[-1/70+1/35*sqrt(2), 4/35-1/35*sqrt(2)] (+) C:9/10) * (M2:[1/3,1/6] (+) C:1/2)"),
    ("three-offspring", "(C:1/41 (+) C:40/41) * (M3:[1/16,1/16,1/8] (+) M2:[1/40,9/40] (+) M2:[1/8,1/8] (+) C:1/4)"),
    ("geometric", "(C:9/10 (+) BH:geom(1/10,1/2)) * M2:[3/4,1/4]"),
    ("three", "(C:1/10 (+) C:9/10) * (C:1/8 (+) C:7/8) * (M2:[1/20,1/20] (+) C:9/10)"),
];

/// Generators `p^(1/k)` for the first few primes, `k = 1..=n`.
pub fn root_generators(n: u64) -> Vec<String> {
    [2, 3, 5].iter().flat_map(|p| (1..=n).map(move |k| format!("{p}^(1/{k})"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problems_classify() {
        for (name, text) in PROBLEMS {
            let doc = fpcalc_core::parse_problem(text).unwrap();
            assert!(fpcalc_core::classify(&doc.algebras).is_ok(), "{name}");
        }
        assert_eq!(root_generators(4).len(), 12);
    }
}
