//! Algebras with faithful states: finite multi-matrix parts with diagonal
//! density weights, plus the special summands (B(H) with a geometric density,
//! type III factors with declared spectrum, diffuse tracial algebras and
//! interpolated free group factors).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numbers::{quadext_ratio_to_radical, ExactScalar, NumError, RadicalReal, Rational};

/// Name given to the `i`-th algebra (0-based) when none is supplied.
pub fn default_algebra_name(i: usize) -> String {
    format!("A{}", i + 1)
}

/// Label given to the `j`-th matrix summand (0-based) of an algebra.
pub fn default_summand_label(j: usize) -> String {
    format!("p{}", j + 1)
}

/// `M_n(C)` with the state `Tr(diag(weights) .)` restricted to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSummand {
    pub size: usize,
    pub weights: Vec<ExactScalar>,
    pub label: String,
}

impl MatrixSummand {
    pub fn new(weights: Vec<ExactScalar>, label: impl Into<String>) -> Self {
        MatrixSummand { size: weights.len(), weights, label: label.into() }
    }

    pub fn mass(&self) -> Result<ExactScalar, NumError> {
        ExactScalar::sum(&self.weights)
    }

    /// All weights equal, so the restricted state is a trace.
    pub fn is_tracial(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Centralizer {
    #[serde(rename = "R")]
    HyperfiniteR,
    #[serde(rename = "LFinf")]
    LFreeInfinity,
}

impl fmt::Display for Centralizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Centralizer::HyperfiniteR => "R",
            Centralizer::LFreeInfinity => "LFinf",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AtomKind {
    /// B(H) with density weights `scale * ratio^k`, `k >= 0`.
    BHGeometric {
        scale: ExactScalar,
        ratio: Rational,
    },
    /// A type III factor with an extremal almost periodic state.
    TypeIII {
        sd_generators: Vec<RadicalReal>,
        centralizer: Centralizer,
    },
    DiffuseTracial,
    FreeGroupFactor {
        param: Option<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialAtom {
    pub kind: AtomKind,
    pub mass: ExactScalar,
}

impl SpecialAtom {
    /// B(H) summand of the given mass whose density eigenvalues decay by `ratio`.
    pub fn bh_geometric(mass: ExactScalar, ratio: Rational) -> Result<Self, NumError> {
        let scale = mass.mul(&ExactScalar::Rational(Rational::one() - &ratio))?;
        Ok(SpecialAtom { kind: AtomKind::BHGeometric { scale, ratio }, mass })
    }

    /// Whether the state restricted to this summand is a trace.
    pub fn is_tracial(&self) -> bool {
        matches!(self.kind, AtomKind::DiffuseTracial | AtomKind::FreeGroupFactor { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algebra {
    pub name: String,
    pub matrix_summands: Vec<MatrixSummand>,
    pub atoms: Vec<SpecialAtom>,
}

/// Location of a problem inside one algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummandPath {
    Whole,
    Matrix(usize),
    Weight(usize, usize),
    Atom(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDiagnostic {
    pub algebra: usize,
    pub path: SummandPath,
    pub message: String,
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra {}", self.algebra)?;
        match self.path {
            SummandPath::Whole => {}
            SummandPath::Matrix(j) => write!(f, ", summand {j}")?,
            SummandPath::Weight(j, i) => write!(f, ", summand {j}, weight {i}")?,
            SummandPath::Atom(k) => write!(f, ", atom {k}")?,
        }
        write!(f, ": {}", self.message)
    }
}

/// Point spectrum of the modular operator, as one representative `>= 1` of
/// each ratio pair `{x, 1/x}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub generators: Vec<RadicalReal>,
    /// False when some ratio is not a product of rational prime powers.
    pub complete: bool,
    /// The ratios that could not be converted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unresolved: Vec<ExactScalar>,
}

impl Algebra {
    pub fn new(name: impl Into<String>, matrix_summands: Vec<MatrixSummand>, atoms: Vec<SpecialAtom>) -> Self {
        Algebra { name: name.into(), matrix_summands, atoms }
    }

    pub fn field_d(&self) -> Option<u64> {
        self.scalars().find_map(ExactScalar::field_d)
    }

    fn scalars(&self) -> impl Iterator<Item = &ExactScalar> {
        let atom_scalars = self.atoms.iter().flat_map(|a| {
            let scale = match &a.kind {
                AtomKind::BHGeometric { scale, .. } => Some(scale),
                _ => None,
            };
            std::iter::once(&a.mass).chain(scale)
        });
        self.matrix_summands.iter().flat_map(|s| s.weights.iter()).chain(atom_scalars)
    }

    /// `sum n_j^2`, or `None` when a special summand makes it infinite.
    pub fn linear_dimension(&self) -> Option<usize> {
        self.atoms.is_empty().then(|| self.matrix_summands.iter().map(|s| s.size * s.size).sum())
    }

    /// Checks faithfulness, unit mass, special-summand consistency, a single
    /// quadratic field, and that the algebra is not `C` alone. `index` only
    /// labels the diagnostics.
    pub fn validate(&self, index: usize) -> Result<(), Vec<ModelDiagnostic>> {
        let mut out = Vec::new();
        let mut report = |path, message: String| out.push(ModelDiagnostic { algebra: index, path, message });

        if self.matrix_summands.is_empty() && self.atoms.is_empty() {
            report(SummandPath::Whole, "algebra has no summands".into());
        }
        if self.atoms.is_empty() && self.matrix_summands.len() == 1 && self.matrix_summands[0].size == 1 {
            report(SummandPath::Whole, "the one-dimensional algebra C is not allowed".into());
        }
        let mut fields: Vec<u64> = self.scalars().filter_map(ExactScalar::field_d).collect();
        fields.sort_unstable();
        fields.dedup();
        if fields.len() > 1 {
            report(SummandPath::Whole, format!("weights mix quadratic fields {fields:?}"));
            return Err(out);
        }

        for (j, s) in self.matrix_summands.iter().enumerate() {
            if s.size == 0 {
                report(SummandPath::Matrix(j), "matrix size must be positive".into());
            }
            if s.weights.len() != s.size {
                report(
                    SummandPath::Matrix(j),
                    format!("M{} needs {} weights, got {}", s.size, s.size, s.weights.len()),
                );
            }
            for (i, w) in s.weights.iter().enumerate() {
                if !w.is_positive() {
                    report(SummandPath::Weight(j, i), format!("non-faithful weight {w}: weights must be positive"));
                }
            }
        }

        for (k, atom) in self.atoms.iter().enumerate() {
            if !atom.mass.is_positive() {
                report(SummandPath::Atom(k), format!("mass {} must be positive", atom.mass));
            }
            match &atom.kind {
                AtomKind::BHGeometric { scale, ratio } => {
                    if !ratio.is_positive() || *ratio >= Rational::one() {
                        report(SummandPath::Atom(k), format!("geometric ratio {ratio} must lie in (0,1)"));
                    } else {
                        let total = scale.div(&ExactScalar::Rational(Rational::one() - ratio));
                        if total.as_ref() != Ok(&atom.mass) {
                            report(
                                SummandPath::Atom(k),
                                format!("density scale {scale} with ratio {ratio} does not sum to mass {}", atom.mass),
                            );
                        }
                    }
                }
                AtomKind::TypeIII { sd_generators, .. } => {
                    if sd_generators.is_empty() {
                        report(SummandPath::Atom(k), "type III summand needs at least one spectrum generator".into());
                    }
                    if sd_generators.iter().any(RadicalReal::is_one) {
                        report(SummandPath::Atom(k), "spectrum generator 1 is not allowed".into());
                    }
                }
                AtomKind::FreeGroupFactor { param: Some(t) } if *t <= Rational::one() => {
                    report(SummandPath::Atom(k), format!("free group factor parameter {t} must exceed 1"));
                }
                _ => {}
            }
        }

        match ExactScalar::sum(self.scalars_for_mass()) {
            Ok(total) if total == ExactScalar::one() => {}
            Ok(total) => report(SummandPath::Whole, format!("total mass {total} is not 1")),
            Err(e) => report(SummandPath::Whole, e.to_string()),
        }

        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn scalars_for_mass(&self) -> impl Iterator<Item = &ExactScalar> {
        self.matrix_summands.iter().flat_map(|s| s.weights.iter()).chain(self.atoms.iter().map(|a| &a.mass))
    }

    /// Sum over matrix summands of 0 (tracial) or the matrix size.
    pub fn ntr(&self) -> usize {
        self.matrix_summands.iter().filter(|s| !s.is_tracial()).map(|s| s.size).sum()
    }

    pub fn is_tracial(&self) -> bool {
        self.ntr() == 0 && self.atoms.iter().all(SpecialAtom::is_tracial)
    }

    /// Within-summand weight ratios plus the spectra carried by special
    /// summands, one representative above 1 per pair, sorted by value.
    pub fn point_spectrum(&self) -> Result<SpectrumReport, NumError> {
        let mut gens: Vec<RadicalReal> = Vec::new();
        let mut unresolved: Vec<ExactScalar> = Vec::new();
        for s in &self.matrix_summands {
            for (i, wi) in s.weights.iter().enumerate() {
                for wj in &s.weights[i + 1..] {
                    let mut ratio = wi.div(wj)?;
                    if ratio == ExactScalar::one() {
                        continue;
                    }
                    if ratio.try_cmp(&ExactScalar::one())? == Ordering::Less {
                        ratio = ratio.recip()?;
                    }
                    match quadext_ratio_to_radical(&ratio)? {
                        Some(r) => gens.push(r),
                        None if !unresolved.contains(&ratio) => unresolved.push(ratio),
                        None => {}
                    }
                }
            }
        }
        for atom in &self.atoms {
            match &atom.kind {
                AtomKind::TypeIII { sd_generators, .. } => {
                    gens.extend(sd_generators.iter().map(RadicalReal::above_one))
                }
                AtomKind::BHGeometric { ratio, .. } => {
                    gens.push(crate::numbers::factor_positive_rational(ratio)?.above_one())
                }
                AtomKind::DiffuseTracial | AtomKind::FreeGroupFactor { .. } => {}
            }
        }
        gens.retain(|g| !g.is_one());
        gens.sort_by(|a, b| a.cmp_value(b).then_with(|| a.cmp(b)));
        gens.dedup();
        Ok(SpectrumReport { complete: unresolved.is_empty(), generators: gens, unresolved })
    }

    /// Size-one matrix summands (the minimal central projections), as
    /// `(summand index, weight)`.
    pub fn minimal_central_summands(&self) -> Vec<(usize, &ExactScalar)> {
        self.matrix_summands.iter().enumerate().filter(|(_, s)| s.size == 1).map(|(j, s)| (j, &s.weights[0])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64, d: i64) -> ExactScalar {
        ExactScalar::rational(n, d)
    }

    fn m(weights: &[ExactScalar]) -> MatrixSummand {
        MatrixSummand::new(weights.to_vec(), "s")
    }

    fn alg(summands: Vec<MatrixSummand>) -> Algebra {
        Algebra::new("A", summands, vec![])
    }

    fn rad(s: &str) -> RadicalReal {
        s.parse().unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(alg(vec![m(&[w(2, 3), w(1, 3)])]).validate(0).is_ok());

        let err = alg(vec![m(&[w(1, 2)]), m(&[w(1, 3)])]).validate(0).unwrap_err();
        assert_eq!(err.len(), 1);
        assert!(err[0].message.contains("total mass 5/6"), "{}", err[0]);

        let err = alg(vec![m(&[w(1, 2), w(0, 1)]), m(&[w(1, 2)])]).validate(1).unwrap_err();
        assert_eq!(err[0].path, SummandPath::Weight(0, 1));
        assert!(err[0].message.contains("non-faithful"));
    }

    #[test]
    fn rejects_trivial_algebra() {
        let err = alg(vec![m(&[w(1, 1)])]).validate(0).unwrap_err();
        assert!(err[0].message.contains("one-dimensional"));
    }

    #[test]
    fn validates_special_summands() {
        let bh = SpecialAtom::bh_geometric(w(1, 1), Rational::new(1, 2)).unwrap();
        assert!(Algebra::new("B", vec![], vec![bh.clone()]).validate(0).is_ok());

        let mut bad = bh.clone();
        bad.kind = AtomKind::BHGeometric { scale: w(1, 3), ratio: Rational::new(1, 2) };
        assert!(Algebra::new("B", vec![], vec![bad]).validate(0).is_err());

        let bad_ratio = SpecialAtom::bh_geometric(w(1, 1), Rational::new(3, 2)).unwrap();
        assert!(Algebra::new("B", vec![], vec![bad_ratio]).validate(0).is_err());

        let iii = SpecialAtom {
            kind: AtomKind::TypeIII { sd_generators: vec![], centralizer: Centralizer::HyperfiniteR },
            mass: w(1, 1),
        };
        assert!(Algebra::new("T", vec![], vec![iii]).validate(0).is_err());

        let lf = SpecialAtom { kind: AtomKind::FreeGroupFactor { param: Some(Rational::one()) }, mass: w(1, 1) };
        assert!(Algebra::new("L", vec![], vec![lf]).validate(0).is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a: ExactScalar = "1/4+1/8*sqrt(2)".parse().unwrap();
        let b: ExactScalar = "1/4-1/8*sqrt(3)".parse().unwrap();
        let err = alg(vec![m(&[a]), m(&[b])]).validate(0).unwrap_err();
        assert!(err[0].message.contains("mix quadratic fields"));
    }

    #[test]
    fn ntr_examples() {
        assert_eq!(alg(vec![m(&[w(1, 2), w(1, 2)])]).ntr(), 0);
        assert_eq!(alg(vec![m(&[w(2, 3), w(1, 3)])]).ntr(), 2);
        assert_eq!(alg(vec![m(&[w(1, 16), w(1, 16), w(1, 8)]), m(&[w(3, 4)])]).ntr(), 3);
    }

    #[test]
    fn traciality() {
        assert!(alg(vec![m(&[w(1, 5)]), m(&[w(4, 5)])]).is_tracial());
        assert!(!alg(vec![m(&[w(2, 3), w(1, 3)])]).is_tracial());
        let bh = SpecialAtom::bh_geometric(w(1, 1), Rational::new(1, 2)).unwrap();
        assert!(!Algebra::new("B", vec![], vec![bh]).is_tracial());
        let hyp = SpecialAtom { kind: AtomKind::DiffuseTracial, mass: w(1, 2) };
        assert!(Algebra::new("H", vec![m(&[w(1, 2)])], vec![hyp]).is_tracial());
    }

    #[test]
    fn spectrum_examples() {
        let s = alg(vec![m(&[w(2, 3), w(1, 3)])]).point_spectrum().unwrap();
        assert_eq!(s.generators, vec![rad("2")]);
        assert!(s.complete);

        let w1: ExactScalar = "-1/70+1/35*sqrt(2)".parse().unwrap();
        let w2: ExactScalar = "4/35-1/35*sqrt(2)".parse().unwrap();
        let s = alg(vec![m(&[w1, w2]), m(&[w(9, 10)])]).point_spectrum().unwrap();
        assert_eq!(s.generators, vec![rad("2^(3/2)")]);

        let s = alg(vec![m(&[w(1, 4)]), m(&[w(3, 4)])]).point_spectrum().unwrap();
        assert!(s.generators.is_empty() && s.complete);

        let s = alg(vec![m(&[w(1, 40), w(9, 40)]), m(&[w(1, 8), w(1, 8)])]).point_spectrum().unwrap();
        assert_eq!(s.generators, vec![rad("9")]);
    }

    #[test]
    fn incomplete_spectrum_is_data() {
        // ratio (1+sqrt 2)/1 is not a radical
        let a: ExactScalar = "1/4+1/4*sqrt(2)".parse().unwrap();
        let b = a.recip().unwrap();
        let total = a.add(&b).unwrap();
        let (a, b) = (a.div(&total).unwrap(), b.div(&total).unwrap());
        let s = alg(vec![m(&[a, b])]).point_spectrum().unwrap();
        assert!(!s.complete);
        assert_eq!(s.unresolved.len(), 1);
    }

    #[test]
    fn atom_spectra() {
        let bh = SpecialAtom::bh_geometric(w(1, 1), Rational::new(1, 4)).unwrap();
        let s = Algebra::new("B", vec![], vec![bh]).point_spectrum().unwrap();
        assert_eq!(s.generators, vec![rad("4")]);
        let iii = SpecialAtom {
            kind: AtomKind::TypeIII {
                sd_generators: vec![rad("1/3"), rad("3")],
                centralizer: Centralizer::LFreeInfinity,
            },
            mass: w(1, 1),
        };
        let s = Algebra::new("T", vec![], vec![iii]).point_spectrum().unwrap();
        assert_eq!(s.generators, vec![rad("3")]);
    }

    #[test]
    fn minimal_central() {
        let a = alg(vec![m(&[w(1, 5)]), m(&[w(4, 5)])]);
        assert_eq!(a.minimal_central_summands(), vec![(0, &w(1, 5)), (1, &w(4, 5))]);
        assert!(alg(vec![m(&[w(2, 3), w(1, 3)])]).minimal_central_summands().is_empty());
        let e = alg(vec![m(&[w(4, 20), w(1, 20)]), m(&[w(3, 4)])]);
        assert_eq!(e.minimal_central_summands(), vec![(1, &w(3, 4))]);
    }

    #[test]
    fn bh_weights_sum_to_mass() {
        let bh = SpecialAtom::bh_geometric(w(1, 10), Rational::new(1, 2)).unwrap();
        let AtomKind::BHGeometric { scale, ratio } = &bh.kind else { unreachable!() };
        assert_eq!(scale, &w(1, 20));
        assert_eq!(scale.div(&ExactScalar::Rational(Rational::one() - ratio)).unwrap(), bh.mass);
    }
}
