//! Free product decomposition `M = M0 (+) D`: the finite-dimensional part `D`
//! built from matings of simple summands, the dominant projection, and the
//! type of the continuous part `M0`.

mod construct;
pub mod labels;
mod mating;
pub mod trace;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{Algebra, Centralizer, ModelDiagnostic, SummandPath};
use crate::numbers::{ExactScalar, NumError};
use crate::subgroup::{MultSubgroup, SubgroupClass};

pub use construct::construct_with_sd;
pub use labels::{offspring_labels, MatrixUnit, ProjectionExpr};
pub use mating::{mate_family, mate_pair, Choice};
pub use trace::{Inequality, MatingRule, TraceEvent};

/// Summand `summand` (index into the matrix summands) of algebra `algebra`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SummandRef {
    pub algebra: usize,
    pub summand: usize,
}

impl fmt::Display for SummandRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.algebra, self.summand)
    }
}

/// A simple summand of the type I part, `M_m` with weights `gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offspring {
    pub size: usize,
    pub weights: Vec<ExactScalar>,
    pub labels: Vec<ProjectionExpr>,
    pub parents: Vec<SummandRef>,
}

impl Offspring {
    pub fn mass(&self) -> Result<ExactScalar, NumError> {
        ExactScalar::sum(&self.weights)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TracialForm {
    /// `L(Z) (x) M_2`, when both factors have linear dimension two.
    LZtensorM2,
    /// An interpolated free group factor; its parameter is not computed.
    InterpolatedFreeGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContinuousKind {
    TypeIII { class: SubgroupClass, group: MultSubgroup, centralizer: Centralizer },
    TracialII1 { form: TracialForm },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FullnessReason {
    /// Type III_lambda with centralizer `L(F_inf)`, which is non-Gamma.
    CyclicCentralizer,
    /// Barnett's criterion, for products built by [`construct_with_sd`].
    Barnett,
    /// A free product of two copies of `M_2` under arbitrary faithful states.
    TwoByTwo,
}

impl FullnessReason {
    const ALL: [FullnessReason; 3] =
        [FullnessReason::CyclicCentralizer, FullnessReason::Barnett, FullnessReason::TwoByTwo];

    pub fn as_str(&self) -> &'static str {
        match self {
            FullnessReason::CyclicCentralizer => "III_lambda centralizer non-Gamma",
            FullnessReason::Barnett => "Barnett criterion via construct_with_sd",
            FullnessReason::TwoByTwo => "M2 * M2 with faithful states",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fullness {
    Full(FullnessReason),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuousPart {
    pub mass: ExactScalar,
    pub kind: ContinuousKind,
    pub fullness: Fullness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(rename = "type_I")]
    pub type_i: Vec<Offspring>,
    pub continuous: ContinuousPart,
    pub dominant: Vec<SummandRef>,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("invalid input:\n{}", join_lines(.0))]
    Invalid(Vec<ModelDiagnostic>),
    #[error("a free product needs at least two algebras")]
    TooFewAlgebras,
    #[error("more than {cap} candidate matings; raise the cap to continue")]
    CapExceeded { cap: usize },
    #[error("classification indeterminate: spectrum ratios {} are not products of rational prime powers", join_list(.raw))]
    Indeterminate { raw: Vec<ExactScalar> },
    #[error("internal consistency violation: {0}")]
    Consistency(String),
    #[error("cannot construct: {0}")]
    Construct(String),
}

fn join_lines(items: &[ModelDiagnostic]) -> String {
    items.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

fn join_list(items: &[ExactScalar]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Where the input came from; only affects the fullness annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Provenance {
    #[default]
    User,
    ConstructSd,
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Maximum number of candidate tuples evaluated by the mating search.
    pub cap: usize,
    pub provenance: Provenance,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { cap: 1_000_000, provenance: Provenance::User }
    }
}

pub fn classify(algebras: &[Algebra]) -> Result<Decomposition, EngineError> {
    classify_with(algebras, &ClassifyOptions::default())
}

pub fn classify_with(algebras: &[Algebra], opts: &ClassifyOptions) -> Result<Decomposition, EngineError> {
    check_inputs(algebras)?;
    let mut trace = Vec::new();
    let type_i = search(algebras, opts.cap, &mut trace)?;
    let dominant = if algebras.len() == 2 {
        let d = dominant_projection(algebras, &type_i)?;
        if !type_i.is_empty() {
            trace.push(TraceEvent::Dominance { candidates: d.clone() });
        }
        d
    } else {
        if !type_i.is_empty() {
            trace.push(TraceEvent::Note { text: "dominance is only defined for two factors".into() });
        }
        Vec::new()
    };
    let continuous = continuous_traced(algebras, &type_i, opts.provenance, &mut trace)?;
    Ok(Decomposition { type_i, continuous, dominant, trace })
}

fn check_inputs(algebras: &[Algebra]) -> Result<(), EngineError> {
    if algebras.len() < 2 {
        return Err(EngineError::TooFewAlgebras);
    }
    let mut diags = Vec::new();
    for (i, a) in algebras.iter().enumerate() {
        if let Err(d) = a.validate(i) {
            diags.extend(d);
        }
    }
    let mut field: Option<(usize, u64)> = None;
    for (i, a) in algebras.iter().enumerate() {
        match (field, a.field_d()) {
            (None, Some(d)) => field = Some((i, d)),
            (Some((j, d0)), Some(d)) if d != d0 => diags.push(ModelDiagnostic {
                algebra: i,
                path: SummandPath::Whole,
                message: format!("uses sqrt({d}) but algebra {j} uses sqrt({d0})"),
            }),
            _ => {}
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(EngineError::Invalid(diags))
    }
}

/// All offspring, in lexicographic order of the parent tuples.
pub fn type_i_part(algebras: &[Algebra], cap: usize) -> Result<Vec<Offspring>, EngineError> {
    check_inputs(algebras)?;
    search(algebras, cap, &mut Vec::new())
}

struct Search<'a> {
    algebras: &'a [Algebra],
    cap: usize,
    evaluated: usize,
    out: Vec<Offspring>,
    trace: &'a mut Vec<TraceEvent>,
}

fn search(algebras: &[Algebra], cap: usize, trace: &mut Vec<TraceEvent>) -> Result<Vec<Offspring>, EngineError> {
    let mut s = Search { algebras, cap, evaluated: 0, out: Vec::new(), trace };
    let mut prefix = Vec::with_capacity(algebras.len());
    s.descend(&mut prefix, false, &ExactScalar::zero())?;
    Ok(s.out)
}

impl<'a> Search<'a> {
    // `deficit` is `sum (1 - alpha)` over the size-one choices so far; any
    // offspring needs it below 1, so larger prefixes are cut.
    fn descend(
        &mut self,
        prefix: &mut Vec<Choice<'a>>,
        has_big: bool,
        deficit: &ExactScalar,
    ) -> Result<(), EngineError> {
        let k = prefix.len();
        if k == self.algebras.len() {
            return self.evaluate(prefix);
        }
        for (j, summand) in self.algebras[k].matrix_summands.iter().enumerate() {
            let choice = Choice::new(SummandRef { algebra: k, summand: j }, summand);
            if summand.size > 1 {
                if has_big {
                    continue;
                }
                prefix.push(choice);
                self.descend(prefix, true, deficit)?;
                prefix.pop();
            } else {
                let next = deficit.add(&ExactScalar::one().sub(&summand.weights[0])?)?;
                prefix.push(choice);
                if next.try_cmp(&ExactScalar::one())?.is_ge() {
                    self.trace
                        .push(TraceEvent::Pruned { prefix: prefix.iter().map(|c| c.at).collect(), deficit: next });
                } else {
                    self.descend(prefix, has_big, &next)?;
                }
                prefix.pop();
            }
        }
        Ok(())
    }

    fn evaluate(&mut self, choices: &[Choice<'_>]) -> Result<(), EngineError> {
        self.evaluated += 1;
        if self.evaluated > self.cap {
            return Err(EngineError::CapExceeded { cap: self.cap });
        }
        let outcome = if choices.len() == 2 {
            mating::mate_pair_traced(choices[0], choices[1])?
        } else {
            mating::mate_family_traced(choices)?
        };
        let Some(outcome) = outcome else { return Ok(()) };
        self.trace.push(TraceEvent::Mating {
            parents: choices.iter().map(|c| c.at).collect(),
            rule: outcome.rule,
            inequality: Some(outcome.inequality),
            offspring: outcome.offspring.is_some(),
        });
        if let Some(o) = outcome.offspring {
            if !o.weights.iter().all(ExactScalar::is_positive) {
                return Err(EngineError::Consistency(format!(
                    "offspring of {:?} has a non-positive weight",
                    o.parents
                )));
            }
            self.out.push(o);
        }
        Ok(())
    }
}

/// The minimal central summands through which every offspring passes, for a
/// product of two algebras. Each one is checked to be the heaviest minimal
/// central summand of its algebra; a failed check is an error, as is
/// offspring without any such summand.
pub fn dominant_projection(algebras: &[Algebra], offspring: &[Offspring]) -> Result<Vec<SummandRef>, EngineError> {
    if offspring.is_empty() {
        return Ok(Vec::new());
    }
    let mut found = Vec::new();
    for (a, alg) in algebras.iter().enumerate() {
        let minimal = alg.minimal_central_summands();
        for &(j, w) in &minimal {
            let at = SummandRef { algebra: a, summand: j };
            if !offspring.iter().all(|o| o.parents.contains(&at)) {
                continue;
            }
            for &(j2, w2) in &minimal {
                if w2.try_cmp(w)?.is_gt() {
                    return Err(EngineError::Consistency(format!(
                        "summand {at} covers every offspring but summand {j2} of the same algebra is heavier"
                    )));
                }
            }
            found.push(at);
        }
    }
    if found.is_empty() {
        return Err(EngineError::Consistency("no minimal central projection lies under every offspring".into()));
    }
    Ok(found)
}

/// Mass, type and Sd group of `M0`.
pub fn continuous_part(
    algebras: &[Algebra],
    offspring: &[Offspring],
    provenance: Provenance,
) -> Result<ContinuousPart, EngineError> {
    continuous_traced(algebras, offspring, provenance, &mut Vec::new())
}

fn continuous_traced(
    algebras: &[Algebra],
    offspring: &[Offspring],
    provenance: Provenance,
    trace: &mut Vec<TraceEvent>,
) -> Result<ContinuousPart, EngineError> {
    let mut mass = ExactScalar::one();
    for o in offspring {
        mass = mass.sub(&o.mass()?)?;
    }
    if !mass.is_positive() {
        return Err(EngineError::Consistency(format!("continuous part has mass {mass}")));
    }
    let two_by_two = algebras.len() == 2
        && algebras.iter().all(|a| a.atoms.is_empty() && matches!(a.matrix_summands.as_slice(), [s] if s.size == 2));

    if algebras.iter().all(Algebra::is_tracial) {
        let form = if algebras.len() == 2 && algebras.iter().all(|a| a.linear_dimension() == Some(2)) {
            TracialForm::LZtensorM2
        } else {
            TracialForm::InterpolatedFreeGroup
        };
        let fullness = if two_by_two { Fullness::Full(FullnessReason::TwoByTwo) } else { Fullness::Unknown };
        return Ok(ContinuousPart { mass, kind: ContinuousKind::TracialII1 { form }, fullness });
    }

    let mut gens = Vec::new();
    let mut raw = Vec::new();
    for (i, a) in algebras.iter().enumerate() {
        let report = a.point_spectrum()?;
        trace.push(TraceEvent::Spectrum {
            algebra: i,
            generators: report.generators.clone(),
            complete: report.complete,
        });
        gens.extend(report.generators);
        raw.extend(report.unresolved);
    }
    if !raw.is_empty() {
        return Err(EngineError::Indeterminate { raw });
    }
    let group = MultSubgroup::generate(&gens);
    trace.push(TraceEvent::Lattice { group: group.clone() });
    let class = group.classify();
    let fullness = match class {
        SubgroupClass::Trivial => {
            return Err(EngineError::Consistency("a non-tracial product has trivial Sd group".into()));
        }
        SubgroupClass::Cyclic { .. } => Fullness::Full(FullnessReason::CyclicCentralizer),
        SubgroupClass::Dense { .. }
            if provenance == Provenance::ConstructSd && construct::has_construct_shape(algebras) =>
        {
            Fullness::Full(FullnessReason::Barnett)
        }
        SubgroupClass::Dense { .. } if two_by_two => Fullness::Full(FullnessReason::TwoByTwo),
        SubgroupClass::Dense { .. } => Fullness::Unknown,
    };
    Ok(ContinuousPart {
        mass,
        kind: ContinuousKind::TypeIII { class, group, centralizer: Centralizer::LFreeInfinity },
        fullness,
    })
}

impl Decomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct ContinuousWire {
    mass: ExactScalar,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sd: Option<MultSubgroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    centralizer: Option<Centralizer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<String>,
    fullness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fullness_reason: Option<String>,
}

impl Serialize for ContinuousPart {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut w = ContinuousWire {
            mass: self.mass.clone(),
            kind: String::new(),
            sd: None,
            centralizer: None,
            form: None,
            param: None,
            fullness: match self.fullness {
                Fullness::Full(_) => "full".into(),
                Fullness::Unknown => "unknown".into(),
            },
            fullness_reason: match self.fullness {
                Fullness::Full(r) => Some(r.as_str().into()),
                Fullness::Unknown => None,
            },
        };
        match &self.kind {
            ContinuousKind::TypeIII { group, centralizer, .. } => {
                w.kind = "III".into();
                w.sd = Some(group.clone());
                w.centralizer = Some(*centralizer);
            }
            ContinuousKind::TracialII1 { form } => {
                w.kind = "II1".into();
                match form {
                    TracialForm::LZtensorM2 => w.form = Some("LZtensorM2".into()),
                    TracialForm::InterpolatedFreeGroup => {
                        w.form = Some("LFt".into());
                        w.param = Some("unknown".into());
                    }
                }
            }
        }
        w.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ContinuousPart {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = ContinuousWire::deserialize(d)?;
        let kind = match w.kind.as_str() {
            "III" => {
                let group = w.sd.ok_or_else(|| D::Error::missing_field("sd"))?;
                let centralizer = w.centralizer.ok_or_else(|| D::Error::missing_field("centralizer"))?;
                ContinuousKind::TypeIII { class: group.classify(), group, centralizer }
            }
            "II1" => ContinuousKind::TracialII1 {
                form: match w.form.as_deref() {
                    Some("LZtensorM2") => TracialForm::LZtensorM2,
                    Some("LFt") => TracialForm::InterpolatedFreeGroup,
                    other => return Err(D::Error::custom(format!("unknown II1 form {other:?}"))),
                },
            },
            other => return Err(D::Error::custom(format!("unknown kind {other:?}"))),
        };
        let fullness = match (w.fullness.as_str(), w.fullness_reason.as_deref()) {
            ("unknown", None) => Fullness::Unknown,
            ("full", Some(r)) => Fullness::Full(
                FullnessReason::ALL
                    .into_iter()
                    .find(|x| x.as_str() == r)
                    .ok_or_else(|| D::Error::custom(format!("unknown fullness reason {r:?}")))?,
            ),
            (f, _) => return Err(D::Error::custom(format!("bad fullness {f:?}"))),
        };
        Ok(ContinuousPart { mass: w.mass, kind, fullness })
    }
}
