use std::fmt;

use serde::{Deserialize, Serialize};

use super::SummandRef;
use crate::numbers::{ExactScalar, RadicalReal};
use crate::subgroup::MultSubgroup;

/// A strict inequality `lhs < rhs` as it was evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: ExactScalar,
    pub rhs: ExactScalar,
    pub holds: bool,
}

/// One step of a classification, in the order it happened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A candidate tuple of summands, one per algebra.
    Mating {
        parents: Vec<SummandRef>,
        rule: MatingRule,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inequality: Option<Inequality>,
        offspring: bool,
    },
    /// A partial tuple whose deficit `sum (1 - alpha)` already reached 1.
    Pruned {
        prefix: Vec<SummandRef>,
        deficit: ExactScalar,
    },
    Dominance {
        candidates: Vec<SummandRef>,
    },
    Spectrum {
        algebra: usize,
        generators: Vec<RadicalReal>,
        complete: bool,
    },
    Lattice {
        group: MultSubgroup,
    },
    Note {
        text: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatingRule {
    /// Two copies of C: `alpha + beta > 1`.
    Abelian,
    /// Two-party rule: `sum 1/beta_i < 1/(1 - alpha)`.
    Pair,
    /// Multi-party rule: `sum 1/alpha_j < 1/sum(1 - alpha_iota)`.
    Family,
}

fn refs(f: &mut fmt::Formatter<'_>, rs: &[SummandRef]) -> fmt::Result {
    for (i, r) in rs.iter().enumerate() {
        if i > 0 {
            f.write_str(" x ")?;
        }
        write!(f, "{r}")?;
    }
    Ok(())
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Mating { parents, rule, inequality, offspring } => {
                f.write_str("mate ")?;
                refs(f, parents)?;
                write!(f, " [{rule:?}]")?;
                if let Some(q) = inequality {
                    write!(f, ": {} < {} is {}", q.lhs, q.rhs, q.holds)?;
                }
                f.write_str(if *offspring { " -> offspring" } else { " -> none" })
            }
            TraceEvent::Pruned { prefix, deficit } => {
                f.write_str("prune ")?;
                refs(f, prefix)?;
                write!(f, ": deficit {deficit} >= 1")
            }
            TraceEvent::Dominance { candidates } => {
                f.write_str("dominant: ")?;
                if candidates.is_empty() {
                    f.write_str("(none)")
                } else {
                    refs(f, candidates)
                }
            }
            TraceEvent::Spectrum { algebra, generators, complete } => {
                write!(f, "spectrum A{}: {{", algebra + 1)?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, "}}{}", if *complete { "" } else { " (incomplete)" })
            }
            TraceEvent::Lattice { group } => {
                write!(
                    f,
                    "lattice over primes {:?}, D = {}, rank {}: {:?}",
                    group.primes(),
                    group.scale(),
                    group.rank(),
                    group
                )
            }
            TraceEvent::Note { text } => write!(f, "note: {text}"),
        }
    }
}
