//! Exact computation of free product decompositions of finite-dimensional
//! (and a few special) von Neumann algebras with faithful states: the type I
//! part with its weights, and the type of the remaining factor together with
//! its Sd invariant.

pub mod algebra;
pub mod dsl;
pub mod engine;
pub mod numbers;
pub mod render;
pub mod subgroup;

pub use algebra::{Algebra, AtomKind, Centralizer, MatrixSummand, ModelDiagnostic, SpecialAtom, SpectrumReport};
pub use dsl::{parse_problem, parse_problem_with_spans, render_problem, ParseError, ProblemDoc, SourceSpan};
pub use engine::{
    classify, classify_with, construct_with_sd, ClassifyOptions, ContinuousKind, ContinuousPart, Decomposition,
    EngineError, Fullness, Offspring, Provenance,
};
pub use numbers::{ExactScalar, NumError, RadicalReal, Rational};
pub use render::{render_decomposition, RenderMode};
pub use subgroup::{CyclicIntersection, MultSubgroup, SubgroupClass};
