//! The `.fp` problem language.
//!
//! ```text
//! field sqrt(2);                      # optional, needed for sqrt literals
//! meta origin = "notes";              # optional key/value pairs
//! (C:1/5 (+) C:4/5) * M2:[2/3,1/3]
//! ```
//!
//! Summands: `C:w`, `M<n>:[w,...]`, `BH:geom(mass,ratio)`,
//! `III(g,...;R|LFinf):mass`, `HYP:mass`, `LF(t?):mass`. Weights are sums
//! such as `-1/70+1/35*sqrt(2)`, or any arithmetic expression in
//! parentheses. Algebra names and summand labels are positional.

mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AtomKind, Centralizer, ModelDiagnostic, SummandPath};
use crate::numbers::RadicalReal;

/// Position of a diagnostic: 1-based line and column, 0-based byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub(crate) fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError { message: message.into(), span }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub field_d: Option<u64>,
    pub algebras: Vec<Algebra>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub(crate) struct AlgebraSpans {
    whole: SourceSpan,
    matrices: Vec<SourceSpan>,
    weights: Vec<Vec<SourceSpan>>,
    atoms: Vec<SourceSpan>,
}

/// Where each algebra, summand and weight of a parsed problem starts.
#[derive(Debug, Clone)]
pub struct SourceMap {
    algebras: Vec<AlgebraSpans>,
}

impl SourceMap {
    /// The span for a validation diagnostic, falling back to the enclosing
    /// algebra when the path is finer than what was recorded.
    pub fn span_of(&self, d: &ModelDiagnostic) -> Option<SourceSpan> {
        let a = self.algebras.get(d.algebra)?;
        let fine = match d.path {
            SummandPath::Whole => None,
            SummandPath::Matrix(j) => a.matrices.get(j).copied(),
            SummandPath::Weight(j, i) => a.weights.get(j).and_then(|w| w.get(i)).copied(),
            SummandPath::Atom(k) => a.atoms.get(k).copied(),
        };
        Some(fine.unwrap_or(a.whole))
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemDoc, ParseError> {
    parse_problem_with_spans(text).map(|(doc, _)| doc)
}

pub fn parse_problem_with_spans(text: &str) -> Result<(ProblemDoc, SourceMap), ParseError> {
    parser::Parser::new(text)?.problem()
}

/// A single radical literal such as `2^(1/2)*3^(-1)` or `1/8`.
pub fn parse_radical(text: &str) -> Result<RadicalReal, ParseError> {
    let mut p = parser::Parser::new(text)?;
    let r = p.radical()?;
    p.finish()?;
    Ok(r)
}

fn render_algebra(a: &Algebra) -> String {
    let mut terms: Vec<String> = a
        .matrix_summands
        .iter()
        .map(|s| {
            let ws: Vec<String> = s.weights.iter().map(ToString::to_string).collect();
            if s.size == 1 {
                format!("C:{}", ws[0])
            } else {
                format!("M{}:[{}]", s.size, ws.join(","))
            }
        })
        .collect();
    for atom in &a.atoms {
        let mass = &atom.mass;
        terms.push(match &atom.kind {
            AtomKind::BHGeometric { ratio, .. } => format!("BH:geom({mass},{ratio})"),
            AtomKind::TypeIII { sd_generators, centralizer } => {
                let gens: Vec<String> = sd_generators.iter().map(ToString::to_string).collect();
                let c = match centralizer {
                    Centralizer::HyperfiniteR => "R",
                    Centralizer::LFreeInfinity => "LFinf",
                };
                format!("III({};{c}):{mass}", gens.join(","))
            }
            AtomKind::DiffuseTracial => format!("HYP:{mass}"),
            AtomKind::FreeGroupFactor { param } => {
                format!("LF({}):{mass}", param.as_ref().map(ToString::to_string).unwrap_or_default())
            }
        });
    }
    if terms.len() == 1 {
        terms.pop().unwrap()
    } else {
        format!("({})", terms.join(" (+) "))
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Problem text that parses back to `doc`. Matrix summands are written
/// before special summands, as they are stored separately.
pub fn render_problem(doc: &ProblemDoc) -> String {
    let mut out = String::new();
    if let Some(d) = doc.field_d {
        out.push_str(&format!("field sqrt({d});\n"));
    }
    for (k, v) in &doc.metadata {
        out.push_str(&format!("meta {k} = {};\n", quote(v)));
    }
    let algebras: Vec<String> = doc.algebras.iter().map(render_algebra).collect();
    out.push_str(&algebras.join(" * "));
    out.push('\n');
    out
}
