//! Symbolic projections for the matrix units of an offspring summand.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SummandRef;

/// Matrix unit `v_{row,col}` of a simple summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixUnit {
    pub at: SummandRef,
    pub row: usize,
    pub col: usize,
}

/// A projection built from diagonal matrix units by meets and conjugation.
///
/// Text form: `p{a}.{s}.{i}` for the `i`-th diagonal projection of summand
/// `s` of algebra `a`; `meet(x, y, ...)`; `conj(v{a}.{s}[i,t], x)` for
/// `v_{i,t} x v_{t,i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjectionExpr {
    AtomProj {
        at: SummandRef,
        index: usize,
    },
    /// At least two operands.
    Meet(Vec<ProjectionExpr>),
    Conj {
        unit: MatrixUnit,
        inner: Box<ProjectionExpr>,
    },
}

impl ProjectionExpr {
    pub fn diag(at: SummandRef, index: usize) -> Self {
        ProjectionExpr::AtomProj { at, index }
    }

    /// Meet that flattens nested meets; a single operand is returned as is.
    pub fn meet(parts: impl IntoIterator<Item = ProjectionExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ProjectionExpr::Meet(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            ProjectionExpr::Meet(flat)
        }
    }

    pub fn conj(at: SummandRef, row: usize, col: usize, inner: ProjectionExpr) -> Self {
        ProjectionExpr::Conj { unit: MatrixUnit { at, row, col }, inner: Box::new(inner) }
    }

    /// Meets have at least two operands everywhere in the tree.
    pub fn is_well_formed(&self) -> bool {
        match self {
            ProjectionExpr::AtomProj { .. } => true,
            ProjectionExpr::Meet(parts) => parts.len() >= 2 && parts.iter().all(Self::is_well_formed),
            ProjectionExpr::Conj { inner, .. } => inner.is_well_formed(),
        }
    }
}

/// Labels `r_1, ..., r_m` of an offspring of size `m` born from the
/// distinguished summand `dist` (size `m`) and the minimal central
/// projections `minimal` of the other parents:
///
/// `r_1 = meet_t v_{1,t} (p ∧ q_t) v_{t,1}` and `r_i = v_{i,1} r_1 v_{1,i}`,
/// where `p` is the meet of the minimal central projections and `q_t` the
/// diagonal units of `dist`. When every parent has size one the single label
/// is the meet of all of them.
pub fn offspring_labels(minimal: &[SummandRef], dist: Option<(SummandRef, usize)>) -> Vec<ProjectionExpr> {
    let p: Vec<ProjectionExpr> = minimal.iter().map(|&at| ProjectionExpr::diag(at, 0)).collect();
    let Some((at, m)) = dist else {
        return vec![ProjectionExpr::meet(p)];
    };
    let corner = |t: usize| ProjectionExpr::meet(p.iter().cloned().chain([ProjectionExpr::diag(at, t)]));
    // The outer meet is over corners; it is not flattened into them.
    let first = if m == 1 {
        corner(0)
    } else {
        ProjectionExpr::Meet(
            (0..m).map(|t| if t == 0 { corner(0) } else { ProjectionExpr::conj(at, 0, t, corner(t)) }).collect(),
        )
    };
    let mut out = vec![first.clone()];
    out.extend((1..m).map(|i| ProjectionExpr::conj(at, i, 0, first.clone())));
    out
}

impl fmt::Display for ProjectionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionExpr::AtomProj { at, index } => write!(f, "p{}.{}.{}", at.algebra, at.summand, index),
            ProjectionExpr::Meet(parts) => {
                f.write_str("meet(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            ProjectionExpr::Conj { unit, inner } => {
                write!(f, "conj(v{}.{}[{},{}], {})", unit.at.algebra, unit.at.summand, unit.row, unit.col, inner)
            }
        }
    }
}

struct LabelParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> LabelParser<'a> {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), String> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(format!("expected `{lit}` at offset {}", self.pos))
        }
    }

    fn number(&mut self) -> Result<usize, String> {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| format!("expected a number at offset {start}"))
    }

    fn summand(&mut self) -> Result<SummandRef, String> {
        let algebra = self.number()?;
        self.expect(".")?;
        let summand = self.number()?;
        Ok(SummandRef { algebra, summand })
    }

    fn expr(&mut self) -> Result<ProjectionExpr, String> {
        if self.eat("meet(") {
            let mut parts = vec![self.expr()?];
            while self.eat(",") {
                parts.push(self.expr()?);
            }
            self.expect(")")?;
            if parts.len() < 2 {
                return Err("meet needs at least two operands".into());
            }
            Ok(ProjectionExpr::Meet(parts))
        } else if self.eat("conj(") {
            self.expect("v")?;
            let at = self.summand()?;
            self.expect("[")?;
            let row = self.number()?;
            self.expect(",")?;
            let col = self.number()?;
            self.expect("]")?;
            self.expect(",")?;
            let inner = self.expr()?;
            self.expect(")")?;
            Ok(ProjectionExpr::conj(at, row, col, inner))
        } else if self.eat("p") {
            let at = self.summand()?;
            self.expect(".")?;
            let index = self.number()?;
            Ok(ProjectionExpr::AtomProj { at, index })
        } else {
            Err(format!("unexpected input at offset {}", self.pos))
        }
    }
}

impl FromStr for ProjectionExpr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = LabelParser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(format!("trailing input at offset {}", p.pos));
        }
        Ok(e)
    }
}

impl Serialize for ProjectionExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProjectionExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
