//! Text and JSON views of a [`Decomposition`].

use std::fmt::Write;

use crate::engine::{ContinuousKind, Decomposition, Fullness, Offspring, TracialForm};
use crate::subgroup::SubgroupClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Ascii,
    Json,
}

/// `0.5`, `0.707107`: six decimals with trailing zeros dropped.
pub fn approx(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn offspring_head(o: &Offspring) -> String {
    let ws: Vec<String> = o.weights.iter().map(ToString::to_string).collect();
    if o.size == 1 {
        format!("C:[{}]", ws[0])
    } else {
        format!("M{}:[{}]", o.size, ws.join(","))
    }
}

/// Deterministic rendering; the ASCII form includes the trace only when
/// `with_trace` is set, the JSON form carries whatever trace `d` holds.
pub fn render_decomposition(d: &Decomposition, mode: RenderMode, with_trace: bool) -> String {
    match mode {
        RenderMode::Json => {
            let mut s = d.to_json();
            s.push('\n');
            s
        }
        RenderMode::Ascii => ascii(d, with_trace),
    }
}

fn ascii(d: &Decomposition, with_trace: bool) -> String {
    let mut out = String::new();
    if d.type_i.is_empty() {
        out.push_str("D: (none)\n");
    } else {
        out.push_str("D:\n");
        for o in &d.type_i {
            let parents: Vec<String> = o.parents.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  {}  from {}", offspring_head(o), parents.join(" x "));
            for (i, l) in o.labels.iter().enumerate() {
                let _ = writeln!(out, "    r{} = {l}", i + 1);
            }
        }
    }
    if !d.type_i.is_empty() {
        let dom: Vec<String> = d.dominant.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "dominant: {}", if dom.is_empty() { "(none)".into() } else { dom.join(", ") });
    }

    let c = &d.continuous;
    let _ = writeln!(out, "M0: mass {} (≈ {})", c.mass, approx(c.mass.to_f64()));
    match &c.kind {
        ContinuousKind::TypeIII { class, group, centralizer } => {
            match class {
                SubgroupClass::Cyclic { lambda } => {
                    let _ = writeln!(out, "  type III_lambda lambda={lambda} (≈ {})", approx(lambda.to_f64()));
                }
                _ => out.push_str("  type III_1\n"),
            }
            let _ = writeln!(out, "  Sd: {class}, generated by {group:?}");
            let _ = writeln!(out, "  centralizer: {centralizer}");
        }
        ContinuousKind::TracialII1 { form } => {
            out.push_str(match form {
                TracialForm::LZtensorM2 => "  type II_1: L(Z) (x) M2\n",
                TracialForm::InterpolatedFreeGroup => {
                    "  type II_1: interpolated free group factor L(F_t), t not computed\n"
                }
            });
        }
    }
    match c.fullness {
        Fullness::Full(r) => {
            let _ = writeln!(out, "  fullness: full ({})", r.as_str());
        }
        Fullness::Unknown => out.push_str("  fullness: unknown\n"),
    }

    if with_trace {
        out.push_str("trace:\n");
        for e in &d.trace {
            let _ = writeln!(out, "  {e}");
        }
    }
    out
}
