use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fpcalc_core::dsl::parse_radical;
use fpcalc_core::{
    classify_with, construct_with_sd, parse_problem_with_spans, render_decomposition, render_problem, ClassifyOptions,
    CyclicIntersection, EngineError, MultSubgroup, ProblemDoc, Provenance, RadicalReal, RenderMode,
};
use rayon::prelude::*;

/// Free product decompositions with exact arithmetic.
#[derive(Parser)]
#[command(name = "fpcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the free product described in a problem file (`-` for stdin).
    Classify {
        file: String,
        #[arg(long)]
        json: bool,
        /// Include the derivation trace.
        #[arg(long)]
        trace: bool,
        /// Maximum number of candidate matings to evaluate.
        #[arg(long, default_value_t = ClassifyOptions::default().cap)]
        cap: usize,
    },
    /// Point spectrum of the modular operator of each algebra.
    Spectrum { file: String },
    /// Classify the multiplicative subgroup generated by some radicals.
    Subgroup {
        #[arg(required = true)]
        generators: Vec<String>,
        /// Membership test.
        #[arg(long)]
        contains: Option<String>,
        /// Least N with lambda^N in the subgroup.
        #[arg(long)]
        cyclic_intersect: Option<String>,
    },
    /// Emit a problem whose Sd invariant is generated by the given rationals in (0,1).
    ConstructSd {
        #[arg(required = true)]
        generators: Vec<String>,
        /// Also classify the constructed problem.
        #[arg(long)]
        classify: bool,
    },
    /// Number of non-tracial summands of each algebra.
    Ntr { file: String },
    /// Classify every `.fp` file of a directory into one JSON line each.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = ClassifyOptions::default().cap)]
        cap: usize,
    },
}

/// A message for stderr and the process exit code that goes with it.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure { code: engine_code(&e), message: e.to_string() }
    }
}

fn engine_code(e: &EngineError) -> u8 {
    match e {
        EngineError::Consistency(_) | EngineError::Num(_) => 1,
        EngineError::Indeterminate { .. } => 3,
        EngineError::Invalid(_)
        | EngineError::TooFewAlgebras
        | EngineError::CapExceeded { .. }
        | EngineError::Construct(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { file, json, trace, cap } => classify_cmd(&file, json, trace, cap),
        Command::Spectrum { file } => spectrum_cmd(&file),
        Command::Subgroup { generators, contains, cyclic_intersect } => {
            subgroup_cmd(&generators, contains.as_deref(), cyclic_intersect.as_deref())
        }
        Command::ConstructSd { generators, classify } => construct_cmd(&generators, classify),
        Command::Ntr { file } => ntr_cmd(&file),
        Command::Batch { dir, out, cap } => batch_cmd(&dir, &out, cap),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message.trim_end());
            ExitCode::from(f.code)
        }
    }
}

fn read_input(file: &str) -> Result<(String, String), Failure> {
    if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("<stdin>: {e}")))?;
        Ok(("<stdin>".into(), s))
    } else {
        let s = fs::read_to_string(file).map_err(|e| Failure::usage(format!("{file}: {e}")))?;
        Ok((file.into(), s))
    }
}

/// Parse and validate, reporting every problem as `name:line:col: message`.
fn load(name: &str, text: &str) -> Result<ProblemDoc, Failure> {
    let (doc, map) = parse_problem_with_spans(text)
        .map_err(|e| Failure::usage(format!("{name}:{}:{}: {}", e.span.line, e.span.column, e.message)))?;
    let mut msg = String::new();
    for (i, a) in doc.algebras.iter().enumerate() {
        for d in a.validate(i).err().unwrap_or_default() {
            match map.span_of(&d) {
                Some(s) => writeln!(msg, "{name}:{}:{}: {d}", s.line, s.column),
                None => writeln!(msg, "{name}: {d}"),
            }
            .unwrap();
        }
    }
    if msg.is_empty() {
        Ok(doc)
    } else {
        Err(Failure::usage(msg))
    }
}

fn provenance(doc: &ProblemDoc) -> Provenance {
    // the engine still checks the shape before relying on this
    match doc.metadata.get("origin").map(String::as_str) {
        Some("construct-sd") => Provenance::ConstructSd,
        _ => Provenance::User,
    }
}

fn classify_cmd(file: &str, json: bool, trace: bool, cap: usize) -> Result<String, Failure> {
    let (name, text) = read_input(file)?;
    let doc = load(&name, &text)?;
    let opts = ClassifyOptions { cap, provenance: provenance(&doc) };
    let mut d = classify_with(&doc.algebras, &opts)?;
    if !trace {
        d.trace.clear();
    }
    let mode = if json { RenderMode::Json } else { RenderMode::Ascii };
    Ok(render_decomposition(&d, mode, trace))
}

fn spectrum_cmd(file: &str) -> Result<String, Failure> {
    let (name, text) = read_input(file)?;
    let doc = load(&name, &text)?;
    let mut out = String::new();
    let mut missing = Vec::new();
    for a in &doc.algebras {
        let report = a.point_spectrum().map_err(EngineError::from)?;
        let gens: Vec<String> = report.generators.iter().map(ToString::to_string).collect();
        let shown = if gens.is_empty() { "(none)".to_string() } else { gens.join(", ") };
        writeln!(out, "{}: {shown}", a.name).unwrap();
        if !report.complete {
            let raw: Vec<String> = report.unresolved.iter().map(ToString::to_string).collect();
            writeln!(out, "  unresolved: {}", raw.join(", ")).unwrap();
            missing.extend(report.unresolved);
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(EngineError::Indeterminate { raw: missing }.into())
    }
}

fn radical_arg(s: &str) -> Result<RadicalReal, Failure> {
    parse_radical(s).map_err(|e| Failure::usage(format!("`{s}`: {}", e.message)))
}

fn subgroup_cmd(gens: &[String], contains: Option<&str>, intersect: Option<&str>) -> Result<String, Failure> {
    let gens = gens.iter().map(|g| radical_arg(g)).collect::<Result<Vec<_>, _>>()?;
    let g = MultSubgroup::generate(&gens);
    let mut out = format!("{}\n", g.classify());
    if let Some(x) = contains {
        let x = radical_arg(x)?;
        writeln!(out, "contains {x}: {}", if g.contains(&x) { "yes" } else { "no" }).unwrap();
    }
    if let Some(l) = intersect {
        let l = radical_arg(l)?;
        let hit = g.cyclic_intersection(&l).map_err(|e| Failure::usage(e.to_string()))?;
        match hit {
            CyclicIntersection::Trivial => writeln!(out, "powers of {l}: only the trivial one"),
            CyclicIntersection::PowerIndex(n) => writeln!(out, "powers of {l}: multiples of N = {n}"),
        }
        .unwrap();
    }
    Ok(out)
}

fn construct_cmd(gens: &[String], classify: bool) -> Result<String, Failure> {
    let gens = gens.iter().map(|g| radical_arg(g)).collect::<Result<Vec<_>, _>>()?;
    let algebras = construct_with_sd(&gens)?;
    let mut doc = ProblemDoc { field_d: None, algebras, metadata: Default::default() };
    doc.metadata.insert("origin".into(), "construct-sd".into());
    let mut out = render_problem(&doc);
    if classify {
        let opts = ClassifyOptions { provenance: Provenance::ConstructSd, ..Default::default() };
        let d = classify_with(&doc.algebras, &opts)?;
        out.push('\n');
        out.push_str(&render_decomposition(&d, RenderMode::Ascii, false));
    }
    Ok(out)
}

fn ntr_cmd(file: &str) -> Result<String, Failure> {
    let (name, text) = read_input(file)?;
    let doc = load(&name, &text)?;
    Ok(doc.algebras.iter().map(|a| format!("{}: {}\n", a.name, a.ntr())).collect())
}

fn batch_record(path: &Path, cap: usize) -> serde_json::Value {
    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let result = read_input(&path.to_string_lossy()).and_then(|(name, text)| {
        let doc = load(&name, &text)?;
        let opts = ClassifyOptions { cap, provenance: provenance(&doc) };
        let mut d = classify_with(&doc.algebras, &opts)?;
        d.trace.clear();
        Ok(d)
    });
    match result {
        Ok(d) => serde_json::json!({ "file": file, "decomposition": d }),
        Err(f) => serde_json::json!({ "file": file, "exit": f.code, "error": f.message.trim_end() }),
    }
}

/// Records come out in file name order whatever order the workers finish in.
fn batch_cmd(dir: &Path, out: &Path, cap: usize) -> Result<String, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "fp"))
        .collect();
    files.sort();
    let records: Vec<serde_json::Value> = files.par_iter().map(|p| batch_record(p, cap)).collect();
    let failed = records.iter().filter(|r| r.get("exit").is_some()).count();
    let mut body = records.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    if !body.is_empty() {
        body.push('\n');
    }
    fs::write(out, body).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
    Ok(format!("{} problems, {} failed\n", files.len(), failed))
}
