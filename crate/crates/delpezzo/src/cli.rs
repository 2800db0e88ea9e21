// SPDX-License-Identifier: Apache-2.0

//! The `dpk` command-line front end.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or IO error.

use std::fmt::Write as _;
use std::io::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{diff_table, generate_config_table_with, ExpectedTables, TableDiff, TableEntry};
use crate::dataset::{load_characteristic, run_verify, select, VerificationSummary, VerifyOptions};
use crate::dynkin::DynkinType;
use crate::embedding::{embedding_classes, uniqueness_exceptions_with, EmbeddingClass};
use crate::exec::Strategy;
use crate::lattice::{LatticeVector, QuadraticSpace};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CHARACTERISTICS: [u32; 3] = [3, 5, 7];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dpk", version, about = "Checks for RDP del Pezzo surfaces in characteristics 3, 5 and 7")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exceptional vectors (v.v = v.k = -1) of I^{1,9-d}.
    Exc {
        #[arg(long)]
        degree: u32,
    },
    /// Roots (v.v = -2, v.k = 0) of I^{1,9-d}.
    Roots {
        #[arg(long)]
        degree: u32,
    },
    /// Embedding classes of a root lattice type in E_{9-d}.
    Embed {
        #[arg(long = "type")]
        ty: DynkinType,
        #[arg(long)]
        degree: u32,
    },
    /// Embedding classes with the blow-down verdict of each class.
    Reduce {
        #[arg(long = "type")]
        ty: DynkinType,
        #[arg(long)]
        degree: u32,
    },
    /// Non-equivariant configuration tables.
    Tables {
        #[arg(long = "char")]
        p: u32,
        /// Compare with the bundled printed tables.
        #[arg(long)]
        diff: bool,
    },
    /// Verifies the dataset records of one characteristic.
    Verify {
        #[arg(long = "char")]
        p: u32,
        #[arg(long)]
        id: Option<String>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Runs every table diff and every dataset verification.
    All {
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

/// Rendered output and exit code of one command.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Self { code: EXIT_PASS, stdout }
    }
}

/// Failure of a command before any verdict was reached.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and
/// prints to stdout/stderr. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            out.code
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Exc { degree } => vectors(*degree, fmt, true),
        Command::Roots { degree } => vectors(*degree, fmt, false),
        Command::Embed { ty, degree } => embed(ty, *degree, fmt, false),
        Command::Reduce { ty, degree } => embed(ty, *degree, fmt, true),
        Command::Tables { p, diff } => tables(*p, *diff, fmt),
        Command::Verify { p, id, jobs } => verify(*p, id.as_deref(), *jobs, fmt),
        Command::All { jobs } => all(*jobs, fmt),
    }
}

fn render<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn coords(v: &LatticeVector) -> Vec<i64> {
    v.coords().to_vec()
}

fn vectors(d: u32, fmt: Format, exceptional: bool) -> Result<Outcome, UsageError> {
    let space = QuadraticSpace::for_degree(d)?;
    let vs = if exceptional { space.enumerate_exceptional()? } else { space.enumerate_roots()? };
    let kind = if exceptional { "exceptional" } else { "roots" };
    let out = match fmt {
        Format::Json => render(&json!({
            "degree": d,
            "kind": kind,
            "count": vs.len(),
            "vectors": vs.iter().map(coords).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("degree {d}: {} {kind}\n", vs.len());
            for v in &vs {
                let _ = writeln!(s, "  {v}");
            }
            s
        }
    };
    Ok(Outcome::pass(out))
}

#[derive(Serialize)]
struct ClassReport {
    index: usize,
    perp: String,
    exceptional_orthogonal: usize,
    sublattices_scanned: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    reducible: Option<bool>,
    simple_roots: Vec<Vec<i64>>,
}

fn embed(ty: &DynkinType, d: u32, fmt: Format, reduce: bool) -> Result<Outcome, UsageError> {
    let space = QuadraticSpace::for_degree(d)?;
    let classes = embedding_classes(ty, d, false, Strategy::Parallel)?;
    let reports: Vec<ClassReport> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| ClassReport {
            index: i + 1,
            perp: c.invariant.perp.to_string(),
            exceptional_orthogonal: c.invariant.exceptional_orthogonal,
            sublattices_scanned: c.count,
            reducible: reduce.then_some(c.reducible),
            simple_roots: c.representative.roots().iter().map(coords).collect(),
        })
        .collect();
    // With a single class the blow-down verdict depends on the type alone.
    let unique = classes.len() == 1;
    let out = match fmt {
        Format::Json => {
            let mut v = json!({
                "type": ty.to_string(),
                "degree": d,
                "classes": reports,
            });
            if reduce {
                v["unique_class"] = json!(unique);
                v["verdict"] = json!(verdict(&classes));
            }
            render(&v)
        }
        Format::Text => {
            let mut s = format!("{ty} in E_{} (degree {}): {} class(es)\n", space.n(), d, classes.len());
            for r in &reports {
                let _ = write!(
                    s,
                    "  class {}: perp {}, {} orthogonal exceptional, {} sublattice(s) scanned",
                    r.index, r.perp, r.exceptional_orthogonal, r.sublattices_scanned
                );
                if let Some(red) = r.reducible {
                    let _ = write!(s, ", {}", if red { "reducible" } else { "not reducible" });
                }
                s.push('\n');
            }
            if reduce {
                let _ = writeln!(s, "  unique class: {}", if unique { "yes" } else { "no" });
                let _ = writeln!(s, "  verdict: {}", verdict(&classes));
            }
            s
        }
    };
    Ok(Outcome::pass(out))
}

fn verdict(classes: &[EmbeddingClass]) -> &'static str {
    if classes.is_empty() {
        "no embedding"
    } else if classes.iter().all(|c| c.reducible) {
        "reducible"
    } else if classes.iter().all(|c| !c.reducible) {
        "not reducible"
    } else {
        "mixed"
    }
}

#[derive(Serialize)]
struct TableRow {
    d: u32,
    configurations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diff: Option<TableDiff>,
}

fn table_rows(p: u32, with_diff: bool) -> Result<Vec<TableRow>, UsageError> {
    if !CHARACTERISTICS.contains(&p) {
        return Err(UsageError(format!("characteristic {p} is not one of 3, 5, 7")));
    }
    let expected = ExpectedTables::bundled();
    let mut rows = Vec::new();
    for d in (1..=8).rev() {
        let entries: Vec<TableEntry> = generate_config_table_with(p, d, Strategy::Parallel)?;
        let printed = expected.printed(p, d);
        if entries.is_empty() && printed.is_empty() {
            continue;
        }
        rows.push(TableRow {
            d,
            configurations: entries.iter().map(|e| e.to_string()).collect(),
            diff: with_diff.then(|| diff_table(p, d, &entries, expected)),
        });
    }
    Ok(rows)
}

fn tables_pass(rows: &[TableRow]) -> bool {
    rows.iter().all(|r| r.diff.as_ref().map_or(true, TableDiff::explained))
}

fn tables_text(p: u32, rows: &[TableRow]) -> String {
    let mut s = format!("characteristic {p}\n");
    for r in rows {
        let _ = writeln!(s, "  d={} ({}): {}", r.d, r.configurations.len(), r.configurations.join(", "));
        if let Some(diff) = &r.diff {
            if diff.exact() {
                let _ = writeln!(s, "    matches printed table");
            } else {
                for e in &diff.extra {
                    let tag = if diff.errata.contains(e) { " (erratum)" } else { "" };
                    let _ = writeln!(s, "    + {e}{tag}");
                }
                for m in &diff.missing {
                    let _ = writeln!(s, "    - {m}");
                }
            }
        }
    }
    s
}

fn tables(p: u32, diff: bool, fmt: Format) -> Result<Outcome, UsageError> {
    let rows = table_rows(p, diff)?;
    let code = if tables_pass(&rows) { EXIT_PASS } else { EXIT_FAIL };
    let stdout = match fmt {
        Format::Json => render(&json!({ "p": p, "rows": rows })),
        Format::Text => tables_text(p, &rows),
    };
    Ok(Outcome { code, stdout })
}

fn verify_summary(p: u32, id: Option<&str>, jobs: usize) -> Result<VerificationSummary, UsageError> {
    let records = load_characteristic(p)?;
    let chosen = select(&records, id)?;
    Ok(run_verify(&chosen, &VerifyOptions { jobs, strategy: Strategy::Parallel }))
}

fn verify(p: u32, id: Option<&str>, jobs: usize, fmt: Format) -> Result<Outcome, UsageError> {
    let summary = verify_summary(p, id, jobs)?;
    let code = if summary.pass { EXIT_PASS } else { EXIT_FAIL };
    let stdout = match fmt {
        Format::Json => summary.to_json(),
        Format::Text => summary.to_text(),
    };
    Ok(Outcome { code, stdout })
}

fn all(jobs: usize, fmt: Format) -> Result<Outcome, UsageError> {
    let mut pass = true;
    let mut text = String::new();
    let mut json_out = serde_json::Map::new();
    let exc: Vec<usize> = (1..=8).map(|d| QuadraticSpace::for_degree(d).and_then(|s| s.enumerate_exceptional()).map(|v| v.len())).collect::<Result<_, _>>()?;
    let roots: Vec<usize> = (1..=8).map(|d| QuadraticSpace::for_degree(d).and_then(|s| s.enumerate_roots()).map(|v| v.len())).collect::<Result<_, _>>()?;
    let _ = writeln!(text, "exceptional vectors d=8..1: {:?}", exc.iter().rev().collect::<Vec<_>>());
    let _ = writeln!(text, "roots d=8..1: {:?}", roots.iter().rev().collect::<Vec<_>>());
    json_out.insert("exceptional".into(), json!(exc));
    json_out.insert("roots".into(), json!(roots));
    let mut uniq = serde_json::Map::new();
    for d in 1..=8 {
        let space = QuadraticSpace::for_degree(d)?;
        let ts: Vec<String> = uniqueness_exceptions_with(&space, Strategy::Parallel)?.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(text, "types with several classes, d={d}: {}", if ts.is_empty() { "-".into() } else { ts.join(", ") });
        uniq.insert(d.to_string(), json!(ts));
    }
    json_out.insert("uniqueness_exceptions".into(), serde_json::Value::Object(uniq));
    for p in CHARACTERISTICS {
        let rows = table_rows(p, true)?;
        pass &= tables_pass(&rows);
        text.push_str(&tables_text(p, &rows));
        json_out.insert(format!("tables_char{p}"), json!(rows));
    }
    for p in CHARACTERISTICS {
        let summary = verify_summary(p, None, jobs)?;
        pass &= summary.pass;
        text.push_str(&summary.to_text());
        json_out.insert(format!("verify_char{p}"), serde_json::to_value(&summary)?);
    }
    let _ = writeln!(text, "overall: {}", if pass { "PASS" } else { "FAIL" });
    json_out.insert("pass".into(), json!(pass));
    let stdout = match fmt {
        Format::Json => render(&serde_json::Value::Object(json_out)),
        Format::Text => text,
    };
    Ok(Outcome { code: if pass { EXIT_PASS } else { EXIT_FAIL }, stdout })
}
