use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gvkit::catalog::{compute, family_grid, verify_entry, EntryOutcome, VerifyOptions};
use gvkit::invariants::{grid_csv, Value};
use gvkit::{Catalog, CatalogError};

const EXIT_VERIFY: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

/// Exact Godbillon-Vey type invariants for the shipped foliation models.
#[derive(Debug, Parser)]
#[command(name = "gvkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog entries.
    List,
    /// Invariant report of one entry.
    Compute {
        id: String,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the structural verification suite.
    Verify(VerifyArgs),
    /// Sample tgv(t) on an equally spaced grid, as CSV.
    FamilyGrid {
        id: String,
        #[arg(long, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long)]
        steps: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Entry to verify.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    id: Option<String>,
    /// Verify every entry.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized gauge moves per entry.
    #[arg(long, default_value_t = 25)]
    cases: usize,
    /// Randomized cases per codimension for the telescoping identities.
    #[arg(long, default_value_t = 2)]
    telescoping_cases: usize,
    /// Recompute every expected value and fail on mismatch.
    #[arg(long)]
    strict: bool,
}

fn error_code(e: &CatalogError) -> u8 {
    match e {
        CatalogError::Parse { .. } => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

fn fail(e: CatalogError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_code(&e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let catalog = match Catalog::from_env() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::List => {
            for e in catalog.entries() {
                let _ = writeln!(out, "{:<16} q={}  {}", e.id, e.q(), e.description);
            }
            ExitCode::SUCCESS
        }
        Command::Compute { id, json } => {
            let report = match catalog.get(&id).and_then(compute) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let doc = report.to_json();
            if json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            } else {
                let show = |v: &Value| match v.approx {
                    Some(a) if v.exact != a.to_string() => format!("{}  (~ {a})", v.exact),
                    _ => v.exact.clone(),
                };
                let _ = writeln!(out, "family: {}", doc.family);
                let _ = writeln!(out, "q: {}", doc.q);
                for (name, v) in [
                    ("gv", &doc.gv),
                    ("tgv", &doc.tgv),
                    ("dgv", &doc.dgv),
                    ("igv", &doc.igv),
                    ("gv_coefficient", &doc.gv_coefficient),
                ] {
                    let _ = writeln!(out, "{name}: {}", show(v));
                }
                let _ = writeln!(out, "normalization: {}", doc.normalization);
                for (k, v) in &doc.representatives {
                    let _ = writeln!(out, "  {k} = {v}");
                }
                for w in &doc.witnesses {
                    let status = if w.residual_is_zero { "exact" } else { "RESIDUAL" };
                    let _ = writeln!(out, "witness [{status}] {}: d({})", w.r#move, w.primitive);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => {
            let opts = VerifyOptions {
                seed: args.seed,
                cases: args.cases,
                strict: args.strict,
                telescoping_cases: args.telescoping_cases,
            };
            let entries: Vec<_> = match &args.id {
                Some(id) => match catalog.get(id) {
                    Ok(e) => vec![e],
                    Err(e) => return fail(e),
                },
                None => catalog.entries().collect(),
            };
            let mut worst = EntryOutcome::Pass;
            let mut passed = 0;
            for entry in &entries {
                let r = verify_entry(entry, &opts);
                let _ = write!(out, "{r}");
                passed += usize::from(r.passed());
                worst = worst.max(r.outcome);
            }
            let _ =
                writeln!(out, "summary: {} entries, {passed} passed, {} failed", entries.len(), entries.len() - passed);
            match worst {
                EntryOutcome::Pass => ExitCode::SUCCESS,
                EntryOutcome::VerificationFailure => ExitCode::from(EXIT_VERIFY),
                EntryOutcome::PreconditionFailure => ExitCode::from(EXIT_PRECONDITION),
            }
        }
        Command::FamilyGrid { id, t0, t1, steps, csv } => {
            let rows = match catalog.get(&id).and_then(|e| family_grid(e, t0, t1, steps)) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let text = grid_csv(&rows);
            match csv {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(EXIT_PRECONDITION);
                    }
                }
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            ExitCode::SUCCESS
        }
    }
}
