//! Model catalog: entry files, loading, and the compute / verify drivers.
//!
//! Entry files are line based; see `docs/catalog-format.md` for the grammar.

mod format;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::foliation::{FoliationError, FoliationFamily};
use crate::forms::{Chart, DifferentialForm, VectorField};
use crate::invariants::{self, InvariantError, InvariantReport};

pub use format::parse_entry;
pub use verify::{verify_entry, CheckResult, EntryOutcome, EntryReport, VerifyOptions};

pub const CATALOG_ENV: &str = "GVKIT_CATALOG_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("torus_linear.gvk", include_str!("../../catalog/torus_linear.gvk")),
    ("torus_graph.gvk", include_str!("../../catalog/torus_graph.gvk")),
    ("sl2_roussarie.gvk", include_str!("../../catalog/sl2_roussarie.gvk")),
    ("sl2_flow.gvk", include_str!("../../catalog/sl2_flow.gvk")),
    ("sl2xsl2_codim2.gvk", include_str!("../../catalog/sl2xsl2_codim2.gvk")),
    ("sl2xsl2_flow.gvk", include_str!("../../catalog/sl2xsl2_flow.gvk")),
    ("heisenberg.gvk", include_str!("../../catalog/heisenberg.gvk")),
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("{file}:{line}:{column}: {message}")]
    Parse { file: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("no catalog entry named `{0}`")]
    UnknownEntry(String),
    #[error("duplicate catalog entry `{0}`")]
    Duplicate(String),
    #[error("{id}: {source}")]
    Foliation { id: String, source: FoliationError },
    #[error("{id}: {source}")]
    Invariant { id: String, source: InvariantError },
}

/// How an expected value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Derived,
    Trivial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Derived => "DERIVED",
            Provenance::Trivial => "TRIVIAL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub value: String,
    pub provenance: Provenance,
    pub note: String,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub file: String,
    pub chart: Arc<Chart>,
    pub alphas: Vec<DifferentialForm>,
    pub transversal: Vec<VectorField>,
    pub beta: Option<DifferentialForm>,
    pub flow: Option<VectorField>,
    pub omegas: Vec<DifferentialForm>,
    pub expected: BTreeMap<String, Expected>,
}

impl CatalogEntry {
    pub fn q(&self) -> usize {
        self.alphas.len()
    }

    /// The family with transversal attached, before solving.
    pub fn unsolved(&self) -> Result<FoliationFamily, FoliationError> {
        FoliationFamily::new(self.alphas.clone())?.with_transversal(self.transversal.clone())
    }

    /// Solved family: integrability, beta and the gamma chain, all verified.
    pub fn family(&self) -> Result<FoliationFamily, CatalogError> {
        let wrap = |source| CatalogError::Foliation { id: self.id.clone(), source };
        let mut fam = self.unsolved().map_err(wrap)?;
        if let Some(beta) = &self.beta {
            fam = fam.with_beta(beta.clone());
        }
        fam.solve().map_err(wrap)
    }

    pub fn expects_integrable(&self) -> bool {
        self.expected.get("integrable").is_none_or(|e| e.value != "false")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        let mut cat = Catalog::default();
        for (file, src) in BUILTIN {
            let entry = parse_entry(src, file).unwrap_or_else(|e| panic!("builtin catalog entry is malformed: {e}"));
            cat.entries.insert(entry.id.clone(), entry);
        }
        cat
    }

    /// Every `*.gvk` file of a directory, in file name order.
    pub fn from_dir(dir: &Path) -> Result<Catalog, CatalogError> {
        let io =
            |p: &Path, e: std::io::Error| CatalogError::Io { path: p.display().to_string(), message: e.to_string() };
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| io(dir, e))?
            .filter_map(|r| r.ok().map(|d| d.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "gvk"))
            .collect();
        files.sort();
        let mut cat = Catalog::default();
        for path in files {
            let src = std::fs::read_to_string(&path).map_err(|e| io(&path, e))?;
            let entry = parse_entry(&src, &path.display().to_string())?;
            if cat.entries.contains_key(&entry.id) {
                return Err(CatalogError::Duplicate(entry.id));
            }
            cat.entries.insert(entry.id.clone(), entry);
        }
        Ok(cat)
    }

    /// The directory named by `GVKIT_CATALOG_DIR`, or the builtin entries.
    pub fn from_env() -> Result<Catalog, CatalogError> {
        match std::env::var_os(CATALOG_ENV) {
            Some(dir) if !dir.is_empty() => Catalog::from_dir(Path::new(&dir)),
            _ => Ok(Catalog::builtin()),
        }
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.get(id).ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))
    }
}

/// Invariant report of an entry, with the flow and chain witnesses attached.
pub fn compute(entry: &CatalogEntry) -> Result<InvariantReport, CatalogError> {
    let fam = entry.family()?;
    let inv = |source| CatalogError::Invariant { id: entry.id.clone(), source };
    let fol = |source| CatalogError::Foliation { id: entry.id.clone(), source };
    let mut report = invariants::report(&entry.id, &fam).map_err(inv)?;
    if fam.q() == 1 {
        if let Some(w) = fam.vanishing_chain_check().map_err(fol)?.tgv_witness {
            report.witnesses.push(w.record());
        }
    }
    if let Some(x) = &entry.flow {
        let flow = fam.flow_family_check(x).map_err(fol)?;
        report.witnesses.push(flow.t_witness.record());
        if let Some(w) = flow.tgv_witness {
            report.witnesses.push(w.record());
        }
    }
    Ok(report)
}

/// `(t, tgv(t))` samples for an entry.
pub fn family_grid(entry: &CatalogEntry, t0: f64, t1: f64, steps: usize) -> Result<Vec<(f64, f64)>, CatalogError> {
    let fam = entry.family()?;
    invariants::tgv_grid(&fam, t0, t1, steps).map_err(|source| CatalogError::Invariant { id: entry.id.clone(), source })
}
