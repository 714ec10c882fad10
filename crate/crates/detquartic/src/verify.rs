//! Catalog verification: definiteness at `e`, profile against the claimed
//! triple, the square identity and hyperbolicity along seeded lines.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;

use detquartic_core::singularities::{profile, Profile, SolverConfig};
use detquartic_core::spectra::hyperbolicity_check;
use detquartic_core::GaussianRational;

use crate::catalog::CatalogEntry;
use crate::format::{float, profile_report, Claimed, ProfileReport};

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub solver: SolverConfig,
    pub lines: usize,
    pub line_seed: u64,
    /// Float tolerance for counting real roots along a line.
    pub line_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { solver: SolverConfig::default(), lines: 200, line_seed: 0, line_tol: 1e-6 }
    }
}

impl VerifyOptions {
    /// `--tol` drives point deduplication, reality and the line test.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.solver.dedupe_angle = tol;
        self.solver.reality_tolerance = tol;
        self.line_tol = tol;
        self
    }
}

#[derive(Clone, Debug)]
pub struct EntryVerdict {
    pub name: String,
    pub source: String,
    pub claimed: Option<Claimed>,
    pub definite: bool,
    pub profile: Result<Profile, String>,
    pub square_identity: Result<bool, String>,
    pub lines: usize,
    pub lines_all_real: usize,
    pub line_disagreements: usize,
    pub notes: Vec<String>,
}

impl EntryVerdict {
    pub fn profile_matches(&self) -> bool {
        match (&self.profile, self.claimed) {
            (Ok(p), Some(c)) => !p.degenerate && (p.eta, p.rho, p.sigma) == (c.eta, c.rho, c.sigma),
            _ => false,
        }
    }

    pub fn hyperbolic_fraction(&self) -> f64 {
        if self.lines == 0 {
            return 0.0;
        }
        self.lines_all_real as f64 / self.lines as f64
    }

    pub fn passed(&self) -> bool {
        self.definite
            && self.profile_matches()
            && self.square_identity == Ok(true)
            && self.lines > 0
            && self.lines_all_real == self.lines
    }
}

pub fn verify_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> EntryVerdict {
    let mut v = EntryVerdict {
        name: entry.name.clone(),
        source: entry.source.clone(),
        claimed: entry.claimed,
        definite: false,
        profile: Err("no definite point".into()),
        square_identity: entry.pencil.verify_square_identity().map_err(|e| e.to_string()),
        lines: 0,
        lines_all_real: 0,
        line_disagreements: 0,
        notes: entry.notes.clone(),
    };
    let Some(e) = entry.e.as_deref() else {
        return v;
    };
    let ex: Vec<GaussianRational> = e.iter().cloned().map(GaussianRational::real).collect();
    v.definite = entry.pencil.is_definite_at(&ex).is_ok_and(|d| d.is_definite());
    v.profile = profile(&entry.pencil, Some(e), &opts.solver).map_err(|err| err.to_string());
    match entry.pencil.det().and_then(|f| hyperbolicity_check(&f, e, opts.lines, opts.line_seed, opts.line_tol)) {
        Ok(h) => {
            v.lines = h.lines.len();
            v.lines_all_real = h.all_real;
            v.line_disagreements = h.disagreements;
        }
        Err(err) => v.notes.push(format!("hyperbolicity check failed: {err}")),
    }
    v
}

/// Verifies entries concurrently; the result keeps the input order.
pub fn verify_all(entries: &[CatalogEntry], opts: &VerifyOptions) -> Vec<EntryVerdict> {
    entries.par_iter().map(|e| verify_entry(e, opts)).collect()
}

/// A pool capped by `DETQUARTIC_THREADS` when set.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("DETQUARTIC_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

#[derive(Serialize)]
pub struct EntryReport {
    pub name: String,
    pub source: String,
    pub claimed: Option<Claimed>,
    pub definite: bool,
    pub profile: Option<ProfileReport>,
    pub profile_error: Option<String>,
    pub profile_matches: bool,
    pub square_identity: Option<bool>,
    pub lines: usize,
    pub lines_all_real: usize,
    pub line_disagreements: usize,
    pub hyperbolic_fraction: Box<RawValue>,
    pub warnings: Vec<String>,
    pub flagged: bool,
    pub notes: Vec<String>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct Summary {
    pub entries: usize,
    pub definite: usize,
    pub profiles_matched: usize,
    pub square_identities: usize,
    pub hyperbolic: usize,
    pub passed: usize,
}

#[derive(Serialize)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub summary: Summary,
}

pub fn entry_report(v: &EntryVerdict) -> EntryReport {
    EntryReport {
        name: v.name.clone(),
        source: v.source.clone(),
        claimed: v.claimed,
        definite: v.definite,
        profile: v.profile.as_ref().ok().map(profile_report),
        profile_error: v.profile.as_ref().err().cloned(),
        profile_matches: v.profile_matches(),
        square_identity: v.square_identity.as_ref().ok().copied(),
        lines: v.lines,
        lines_all_real: v.lines_all_real,
        line_disagreements: v.line_disagreements,
        hyperbolic_fraction: float(v.hyperbolic_fraction()),
        warnings: v.profile.as_ref().map(|p| p.warnings.clone()).unwrap_or_default(),
        flagged: !v.notes.is_empty(),
        notes: v.notes.clone(),
        passed: v.passed(),
    }
}

pub fn catalog_report(verdicts: &[EntryVerdict]) -> CatalogReport {
    let count = |f: &dyn Fn(&EntryVerdict) -> bool| verdicts.iter().filter(|v| f(v)).count();
    CatalogReport {
        entries: verdicts.iter().map(entry_report).collect(),
        summary: Summary {
            entries: verdicts.len(),
            definite: count(&|v| v.definite),
            profiles_matched: count(&|v| v.profile_matches()),
            square_identities: count(&|v| v.square_identity == Ok(true)),
            hyperbolic: count(&|v| v.lines > 0 && v.lines_all_real == v.lines),
            passed: count(&|v| v.passed()),
        },
    }
}

impl CatalogReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let got = match &e.profile {
                Some(p) => format!("({},{},{}){}", p.eta, p.rho, p.sigma, if p.degenerate { " degenerate" } else { "" }),
                None => format!("error: {}", e.profile_error.as_deref().unwrap_or("?")),
            };
            out.push_str(&format!(
                "{:<14} {} profile {:<18} definite {:<5} identity {:<5} lines {}/{}{}\n",
                e.name,
                if e.passed { "ok  " } else { "FAIL" },
                got,
                e.definite,
                e.square_identity.map_or("error".to_string(), |b| b.to_string()),
                e.lines_all_real,
                e.lines,
                if e.flagged { "  [flagged]" } else { "" },
            ));
            for n in &e.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{}/{} passed; profiles {}/{}, definite {}/{}, identities {}/{}, hyperbolic {}/{}\n",
            s.passed, s.entries, s.profiles_matched, s.entries, s.definite, s.entries, s.square_identities, s.entries, s.hyperbolic, s.entries
        ));
        out
    }
}
