//! Parallel search with a deterministic reduction, the `found.ndjson` log
//! and `tracker.json`.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use detquartic_core::search::{
    evaluate_candidate, prepare_deform, DeformStart, FoundExample, SearchConfig, SearchOutcome, SearchTarget, TrackerRow,
    TrackerState,
};
use detquartic_core::singularities::SolverConfig;

use crate::catalog::CatalogEntry;
use crate::format::{pencil_to_json, profile_report, Claimed, PencilJson, ProfileReport};
use crate::verify::EntryVerdict;
use crate::Error;

/// Candidates evaluated concurrently before the results are folded in
/// index order.
pub const BATCH: usize = 32;

/// Same outcome as the sequential `run_search`: each batch is evaluated in
/// parallel and absorbed in index order, stopping at the same candidate.
pub fn run_search_parallel(
    target: &SearchTarget,
    seeds: &[u64],
    cfg: &SearchConfig,
    starts: &[DeformStart],
) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    for &seed in seeds {
        let mut index = 0;
        while index < cfg.budget {
            if out.done(cfg) {
                return out;
            }
            let end = (index + BATCH).min(cfg.budget);
            let results: Vec<_> =
                (index..end).into_par_iter().map(|i| evaluate_candidate(target, seed, i, cfg, starts)).collect();
            for r in results {
                if out.done(cfg) {
                    return out;
                }
                out.absorb(r);
            }
            index = end;
        }
    }
    out
}

/// Deformation starts from catalog entries with at least four essential
/// points; entries that fail the precondition are skipped.
pub fn deform_starts(entries: &[CatalogEntry], solver: &SolverConfig) -> Vec<DeformStart> {
    let usable: Vec<&CatalogEntry> =
        entries.iter().filter(|e| !e.rank_only && e.claimed.is_some_and(|c| c.eta >= 4)).collect();
    let starts: Vec<Option<DeformStart>> = usable.par_iter().map(|e| prepare_deform(&e.pencil, solver).ok()).collect();
    starts.into_iter().flatten().collect()
}

#[derive(Serialize)]
pub struct FoundRecord {
    pub target: Claimed,
    pub strategy: &'static str,
    pub seed: u64,
    pub index: usize,
    pub pencil: PencilJson,
    pub profile: ProfileReport,
}

pub fn found_record(f: &FoundExample) -> FoundRecord {
    let (eta, rho, sigma) = f.triple();
    let claimed = Claimed { eta, rho, sigma };
    let name = format!("search/({eta},{rho},{sigma})/{}/{}", f.seed, f.index);
    FoundRecord {
        target: claimed,
        strategy: f.strategy.as_str(),
        seed: f.seed,
        index: f.index,
        pencil: pencil_to_json(&name, &f.pencil, Some(&f.e), Some(claimed)),
        profile: profile_report(&f.profile),
    }
}

/// Appends one line per example to the log at `path`.
pub fn append_found(path: &Path, found: &[FoundExample]) -> Result<(), Error> {
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    for f in found {
        let line = serde_json::to_string(&found_record(f))?;
        writeln!(file, "{line}")?;
    }
    Ok(())
}

#[derive(Serialize)]
pub struct StatsReport {
    pub candidates: usize,
    pub hits: usize,
    pub construction_failures: usize,
    pub no_definite_point: usize,
    pub profile_errors: usize,
    pub degenerate: usize,
    pub mismatched: usize,
    pub unstable: usize,
    pub other_triples: Vec<([usize; 3], usize)>,
}

#[derive(Serialize)]
pub struct SearchReport {
    pub target: Claimed,
    pub seeds: Vec<u64>,
    pub budget: usize,
    pub found: Vec<FoundRecord>,
    pub stats: StatsReport,
}

pub fn search_report(target: &SearchTarget, seeds: &[u64], cfg: &SearchConfig, out: &SearchOutcome) -> SearchReport {
    let s = &out.stats;
    SearchReport {
        target: Claimed { eta: target.eta, rho: target.rho, sigma: target.sigma },
        seeds: seeds.to_vec(),
        budget: cfg.budget,
        found: out.found.iter().map(found_record).collect(),
        stats: StatsReport {
            candidates: s.candidates,
            hits: s.hits,
            construction_failures: s.construction_failures,
            no_definite_point: s.no_definite_point,
            profile_errors: s.profile_errors,
            degenerate: s.degenerate,
            mismatched: s.mismatched,
            unstable: s.unstable,
            other_triples: s.other_triples.iter().map(|(&(a, b, c), &n)| ([a, b, c], n)).collect(),
        },
    }
}

#[derive(Serialize, Deserialize)]
pub struct RowJson {
    pub eta: usize,
    pub found: Vec<[usize; 2]>,
    pub missing: Vec<[usize; 2]>,
    pub paper_known: Vec<[usize; 2]>,
    pub paper_missing: Vec<[usize; 2]>,
    pub bonus: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
pub struct TrackerJson {
    pub rows: Vec<RowJson>,
}

fn cells(s: &BTreeSet<(usize, usize)>) -> Vec<[usize; 2]> {
    s.iter().map(|&(a, b)| [a, b]).collect()
}

fn row_json(r: &TrackerRow) -> RowJson {
    RowJson {
        eta: r.eta,
        found: cells(&r.found),
        missing: cells(&r.missing),
        paper_known: cells(&r.paper_known),
        paper_missing: cells(&r.paper_missing),
        bonus: cells(&r.bonus),
    }
}

pub fn tracker_json(state: &TrackerState) -> TrackerJson {
    TrackerJson { rows: state.rows().iter().map(row_json).collect() }
}

/// Reads the found cells back; a missing file is an empty tracker.
pub fn load_tracker(path: &Path) -> Result<TrackerState, Error> {
    let mut state = TrackerState::new();
    if !path.exists() {
        return Ok(state);
    }
    let t: TrackerJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    for r in t.rows {
        for [rho, sigma] in r.found {
            state.insert(r.eta, rho, sigma);
        }
    }
    Ok(state)
}

pub fn save_tracker(path: &Path, state: &TrackerState) -> Result<(), Error> {
    // one compact row per line
    let rows: Vec<String> =
        tracker_json(state).rows.iter().map(serde_json::to_string).collect::<Result<_, _>>()?;
    fs::write(path, format!("{{\"rows\": [\n  {}\n]}}\n", rows.join(",\n  ")))?;
    Ok(())
}

/// Adds every catalog entry whose claimed profile was reproduced.
pub fn tracker_from_verdicts(mut state: TrackerState, verdicts: &[EntryVerdict]) -> TrackerState {
    for v in verdicts.iter().filter(|v| v.profile_matches()) {
        if let Some(c) = v.claimed {
            state.insert(c.eta, c.rho, c.sigma);
        }
    }
    state
}

pub fn tracker_text(state: &TrackerState) -> String {
    let fmt = |s: &BTreeSet<(usize, usize)>| {
        let v: Vec<String> = s.iter().map(|(a, b)| format!("({a},{b})")).collect();
        if v.is_empty() {
            "-".to_string()
        } else {
            v.join(" ")
        }
    };
    let mut out = String::new();
    for r in state.rows() {
        out.push_str(&format!("η = {:>2}  found {}  missing {}", r.eta, fmt(&r.found), fmt(&r.missing)));
        if !r.bonus.is_empty() {
            out.push_str(&format!("  new {}", fmt(&r.bonus)));
        }
        out.push('\n');
    }
    out
}
