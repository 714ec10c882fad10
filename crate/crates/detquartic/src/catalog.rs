//! The example catalog, loaded at runtime from JSON data files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use detquartic_core::{HermitianPencil, Rational};

use crate::format::{parse_point, Claimed, PencilJson};
use crate::Error;

#[derive(Deserialize)]
struct EntryFile {
    #[serde(flatten)]
    pencil: PencilJson,
    source: String,
    #[serde(default)]
    notes: Vec<String>,
    #[serde(default)]
    rank_only: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub source: String,
    pub pencil: HermitianPencil,
    /// `None` only for rank-only fixtures.
    pub e: Option<Vec<Rational>>,
    pub claimed: Option<Claimed>,
    pub notes: Vec<String>,
    pub rank_only: bool,
}

impl CatalogEntry {
    /// The `(η,ρ,σ)` part of the name, e.g. `(2,2,1)`.
    pub fn triple(&self) -> &str {
        self.name.rsplit('/').next().unwrap_or(&self.name)
    }

    pub fn flagged(&self) -> bool {
        !self.notes.is_empty()
    }
}

/// The data directory shipped with the crate, overridable with
/// `DETQUARTIC_CATALOG`.
pub fn default_dir() -> PathBuf {
    match std::env::var_os("DETQUARTIC_CATALOG") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog"),
    }
}

pub fn load_file(path: &Path) -> Result<CatalogEntry, Error> {
    let text = fs::read_to_string(path)?;
    let f: EntryFile = serde_json::from_str(&text)?;
    let pencil = f.pencil.pencil()?;
    let e = f.pencil.definite_point.as_deref().map(parse_point).transpose()?;
    if e.is_none() && !f.rank_only {
        return Err(Error::Format(format!("{}: missing definite point", path.display())));
    }
    Ok(CatalogEntry {
        name: f.pencil.name,
        source: f.source,
        pencil,
        e,
        claimed: f.pencil.claimed,
        notes: f.notes,
        rank_only: f.rank_only,
    })
}

/// All entries in `dir`, sorted by name.
pub fn load_dir(dir: &Path) -> Result<Vec<CatalogEntry>, Error> {
    let mut out = Vec::new();
    for item in fs::read_dir(dir)? {
        let path = item?.path();
        if path.extension().is_some_and(|x| x == "json") {
            out.push(load_file(&path)?);
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Entries with a claimed profile (the rank-only fixture is excluded).
pub fn load_default() -> Result<Vec<CatalogEntry>, Error> {
    Ok(load_dir(&default_dir())?.into_iter().filter(|e| !e.rank_only).collect())
}

pub fn load_fixture(name: &str) -> Result<CatalogEntry, Error> {
    load_dir(&default_dir())?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Format(format!("no catalog entry named {name}")))
}

/// Matches a full name like `4.3/(2,2,1)`, or failing that the bare
/// triple `(2,2,1)` (with or without a section prefix that differs).
pub fn find<'a>(entries: &'a [CatalogEntry], query: &str) -> Option<&'a CatalogEntry> {
    let q: String = query.chars().filter(|c| !c.is_whitespace()).collect();
    entries.iter().find(|e| e.name == q).or_else(|| {
        let triple = q.rsplit('/').next().unwrap_or(&q);
        entries.iter().find(|e| e.triple() == triple)
    })
}
