//! Catalog, file formats, parallel drivers and the `detquartic` command
//! line on top of `detquartic-core`.

pub mod catalog;
pub mod checks;
pub mod format;
pub mod mesh;
pub mod search;
pub mod verify;

pub use detquartic_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] detquartic_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("format: {0}")]
    Format(String),
}
