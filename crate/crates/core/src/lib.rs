//! Exact and numerical machinery for quartic surfaces in projective 3-space
//! given by Hermitian determinantal representations `det(Σ x_k M_k)`.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of its inputs; parallel drivers, file formats and the command
//! line live in the `detquartic` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curves;
pub mod error;
pub mod homotopy;
pub mod linalg;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod sample;
pub mod scalar;
pub mod search;
pub mod singularities;
pub mod spectra;
pub mod x2;

pub use error::{Error, Result};
pub use matrix::{GMatrix, PolyMatrix};
pub use pencil::{DefinitenessVerdict, HermitianMatrix, HermitianPencil, RealSymmetricPencil};

pub use poly::MultiPoly;
pub use scalar::{GaussianRational, Rational};
