#![no_std]
#![forbid(unsafe_code)]

//! Affine Lorentzian isometry groups of Minkowski (2+1)-space.
//!
//! The crate is organised bottom-up:
//!
//! - [`lorentz`]: the Lorentzian scalar product, the Lorentzian cross-product,
//!   causal and isometry classification, null frames of hyperbolic elements.
//! - [`affine`]: affine isometries, invariant lines, the Margulis invariant,
//!   radiance detection, cocycles and coboundaries.
//! - [`word`] and [`group`]: free-product words, presentations, Schottky
//!   construction and verification, hyperbolization of generating sets.
//! - [`spectrum`]: marked Margulis spectra, the linear functional on
//!   cohomology, asymptotics of `α(ηⁿγᵐ)` and eigenvector convergence reports.
//! - [`isospectral`]: reconstruction of affine conjugacy from spectral data,
//!   with explicit numerical certificates.
//!
//! Everything is `no_std` + `alloc`; IO, CLI and file formats live in the
//! `margulis` companion crate.

extern crate alloc;

pub mod affine;
pub mod error;
pub mod group;
pub mod isospectral;
pub mod linalg;
pub mod lorentz;
pub mod spectrum;
pub mod tolerance;
pub mod word;

pub use affine::{AffineIso, Cocycle, InvariantLine};
pub use error::{Error, Result};
pub use group::Presentation;
pub use isospectral::{ConjugacyCertificate, ReconstructOptions, Verdict};
pub use lorentz::{CausalClass, IsometryClass, LorentzMap, MVec, NullFrame};
pub use spectrum::{AsymptoticData, Spectrum, SpectrumEntry};
pub use tolerance::Tolerances;
pub use word::Word;

#[cfg(test)]
extern crate std;
