//! Certification of intensity measurement ensembles.
//!
//! Given measurement vectors `Φ = {φ_n}` in `R^M` or `C^M`, the intensity map
//! `A(x)(n) = |⟨x, φ_n⟩|²` forgets the global phase of `x`. This crate decides
//! whether `A` still determines `x` up to that phase (injectivity) or does so
//! for an open dense set of signals (almost injectivity), builds the classical
//! explicit ensembles, and sweeps random ensembles to map where these
//! properties switch on as the number of measurements grows.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numerics`] | tolerance-aware rank, null space, spanning tests |
//! | [`ensemble`] | ensembles, signals, the intensity map and its lift to self-adjoint matrices |
//! | [`injectivity`] | complement property, full spark, the M=2 and M=3 complex tests, bounds |
//! | [`almost_inj`] | real almost-injectivity, pointwise recoverability, UNTF checks |
//! | [`constructions`] | Vandermonde, harmonic DFT, two-circle, fixture and Gaussian ensembles |
//! | [`explorer`] | seeded Monte-Carlo grids and their CSV format |
//! | [`certify`] | name-based dispatch used by the CLI and the browser demo |
//!
//! Subset indices are zero-based throughout the library.

pub mod almost_inj;
pub mod certify;
pub mod constructions;
pub mod ensemble;
mod error;
pub mod explorer;
pub mod injectivity;
pub mod numerics;
mod subsets;

pub use error::{Error, Result};
pub use num_complex::Complex64;
