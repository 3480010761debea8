//! Quantum degrees of polarization for two-mode Fock-diagonal radiation states.
//!
//! A quasi-monochromatic beam is described by a two-mode state over the
//! horizontal and vertical oscillating modes. For states that are diagonal in
//! the two-mode Fock basis, all polarization information lives in the
//! block-diagonal sector over the excitation manifolds (the subspaces of fixed
//! total photon number), and five scalar degrees of polarization can be
//! evaluated exactly:
//!
//! * `P1` — first-order Stokes degree, `|⟨N_H⟩ − ⟨N_V⟩| / (⟨N_H⟩ + ⟨N_V⟩)`;
//! * `P2` — second-order Stokes degree, `|⟨N_H⟩ − ⟨N_V⟩| / sqrt(⟨S²⟩)`;
//! * `P_HS` — squared Hilbert–Schmidt distance to the closest unpolarized
//!   (SU(2)-invariant) state;
//! * `P_B` — Bures degree, `1 − sqrt(max fidelity)` over the unpolarized set;
//! * `P_RE` — relative-entropy degree, `S_min / (1 + S_min)` with `S_min` the
//!   minimal relative entropy to the unpolarized set.
//!
//! The crate provides three routes to these numbers and cross-checks them
//! against each other:
//!
//! 1. general manifold series over the block-diagonal eigenvalues
//!    ([`degrees`]), valid for any Fock-diagonal state;
//! 2. closed forms for two-mode thermal states ([`thermal`]) and
//!    photon-added thermal states ([`pats`]), including the pure Fock limit;
//! 3. brute-force minimization over the simplex of unpolarized weights
//!    ([`oracle`]), which re-derives the optimum numerically from the
//!    distance definitions.
//!
//! Start with the runnable programs under `examples/`; each one exercises a
//! single capability. A thin `qpolar` binary exposes the same functionality as
//! `degree`, `sweep`, and `verify` subcommands.
//!
//! ```
//! use qpolar::state::TruncationPolicy;
//! use qpolar::thermal::ThermalPair;
//! use qpolar::degrees::polarization_report;
//!
//! let pair = ThermalPair::new(3.0, 1.0)?;
//! let state = pair.state(&TruncationPolicy::default())?;
//! let report = polarization_report(&state)?;
//! assert!((report.p1.unwrap() - 0.5).abs() < 1e-12);
//! # Ok::<(), qpolar::Error>(())
//! ```

pub mod degrees;
pub mod descriptor;
pub mod numerics;
pub mod oracle;
pub mod pats;
pub mod state;
pub mod stokes;
pub mod sweep;
pub mod thermal;
pub mod verify;

pub use degrees::PolarizationReport;
pub use state::{ManifoldSpectrum, ModeDistribution, TruncationPolicy, TwoModeState, UnpolarizedWeights};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A photon-number expansion hit the hard support ceiling before the
    /// requested tail tolerance was certified.
    #[error("support cap {cap} reached before tail tolerance {tail_tol:e} (remaining tail bound {tail:e})")]
    TruncationOverflow { cap: usize, tail_tol: f64, tail: f64 },

    /// Stokes-based degrees have no meaningful value at the two-mode vacuum.
    #[error("Stokes degrees are undefined at the two-mode vacuum")]
    VacuumUndefined,

    /// The minimal relative entropy came out negative beyond round-off,
    /// which signals inconsistent inputs (e.g. an entropy that does not
    /// belong to the supplied spectrum).
    #[error("minimal relative entropy is negative ({0:e}); entropy and spectrum are inconsistent")]
    NegativeEntropy(f64),

    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A probability sequence failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// The operation is only defined for product-diagonal states.
    #[error("operation requires a product-diagonal two-mode state")]
    ProductStateRequired,

    /// Simplex minimization stopped at the iteration cap.
    #[error("simplex minimization did not converge within {iterations} iterations (KKT residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A state descriptor or other external input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
