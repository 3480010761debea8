//! Distance-type degrees of polarization: Hilbert–Schmidt, Bures, and
//! relative entropy, all measured against the set of SU(2)-invariant
//! (unpolarized) states.
//!
//! Because a Fock-diagonal state commutes with every unpolarized state, the
//! extremizations over the unpolarized set collapse to manifold series over
//! the block eigenvalues `μ_(N,n)` and the manifold probabilities `p_N`:
//!
//! * `P_HS = Σ μ² − Σ p_N² / (N+1)`;
//! * `P_B  = 1 − sqrt(Σ (Σ_n sqrt μ)² / (N+1))`;
//! * `P_RE = S_min / (1 + S_min)` with
//!   `S_min = −S(ρ) − Σ p_N ln(p_N / (N+1))`.
//!
//! The minimizers themselves are exposed through [`closest_unpolarized`], and
//! the [`crate::oracle`] module re-derives both values and minimizers by
//! direct numerical optimization.

use crate::state::{ManifoldSpectrum, TwoModeState, UnpolarizedWeights};
use crate::stokes;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Distance measure selecting a closest-unpolarized-state construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMeasure {
    HilbertSchmidt,
    Bures,
    RelativeEntropy,
}

/// All five degrees of one state, plus truncation provenance.
///
/// The Stokes entries are `None` exactly when the state is the two-mode
/// vacuum, where they are undefined; `stokes_undefined` then carries the
/// reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationReport {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p_hs: f64,
    pub p_bures: f64,
    pub p_re: f64,
    pub n_max_used: usize,
    pub tail_bound: f64,
    pub stokes_undefined: Option<String>,
}

/// Round-off guard: series results that should be nonnegative may come out
/// at a few ulp below zero for unpolarized inputs.
const NEGATIVE_ROUNDOFF: f64 = 1e-14;

fn clamp_roundoff(value: f64) -> f64 {
    if value < 0.0 {
        debug_assert!(value >= -NEGATIVE_ROUNDOFF, "negative beyond round-off: {value}");
        0.0
    } else {
        value
    }
}

/// Hilbert–Schmidt degree from the manifold series.
pub fn p_hs_series(ms: &ManifoldSpectrum) -> f64 {
    let mut sum_sq = 0.0;
    let mut projected = 0.0;
    for (n, &p) in ms.probabilities().iter().enumerate() {
        sum_sq += ms.eigenvalues(n).iter().map(|&m| m * m).sum::<f64>();
        projected += p * p / (n + 1) as f64;
    }
    let value = clamp_roundoff(sum_sq - projected);
    debug_assert!(value < 1.0);
    value
}

/// Bures degree from the manifold series.
pub fn p_bures_series(ms: &ManifoldSpectrum) -> f64 {
    let mut radicand = 0.0;
    for (n, row) in (0..ms.len()).map(|n| (n, ms.eigenvalues(n))) {
        let root_sum: f64 = row.iter().map(|&m| m.sqrt()).sum();
        radicand += root_sum * root_sum / (n + 1) as f64;
    }
    clamp_roundoff(1.0 - radicand.sqrt())
}

/// Relative-entropy degree `S_min / (1 + S_min)`.
///
/// `entropy` must be the von Neumann entropy of the block-diagonal sector of
/// the state behind `ms`; taking it as an argument lets callers inject closed
/// forms (thermal, photon-added). [`p_re_from_state`] computes it instead.
pub fn p_re(ms: &ManifoldSpectrum, entropy: f64) -> Result<f64> {
    let mut cross = 0.0;
    for (n, &p) in ms.probabilities().iter().enumerate() {
        if p > 0.0 {
            cross += p * (p.ln() - ((n + 1) as f64).ln());
        }
    }
    let s_min = -entropy - cross;
    if s_min < -1e-9 {
        return Err(Error::NegativeEntropy(s_min));
    }
    let s_min = s_min.max(0.0);
    Ok(s_min / (1.0 + s_min))
}

/// Relative-entropy degree computed end to end from a product-diagonal state.
pub fn p_re_from_state(state: &TwoModeState) -> Result<f64> {
    let entropy = state.von_neumann_entropy()?;
    p_re(&state.manifold_spectrum(), entropy)
}

/// Weights of the closest unpolarized state under the given measure.
///
/// For Hilbert–Schmidt and relative entropy the optimum keeps the photon
/// number distribution of the state, `π_N = p_N`. For Bures the fidelity
/// `sqrt(F) = Σ a_N sqrt(π_N)` with `a_N = (Σ_n sqrt μ) / sqrt(N+1)` is
/// maximized by `π_N ∝ a_N²`. Weights are renormalized onto the simplex so
/// truncated spectra still produce valid `UnpolarizedWeights`.
pub fn closest_unpolarized(ms: &ManifoldSpectrum, measure: DistanceMeasure) -> UnpolarizedWeights {
    let raw: Vec<f64> = match measure {
        DistanceMeasure::HilbertSchmidt | DistanceMeasure::RelativeEntropy => {
            ms.probabilities().to_vec()
        }
        DistanceMeasure::Bures => (0..ms.len())
            .map(|n| {
                let root_sum: f64 = ms.eigenvalues(n).iter().map(|&m| m.sqrt()).sum();
                root_sum * root_sum / (n + 1) as f64
            })
            .collect(),
    };
    let total: f64 = raw.iter().sum();
    UnpolarizedWeights::new(raw.iter().map(|&x| x / total).collect())
        .expect("normalized weights are a valid simplex point")
}

/// The three distance degrees of a pure state with manifold weights
/// `|c_N|²`, via the single-term-per-manifold shortcuts.
pub fn pure_degrees(weights: &[f64]) -> Result<(f64, f64, f64)> {
    let expansion = crate::state::PureExpansion::new(weights.to_vec())?;
    let weights = expansion.weights();
    let mut hs = 0.0;
    let mut radicand = 0.0;
    let mut s_min = 0.0;
    for (n, &w) in weights.iter().enumerate() {
        let dim = (n + 1) as f64;
        hs += w * w * n as f64 / dim;
        radicand += w / dim;
        s_min += w * dim.ln();
    }
    Ok((hs, clamp_roundoff(1.0 - radicand.sqrt()), s_min / (1.0 + s_min)))
}

/// Computes all five degrees of a product-diagonal state.
pub fn polarization_report(state: &TwoModeState) -> Result<PolarizationReport> {
    let summary = stokes::stokes_summary(state)?;
    let (p1, p2, stokes_undefined) = if summary.s0 == 0.0 {
        (None, None, Some("vacuum".to_string()))
    } else {
        (Some(summary.p1()?), Some(summary.p2()?), None)
    };
    let ms = state.manifold_spectrum();
    let entropy = state.von_neumann_entropy()?;
    Ok(PolarizationReport {
        p1,
        p2,
        p_hs: p_hs_series(&ms),
        p_bures: p_bures_series(&ms),
        p_re: p_re(&ms, entropy)?,
        n_max_used: ms.n_max(),
        tail_bound: ms.tail(),
        stokes_undefined,
    })
}
