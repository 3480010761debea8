//! Fock-diagonal two-mode states, their block-diagonal sector over the
//! excitation manifolds, and the associated bookkeeping (truncation,
//! manifold probabilities, mode moments, entropies).
//!
//! Everything here is immutable after construction and free of interior
//! mutability, so all types are `Send + Sync` and all operations are pure.

use crate::{Error, Result};

/// Slack accepted when checking that a probability sequence is normalized.
pub(crate) const NORM_TOL: f64 = 1e-12;

/// Controls where photon-number expansions are cut off.
///
/// Constructors extend the support of a distribution until the certified
/// remaining tail mass drops below `tail_tol`, and fail with
/// [`Error::TruncationOverflow`] if that has not happened by `n_max_cap`
/// photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Upper bound on the probability mass allowed past the cutoff.
    pub tail_tol: f64,
    /// Hard ceiling on the single-mode photon-number support.
    pub n_max_cap: usize,
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, n_max_cap: usize) -> Result<Self> {
        if !(tail_tol > 0.0) || !tail_tol.is_finite() {
            return Err(Error::Domain(format!(
                "tail tolerance must be a positive finite number, got {tail_tol}"
            )));
        }
        if n_max_cap == 0 {
            return Err(Error::Domain("support cap must be at least 1".into()));
        }
        Ok(Self { tail_tol, n_max_cap })
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tail_tol: 1e-12, n_max_cap: 4096 }
    }
}

fn check_probabilities(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty probability sequence".into()));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {p}, expected a nonnegative finite probability"
            )));
        }
    }
    Ok(())
}

/// Photon-number distribution of a single mode.
///
/// Stores the probabilities `probs[m]` of finding `m` photons together with a
/// bound `tail_mass` on the probability left beyond the stored support, so
/// that `sum(probs) + tail_mass = 1` up to round-off.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDistribution {
    probs: Vec<f64>,
    tail_mass: f64,
}

impl ModeDistribution {
    /// Wraps an explicitly normalized sequence (no truncated tail beyond
    /// round-off). The sum must be within `1e-12` of one.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        check_probabilities(&probs)?;
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}, expected 1 within {NORM_TOL:e}"
            )));
        }
        Ok(Self { probs, tail_mass: (1.0 - sum).max(0.0) })
    }

    /// Wraps a truncated sequence together with its tail mass.
    pub fn from_truncated(probs: Vec<f64>, tail_mass: f64) -> Result<Self> {
        check_probabilities(&probs)?;
        if !(tail_mass >= 0.0) || !tail_mass.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "tail mass is {tail_mass}, expected a nonnegative finite number"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum + tail_mass - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities plus tail sum to {}, expected 1 within {NORM_TOL:e}",
                sum + tail_mass
            )));
        }
        Ok(Self { probs, tail_mass })
    }

    /// The vacuum mode: all probability on zero photons.
    pub fn vacuum() -> Self {
        Self::fock(0)
    }

    /// Point mass at `m` photons.
    pub fn fock(m: usize) -> Self {
        let mut probs = vec![0.0; m + 1];
        probs[m] = 1.0;
        Self { probs, tail_mass: 0.0 }
    }

    /// Thermal (geometric) distribution with mean occupancy `nbar`.
    ///
    /// The support ends at the first `m` with geometric tail
    /// `q^(m+1) <= tail_tol`, where `q = nbar / (nbar + 1)`; that closed-form
    /// tail is stored as `tail_mass`.
    pub fn thermal(nbar: f64, policy: &TruncationPolicy) -> Result<Self> {
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::Domain(format!(
                "thermal mean occupancy must be nonnegative and finite, got {nbar}"
            )));
        }
        if nbar == 0.0 {
            return Ok(Self::vacuum());
        }
        let q = nbar / (nbar + 1.0);
        let ground = 1.0 / (nbar + 1.0);
        let mut probs = Vec::new();
        let mut qpow = 1.0; // q^m for the entry being pushed
        loop {
            probs.push(ground * qpow);
            qpow *= q; // after the update: q^(m+1) = tail past index m
            if qpow <= policy.tail_tol {
                return Self::from_truncated(probs, qpow);
            }
            if probs.len() > policy.n_max_cap {
                return Err(Error::TruncationOverflow {
                    cap: policy.n_max_cap,
                    tail_tol: policy.tail_tol,
                    tail: qpow,
                });
            }
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Largest photon number carried by the stored support.
    pub fn max_photons(&self) -> usize {
        self.probs.len() - 1
    }

    /// `⟨N^order⟩` over the stored support. The truncation error is bounded
    /// by `tail_mass * max_photons^order`.
    pub fn moment(&self, order: u32) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(m, &p)| p * (m as f64).powi(order as i32))
            .sum()
    }

    /// Shannon entropy `-Σ p ln p` of the stored support (natural log).
    pub fn entropy(&self) -> f64 {
        -self
            .probs
            .iter()
            .map(|&p| if p > 0.0 { p * p.ln() } else { 0.0 })
            .sum::<f64>()
    }

    /// `Σ p²` over the stored support.
    pub fn purity(&self) -> f64 {
        self.probs.iter().map(|&p| p * p).sum()
    }
}

/// Weights `|c_N|²` of a pure superposition across excitation manifolds.
///
/// Relative phases between the manifold components never enter any of the
/// degrees, so only the squared amplitudes are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct PureExpansion {
    weights: Vec<f64>,
    tail: f64,
}

impl PureExpansion {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_probabilities(&weights)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "pure-expansion weights sum to {sum}, expected 1 within {NORM_TOL:e}"
            )));
        }
        Ok(Self { weights, tail: (1.0 - sum).max(0.0) })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }
}

/// A two-mode radiation state in one of the two supported shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoModeState {
    /// `ρ = ρ_H ⊗ ρ_V` with both factors diagonal in the Fock basis.
    ProductDiagonal(ModeDistribution, ModeDistribution),
    /// Pure state expanded over the excitation manifolds.
    PureExpansion(PureExpansion),
}

impl TwoModeState {
    pub fn product(mode_h: ModeDistribution, mode_v: ModeDistribution) -> Self {
        Self::ProductDiagonal(mode_h, mode_v)
    }

    pub fn pure(weights: Vec<f64>) -> Result<Self> {
        Ok(Self::PureExpansion(PureExpansion::new(weights)?))
    }

    /// Both modes in the vacuum?
    pub fn is_vacuum(&self) -> bool {
        match self {
            Self::ProductDiagonal(h, v) => h.moment(1) == 0.0 && v.moment(1) == 0.0,
            Self::PureExpansion(p) => p.weights().iter().skip(1).all(|&w| w == 0.0),
        }
    }

    /// The same state with the two modes exchanged. A pure expansion is
    /// unchanged: the manifold weights do not see the mode labels.
    pub fn swapped(&self) -> Self {
        match self {
            Self::ProductDiagonal(h, v) => Self::ProductDiagonal(v.clone(), h.clone()),
            Self::PureExpansion(p) => Self::PureExpansion(p.clone()),
        }
    }

    /// Eigenvalues of the block-diagonal sector, manifold by manifold.
    ///
    /// For a product state the manifold-`N` block is already diagonal with
    /// entries `ξ_n η_(N-n)`, so the returned rows carry all `N + 1`
    /// eigenvalues. For a pure expansion each block is rank one, so the row
    /// holds the single eigenvalue `p_N = |c_N|²` (the omitted zeros
    /// contribute nothing to any series downstream).
    pub fn manifold_spectrum(&self) -> ManifoldSpectrum {
        match self {
            Self::ProductDiagonal(h, v) => {
                let xi = h.probs();
                let eta = v.probs();
                let n_max = xi.len() + eta.len() - 2;
                let mut mu = Vec::with_capacity(n_max + 1);
                let mut p = Vec::with_capacity(n_max + 1);
                for n in 0..=n_max {
                    let mut row = vec![0.0; n + 1];
                    let lo = n.saturating_sub(eta.len() - 1);
                    let hi = n.min(xi.len() - 1);
                    let mut sum = 0.0;
                    for (k, slot) in row.iter_mut().enumerate().take(hi + 1).skip(lo) {
                        let value = xi[k] * eta[n - k];
                        *slot = value;
                        sum += value;
                    }
                    p.push(sum);
                    mu.push(row);
                }
                ManifoldSpectrum { p, mu, tail: h.tail_mass() + v.tail_mass() }
            }
            Self::PureExpansion(pe) => {
                let p = pe.weights().to_vec();
                let mu = p.iter().map(|&w| vec![w]).collect();
                ManifoldSpectrum { p, mu, tail: pe.tail() }
            }
        }
    }

    /// Von Neumann entropy of a product-diagonal state, as the sum of the two
    /// mode entropies.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        match self {
            Self::ProductDiagonal(h, v) => Ok(h.entropy() + v.entropy()),
            Self::PureExpansion(_) => Err(Error::ProductStateRequired),
        }
    }
}

/// Manifold probabilities `p_N` and block eigenvalues `μ_(N,n)` of the
/// block-diagonal sector of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpectrum {
    p: Vec<f64>,
    mu: Vec<Vec<f64>>,
    tail: f64,
}

impl ManifoldSpectrum {
    /// Builds a spectrum from explicit per-manifold eigenvalue lists.
    ///
    /// Row `N` may carry fewer than `N + 1` entries when the block is rank
    /// deficient; it must never carry more. `tail` bounds the probability in
    /// manifolds beyond the last row.
    pub fn from_eigenvalues(mu: Vec<Vec<f64>>, tail: f64) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidDistribution("empty manifold list".into()));
        }
        if !(tail >= 0.0) || !tail.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "manifold tail is {tail}, expected a nonnegative finite number"
            )));
        }
        let mut p = Vec::with_capacity(mu.len());
        for (n, row) in mu.iter().enumerate() {
            if row.len() > n + 1 {
                return Err(Error::InvalidDistribution(format!(
                    "manifold {n} lists {} eigenvalues but has dimension {}",
                    row.len(),
                    n + 1
                )));
            }
            for &value in row {
                if !(value >= 0.0) || !value.is_finite() {
                    return Err(Error::InvalidDistribution(format!(
                        "manifold {n} carries eigenvalue {value}"
                    )));
                }
            }
            p.push(row.iter().sum());
        }
        let total: f64 = p.iter().sum::<f64>() + tail;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "manifold probabilities plus tail sum to {total}, expected 1"
            )));
        }
        Ok(Self { p, mu, tail })
    }

    /// Spectrum of the SU(2)-invariant state with manifold weights `π_N`:
    /// each manifold spreads its weight uniformly over its `N + 1` states.
    pub fn su2_invariant(weights: &UnpolarizedWeights) -> Self {
        let mu: Vec<Vec<f64>> = weights
            .weights()
            .iter()
            .enumerate()
            .map(|(n, &w)| vec![w / (n + 1) as f64; n + 1])
            .collect();
        let p = mu.iter().map(|row| row.iter().sum()).collect();
        Self { p, mu, tail: 0.0 }
    }

    /// Manifold probabilities `p_N`.
    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// Eigenvalue list of manifold `n`.
    pub fn eigenvalues(&self, n: usize) -> &[f64] {
        &self.mu[n]
    }

    /// Index of the last stored manifold.
    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    /// Number of stored manifolds (`n_max + 1`).
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Bound on the probability mass beyond the stored manifolds.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Entropy `-Σ μ ln μ` of the block-diagonal sector.
    pub fn entropy(&self) -> f64 {
        -self
            .mu
            .iter()
            .flatten()
            .map(|&m| if m > 0.0 { m * m.ln() } else { 0.0 })
            .sum::<f64>()
    }
}

/// Manifold weights `π_N` of an SU(2)-invariant (unpolarized) state.
#[derive(Debug, Clone, PartialEq)]
pub struct UnpolarizedWeights {
    pi: Vec<f64>,
}

impl UnpolarizedWeights {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        check_probabilities(&pi)?;
        let sum: f64 = pi.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "unpolarized weights sum to {sum}, expected 1 within {NORM_TOL:e}"
            )));
        }
        Ok(Self { pi })
    }

    /// All weight on a single manifold.
    pub fn point_mass(n: usize) -> Self {
        let mut pi = vec![0.0; n + 1];
        pi[n] = 1.0;
        Self { pi }
    }

    pub fn weights(&self) -> &[f64] {
        &self.pi
    }

    /// Total-variation distance `(1/2) Σ |π_N − π'_N|`, padding the shorter
    /// sequence with zeros.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let long = self.pi.len().max(other.pi.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..long)
            .map(|i| (get(&self.pi, i) - get(&other.pi, i)).abs())
            .sum::<f64>()
    }
}
