//! Photon-added thermal states (PATS): adding `M` photons to a thermal mode
//! of mean occupancy `nbar` yields the Fock-diagonal mixture with weights
//!
//! `ρ_ll = C(l, M) nbar^(l-M) / (nbar+1)^(l+1)` for `l >= M`.
//!
//! These states are non-Gaussian and nonclassical for `M >= 1`, reduce to
//! the thermal mode at `M = 0`, and collapse to the Fock state `|M⟩` at
//! `nbar = 0`. The module carries their closed-form purity, moments and
//! entropy, the two-mode manifold probabilities, a closed-form route to the
//! Hilbert–Schmidt degree, and the Fock-state limit of all five degrees.

use crate::degrees::{p_bures_series, p_re, PolarizationReport};
use crate::numerics::{legendre, log_binomial};
use crate::state::{ModeDistribution, TruncationPolicy, TwoModeState};
use crate::stokes::StokesSummary;
use crate::thermal::thermal_entropy;
use crate::{Error, Result};

/// One photon-added thermal mode: thermal occupancy before addition and the
/// number of photons added.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatsSpec {
    nbar: f64,
    added: u32,
    q: f64,
}

impl PatsSpec {
    pub fn new(nbar: f64, added: u32) -> Result<Self> {
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::Domain(format!(
                "thermal mean occupancy must be nonnegative and finite, got {nbar}"
            )));
        }
        Ok(Self { nbar, added, q: nbar / (nbar + 1.0) })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn added(&self) -> u32 {
        self.added
    }

    pub fn thermal_ratio(&self) -> f64 {
        self.q
    }
}

/// Tensor product of two photon-added thermal modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModePats {
    pub h: PatsSpec,
    pub v: PatsSpec,
}

impl TwoModePats {
    pub fn new(h: PatsSpec, v: PatsSpec) -> Self {
        Self { h, v }
    }

    pub fn state(&self, policy: &TruncationPolicy) -> Result<TwoModeState> {
        Ok(TwoModeState::product(pats_mode(&self.h, policy)?, pats_mode(&self.v, policy)?))
    }
}

/// Single Fock-basis weight `ρ_ll` of a photon-added thermal mode,
/// assembled in the log domain and exponentiated last.
pub fn pats_weight(nbar: f64, added: u32, l: usize) -> f64 {
    let m = added as usize;
    if l < m {
        return 0.0;
    }
    if nbar == 0.0 {
        return if l == m { 1.0 } else { 0.0 };
    }
    let log_w = log_binomial(l as u64, added as u64).expect("l >= added")
        + (l - m) as f64 * nbar.ln()
        - (l + 1) as f64 * nbar.ln_1p();
    log_w.exp()
}

/// Photon-number distribution of a photon-added thermal mode.
///
/// The support grows until a geometric ratio bound certifies that the
/// remaining mass is below `policy.tail_tol`: successive weight ratios
/// `w_(l+1)/w_l = q (l+1)/(l+1-M)` decrease toward `q < 1`, so once the next
/// ratio drops below one the tail is dominated by a geometric series.
pub fn pats_mode(spec: &PatsSpec, policy: &TruncationPolicy) -> Result<ModeDistribution> {
    let m = spec.added as usize;
    if spec.nbar == 0.0 {
        return Ok(ModeDistribution::fock(m));
    }
    let q = spec.q;
    let mut probs = vec![0.0; m];
    let mut sum = 0.0;
    let mut l = m;
    loop {
        let w = pats_weight(spec.nbar, spec.added, l);
        probs.push(w);
        sum += w;
        let ratio_next = (l + 1) as f64 / (l + 1 - m) as f64 * q;
        if ratio_next < 1.0 {
            let following = (l + 2) as f64 / (l + 2 - m) as f64 * q;
            let tail_bound = w * ratio_next / (1.0 - following);
            if tail_bound <= policy.tail_tol {
                return ModeDistribution::from_truncated(probs, (1.0 - sum).max(0.0));
            }
        }
        l += 1;
        if probs.len() > policy.n_max_cap {
            return Err(Error::TruncationOverflow {
                cap: policy.n_max_cap,
                tail_tol: policy.tail_tol,
                tail: (1.0 - sum).max(0.0),
            });
        }
    }
}

/// Purity `Tr ρ²` in closed form, through a Legendre polynomial of the
/// photon number added.
pub fn pats_purity(spec: &PatsSpec) -> f64 {
    let nbar = spec.nbar;
    let prefactor = (2.0 * nbar + 1.0).recip().powi(spec.added as i32 + 1);
    let argument = 1.0 + 2.0 * nbar * nbar / (2.0 * nbar + 1.0);
    prefactor * legendre(spec.added, argument).expect("argument >= 1 by construction")
}

/// Closed-form photon-number moments `(⟨N⟩, ⟨N²⟩)`:
/// `⟨N⟩ = M (nbar+1) + nbar` and
/// `⟨N²⟩ = nbar (M+1) [(M+2) nbar + 2M + 1] + M²`.
pub fn pats_moments(spec: &PatsSpec) -> (f64, f64) {
    let n = spec.nbar;
    let m = spec.added as f64;
    let mean = m * (n + 1.0) + n;
    let second = n * (m + 1.0) * ((m + 2.0) * n + 2.0 * m + 1.0) + m * m;
    (mean, second)
}

/// Von Neumann entropy of a photon-added thermal mode:
/// `(M+1) S_th(nbar) − Σ_l ρ_ll ln C(l, M)`, with the sum over the support
/// truncated under `policy`.
pub fn pats_entropy(spec: &PatsSpec, policy: &TruncationPolicy) -> Result<f64> {
    if spec.nbar == 0.0 {
        return Ok(0.0);
    }
    let dist = pats_mode(spec, policy)?;
    let m = spec.added as usize;
    let mut correction = 0.0;
    for (l, &w) in dist.probs().iter().enumerate().skip(m) {
        if w > 0.0 {
            correction += w * log_binomial(l as u64, spec.added as u64).expect("l >= added");
        }
    }
    Ok((spec.added as f64 + 1.0) * thermal_entropy(spec.nbar) - correction)
}

/// Probability of the `N`th excitation manifold of a two-mode PATS, by the
/// finite sum over the split of `N` photons between the modes.
pub fn two_mode_pats_pn(tp: &TwoModePats, n: usize) -> f64 {
    let m = tp.h.added as usize;
    let s = tp.v.added as usize;
    if n < m + s {
        return 0.0;
    }
    (m..=n - s)
        .map(|l| pats_weight(tp.h.nbar, tp.h.added, l) * pats_weight(tp.v.nbar, tp.v.added, n - l))
        .sum()
}

/// Hilbert–Schmidt degree of a two-mode PATS.
///
/// The eigenvalue-square sum factorizes into the closed-form purities; only
/// the projected part `Σ p_N²/(N+1)` needs summation, and its remainder is
/// bounded by the uncollected manifold mass.
pub fn p_hs_pats(tp: &TwoModePats, policy: &TruncationPolicy) -> Result<f64> {
    let mut projected = 0.0;
    let mut mass = 0.0;
    // manifolds below the joint support carry no mass
    let mut n = tp.h.added as usize + tp.v.added as usize;
    let cap = 2 * policy.n_max_cap + 1;
    loop {
        let p = two_mode_pats_pn(tp, n);
        projected += p * p / (n + 1) as f64;
        mass += p;
        if 1.0 - mass <= policy.tail_tol {
            break;
        }
        n += 1;
        if n > cap {
            return Err(Error::TruncationOverflow {
                cap,
                tail_tol: policy.tail_tol,
                tail: 1.0 - mass,
            });
        }
    }
    Ok(pats_purity(&tp.h) * pats_purity(&tp.v) - projected)
}

/// Stokes expectations of a two-mode PATS from the closed-form moments.
pub fn pats_stokes(tp: &TwoModePats) -> StokesSummary {
    let (mean_h, second_h) = pats_moments(&tp.h);
    let (mean_v, second_v) = pats_moments(&tp.v);
    StokesSummary::from_moments(mean_h, second_h, mean_v, second_v)
}

/// All five degrees of the two-mode Fock state `|M, S⟩`, the `nbar -> 0`
/// limit of a two-mode PATS. With `N = M + S`:
/// `P_HS = N/(N+1)`, `P_B = 1 − 1/sqrt(N+1)`, `P_RE = 1 − 1/(1 + ln(N+1))`,
/// `P1 = |M−S|/N`, `P2 = |M−S|/sqrt(N(N+2))`.
pub fn fock_degrees(m: u32, s: u32) -> PolarizationReport {
    let n = (m + s) as f64;
    let (p1, p2, stokes_undefined) = if m + s == 0 {
        (None, None, Some("vacuum".to_string()))
    } else {
        let imbalance = (m as f64 - s as f64).abs();
        (Some(imbalance / n), Some(imbalance / (n * (n + 2.0)).sqrt()), None)
    };
    PolarizationReport {
        p1,
        p2,
        p_hs: n / (n + 1.0),
        p_bures: 1.0 - 1.0 / (n + 1.0).sqrt(),
        p_re: 1.0 - 1.0 / (1.0 + (n + 1.0).ln()),
        n_max_used: (m + s) as usize,
        tail_bound: 0.0,
        stokes_undefined,
    }
}

/// All five degrees of a two-mode PATS: Stokes entries from the closed-form
/// moments, Hilbert–Schmidt from the purity route, Bures and relative
/// entropy from the manifold series over the assembled state.
pub fn pats_report(tp: &TwoModePats, policy: &TruncationPolicy) -> Result<PolarizationReport> {
    let summary = pats_stokes(tp);
    let (p1, p2, stokes_undefined) = if summary.s0 == 0.0 {
        (None, None, Some("vacuum".to_string()))
    } else {
        (Some(summary.p1()?), Some(summary.p2()?), None)
    };
    let state = tp.state(policy)?;
    let ms = state.manifold_spectrum();
    let entropy = pats_entropy(&tp.h, policy)? + pats_entropy(&tp.v, policy)?;
    Ok(PolarizationReport {
        p1,
        p2,
        p_hs: p_hs_pats(tp, policy)?,
        p_bures: p_bures_series(&ms),
        p_re: p_re(&ms, entropy)?,
        n_max_used: ms.n_max(),
        tail_bound: ms.tail(),
        stokes_undefined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::p_hs_series;
    use crate::oracle::convolve_distributions;
    use crate::thermal::{p_hs_thermal, ThermalPair};

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn zero_occupancy_collapses_to_fock() {
        let spec = PatsSpec::new(0.0, 3).unwrap();
        let dist = pats_mode(&spec, &policy()).unwrap();
        assert_eq!(dist.probs(), ModeDistribution::fock(3).probs());
    }

    #[test]
    fn no_added_photons_collapses_to_thermal() {
        let spec = PatsSpec::new(1.3, 0).unwrap();
        let pats = pats_mode(&spec, &policy()).unwrap();
        let thermal = ModeDistribution::thermal(1.3, &policy()).unwrap();
        let len = pats.probs().len().min(thermal.probs().len());
        for l in 0..len {
            assert!((pats.probs()[l] - thermal.probs()[l]).abs() < 1e-14);
        }
    }

    #[test]
    fn support_and_mean() {
        let spec = PatsSpec::new(1.0, 2).unwrap();
        let dist = pats_mode(&spec, &policy()).unwrap();
        assert_eq!(dist.probs()[0], 0.0);
        assert_eq!(dist.probs()[1], 0.0);
        assert!(dist.probs()[2] > 0.0);
        assert!(dist.tail_mass() <= policy().tail_tol);
        assert!((dist.moment(1) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn purity_closed_form() {
        assert_eq!(pats_purity(&PatsSpec::new(0.0, 4).unwrap()), 1.0);
        let thermal = PatsSpec::new(1.0, 0).unwrap();
        assert!((pats_purity(&thermal) - 1.0 / 3.0).abs() < 1e-15);
        // Against the direct sum of squared weights, over a grid.
        for &nbar in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            for added in 0..=6u32 {
                let spec = PatsSpec::new(nbar, added).unwrap();
                let direct = pats_mode(&spec, &policy()).unwrap().purity();
                assert!(
                    (pats_purity(&spec) - direct).abs() < 1e-10,
                    "purity mismatch at nbar={nbar}, M={added}"
                );
            }
        }
    }

    #[test]
    fn moments_closed_form() {
        assert_eq!(pats_moments(&PatsSpec::new(0.0, 4).unwrap()), (4.0, 16.0));
        assert_eq!(pats_moments(&PatsSpec::new(2.0, 0).unwrap()), (2.0, 10.0));
        let (mean, second) = pats_moments(&PatsSpec::new(1.0, 1).unwrap());
        assert_eq!((mean, second), (3.0, 13.0));
        // Against the direct sums; the second moment carries a tail * L²
        // truncation error.
        let dist = pats_mode(&PatsSpec::new(1.0, 1).unwrap(), &policy()).unwrap();
        assert!((dist.moment(1) - mean).abs() < 1e-10);
        assert!((dist.moment(2) - second).abs() < 1e-8);
    }

    #[test]
    fn entropy_closed_form() {
        assert_eq!(pats_entropy(&PatsSpec::new(0.0, 2).unwrap(), &policy()).unwrap(), 0.0);
        let thermal_case = pats_entropy(&PatsSpec::new(1.5, 0).unwrap(), &policy()).unwrap();
        assert!((thermal_case - thermal_entropy(1.5)).abs() < 1e-10);

        let spec = PatsSpec::new(1.0, 2).unwrap();
        let direct = pats_mode(&spec, &policy()).unwrap().entropy();
        assert!((pats_entropy(&spec, &policy()).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn manifold_probabilities() {
        let tp = TwoModePats::new(PatsSpec::new(1.0, 1).unwrap(), PatsSpec::new(1.0, 2).unwrap());
        assert_eq!(two_mode_pats_pn(&tp, 0), 0.0);
        assert_eq!(two_mode_pats_pn(&tp, 2), 0.0);
        let h = pats_mode(&tp.h, &policy()).unwrap();
        let v = pats_mode(&tp.v, &policy()).unwrap();
        let conv = convolve_distributions(&h, &v);
        for n in 0..=40usize {
            assert!(
                (two_mode_pats_pn(&tp, n) - conv[n]).abs() < 1e-12,
                "p_{n} mismatch"
            );
        }
    }

    #[test]
    fn fock_partner_reduces_to_single_term() {
        // nbar_v = 0 turns the split sum into one binomial term.
        let tp = TwoModePats::new(PatsSpec::new(1.5, 2).unwrap(), PatsSpec::new(0.0, 3).unwrap());
        let (nbar, m, s) = (1.5f64, 2u64, 3usize);
        for n in s + 2..s + 20 {
            let l = n - s;
            let expected = (log_binomial(l as u64, m).unwrap()
                + (l as f64 - m as f64) * nbar.ln()
                - (l as f64 + 1.0) * nbar.ln_1p())
            .exp();
            assert!((two_mode_pats_pn(&tp, n) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn hs_reduces_to_thermal_and_fock() {
        let tp = TwoModePats::new(PatsSpec::new(2.0, 0).unwrap(), PatsSpec::new(1.0, 0).unwrap());
        let thermal = p_hs_thermal(&ThermalPair::new(2.0, 1.0).unwrap());
        assert!((p_hs_pats(&tp, &policy()).unwrap() - thermal).abs() < 1e-9);

        let tp = TwoModePats::new(PatsSpec::new(0.0, 2).unwrap(), PatsSpec::new(0.0, 2).unwrap());
        assert!((p_hs_pats(&tp, &policy()).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn hs_matches_series() {
        let tp = TwoModePats::new(PatsSpec::new(1.0, 2).unwrap(), PatsSpec::new(1.0, 2).unwrap());
        let ms = tp.state(&policy()).unwrap().manifold_spectrum();
        assert!((p_hs_pats(&tp, &policy()).unwrap() - p_hs_series(&ms)).abs() < 1e-8);
    }

    #[test]
    fn stokes_from_closed_moments_match_direct_sums() {
        let tp = TwoModePats::new(PatsSpec::new(1.7, 1).unwrap(), PatsSpec::new(0.4, 2).unwrap());
        let closed = pats_stokes(&tp);
        let state = tp.state(&policy()).unwrap();
        let direct = crate::stokes::stokes_summary(&state).unwrap();
        assert!((closed.s0 - direct.s0).abs() < 1e-10);
        assert!((closed.s3 - direct.s3).abs() < 1e-10);
        assert!((closed.s_sq - direct.s_sq).abs() < 1e-8);
        assert!((closed.p1().unwrap() - direct.p1().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn fock_degree_table() {
        let report = fock_degrees(1, 0);
        assert_eq!(report.p1, Some(1.0));
        assert!((report.p2.unwrap() - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
        assert!((report.p_hs - 0.5).abs() < 1e-15);
        assert!((report.p_bures - (1.0 - 1.0 / 2.0f64.sqrt())).abs() < 1e-15);
        assert!((report.p_re - (1.0 - 1.0 / (1.0 + 2.0f64.ln()))).abs() < 1e-15);

        let report = fock_degrees(2, 2);
        assert_eq!(report.p1, Some(0.0));
        assert_eq!(report.p2, Some(0.0));
        assert!((report.p_hs - 0.8).abs() < 1e-15);

        let vacuum = fock_degrees(0, 0);
        assert_eq!(vacuum.p1, None);
        assert_eq!(vacuum.p_hs, 0.0);
    }

    #[test]
    fn fock_degree_orderings() {
        for n in 1..=100u32 {
            let report = fock_degrees(n, 0);
            assert!(report.p_hs >= report.p_bures);
            assert!(report.p_hs >= report.p_re);
            assert!(report.p1.unwrap() >= report.p2.unwrap());
        }
    }

    #[test]
    fn report_is_consistent_with_generic_route() {
        let tp = TwoModePats::new(PatsSpec::new(2.0, 1).unwrap(), PatsSpec::new(1.0, 1).unwrap());
        let fast = pats_report(&tp, &policy()).unwrap();
        let generic =
            crate::degrees::polarization_report(&tp.state(&policy()).unwrap()).unwrap();
        assert!((fast.p1.unwrap() - generic.p1.unwrap()).abs() < 1e-10);
        assert!((fast.p2.unwrap() - generic.p2.unwrap()).abs() < 1e-10);
        assert!((fast.p_hs - generic.p_hs).abs() < 1e-8);
        assert!((fast.p_bures - generic.p_bures).abs() < 1e-12);
        assert!((fast.p_re - generic.p_re).abs() < 1e-9);
    }
}
