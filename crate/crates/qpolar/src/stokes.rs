//! First- and second-order Stokes-operator degrees of polarization.
//!
//! For Fock-diagonal product states the transverse Stokes expectations
//! `⟨S_1⟩` and `⟨S_2⟩` vanish, so everything reduces to photon-number
//! moments of the two modes:
//!
//! * `⟨S_0⟩ = ⟨N_H⟩ + ⟨N_V⟩`, `⟨S_3⟩ = ⟨N_H⟩ − ⟨N_V⟩`;
//! * `⟨S²⟩ = 2(⟨N_H⟩⟨N_V⟩ + ⟨N_H⟩ + ⟨N_V⟩) + ⟨N_H²⟩ + ⟨N_V²⟩`.

use crate::state::{ModeDistribution, TwoModeState};
use crate::{Error, Result};

/// The Stokes expectations a Fock-diagonal product state can have.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesSummary {
    /// `⟨S_0⟩`, the mean total photon number.
    pub s0: f64,
    /// `⟨S_3⟩`, the mean occupancy imbalance.
    pub s3: f64,
    /// `⟨S²⟩`, the second moment of the Stokes vector.
    pub s_sq: f64,
}

impl StokesSummary {
    /// Assembles the summary from the first and second photon-number moments
    /// of each mode. Used both for direct-sum moments and for closed-form
    /// moments of specific state families, which must agree (tested).
    pub fn from_moments(mean_h: f64, second_h: f64, mean_v: f64, second_v: f64) -> Self {
        let s0 = mean_h + mean_v;
        let s3 = mean_h - mean_v;
        let s_sq = 2.0 * (mean_h * mean_v + mean_h + mean_v) + second_h + second_v;
        debug_assert!(s0 >= 0.0);
        debug_assert!(s_sq + 1e-9 * s_sq.max(1.0) >= s3 * s3, "⟨S²⟩ >= ⟨S_3⟩² violated");
        Self { s0, s3, s_sq }
    }

    pub fn from_modes(mode_h: &ModeDistribution, mode_v: &ModeDistribution) -> Self {
        Self::from_moments(mode_h.moment(1), mode_h.moment(2), mode_v.moment(1), mode_v.moment(2))
    }

    /// First-order Stokes degree `|⟨S_3⟩| / ⟨S_0⟩`.
    ///
    /// The vacuum is refused: the limit of this ratio toward the vacuum is 1,
    /// which does not describe any physical polarization.
    pub fn p1(&self) -> Result<f64> {
        if self.s0 == 0.0 {
            return Err(Error::VacuumUndefined);
        }
        Ok((self.s3.abs() / self.s0).min(1.0))
    }

    /// Second-order Stokes degree `|⟨S_3⟩| / sqrt(⟨S²⟩)`. Unlike `p1` this
    /// tends to 0 toward the vacuum, but the exact vacuum is still refused.
    pub fn p2(&self) -> Result<f64> {
        if self.s_sq == 0.0 {
            return Err(Error::VacuumUndefined);
        }
        Ok((self.s3.abs() / self.s_sq.sqrt()).min(1.0))
    }
}

/// Stokes expectations of a product-diagonal state, from direct moment sums.
pub fn stokes_summary(state: &TwoModeState) -> Result<StokesSummary> {
    match state {
        TwoModeState::ProductDiagonal(h, v) => Ok(StokesSummary::from_modes(h, v)),
        TwoModeState::PureExpansion(_) => Err(Error::ProductStateRequired),
    }
}

/// First-order Stokes degree of a product-diagonal state.
pub fn p1(state: &TwoModeState) -> Result<f64> {
    stokes_summary(state)?.p1()
}

/// Second-order Stokes degree of a product-diagonal state.
pub fn p2(state: &TwoModeState) -> Result<f64> {
    stokes_summary(state)?.p2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::TruncationPolicy;
    use proptest::prelude::*;

    fn thermal_pair(n1: f64, n2: f64) -> TwoModeState {
        let policy = TruncationPolicy::default();
        TwoModeState::product(
            ModeDistribution::thermal(n1, &policy).unwrap(),
            ModeDistribution::thermal(n2, &policy).unwrap(),
        )
    }

    #[test]
    fn vacuum_refuses_stokes_degrees() {
        let state = TwoModeState::product(ModeDistribution::vacuum(), ModeDistribution::vacuum());
        let summary = stokes_summary(&state).unwrap();
        assert_eq!(summary.s0, 0.0);
        assert_eq!(summary.s_sq, 0.0);
        assert!(matches!(summary.p1(), Err(Error::VacuumUndefined)));
        assert!(matches!(summary.p2(), Err(Error::VacuumUndefined)));
    }

    #[test]
    fn fock_pair_summary() {
        let state = TwoModeState::product(ModeDistribution::fock(2), ModeDistribution::fock(2));
        let summary = stokes_summary(&state).unwrap();
        assert_eq!(summary.s0, 4.0);
        assert_eq!(summary.s3, 0.0);
        assert_eq!(p1(&state).unwrap(), 0.0);
        assert_eq!(p2(&state).unwrap(), 0.0);
    }

    #[test]
    fn thermal_pair_matches_closed_moments() {
        // ⟨N²⟩ = nbar (2 nbar + 1) for a thermal mode.
        let state = thermal_pair(3.0, 1.0);
        let summary = stokes_summary(&state).unwrap();
        assert!((summary.s0 - 4.0).abs() < 1e-9);
        assert!((summary.s3 - 2.0).abs() < 1e-9);
        assert!((summary.s_sq - 38.0).abs() < 1e-8);
        assert!((p1(&state).unwrap() - 0.5).abs() < 1e-10);
        assert!((p2(&state).unwrap() - 2.0 / 38.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn fock_stokes_degrees() {
        let state = TwoModeState::product(ModeDistribution::fock(3), ModeDistribution::fock(1));
        assert!((p1(&state).unwrap() - 0.5).abs() < 1e-15);
        assert!((p2(&state).unwrap() - 1.0 / 6.0f64.sqrt()).abs() < 1e-15);

        let state = TwoModeState::product(ModeDistribution::fock(1), ModeDistribution::fock(0));
        assert_eq!(p1(&state).unwrap(), 1.0);
        assert!((p2(&state).unwrap() - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn p2_vanishes_toward_vacuum() {
        let mut last = f64::INFINITY;
        for &n in &[1e-2, 1e-4, 1e-6, 1e-8] {
            let state = thermal_pair(n, 0.0);
            let value = p2(&state).unwrap();
            assert!(value < last);
            last = value;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn pure_expansion_is_rejected() {
        let state = TwoModeState::pure(vec![0.5, 0.5]).unwrap();
        assert!(matches!(stokes_summary(&state), Err(Error::ProductStateRequired)));
    }

    proptest! {
        #[test]
        fn swap_invariance_and_ordering(
            raw_h in proptest::collection::vec(0.01..1.0f64, 1..6),
            raw_v in proptest::collection::vec(0.01..1.0f64, 1..6),
        ) {
            let normalize = |raw: Vec<f64>| {
                let s: f64 = raw.iter().sum();
                ModeDistribution::from_probs(raw.iter().map(|x| x / s).collect()).unwrap()
            };
            let state = TwoModeState::product(normalize(raw_h), normalize(raw_v));
            prop_assume!(!state.is_vacuum());
            let one = p1(&state).unwrap();
            let two = p2(&state).unwrap();
            prop_assert!((0.0..=1.0).contains(&one));
            prop_assert!((0.0..=1.0).contains(&two));
            // ⟨S²⟩ >= ⟨S_0⟩² for these states, hence P2 <= P1.
            prop_assert!(two <= one + 1e-12);
            let swapped = state.swapped();
            prop_assert!((one - p1(&swapped).unwrap()).abs() < 1e-12);
            prop_assert!((two - p2(&swapped).unwrap()).abs() < 1e-12);
        }
    }
}
