//! Cross-check suite behind the `verify` subcommand.
//!
//! Every check pits at least two independent routes against each other:
//! closed forms against manifold series, series against bruteible-force
//! simplex minimization, closed-form identities against direct sums and
//! convolutions, and the published qualitative behavior of the degrees
//! against freshly computed sweeps. Checks report their worst residual so
//! a regression shows up as a number, not just a flag.

use crate::degrees::{
    closest_unpolarized, p_bures_series, p_hs_series, p_re, polarization_report, pure_degrees,
    DistanceMeasure,
};
use crate::oracle::{minimize_over_unpolarized, random_spectrum, SimplexObjective, SimplexProblem};
use crate::pats::{
    fock_degrees, pats_entropy, pats_mode, pats_moments, pats_purity, two_mode_pats_pn, PatsSpec,
    TwoModePats,
};
use crate::state::{ManifoldSpectrum, ModeDistribution, TruncationPolicy, TwoModeState};
use crate::sweep::{epsilon_grid, run_sweep, SweepConfig, SweepFamily};
use crate::thermal::{
    branch_continuity_worst_gap, p_bures_thermal, p_hs_thermal, p_re_thermal, thermal_report,
    ThermalPair,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    /// Smaller oracle batch and coarser grids; a few seconds.
    Fast,
    /// The complete batch, including the large thermal and photon-added
    /// oracle instances.
    Full,
}

/// Pass thresholds for every check, kept in one place so the suite can be
/// deliberately tightened (e.g. to confirm it still fails) or relaxed for
/// exploratory builds.
#[derive(Debug, Clone)]
pub struct Tolerances {
    pub equilibrium: f64,
    pub closed_vs_series: f64,
    pub oracle_value: f64,
    pub oracle_weights: f64,
    pub fock_closed: f64,
    pub pats_identity: f64,
    pub ordering_slack: f64,
    pub branch_continuity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equilibrium: 1e-9,
            closed_vs_series: 1e-8,
            oracle_value: 1e-7,
            oracle_weights: 1e-6,
            fock_closed: 1e-12,
            pats_identity: 1e-9,
            ordering_slack: 1e-12,
            branch_continuity: 1e-9,
        }
    }
}

impl Tolerances {
    /// Every threshold multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            equilibrium: self.equilibrium * factor,
            closed_vs_series: self.closed_vs_series * factor,
            oracle_value: self.oracle_value * factor,
            oracle_weights: self.oracle_weights * factor,
            fock_closed: self.fock_closed * factor,
            pats_identity: self.pats_identity * factor,
            ordering_slack: self.ordering_slack * factor,
            branch_continuity: self.branch_continuity * factor,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn from_residual(name: &'static str, worst: f64, tolerance: f64, detail: String) -> Self {
        Self { name, passed: worst <= tolerance, worst_residual: worst, tolerance, detail }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// KKT residual at which the oracle iterations are declared converged.
const ORACLE_KKT_TOL: f64 = 1e-10;

/// Runs the whole suite. `seed` offsets the random-spectrum batch so repeat
/// runs can explore fresh instances while staying reproducible.
pub fn run(level: VerifyLevel, seed: u64, tolerances: &Tolerances) -> Result<VerifyReport> {
    let checks = vec![
        equilibrium_nullity(tolerances)?,
        closed_vs_series(tolerances)?,
        oracle_values(level, seed, tolerances)?,
        oracle_weights(level, seed, tolerances)?,
        fock_limits(tolerances),
        pats_identities(level, tolerances)?,
        thermal_sweep_shape(tolerances)?,
        pats_vs_thermal_ordering(level, tolerances)?,
        branch_continuity(tolerances),
    ];
    Ok(VerifyReport { level, checks })
}

fn equilibrium_nullity(tol: &Tolerances) -> Result<CheckOutcome> {
    let policy = TruncationPolicy::default();
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for &nbar in &[0.0, 0.5, 1.0, 5.0, 20.0] {
        let tp = ThermalPair::new(nbar, nbar)?;
        let closed = thermal_report(&tp, &policy)?;
        let series = polarization_report(&tp.state(&policy)?)?;
        let mut values = vec![
            closed.p_hs,
            closed.p_bures,
            closed.p_re,
            series.p_hs,
            series.p_bures,
            series.p_re,
        ];
        // The Stokes entries exist away from the vacuum and must vanish too.
        for report in [&closed, &series] {
            if let (Some(a), Some(b)) = (report.p1, report.p2) {
                values.push(a);
                values.push(b);
            } else {
                debug_assert_eq!(nbar, 0.0);
            }
        }
        for v in values {
            if v.abs() > worst {
                worst = v.abs();
                at = format!("thermal({nbar}, {nbar})");
            }
        }
    }
    Ok(CheckOutcome::from_residual(
        "equilibrium-nullity",
        worst,
        tol.equilibrium,
        format!("worst at {at}"),
    ))
}

fn closed_vs_series(tol: &Tolerances) -> Result<CheckOutcome> {
    // The Bures root sums converge like the square root of the truncated
    // mass; a deep support keeps the series error well under the pass
    // threshold.
    let policy = TruncationPolicy::new(1e-18, 4096)?;
    let grid = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for &n1 in &grid {
        for &n2 in &grid {
            let tp = ThermalPair::new(n1, n2)?;
            let ms = tp.state(&policy)?.manifold_spectrum();
            let hs_gap = (p_hs_thermal(&tp) - p_hs_series(&ms)).abs();
            let bures_gap = (p_bures_thermal(&tp) - p_bures_series(&ms)).abs();
            for (gap, which) in [(hs_gap, "HS"), (bures_gap, "Bures")] {
                if gap > worst {
                    worst = gap;
                    at = format!("{which} at ({n1}, {n2})");
                }
            }
        }
    }
    Ok(CheckOutcome::from_residual(
        "thermal-closed-vs-series",
        worst,
        tol.closed_vs_series,
        format!("36-point occupancy grid; worst {at}"),
    ))
}

/// The oracle batch at a given level: seeded random spectra, plus the two
/// structured states at the full level. Returns (label, spectrum, entropy).
fn oracle_batch(level: VerifyLevel, seed: u64) -> Result<Vec<(String, ManifoldSpectrum, f64)>> {
    let policy = TruncationPolicy::default();
    let count = match level {
        VerifyLevel::Fast => 8,
        VerifyLevel::Full => 20,
    };
    let mut batch: Vec<(String, ManifoldSpectrum, f64)> = (0..count)
        .map(|k| {
            let ms = random_spectrum(12, seed.wrapping_add(k));
            let entropy = ms.entropy();
            (format!("random(n_max=12, seed={})", seed.wrapping_add(k)), ms, entropy)
        })
        .collect();
    if level == VerifyLevel::Full {
        let thermal = ThermalPair::new(2.0, 1.0)?.state(&policy)?;
        batch.push((
            "thermal(2, 1)".into(),
            thermal.manifold_spectrum(),
            thermal.von_neumann_entropy()?,
        ));
        let pats = TwoModePats::new(PatsSpec::new(1.0, 2)?, PatsSpec::new(1.0, 1)?);
        let state = pats.state(&policy)?;
        batch.push((
            "pats(1, M=2) x pats(1, S=1)".into(),
            state.manifold_spectrum(),
            state.von_neumann_entropy()?,
        ));
    }
    Ok(batch)
}

const OBJECTIVES: [(SimplexObjective, &str); 3] = [
    (SimplexObjective::HilbertSchmidt, "HS"),
    (SimplexObjective::BuresFidelity, "Bures"),
    (SimplexObjective::RelativeEntropy, "RE"),
];

fn oracle_values(level: VerifyLevel, seed: u64, tol: &Tolerances) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for (label, ms, entropy) in oracle_batch(level, seed)? {
        for (objective, name) in OBJECTIVES {
            let solution =
                minimize_over_unpolarized(&SimplexProblem { objective, spectrum: &ms }, ORACLE_KKT_TOL)?;
            let (numeric, analytic) = match objective {
                SimplexObjective::HilbertSchmidt => (solution.value, p_hs_series(&ms)),
                SimplexObjective::BuresFidelity => (solution.value, p_bures_series(&ms)),
                SimplexObjective::RelativeEntropy => {
                    (solution.value / (1.0 + solution.value), p_re(&ms, entropy)?)
                }
            };
            let gap = (numeric - analytic).abs();
            if gap > worst {
                worst = gap;
                at = format!("{name} on {label}");
            }
        }
    }
    Ok(CheckOutcome::from_residual(
        "oracle-values",
        worst,
        tol.oracle_value,
        format!("simplex minimization vs analytic degrees; worst {at}"),
    ))
}

fn oracle_weights(level: VerifyLevel, seed: u64, tol: &Tolerances) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for (label, ms, _) in oracle_batch(level, seed)? {
        for (objective, name) in OBJECTIVES {
            let solution =
                minimize_over_unpolarized(&SimplexProblem { objective, spectrum: &ms }, ORACLE_KKT_TOL)?;
            let measure = match objective {
                SimplexObjective::HilbertSchmidt => DistanceMeasure::HilbertSchmidt,
                SimplexObjective::BuresFidelity => DistanceMeasure::Bures,
                SimplexObjective::RelativeEntropy => DistanceMeasure::RelativeEntropy,
            };
            let analytic = closest_unpolarized(&ms, measure);
            let tv = solution.weights.total_variation(&analytic);
            if tv > worst {
                worst = tv;
                at = format!("{name} on {label}");
            }
        }
    }
    Ok(CheckOutcome::from_residual(
        "oracle-weights",
        worst,
        tol.oracle_weights,
        format!("total variation to the analytic optimum; worst {at}"),
    ))
}

fn fock_limits(tol: &Tolerances) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    let mut record = |gap: f64, m: u32, s: u32, which: &str| {
        if gap > worst {
            worst = gap;
            at = format!("{which} at |{m},{s}>");
        }
    };
    for n in 1..=20u32 {
        for m in 0..=n {
            let s = n - m;
            let closed = fock_degrees(m, s);
            let state = TwoModeState::product(
                ModeDistribution::fock(m as usize),
                ModeDistribution::fock(s as usize),
            );
            let series = polarization_report(&state).expect("fock product report");
            record((series.p_hs - closed.p_hs).abs(), m, s, "HS");
            record((series.p_bures - closed.p_bures).abs(), m, s, "Bures");
            record((series.p_re - closed.p_re).abs(), m, s, "RE");
            record((series.p1.unwrap() - closed.p1.unwrap()).abs(), m, s, "P1");
            record((series.p2.unwrap() - closed.p2.unwrap()).abs(), m, s, "P2");

            let mut weights = vec![0.0; n as usize + 1];
            weights[n as usize] = 1.0;
            let (hs, bures, re) = pure_degrees(&weights).expect("point mass");
            record((hs - closed.p_hs).abs(), m, s, "pure HS");
            record((bures - closed.p_bures).abs(), m, s, "pure Bures");
            record((re - closed.p_re).abs(), m, s, "pure RE");

            // Published orderings among the degrees of a Fock state.
            record((closed.p_bures - closed.p_hs).max(0.0), m, s, "HS >= Bures");
            record((closed.p_re - closed.p_hs).max(0.0), m, s, "HS >= RE");
            record((closed.p2.unwrap() - closed.p1.unwrap()).max(0.0), m, s, "P1 >= P2");
        }
    }
    CheckOutcome::from_residual(
        "fock-limits",
        worst,
        tol.fock_closed,
        format!("closed forms, series and orderings for N <= 20; worst {at}"),
    )
}

fn pats_identities(level: VerifyLevel, tol: &Tolerances) -> Result<CheckOutcome> {
    // Second moments of the direct sums carry a tail * L² truncation error,
    // so the oracle side runs with a deep support.
    let policy = TruncationPolicy::new(1e-15, 4096)?;
    let (occupancies, additions): (&[f64], &[u32]) = match level {
        VerifyLevel::Fast => (&[0.1, 1.0], &[0, 1, 2]),
        VerifyLevel::Full => (&[0.1, 1.0, 2.0], &[0, 1, 2, 4]),
    };
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    let mut record = |gap: f64, label: String| {
        if gap > worst {
            worst = gap;
            at = label;
        }
    };
    for &nbar in occupancies {
        for &m in additions {
            let spec = PatsSpec::new(nbar, m)?;
            let dist = pats_mode(&spec, &policy)?;
            record(
                (pats_purity(&spec) - dist.purity()).abs(),
                format!("purity at (nbar={nbar}, M={m})"),
            );
            let (mean, second) = pats_moments(&spec);
            record((mean - dist.moment(1)).abs(), format!("mean at (nbar={nbar}, M={m})"));
            record((second - dist.moment(2)).abs(), format!("second moment at (nbar={nbar}, M={m})"));
            record(
                (pats_entropy(&spec, &policy)? - dist.entropy()).abs(),
                format!("entropy at (nbar={nbar}, M={m})"),
            );
        }
    }
    // Two-mode manifold probabilities against the convolution oracle.
    for &n1 in occupancies {
        for &n2 in occupancies {
            for &m in additions {
                for &s in additions {
                    let tp = TwoModePats::new(PatsSpec::new(n1, m)?, PatsSpec::new(n2, s)?);
                    let conv = crate::oracle::convolve_distributions(
                        &pats_mode(&tp.h, &policy)?,
                        &pats_mode(&tp.v, &policy)?,
                    );
                    let upto = conv.len().min(61);
                    for (n, &expected) in conv.iter().enumerate().take(upto) {
                        record(
                            (two_mode_pats_pn(&tp, n) - expected).abs(),
                            format!("p_{n} at (n1={n1}, M={m}, n2={n2}, S={s})"),
                        );
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::from_residual(
        "pats-identities",
        worst,
        tol.pats_identity,
        format!("closed forms vs direct sums/convolutions; worst {at}"),
    ))
}

fn thermal_sweep_shape(tol: &Tolerances) -> Result<CheckOutcome> {
    let config = SweepConfig::new(
        SweepFamily::Thermal,
        1.0,
        epsilon_grid(0.0, 10.0, 0.25)?,
        TruncationPolicy::default(),
    )?;
    let rows = run_sweep(&config)?;
    let mut worst: f64 = 0.0;
    let mut shape_ok = true;
    let mut detail = String::new();
    let column = |pick: fn(&crate::degrees::PolarizationReport) -> f64| -> Vec<f64> {
        rows.iter().map(|r| pick(&r.report)).collect()
    };
    let monotone = [
        ("P1", column(|r| r.p1.unwrap())),
        ("P2", column(|r| r.p2.unwrap())),
        ("P_B", column(|r| r.p_bures)),
        ("P_RE", column(|r| r.p_re)),
    ];
    for (name, values) in &monotone {
        for pair in values.windows(2) {
            let violation = pair[0] - pair[1];
            if violation > worst {
                worst = violation;
                detail = format!("{name} decreased along the grid");
            }
        }
    }
    // The Hilbert-Schmidt column must rise to a single interior maximum and
    // fall beyond it, ending below the peak.
    let hs = column(|r| r.p_hs);
    let peak = hs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite column"))
        .map(|(i, _)| i)
        .expect("nonempty column");
    if peak == 0 || peak == hs.len() - 1 {
        shape_ok = false;
        detail = "P_HS has no interior maximum".into();
    } else {
        for i in 0..hs.len() - 1 {
            let rising = hs[i + 1] > hs[i];
            if (i < peak) != rising {
                shape_ok = false;
                detail = format!("P_HS changes direction away from its peak at index {i}");
                break;
            }
        }
        if hs[hs.len() - 1] >= hs[peak] {
            shape_ok = false;
            detail = "P_HS does not fall below its interior maximum".into();
        }
    }
    let mut outcome = CheckOutcome::from_residual(
        "thermal-sweep-shape",
        worst,
        tol.ordering_slack,
        if detail.is_empty() {
            format!("monotone columns; P_HS peaks at eps = {}", rows[peak].epsilon)
        } else {
            detail
        },
    );
    outcome.passed = outcome.passed && shape_ok;
    Ok(outcome)
}

fn pats_vs_thermal_ordering(level: VerifyLevel, tol: &Tolerances) -> Result<CheckOutcome> {
    let policy = TruncationPolicy::default();
    let step = match level {
        VerifyLevel::Fast => 1.0,
        VerifyLevel::Full => 0.25,
    };
    let grid = epsilon_grid(step, 10.0, step)?;
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for &n2 in &[0.0, 1.0] {
        let thermal_rows = run_sweep(&SweepConfig::new(
            SweepFamily::Thermal,
            n2,
            grid.clone(),
            policy,
        )?)?;
        for &(m, s) in &[(2u32, 2u32), (1, 2)] {
            let pats_rows = run_sweep(&SweepConfig::new(
                SweepFamily::Pats { added_h: m, added_v: s },
                n2,
                grid.clone(),
                policy,
            )?)?;
            for (th, pa) in thermal_rows.iter().zip(&pats_rows) {
                // Photon addition lowers the first-order Stokes degree and
                // raises the Bures and entropic degrees.
                let checks = [
                    (pa.report.p1.unwrap() - th.report.p1.unwrap(), "P1(pats) <= P1(thermal)"),
                    (th.report.p_bures - pa.report.p_bures, "P_B(pats) >= P_B(thermal)"),
                    (th.report.p_re - pa.report.p_re, "P_RE(pats) >= P_RE(thermal)"),
                ];
                for (violation, which) in checks {
                    if violation > worst {
                        worst = violation;
                        at = format!("{which} at (n2={n2}, M={m}, S={s}, eps={})", th.epsilon);
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::from_residual(
        "pats-vs-thermal-ordering",
        worst,
        tol.ordering_slack,
        format!("photon addition orderings; worst {at}"),
    ))
}

fn branch_continuity(tol: &Tolerances) -> CheckOutcome {
    CheckOutcome::from_residual(
        "branch-continuity",
        branch_continuity_worst_gap(),
        tol.branch_continuity,
        "near-equality expansions vs direct closed forms at the switch thresholds".into(),
    )
}

/// Convenience wrapper used by tests that only need the relative-entropy
/// equilibrium series at large occupancies.
pub fn equilibrium_re_residual(nbar: f64) -> Result<f64> {
    let tp = ThermalPair::new(nbar, nbar)?;
    p_re_thermal(&tp, &TruncationPolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_is_green() {
        let report = run(VerifyLevel::Fast, 0, &Tolerances::default()).unwrap();
        for check in &report.checks {
            assert!(
                check.passed,
                "{} failed: residual {:e} > {:e} ({})",
                check.name, check.worst_residual, check.tolerance, check.detail
            );
        }
        assert!(report.all_passed());
    }

    #[test]
    fn tampered_tolerances_fail() {
        let tampered = Tolerances::default().scaled(1e-6);
        let report = run(VerifyLevel::Fast, 0, &tampered).unwrap();
        assert!(!report.all_passed(), "a million-fold tightened suite must go red");
    }

    #[test]
    fn equilibrium_series_stays_null_at_large_occupancy() {
        assert!(equilibrium_re_residual(100.0).unwrap() < 1e-9);
    }
}
