//! Parameter sweeps over the occupancy imbalance `ε = n1 − n2`, producing
//! one row of degrees per grid point. This is the machinery behind the
//! `sweep` subcommand; the CLI only forwards to it.

use crate::degrees::PolarizationReport;
use crate::pats::{pats_report, PatsSpec, TwoModePats};
use crate::state::TruncationPolicy;
use crate::thermal::{thermal_report, ThermalPair};
use crate::{Error, Result};
use std::io::{self, Write};

/// The state family being swept. The mode-V parameters stay fixed while
/// `n1 = n2 + ε` runs over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    Thermal,
    /// Photon-added pair with `added_h` photons on mode H and `added_v` on
    /// mode V.
    Pats { added_h: u32, added_v: u32 },
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub n2: f64,
    pub epsilon_grid: Vec<f64>,
    pub policy: TruncationPolicy,
}

impl SweepConfig {
    pub fn new(
        family: SweepFamily,
        n2: f64,
        epsilon_grid: Vec<f64>,
        policy: TruncationPolicy,
    ) -> Result<Self> {
        if !(n2 >= 0.0) || !n2.is_finite() {
            return Err(Error::Domain(format!("fixed occupancy must be nonnegative, got {n2}")));
        }
        if epsilon_grid.is_empty() {
            return Err(Error::Domain("empty epsilon grid".into()));
        }
        if !epsilon_grid[0].is_finite() || epsilon_grid[0] < 0.0 {
            return Err(Error::Domain(format!(
                "epsilon grid must start at a nonnegative value, got {}",
                epsilon_grid[0]
            )));
        }
        for pair in epsilon_grid.windows(2) {
            if !(pair[1] > pair[0]) || !pair[1].is_finite() {
                return Err(Error::Domain(format!(
                    "epsilon grid must be strictly increasing, got {} after {}",
                    pair[1], pair[0]
                )));
            }
        }
        Ok(Self { family, n2, epsilon_grid, policy })
    }
}

/// Uniform grid `start, start + step, ...` up to `stop` inclusive (within
/// half a step). Each point is computed as `start + k * step`, so a grid is
/// reproducible from its endpoints alone.
pub fn epsilon_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("grid step must be positive, got {step}")));
    }
    if !(stop >= start) {
        return Err(Error::Domain(format!("empty grid: stop {stop} below start {start}")));
    }
    let count = ((stop - start) / step + 0.5).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub report: PolarizationReport,
}

/// Evaluates the sweep, one report per grid point.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config
        .epsilon_grid
        .iter()
        .map(|&epsilon| {
            let n1 = config.n2 + epsilon;
            let report = match config.family {
                SweepFamily::Thermal => {
                    thermal_report(&ThermalPair::new(n1, config.n2)?, &config.policy)?
                }
                SweepFamily::Pats { added_h, added_v } => {
                    let pair = TwoModePats::new(
                        PatsSpec::new(n1, added_h)?,
                        PatsSpec::new(config.n2, added_v)?,
                    );
                    pats_report(&pair, &config.policy)?
                }
            };
            Ok(SweepRow { epsilon, report })
        })
        .collect()
}

pub const CSV_HEADER: &str = "epsilon,P1,P2,P_HS,P_B,P_RE";

/// 17 significant digits: enough for the printed value to parse back to the
/// identical f64.
fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(full_precision).unwrap_or_default()
}

/// Writes `rows` as CSV. Undefined Stokes entries become empty cells.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut writer: W) -> io::Result<()> {
    writeln!(writer, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(
            writer,
            "{},{},{},{},{},{}",
            full_precision(row.epsilon),
            optional(row.report.p1),
            optional(row.report.p2),
            full_precision(row.report.p_hs),
            full_precision(row.report.p_bures),
            full_precision(row.report.p_re),
        )?;
    }
    Ok(())
}
