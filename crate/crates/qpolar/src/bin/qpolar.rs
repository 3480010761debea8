//! Thin command-line front end. All numerics live in the library; this
//! binary only parses arguments, moves bytes, and maps errors to exit codes
//! (0 ok, 1 computation/verification failure, 2 usage error).

use clap::{Parser, Subcommand, ValueEnum};
use qpolar::descriptor::StateDescriptor;
use qpolar::degrees::polarization_report;
use qpolar::state::TruncationPolicy;
use qpolar::sweep::{epsilon_grid, run_sweep, write_csv, SweepConfig, SweepFamily};
use qpolar::verify::{self, Tolerances, VerifyLevel};
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qpolar", version, about = "Degrees of polarization for two-mode Fock-diagonal states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all five degrees for one state given as a JSON descriptor.
    ///
    /// The descriptor is the positional argument, or stdin when omitted or
    /// given as "-". Examples: {"kind":"thermal","n1":1,"n2":2} |
    /// {"kind":"pats","n1":1,"M":2,"n2":1,"S":2} | {"kind":"fock","M":1,"S":0}
    /// | {"kind":"custom","xi":[0.5,0.5],"eta":[1]}.
    Degree {
        /// JSON state descriptor ("-" or omitted reads stdin).
        state: Option<String>,
        /// Tail mass allowed past the photon-number cutoff.
        #[arg(long, default_value_t = 1e-12)]
        tail_tol: f64,
        /// Hard ceiling on the single-mode photon-number support.
        #[arg(long, default_value_t = 4096)]
        n_max_cap: usize,
        /// Output format for the report.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sweep the occupancy imbalance eps = n1 - n2 and emit CSV rows.
    Sweep {
        /// State family to sweep.
        #[arg(long, value_enum)]
        family: Family,
        /// Fixed occupancy of mode V; mode H runs at n2 + eps.
        #[arg(long)]
        n2: f64,
        /// First grid point.
        #[arg(long, default_value_t = 0.0)]
        eps_min: f64,
        /// Last grid point (inclusive).
        #[arg(long)]
        eps_max: f64,
        /// Grid spacing.
        #[arg(long, default_value_t = 0.25)]
        eps_step: f64,
        /// Photons added to mode H (pats family).
        #[arg(long, short = 'm', default_value_t = 2)]
        added_h: u32,
        /// Photons added to mode V (pats family).
        #[arg(long, short = 's', default_value_t = 2)]
        added_v: u32,
        /// Output file (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        tail_tol: f64,
        #[arg(long, default_value_t = 4096)]
        n_max_cap: usize,
    },
    /// Run the oracle cross-check suite and exit nonzero on any breach.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        /// Seed offset for the random-spectrum batch.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplies every pass threshold; < 1 tightens the suite.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Thermal,
    Pats,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                qpolar::Error::Parse(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> qpolar::Result<ExitCode> {
    match cli.command {
        Command::Degree { state, tail_tol, n_max_cap, format } => {
            let text = match state.as_deref() {
                None | Some("-") => {
                    let mut buffer = String::new();
                    io::stdin()
                        .read_to_string(&mut buffer)
                        .map_err(|e| qpolar::Error::Parse(e.to_string()))?;
                    buffer
                }
                Some(text) => text.to_string(),
            };
            let policy = TruncationPolicy::new(tail_tol, n_max_cap)?;
            let descriptor = StateDescriptor::from_json(&text)?;
            let report = polarization_report(&descriptor.build(&policy)?)?;
            match format {
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report)
                            .expect("report serialization cannot fail")
                    );
                }
                Format::Csv => {
                    let cell = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
                    println!("P1,P2,P_HS,P_B,P_RE,n_max_used,tail_bound");
                    println!(
                        "{},{},{:.16e},{:.16e},{:.16e},{},{:.16e}",
                        cell(report.p1),
                        cell(report.p2),
                        report.p_hs,
                        report.p_bures,
                        report.p_re,
                        report.n_max_used,
                        report.tail_bound
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            family,
            n2,
            eps_min,
            eps_max,
            eps_step,
            added_h,
            added_v,
            output,
            tail_tol,
            n_max_cap,
        } => {
            let policy = TruncationPolicy::new(tail_tol, n_max_cap)?;
            let family = match family {
                Family::Thermal => SweepFamily::Thermal,
                Family::Pats => SweepFamily::Pats { added_h, added_v },
            };
            let config = SweepConfig::new(family, n2, epsilon_grid(eps_min, eps_max, eps_step)?, policy)?;
            let rows = run_sweep(&config)?;
            let io_error = |e: io::Error| qpolar::Error::Parse(format!("output: {e}"));
            match output {
                Some(path) => {
                    let file = File::create(&path).map_err(io_error)?;
                    write_csv(&rows, BufWriter::new(file)).map_err(io_error)?;
                }
                None => {
                    let stdout = io::stdout();
                    write_csv(&rows, stdout.lock()).map_err(io_error)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { level, seed, tolerance_scale } => {
            let level = match level {
                Level::Fast => VerifyLevel::Fast,
                Level::Full => VerifyLevel::Full,
            };
            let tolerances = Tolerances::default().scaled(tolerance_scale);
            let report = verify::run(level, seed, &tolerances)?;
            let mut out = io::stdout().lock();
            for check in &report.checks {
                writeln!(
                    out,
                    "{:<26} {}  worst residual {:9.3e} (tolerance {:9.3e})  {}",
                    check.name,
                    if check.passed { "PASS" } else { "FAIL" },
                    check.worst_residual,
                    check.tolerance,
                    check.detail
                )
                .map_err(|e| qpolar::Error::Parse(format!("output: {e}")))?;
            }
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_FAILURE))
            }
        }
    }
}
