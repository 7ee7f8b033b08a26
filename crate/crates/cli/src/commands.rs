//! Subcommands and their shared configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cpmaps::analysis::{bloch_image, cp_report, CpReport, DEFAULT_BLOCH_SAMPLES};
use cpmaps::checks::{reproduce, sweep, verify, VERIFY_TIMES};
use cpmaps::io::{load_scenario, to_json_string, write_bloch_csv, write_sweep_csv};
use cpmaps::linalg::{ComplexMatrix, DEFAULT_TOL};
use cpmaps::scenarios::{MapKind, Scenario};

#[derive(Debug, Parser)]
#[command(name = "cpmaps", version, about = "Completely positive maps from correlated initial states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the TP, CP, POVM, GHJW and oracle checks and print a JSON report.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Single time (2ωt) to check instead of the default set.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the Choi matrix and CP report of one map at one time.
    Choi {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        map: Option<MapKind>,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare phi1 and phi2 along a time grid and write a CSV.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Image of sampled Bloch vectors under one qubit map.
    Bloch {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        map: Option<MapKind>,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_BLOCH_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write closed-form and numerical matrices of a named case side by side.
    Reproduce {
        #[arg(long)]
        case: String,
        /// Output directory.
        #[arg(long, default_value = "reproduction")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Built-in case: cesar, jpa, figure, discordant-uniform.
    #[arg(long)]
    case: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    /// A mathematical check did not pass.
    Check(String),
    /// Malformed input or configuration.
    Input(String),
}

impl From<cpmaps::Error> for Failure {
    fn from(e: cpmaps::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl Source {
    fn load(&self) -> Result<Scenario, Failure> {
        match (&self.scenario, &self.case) {
            (Some(path), None) => Ok(load_scenario(path)?),
            (None, Some(name)) => Ok(Scenario::named(name)?),
            _ => Err(Failure::Input("give exactly one of --scenario and --case".into())),
        }
    }
}

fn check_tol(tol: f64) -> Outcome {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("tolerance must be positive, got {tol}")))
    }
}

fn check_time(t: f64) -> Outcome {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!("time must be finite, got {t}")))
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ChoiOutput<'a> {
    scenario: &'a str,
    map: String,
    t: f64,
    choi: &'a ComplexMatrix,
    cp_report: CpReport,
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { source, t, tol, out } => {
            check_tol(tol)?;
            let s = source.load()?;
            let times = match t {
                Some(t) => {
                    check_time(t)?;
                    vec![t]
                }
                None => VERIFY_TIMES.to_vec(),
            };
            let report = verify(&s, tol, &times)?;
            let mut text = to_json_string(&report)?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())?;
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                eprintln!("{}: {} checks passed", report.scenario, report.checks.len());
                Ok(())
            } else {
                Err(Failure::Check(failed.join(", ")))
            }
        }
        Command::Choi { source, map, t, tol, out } => {
            check_tol(tol)?;
            check_time(t)?;
            let s = source.load()?;
            let map = map.unwrap_or_else(|| s.default_map());
            let rep = s.rep(map, t)?;
            let report = cp_report(&rep, tol)?;
            let is_cptp = report.is_cp && report.tp_defect <= tol;
            let min_eig = report.min_choi_eig;
            let mut text = to_json_string(&ChoiOutput {
                scenario: &s.name,
                map: map.to_string(),
                t,
                choi: rep.choi(),
                cp_report: report,
            })?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())?;
            if is_cptp {
                Ok(())
            } else {
                Err(Failure::Check(format!("{map} at t={t} is not CPTP (min Choi eigenvalue {min_eig:e})")))
            }
        }
        Command::Sweep {
            source,
            t_max,
            steps,
            tol,
            out,
        } => {
            check_tol(tol)?;
            let s = source.load()?;
            let rows = sweep(&s, t_max, steps)?;
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &rows)?;
            emit(out.as_deref(), &buf)?;
            let bad: Vec<_> = rows
                .iter()
                .filter(|r| {
                    r.min_choi_eig_phi1 < -tol
                        || r.min_choi_eig_phi2 < -tol
                        || r.tp_defect_phi1 > tol
                        || r.tp_defect_phi2 > tol
                        || r.dist_domain > tol
                })
                .map(|r| r.t)
                .collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(format!("{} grid points out of tolerance, first at t={}", bad.len(), bad[0])))
            }
        }
        Command::Bloch {
            source,
            map,
            t,
            samples,
            out,
        } => {
            check_time(t)?;
            if samples == 0 {
                return Err(Failure::Input("samples must be positive".into()));
            }
            let s = source.load()?;
            let map = map.unwrap_or_else(|| s.default_map());
            let image = bloch_image(&s.rep(map, t)?, samples)?;
            let mut buf = Vec::new();
            write_bloch_csv(&mut buf, &image)?;
            emit(out.as_deref(), &buf)
        }
        Command::Reproduce { case, out } => {
            let r = reproduce(&case)?;
            fs::create_dir_all(&out)?;
            for (name, contents) in &r.files {
                fs::write(out.join(name), contents)?;
            }
            let failed: Vec<_> = r.report.entries.iter().filter(|e| !e.pass).collect();
            if failed.is_empty() {
                eprintln!("{case}: {} comparisons within tolerance, written to {}", r.report.entries.len(), out.display());
                Ok(())
            } else {
                let worst = failed.iter().map(|e| e.max_abs_diff).fold(0.0, f64::max);
                Err(Failure::Check(format!("{} comparisons exceed tolerance (worst {worst:e})", failed.len())))
            }
        }
    }
}
