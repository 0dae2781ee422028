//! Command-line front end: JSON run config in, CSV or JSON out.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{limit_distribution, LimitDistribution, MomentMethod};
use crate::coin::Family;
use crate::walk::{distribution, empirical_moment, simulate, PositionDistribution};

pub mod config;
pub mod output;

pub use config::{RunConfig, ValidRun};
use output::{csv, write_atomic};

const DEFAULT_GRID: usize = 201;
const DEFAULT_M_MAX: usize = 20;
const DEFAULT_ORDERS: [u32; 2] = [1, 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "triwalk", version, about = "Three-state quantum walks: simulation and weak-limit asymptotics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; overrides the config's `output`, stdout if neither is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact position distribution after `steps` steps (CSV m,probability).
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Group-velocity density on an open grid (CSV v,w).
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        grid: Option<usize>,
        /// Emit the finite-time prediction w(m/t)/t + p_inf(m) instead.
        #[arg(long)]
        rescale: Option<usize>,
    },
    /// Localization profile p_inf(m) (CSV m,p_inf).
    Localization {
        #[command(flatten)]
        common: Common,
        #[arg(long = "m-max")]
        m_max: Option<usize>,
    },
    /// Asymptotic versus finite-time moments of m/t (JSON).
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<u32>>,
    },
    /// Normalization and interior agreement of simulation and asymptotics (JSON).
    Compare {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate { common }
            | Command::Density { common, .. }
            | Command::Localization { common, .. }
            | Command::Moments { common, .. }
            | Command::Compare { common } => common,
        }
    }
}

/// Result of one invocation: the rendered output and any warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub contents: String,
    pub destination: Option<PathBuf>,
    pub warnings: Vec<String>,
}

/// Validates, computes and renders; nothing is written.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let common = command.common();
    let run = RunConfig::load(&common.config)?.validate()?;
    let contents = match command {
        Command::Simulate { .. } => cmd_simulate(&run)?,
        Command::Density { grid, rescale, .. } => {
            let grid = grid.or(run.config.grid_points).unwrap_or(DEFAULT_GRID);
            config::check_grid(grid)?;
            if *rescale == Some(0) {
                return Err(CliError::Validation("--rescale needs t >= 1".into()));
            }
            cmd_density(&run, grid, *rescale)?
        }
        Command::Localization { m_max, .. } => {
            cmd_localization(&run, m_max.or(run.config.m_max).unwrap_or(DEFAULT_M_MAX))?
        }
        Command::Moments { orders, .. } => {
            let orders = orders
                .clone()
                .or_else(|| run.config.orders.clone())
                .unwrap_or_else(|| DEFAULT_ORDERS.to_vec());
            config::check_orders(&orders)?;
            cmd_moments(&run, &orders)?
        }
        Command::Compare { .. } => cmd_compare(&run)?,
    };
    Ok(Outcome {
        contents,
        destination: common.out.clone().or_else(|| run.config.output.clone()),
        warnings: run.warnings,
    })
}

/// Runs `command`, writing its output, and returns the process exit code.
pub fn run(command: &Command) -> i32 {
    match execute(command).and_then(|o| {
        for w in &o.warnings {
            eprintln!("warning: {w}");
        }
        match &o.destination {
            Some(path) => write_atomic(path, &o.contents),
            None => {
                print!("{}", o.contents);
                Ok(())
            }
        }
    }) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn simulated(run: &ValidRun) -> Result<PositionDistribution, CliError> {
    Ok(distribution(&simulate(&run.spec, &run.state, run.config.steps)?))
}

pub fn cmd_simulate(run: &ValidRun) -> Result<String, CliError> {
    let d = simulated(run)?;
    Ok(csv("m,probability", d.sites().map(|(m, p)| (m.to_string(), p)), None))
}

pub fn cmd_density(run: &ValidRun, grid: usize, rescale: Option<usize>) -> Result<String, CliError> {
    let limit = limit_distribution(&run.spec, &run.state)?;
    if let Some(t) = rescale {
        let ti = t as i64;
        let rows = (-ti..=ti)
            .map(|m| Ok((m.to_string(), limit.site_prediction(m, t)?)))
            .collect::<crate::Result<Vec<_>>>()?;
        return Ok(csv("m,prediction", rows, None));
    }
    let vp = limit.peak_velocity();
    let h = 2.0 * vp / (grid + 1) as f64;
    let rows = (1..=grid)
        .map(|i| {
            let v = -vp + i as f64 * h;
            Ok((output::format_number(v), limit.density(v)?))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(csv("v,w", rows, None))
}

pub fn cmd_localization(run: &ValidRun, m_max: usize) -> Result<String, CliError> {
    let limit = limit_distribution(&run.spec, &run.state)?;
    let mm = m_max as i64;
    let rows = (-mm..=mm).map(|m| (m.to_string(), limit.localization(m)));
    let footer = format!("total={}", output::format_number(limit.localization_total()));
    Ok(csv("m,p_inf", rows, Some(footer)))
}

#[derive(Debug, Serialize)]
struct MomentRow {
    order: u32,
    asymptotic: f64,
    method: MomentMethod,
    empirical: f64,
    gap: f64,
}

#[derive(Debug, Serialize)]
struct MomentsReport {
    family: Family,
    parameter: f64,
    steps: usize,
    moments: Vec<MomentRow>,
}

pub fn cmd_moments(run: &ValidRun, orders: &[u32]) -> Result<String, CliError> {
    if run.config.steps == 0 {
        return Err(CliError::Validation("field `steps`: moments need at least one step".into()));
    }
    let limit = limit_distribution(&run.spec, &run.state)?;
    let d = simulated(run)?;
    let moments = orders
        .iter()
        .map(|&n| {
            let a = limit.moment(n)?;
            let e = empirical_moment(&d, n)?;
            Ok(MomentRow {
                order: n,
                asymptotic: a.value,
                method: a.method,
                empirical: e,
                gap: (a.value - e).abs(),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let report = MomentsReport {
        family: run.spec.family(),
        parameter: run.spec.parameter(),
        steps: run.config.steps,
        moments,
    };
    Ok(to_json(&report))
}

#[derive(Debug, Serialize)]
struct CompareReport {
    family: Family,
    parameter: f64,
    steps: usize,
    peak_velocity: f64,
    continuous_weight: f64,
    continuous_weight_quadrature: f64,
    localization_total: f64,
    normalization_deviation: f64,
    normalization_deviation_quadrature: f64,
    interior_sites: usize,
    interior_sup_gap: f64,
}

/// Sup over 5 < |m| ≤ 0.9·v_peak·t of |p(m, t) − w(m/t)/t − p∞(m)|, and the
/// number of sites it ranges over.
pub fn interior_gap(limit: &dyn LimitDistribution, d: &PositionDistribution) -> crate::Result<(f64, usize)> {
    let t = d.steps();
    let bound = (0.9 * limit.peak_velocity() * t as f64).floor() as i64;
    let mut gap = 0.0f64;
    let mut count = 0;
    for m in (-bound..=bound).filter(|m| m.abs() > 5) {
        gap = gap.max((d.probability(m) - limit.site_prediction(m, t)?).abs());
        count += 1;
    }
    Ok((gap, count))
}

pub fn cmd_compare(run: &ValidRun) -> Result<String, CliError> {
    if run.config.steps == 0 {
        return Err(CliError::Validation("field `steps`: compare needs at least one step".into()));
    }
    let limit = limit_distribution(&run.spec, &run.state)?;
    let (d, quad) = std::thread::scope(|s| {
        let sim = s.spawn(|| simulated(run));
        let quad = limit.continuous_weight_by_quadrature();
        (sim.join().expect("simulation thread panicked"), quad)
    });
    let (d, quad) = (d?, quad?);
    let (gap, sites) = interior_gap(limit.as_ref(), &d)?;
    let cw = limit.continuous_weight();
    let lt = limit.localization_total();
    let report = CompareReport {
        family: run.spec.family(),
        parameter: run.spec.parameter(),
        steps: run.config.steps,
        peak_velocity: limit.peak_velocity(),
        continuous_weight: cw,
        continuous_weight_quadrature: quad,
        localization_total: lt,
        normalization_deviation: (cw + lt - 1.0).abs(),
        normalization_deviation_quadrature: (quad + lt - 1.0).abs(),
        interior_sites: sites,
        interior_sup_gap: gap,
    };
    Ok(to_json(&report))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
