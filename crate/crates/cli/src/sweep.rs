//! Sweep specifications and the row tables they produce.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use wiretap_core::capacity::{
    capacity_under_policy, limit_bounds, limit_via_ratio_integral, secrecy_limit_closed_form,
};
use wiretap_core::montecarlo::{default_oracle_grid, run_oracle_suite, OracleReport};
use wiretap_core::power::solve_lagrange_multiplier;
use wiretap_core::{ChannelParams, PowerConstraint, QuadratureSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    CapacityVsPower,
    LimitVsCgr,
    NormalizedLossVsCgr,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Base {
    Nats,
    Bits,
}

impl Base {
    /// Converts a capacity in nats to this base.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Base::Nats => nats,
            Base::Bits => nats / LN_2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Base::Nats => "nats",
            Base::Bits => "bits",
        }
    }
}

/// Fully resolved sweep: every grid is explicit and every default applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SweepSpec {
    pub mode: Mode,
    pub pbar_db: Vec<f64>,
    pub cgr: Vec<f64>,
    pub pcc: Vec<f64>,
    pub format: Format,
    pub base: Base,
    pub seed: u64,
    pub samples: usize,
    pub quadrature: QuadratureSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(r) = self.pcc.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(CliError::Usage(format!("pcc values must lie in [0, 1], got {r}")));
        }
        if let Some(k) = self.cgr.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(CliError::Usage(format!("cgr values must be positive, got {k}")));
        }
        let needs_power = self.mode == Mode::CapacityVsPower;
        if (needs_power && self.pbar_db.is_empty()) || self.cgr.is_empty() || self.pcc.is_empty() {
            return Err(CliError::Usage(format!("empty grid for mode {:?}", self.mode)));
        }
        if matches!(self.mode, Mode::CapacityVsPower | Mode::Oracle) && self.pcc.iter().any(|r| *r >= 1.0) {
            return Err(CliError::Usage(
                "this mode needs pcc < 1 (pcc = 1 is only defined for the limit)".into(),
            ));
        }
        self.quadrature.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Runs the sweep on the current rayon pool. Rows come back in grid
/// order: cgr outermost, then pcc, then power.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table, CliError> {
    spec.validate()?;
    match spec.mode {
        Mode::CapacityVsPower => Ok(capacity_vs_power(spec)),
        Mode::LimitVsCgr => Ok(limit_vs_cgr(spec)),
        Mode::NormalizedLossVsCgr => Ok(normalized_loss(spec)),
        Mode::Oracle => oracle_table(spec),
    }
}

fn pairs(spec: &SweepSpec) -> Vec<(f64, f64)> {
    spec.cgr
        .iter()
        .flat_map(|&k| spec.pcc.iter().map(move |&r| (k, r)))
        .collect()
}

fn error_row(width: usize, prefix: Vec<Cell>, err: String) -> Row {
    let mut cells = prefix;
    cells.resize(width, Cell::Num(f64::NAN));
    Row {
        cells,
        error: Some(err),
    }
}

fn capacity_vs_power(spec: &SweepSpec) -> Table {
    let b = spec.base.suffix();
    let columns: Vec<String> = vec![
        "p_bar_db".into(),
        "kappa".into(),
        "rho".into(),
        format!("c_s_{b}"),
        "c_s_err".into(),
        format!("c_lim_{b}"),
        "lambda_star".into(),
        "mean_power".into(),
    ];
    let width = columns.len();
    let points: Vec<(f64, f64, f64)> = pairs(spec)
        .into_iter()
        .flat_map(|(k, r)| spec.pbar_db.iter().map(move |&p| (k, r, p)))
        .collect();
    let base = spec.base;
    let rows = points
        .par_iter()
        .map(|&(kappa, rho, p_db)| {
            let prefix = vec![Cell::Num(p_db), Cell::Num(kappa), Cell::Num(rho)];
            let computed = (|| -> wiretap_core::Result<Vec<Cell>> {
                let params = ChannelParams::from_cgr(kappa, rho)?;
                let constraint = PowerConstraint::from_db(p_db)?;
                let policy = solve_lagrange_multiplier(&params, &constraint, &spec.quadrature)?;
                let cap = capacity_under_policy(&policy, &spec.quadrature)?;
                let lim = secrecy_limit_closed_form(&params)?;
                Ok(vec![
                    Cell::Num(base.convert(cap.value)),
                    Cell::Num(base.convert(cap.error)),
                    Cell::Num(base.convert(lim.value)),
                    Cell::Num(policy.lambda),
                    Cell::Num(policy.achieved_mean_power),
                ])
            })();
            match computed {
                Ok(rest) => Row {
                    cells: prefix.into_iter().chain(rest).collect(),
                    error: None,
                },
                Err(e) => error_row(width, prefix, e.to_string()),
            }
        })
        .collect();
    Table { columns, rows }
}

fn limit_vs_cgr(spec: &SweepSpec) -> Table {
    let b = spec.base.suffix();
    let columns: Vec<String> = vec![
        "kappa_db".into(),
        "kappa".into(),
        "rho".into(),
        format!("c_lim_{b}"),
        format!("lower_{b}"),
        format!("upper_{b}"),
    ];
    let width = columns.len();
    let base = spec.base;
    let rows = pairs(spec)
        .par_iter()
        .map(|&(kappa, rho)| {
            let prefix = vec![Cell::Num(db(kappa)), Cell::Num(kappa), Cell::Num(rho)];
            let computed = (|| -> wiretap_core::Result<Vec<Cell>> {
                let params = ChannelParams::from_cgr(kappa, rho)?;
                let lim = secrecy_limit_closed_form(&params)?;
                let bounds = limit_bounds(&params)?;
                Ok(vec![
                    Cell::Num(base.convert(lim.value)),
                    Cell::Num(base.convert(bounds.lower)),
                    Cell::Num(base.convert(bounds.upper)),
                ])
            })();
            match computed {
                Ok(rest) => Row {
                    cells: prefix.into_iter().chain(rest).collect(),
                    error: None,
                },
                Err(e) => error_row(width, prefix, e.to_string()),
            }
        })
        .collect();
    Table { columns, rows }
}

fn normalized_loss(spec: &SweepSpec) -> Table {
    let columns: Vec<String> = ["kappa_db", "kappa", "rho", "normalized_limit", "one_minus_rho"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let width = columns.len();
    let rows = pairs(spec)
        .par_iter()
        .map(|&(kappa, rho)| {
            let prefix = vec![Cell::Num(db(kappa)), Cell::Num(kappa), Cell::Num(rho)];
            let computed = (|| -> wiretap_core::Result<Vec<Cell>> {
                let lim = secrecy_limit_closed_form(&ChannelParams::from_cgr(kappa, rho)?)?.value;
                let independent = secrecy_limit_closed_form(&ChannelParams::from_cgr(kappa, 0.0)?)?.value;
                Ok(vec![Cell::Num(lim / independent), Cell::Num(1.0 - rho)])
            })();
            match computed {
                Ok(rest) => Row {
                    cells: prefix.into_iter().chain(rest).collect(),
                    error: None,
                },
                Err(e) => error_row(width, prefix, e.to_string()),
            }
        })
        .collect();
    Table { columns, rows }
}

pub fn oracle_columns() -> Vec<String> {
    [
        "grid_index",
        "target",
        "kappa",
        "rho",
        "analytic",
        "monte_carlo",
        "standard_error",
        "z_score",
        "samples",
        "seed",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

pub fn oracle_row(r: &OracleReport) -> Row {
    Row {
        cells: vec![
            Cell::Int(r.grid_index as u64),
            Cell::Text(r.target.as_str().to_string()),
            Cell::Num(r.params.cgr()),
            Cell::Num(r.params.pcc),
            Cell::Num(r.analytic_value),
            Cell::Num(r.mc_value),
            Cell::Num(r.standard_error),
            Cell::Num(r.z_score),
            Cell::Int(r.samples as u64),
            Cell::Int(r.seed),
        ],
        error: None,
    }
}

fn oracle_table(spec: &SweepSpec) -> Result<Table, CliError> {
    let grid: Vec<ChannelParams> = pairs(spec)
        .into_iter()
        .map(|(k, r)| ChannelParams::from_cgr(k, r))
        .collect::<wiretap_core::Result<_>>()?;
    let reports = run_oracle_suite(&grid, spec.samples, spec.seed, &spec.quadrature)?;
    Ok(Table {
        columns: oracle_columns(),
        rows: reports.iter().map(oracle_row).collect(),
    })
}

/// The grid [`default_oracle_grid`] uses, split into its axes.
pub fn default_oracle_axes() -> (Vec<f64>, Vec<f64>) {
    let grid = default_oracle_grid();
    let mut cgr: Vec<f64> = grid.iter().map(|p| p.cgr()).collect();
    let mut pcc: Vec<f64> = grid.iter().map(|p| p.pcc).collect();
    cgr.dedup();
    pcc.sort_by(f64::total_cmp);
    pcc.dedup();
    (cgr, pcc)
}

/// One-point summary: limits and bounds always, plus the finite-power
/// capacity and its multiplier when a budget is given.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub version: &'static str,
    pub base: Base,
    pub kappa: f64,
    pub rho: f64,
    pub limit: f64,
    pub limit_ratio_integral: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    pub p_bar_db: Option<f64>,
    pub c_s: Option<f64>,
    pub c_s_err: Option<f64>,
    pub lambda_star: Option<f64>,
    pub mean_power: Option<f64>,
}

pub fn single_point(
    params: &ChannelParams,
    p_bar_db: Option<f64>,
    base: Base,
    spec: &QuadratureSpec,
) -> Result<PointRecord, CliError> {
    let limit = secrecy_limit_closed_form(params)?.value;
    let bounds = limit_bounds(params)?;
    let ratio = if params.pcc < 1.0 {
        Some(base.convert(limit_via_ratio_integral(params, spec)?.value))
    } else {
        None
    };
    let mut record = PointRecord {
        version: env!("CARGO_PKG_VERSION"),
        base,
        kappa: params.cgr(),
        rho: params.pcc,
        limit: base.convert(limit),
        limit_ratio_integral: ratio,
        lower: base.convert(bounds.lower),
        upper: base.convert(bounds.upper),
        p_bar_db,
        c_s: None,
        c_s_err: None,
        lambda_star: None,
        mean_power: None,
    };
    if let Some(p_db) = p_bar_db {
        let constraint = PowerConstraint::from_db(p_db)?;
        let policy = solve_lagrange_multiplier(params, &constraint, spec)?;
        let cap = capacity_under_policy(&policy, spec)?;
        record.c_s = Some(base.convert(cap.value));
        record.c_s_err = Some(base.convert(cap.error));
        record.lambda_star = Some(policy.lambda);
        record.mean_power = Some(policy.achieved_mean_power);
    }
    Ok(record)
}
