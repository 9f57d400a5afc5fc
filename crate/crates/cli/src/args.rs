//! Command-line surface and its resolution into a [`SweepSpec`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use wiretap_core::QuadratureSpec;

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::grid::{parse_grid, GridValue};
use crate::sweep::{default_oracle_axes, Base, Format, Mode, SweepSpec};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ORACLE_SAMPLES: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "wiretap",
    version,
    about = "Secrecy capacity of correlated Rayleigh wiretap channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a parameter grid and emit one row per point.
    Sweep(SweepArgs),
    /// Evaluate a single channel and emit a JSON record.
    Point(PointArgs),
    /// Run the Monte Carlo cross-checks over a grid.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Average power budgets in dB: `a,b,c` or `start:step:stop`.
    #[arg(long, allow_hyphen_values = true)]
    pub pbar_db: Option<String>,
    /// Channel gain ratios (linear).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "cgr_db")]
    pub cgr: Option<String>,
    /// Channel gain ratios in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub cgr_db: Option<String>,
    /// Power correlation coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub pcc: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub base: Option<Base>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all available cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON config; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file, or `-`/`stdout`.
    #[arg(long)]
    pub out: Option<String>,
    /// Monte Carlo samples per point (oracle mode).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Settings that shape a run but are not part of the computed result.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub workers: Option<usize>,
    pub out: Option<String>,
}

fn flag_grid(flag: &Option<String>) -> Result<Option<Vec<f64>>, CliError> {
    flag.as_deref().map(parse_grid).transpose()
}

fn file_grid(value: &Option<GridValue>) -> Result<Option<Vec<f64>>, CliError> {
    value.as_ref().map(GridValue::resolve).transpose()
}

fn from_db(values: Vec<f64>) -> Vec<f64> {
    values.into_iter().map(|d| 10f64.powf(d / 10.0)).collect()
}

/// Linear CGR grid from flags, then config, else `None`.
fn resolve_cgr(grid: &GridArgs, file: &ConfigFile) -> Result<Option<Vec<f64>>, CliError> {
    if let Some(v) = flag_grid(&grid.cgr)? {
        return Ok(Some(v));
    }
    if let Some(v) = flag_grid(&grid.cgr_db)? {
        return Ok(Some(from_db(v)));
    }
    match (file_grid(&file.cgr)?, file_grid(&file.cgr_db)?) {
        (Some(_), Some(_)) => Err(CliError::Usage("config sets both cgr and cgr-db".into())),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(v)) => Ok(Some(from_db(v))),
        (None, None) => Ok(None),
    }
}

fn load_config(common: &CommonArgs) -> Result<ConfigFile, CliError> {
    match &common.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

fn quadrature(common: &CommonArgs, file: &ConfigFile) -> Result<QuadratureSpec, CliError> {
    let mut q = QuadratureSpec::default();
    if let Some(v) = common.rel_tol.or(file.rel_tol) {
        q.rel_tol = v;
    }
    if let Some(v) = common.abs_tol.or(file.abs_tol) {
        q.abs_tol = v;
    }
    if let Some(v) = common.max_subdivisions.or(file.max_subdivisions) {
        q.max_subdivisions = v;
    }
    q.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(q)
}

fn settings(common: &CommonArgs, file: &ConfigFile) -> Result<RunSettings, CliError> {
    let workers = common.workers.or(file.workers);
    if workers == Some(0) {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    Ok(RunSettings {
        workers,
        out: common.out.clone().or_else(|| file.out.clone()),
    })
}

/// Merges flags, config file and per-mode defaults.
pub fn resolve_sweep(
    mode_flag: Option<Mode>,
    grid: &GridArgs,
    common: &CommonArgs,
) -> Result<(SweepSpec, RunSettings), CliError> {
    let file = load_config(common)?;
    let mode = mode_flag.or(file.mode).unwrap_or(Mode::CapacityVsPower);

    let pbar_db = match flag_grid(&grid.pbar_db)? {
        Some(v) => Some(v),
        None => file_grid(&file.pbar_db)?,
    };
    let pcc = match flag_grid(&grid.pcc)? {
        Some(v) => Some(v),
        None => file_grid(&file.pcc)?,
    };
    let cgr = resolve_cgr(grid, &file)?;

    let (default_pbar, default_cgr, default_pcc) = match mode {
        Mode::CapacityVsPower => (parse_grid("-10:2:50")?, vec![1.0, 0.5], vec![0.0, 0.5, 0.9]),
        Mode::LimitVsCgr | Mode::NormalizedLossVsCgr => {
            (Vec::new(), from_db(parse_grid("-30:1:30")?), vec![0.0, 0.5, 0.9, 0.99])
        }
        Mode::Oracle => {
            let (c, p) = default_oracle_axes();
            (Vec::new(), c, p)
        }
    };

    let spec = SweepSpec {
        mode,
        pbar_db: if mode == Mode::CapacityVsPower {
            pbar_db.unwrap_or(default_pbar)
        } else {
            Vec::new()
        },
        cgr: cgr.unwrap_or(default_cgr),
        pcc: pcc.unwrap_or(default_pcc),
        format: common.format.or(file.format).unwrap_or(Format::Csv),
        base: common.base.or(file.base).unwrap_or(Base::Nats),
        seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        samples: common.samples.or(file.samples).unwrap_or(DEFAULT_ORACLE_SAMPLES),
        quadrature: quadrature(common, &file)?,
    };
    spec.validate()?;
    Ok((spec, settings(common, &file)?))
}

/// A single point: one CGR, one PCC, at most one budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PointQuery {
    pub kappa: f64,
    pub rho: f64,
    pub p_bar_db: Option<f64>,
    pub base: Base,
    pub quadrature: QuadratureSpec,
}

fn single(name: &str, values: Option<Vec<f64>>) -> Result<Option<f64>, CliError> {
    match values.as_deref() {
        None => Ok(None),
        Some([x]) => Ok(Some(*x)),
        Some(v) => Err(CliError::Usage(format!(
            "point needs exactly one {name}, got {}",
            v.len()
        ))),
    }
}

pub fn resolve_point(args: &PointArgs) -> Result<(PointQuery, RunSettings), CliError> {
    let file = load_config(&args.common)?;
    let kappa = single("cgr", resolve_cgr(&args.grid, &file)?)?
        .ok_or_else(|| CliError::Usage("point needs --cgr or --cgr-db".into()))?;
    let pcc = match flag_grid(&args.grid.pcc)? {
        Some(v) => Some(v),
        None => file_grid(&file.pcc)?,
    };
    let rho = single("pcc", pcc)?.unwrap_or(0.0);
    let pbar = match flag_grid(&args.grid.pbar_db)? {
        Some(v) => Some(v),
        None => file_grid(&file.pbar_db)?,
    };
    let query = PointQuery {
        kappa,
        rho,
        p_bar_db: single("pbar-db", pbar)?,
        base: args.common.base.or(file.base).unwrap_or(Base::Nats),
        quadrature: quadrature(&args.common, &file)?,
    };
    if !(0.0..=1.0).contains(&query.rho) {
        return Err(CliError::Usage(format!("pcc must lie in [0, 1], got {}", query.rho)));
    }
    if query.p_bar_db.is_some() && query.rho >= 1.0 {
        return Err(CliError::Usage("a finite budget needs pcc < 1".into()));
    }
    Ok((query, settings(&args.common, &file)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("wiretap").chain(args.iter().copied())).unwrap()
    }

    fn sweep_spec(args: &[&str]) -> Result<SweepSpec, CliError> {
        match parse(args).command {
            Command::Sweep(a) => resolve_sweep(a.mode, &a.grid, &a.common).map(|(s, _)| s),
            _ => unreachable!(),
        }
    }

    #[test]
    fn capacity_defaults() {
        let s = sweep_spec(&["sweep"]).unwrap();
        assert_eq!(s.mode, Mode::CapacityVsPower);
        assert_eq!(s.pbar_db.len(), 31);
        assert_eq!(s.pbar_db[0], -10.0);
        assert_eq!(s.cgr, vec![1.0, 0.5]);
        assert_eq!(s.pcc, vec![0.0, 0.5, 0.9]);
        assert_eq!(s.base, Base::Nats);
    }

    #[test]
    fn cgr_db_is_converted() {
        let s = sweep_spec(&["sweep", "--mode", "limit-vs-cgr", "--cgr-db", "-10,0,10", "--pcc", "0"]).unwrap();
        assert_eq!(s.cgr, vec![0.1, 1.0, 10.0]);
        assert!(s.pbar_db.is_empty());
    }

    #[test]
    fn cgr_and_cgr_db_conflict() {
        let r = Cli::try_parse_from(["wiretap", "sweep", "--cgr", "1", "--cgr-db", "0"]);
        assert!(r.is_err());
    }

    #[test]
    fn bad_pcc_is_usage_error() {
        let e = sweep_spec(&["sweep", "--mode", "limit-vs-cgr", "--pcc", "1.5"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = sweep_spec(&["sweep", "--pcc", "1"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(sweep_spec(&["sweep", "--mode", "limit-vs-cgr", "--pcc", "1"]).is_ok());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"mode": "limit-vs-cgr", "cgr": [2, 3], "pcc": "0:0.5:1", "seed": 9}"#,
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let s = sweep_spec(&["sweep", "--config", p, "--cgr-db", "0"]).unwrap();
        assert_eq!(s.mode, Mode::LimitVsCgr);
        assert_eq!(s.cgr, vec![1.0]);
        assert_eq!(s.pcc, vec![0.0, 0.5, 1.0]);
        assert_eq!(s.seed, 9);
        let s = sweep_spec(&[
            "sweep",
            "--config",
            p,
            "--seed",
            "4",
            "--mode",
            "normalized-loss-vs-cgr",
        ])
        .unwrap();
        assert_eq!(
            (s.seed, s.mode, s.cgr.clone()),
            (4, Mode::NormalizedLossVsCgr, vec![2.0, 3.0])
        );
    }

    #[test]
    fn point_requires_single_values() {
        let Command::Point(a) = parse(&["point", "--cgr", "1,2"]).command else {
            unreachable!()
        };
        assert!(resolve_point(&a).is_err());
        let Command::Point(a) = parse(&["point", "--cgr", "2", "--pcc", "1"]).command else {
            unreachable!()
        };
        let (q, _) = resolve_point(&a).unwrap();
        assert_eq!((q.kappa, q.rho, q.p_bar_db), (2.0, 1.0, None));
        let Command::Point(a) = parse(&["point"]).command else {
            unreachable!()
        };
        assert_eq!(resolve_point(&a).unwrap_err().exit_code(), 2);
    }
}
