//! Command-line front end for `wiretap-core`: parameter sweeps, single
//! point queries and Monte Carlo oracle runs, written as CSV or JSON.

pub mod args;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;
pub mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use wiretap_core::montecarlo::{SuiteVerdict, Z_AGREE, Z_FAIL};
use wiretap_core::ChannelParams;

use crate::args::{resolve_point, resolve_sweep, Cli, Command, RunSettings};
use crate::error::CliError;
use crate::sweep::{run_sweep, single_point, Format, Mode, SweepSpec, Table};

fn open_output(target: Option<&str>) -> Result<Box<dyn Write>, CliError> {
    match target {
        None | Some("-") | Some("stdout") => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(path) => Ok(Box::new(BufWriter::new(File::create(path)?))),
    }
}

fn with_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

fn emit_table(spec: &SweepSpec, table: &Table, settings: &RunSettings) -> Result<(), CliError> {
    let mut out = open_output(settings.out.as_deref())?;
    match spec.format {
        Format::Csv => output::write_csv(table, &mut out)?,
        Format::Json => output::write_json(spec, table, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn report_oracle_verdict(table: &Table) {
    let Some(z_col) = table.columns.iter().position(|c| c == "z_score") else {
        return;
    };
    let z: Vec<f64> = table
        .rows
        .iter()
        .filter_map(|r| match r.cells.get(z_col) {
            Some(sweep::Cell::Num(z)) => Some(z.abs()),
            _ => None,
        })
        .collect();
    let v = SuiteVerdict {
        reports: z.len(),
        within_agree: z.iter().filter(|&&z| z < Z_AGREE).count(),
        within_fail: z.iter().filter(|&&z| z < Z_FAIL).count(),
    };
    eprintln!(
        "oracle: {} reports, {} with |z| < {Z_AGREE}, {} with |z| < {Z_FAIL} -> {}",
        v.reports,
        v.within_agree,
        v.within_fail,
        if v.passed() { "PASS" } else { "FAIL" }
    );
}

/// Runs a parsed command line and returns the process exit code: 0 when
/// every row computed, 1 when any row failed numerically.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Sweep(a) => run_table(a.mode, &a.grid, &a.common),
        Command::Oracle(a) => {
            if let Some(path) = &a.common.config {
                // The oracle subcommand fixes the mode; reject configs that disagree.
                let file = config::ConfigFile::load(path)?;
                if file.mode.is_some_and(|m| m != Mode::Oracle) {
                    return Err(CliError::Usage(
                        "config mode conflicts with the oracle subcommand".into(),
                    ));
                }
            }
            run_table(Some(Mode::Oracle), &a.grid, &a.common)
        }
        Command::Point(a) => {
            let (q, settings) = resolve_point(&a)?;
            let params = ChannelParams::from_cgr(q.kappa, q.rho).map_err(|e| CliError::Usage(e.to_string()))?;
            let record = with_pool(settings.workers, || {
                single_point(&params, q.p_bar_db, q.base, &q.quadrature)
            })??;
            let mut out = open_output(settings.out.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &record)?;
            out.write_all(b"\n")?;
            out.flush()?;
            Ok(0)
        }
    }
}

fn run_table(mode: Option<Mode>, grid: &args::GridArgs, common: &args::CommonArgs) -> Result<i32, CliError> {
    let (spec, settings) = resolve_sweep(mode, grid, common)?;
    let table = with_pool(settings.workers, || run_sweep(&spec))??;
    emit_table(&spec, &table, &settings)?;
    if spec.mode == Mode::Oracle {
        report_oracle_verdict(&table);
    }
    Ok(if table.all_ok() { 0 } else { 1 })
}
