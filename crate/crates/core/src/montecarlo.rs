//! Brute-force oracle: sampled estimates of the quantities the analytic
//! and quadrature routes produce, reported with batch-means standard
//! errors and z-scores.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{monte_carlo_capacity, secrecy_limit_closed_form, SampledPower};
use crate::channel::{ratio_antiderivative, stream_rng, ChannelParams, ChannelSample, ChannelSampler};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::power::{solve_lagrange_multiplier, PowerConstraint};

pub const BATCHES: usize = 100;
pub const MIN_SUITE_SAMPLES: usize = 10_000;
/// |z| below this counts as agreement.
pub const Z_AGREE: f64 = 3.0;
/// |z| at or above this is a hard failure.
pub const Z_FAIL: f64 = 5.0;
/// Budget at which the power-constraint report solves for the multiplier.
pub const ORACLE_P_BAR: f64 = 10.0;

/// Streaming batch-means estimator over a known number of draws, split
/// into [`BATCHES`] contiguous batches of (nearly) equal size.
#[derive(Debug, Clone)]
pub struct BatchMeans {
    total: usize,
    seen: usize,
    sums: Vec<f64>,
    counts: Vec<usize>,
}

impl BatchMeans {
    pub fn new(total: usize) -> Self {
        let batches = BATCHES.min(total.max(1));
        BatchMeans {
            total: total.max(1),
            seen: 0,
            sums: vec![0.0; batches],
            counts: vec![0; batches],
        }
    }

    pub fn push(&mut self, x: f64) {
        let batch = (self.seen * self.sums.len() / self.total).min(self.sums.len() - 1);
        self.sums[batch] += x;
        self.counts[batch] += 1;
        self.seen += 1;
    }

    /// Overall mean and standard error of the mean.
    pub fn finish(&self) -> (f64, f64) {
        let n: usize = self.counts.iter().sum();
        if n == 0 {
            return (f64::NAN, f64::NAN);
        }
        let mean = self.sums.iter().sum::<f64>() / n as f64;
        let means: Vec<f64> = self
            .sums
            .iter()
            .zip(&self.counts)
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| s / c as f64)
            .collect();
        let b = means.len();
        if b < 2 {
            return (mean, f64::NAN);
        }
        let var = means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (b - 1) as f64;
        (mean, (var / b as f64).sqrt())
    }
}

/// Which quantity an [`OracleReport`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleTarget {
    /// `P(U > 1)` against `1/2 - F_U(1)`.
    RatioTail,
    /// High-SNR limit against the mean of `ln(h_m/h_e)` over `h_m > h_e`.
    SecrecyLimit,
    /// `E[P]` at the solved multiplier against the budget.
    MeanPower,
}

impl OracleTarget {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleTarget::RatioTail => "ratio-tail",
            OracleTarget::SecrecyLimit => "secrecy-limit",
            OracleTarget::MeanPower => "mean-power",
        }
    }

    const ALL: [OracleTarget; 3] = [
        OracleTarget::RatioTail,
        OracleTarget::SecrecyLimit,
        OracleTarget::MeanPower,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub grid_index: usize,
    pub target: OracleTarget,
    pub params: ChannelParams,
    pub analytic_value: f64,
    pub mc_value: f64,
    pub standard_error: f64,
    pub z_score: f64,
    pub samples: usize,
    pub seed: u64,
}

impl OracleReport {
    fn new(
        grid_index: usize,
        target: OracleTarget,
        params: ChannelParams,
        analytic_value: f64,
        (mc_value, standard_error): (f64, f64),
        samples: usize,
        seed: u64,
    ) -> Self {
        OracleReport {
            grid_index,
            target,
            params,
            analytic_value,
            mc_value,
            standard_error,
            z_score: (mc_value - analytic_value) / standard_error,
            samples,
            seed,
        }
    }

    pub fn agrees(&self) -> bool {
        self.z_score.abs() < Z_AGREE
    }
}

/// Default validation grid: CGR in {1/4, 1/2, 1, 2, 4, 10} by PCC in
/// {0, 0.2, 0.4, 0.6, 0.8, 0.95}.
pub fn default_oracle_grid() -> Vec<ChannelParams> {
    let mut grid = Vec::new();
    for &kappa in &[0.25, 0.5, 1.0, 2.0, 4.0, 10.0] {
        for &rho in &[0.0, 0.2, 0.4, 0.6, 0.8, 0.95] {
            grid.push(ChannelParams::from_cgr(kappa, rho).expect("static grid is valid"));
        }
    }
    grid
}

/// Stream index of one report; every (grid point, target) pair draws from
/// its own stream of the suite seed.
fn stream_id(grid_index: usize, target: OracleTarget) -> u64 {
    let offset = OracleTarget::ALL.iter().position(|t| *t == target).unwrap_or(0);
    (grid_index * OracleTarget::ALL.len() + offset) as u64
}

fn point_reports(
    grid_index: usize,
    params: &ChannelParams,
    samples: usize,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<Vec<OracleReport>> {
    let mut reports = Vec::with_capacity(3);

    let tail = 0.5 - ratio_antiderivative(params, 1.0)?;
    let mut acc = BatchMeans::new(samples);
    let sampler = ChannelSampler::new(params, seed, stream_id(grid_index, OracleTarget::RatioTail))?;
    for s in sampler.take(samples) {
        acc.push(if s.h_main > s.h_eve { 1.0 } else { 0.0 });
    }
    reports.push(OracleReport::new(
        grid_index,
        OracleTarget::RatioTail,
        *params,
        tail,
        acc.finish(),
        samples,
        seed,
    ));

    let limit = secrecy_limit_closed_form(params)?.value;
    let mut rng = stream_rng(seed, stream_id(grid_index, OracleTarget::SecrecyLimit));
    let mc = monte_carlo_capacity(params, SampledPower::Infinite, samples, &mut rng)?;
    reports.push(OracleReport::new(
        grid_index,
        OracleTarget::SecrecyLimit,
        *params,
        limit,
        (mc.value, mc.error),
        samples,
        seed,
    ));

    let constraint = PowerConstraint::new(ORACLE_P_BAR)?;
    let policy = solve_lagrange_multiplier(params, &constraint, spec)?;
    let mut acc = BatchMeans::new(samples);
    let sampler = ChannelSampler::new(params, seed, stream_id(grid_index, OracleTarget::MeanPower))?;
    for s in sampler.take(samples) {
        acc.push(policy.power(s.h_main, s.h_eve));
    }
    reports.push(OracleReport::new(
        grid_index,
        OracleTarget::MeanPower,
        *params,
        constraint.p_bar,
        acc.finish(),
        samples,
        seed,
    ));
    Ok(reports)
}

/// Runs every oracle check on every grid point. Points run in parallel on
/// the current rayon pool; the output is ordered by grid index and then
/// by target, and depends only on `(grid, samples, seed, spec)`.
pub fn run_oracle_suite(
    grid: &[ChannelParams],
    samples_per_point: usize,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<Vec<OracleReport>> {
    if samples_per_point < MIN_SUITE_SAMPLES {
        return Err(Error::domain(format!(
            "oracle suite needs at least {MIN_SUITE_SAMPLES} samples per point, got {samples_per_point}"
        )));
    }
    let per_point: Vec<Result<Vec<OracleReport>>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            point_reports(i, p, samples_per_point, seed, spec).map_err(|e| e.context(format!("grid point {i}")))
        })
        .collect();
    let mut out = Vec::with_capacity(grid.len() * 3);
    for r in per_point {
        out.extend(r?);
    }
    Ok(out)
}

/// Summary of a report set against the agreement thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteVerdict {
    pub reports: usize,
    pub within_agree: usize,
    pub within_fail: usize,
}

impl SuiteVerdict {
    pub fn from_reports(reports: &[OracleReport]) -> Self {
        SuiteVerdict {
            reports: reports.len(),
            within_agree: reports.iter().filter(|r| r.z_score.abs() < Z_AGREE).count(),
            within_fail: reports.iter().filter(|r| r.z_score.abs() < Z_FAIL).count(),
        }
    }

    /// At least 99% of reports below `Z_AGREE` and all below `Z_FAIL`.
    pub fn passed(&self) -> bool {
        self.within_fail == self.reports && self.within_agree * 100 >= self.reports * 99
    }
}

/// Sample Pearson correlation of the power gains.
pub fn empirical_power_correlation(samples: &[ChannelSample]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let n = samples.len() as f64;
    let mean_m = samples.iter().map(|s| s.h_main).sum::<f64>() / n;
    let mean_e = samples.iter().map(|s| s.h_eve).sum::<f64>() / n;
    let (mut cov, mut var_m, mut var_e) = (0.0, 0.0, 0.0);
    for s in samples {
        let dm = s.h_main - mean_m;
        let de = s.h_eve - mean_e;
        cov += dm * de;
        var_m += dm * dm;
        var_e += de * de;
    }
    if var_m == 0.0 || var_e == 0.0 {
        return Err(Error::Degenerate("zero variance in power gains".into()));
    }
    Ok((cov / (var_m * var_e).sqrt()).clamp(-1.0, 1.0))
}
