//! Optimal instantaneous power allocation under an average power budget.
//!
//! For a multiplier `lambda` the transmitter maximizes
//! `ln(1 + h_m P) - ln(1 + h_e P) - lambda P` per fading state. The
//! maximizer is positive only when `h_m - h_e > lambda`, and the budget is
//! met by tuning `lambda` until the average allocation equals `p_bar`.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, JointDensity};
use crate::error::{Error, Result};
use crate::numerics::{
    try_integrate_double, try_solve_monotone_root, DoubleLayout, Estimate, QuadratureSpec, Ridge, RootSpec,
};

/// Average transmit power budget. Noise variance is 1, so this is the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerConstraint {
    pub p_bar: f64,
}

impl PowerConstraint {
    pub fn new(p_bar: f64) -> Result<Self> {
        if !(p_bar > 0.0 && p_bar.is_finite()) {
            return Err(Error::domain(format!(
                "average power must be positive and finite, got {p_bar}"
            )));
        }
        Ok(PowerConstraint { p_bar })
    }

    pub fn from_db(p_bar_db: f64) -> Result<Self> {
        PowerConstraint::new(10f64.powf(p_bar_db / 10.0))
    }
}

/// Allocation rule that exhausts the budget for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPolicy {
    pub lambda: f64,
    pub params: ChannelParams,
    pub constraint: PowerConstraint,
    pub achieved_mean_power: f64,
}

impl PowerPolicy {
    pub fn power(&self, h_m: f64, h_e: f64) -> f64 {
        optimal_power_unchecked(self.lambda, h_m, h_e)
    }

    pub fn relative_budget_error(&self) -> f64 {
        (self.achieved_mean_power - self.constraint.p_bar).abs() / self.constraint.p_bar
    }
}

/// `P = 1/2 [sqrt(d^2 + 4d/lambda) - (1/h_m + 1/h_e)]^+` with
/// `d = 1/h_e - 1/h_m`, and `P = 0` whenever `h_m <= h_e`.
pub fn optimal_power(lambda: f64, h_m: f64, h_e: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    if !(h_m > 0.0 && h_m.is_finite() && h_e > 0.0 && h_e.is_finite()) {
        return Err(Error::domain(format!(
            "gains must be positive and finite, got ({h_m}, {h_e})"
        )));
    }
    Ok(optimal_power_unchecked(lambda, h_m, h_e))
}

/// Rationalized form
/// `P = 2 (h_m - h_e - lambda) / (lambda h_m h_e (sqrt(d^2 + 4d/lambda) + s))`,
/// which avoids the cancellation of the textbook form near the activation
/// boundary. `h_e = 0` takes the limit `1/lambda - 1/h_m`.
#[inline]
pub(crate) fn optimal_power_unchecked(lambda: f64, h_m: f64, h_e: f64) -> f64 {
    if h_m <= h_e {
        return 0.0;
    }
    let excess = h_m - h_e - lambda;
    if excess <= 0.0 {
        return 0.0;
    }
    if h_e == 0.0 {
        return (lambda.recip() - h_m.recip()).max(0.0);
    }
    let inv_m = h_m.recip();
    let inv_e = h_e.recip();
    let d = inv_e - inv_m;
    let root = (d * d + 4.0 * d / lambda).sqrt();
    2.0 * excess / (lambda * h_m * h_e * (root + inv_m + inv_e))
}

pub(crate) fn region_layout(params: &ChannelParams, offset: f64) -> DoubleLayout {
    DoubleLayout {
        region_only: true,
        inner_offset: offset,
        outer_scale: params.mean_gain_eve,
        inner_scale: params.mean_gain_main,
        ridge: (params.pcc > 0.0).then(|| Ridge {
            slope: params.cgr(),
            width_coef: 2.0 * (params.cgr() * params.mean_gain_main * (1.0 - params.pcc)).sqrt(),
        }),
    }
}

/// `E[P]` under the joint gain law for multiplier `lambda`.
pub fn mean_power(lambda: f64, params: &ChannelParams, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    let density = JointDensity::new(params)?;
    let layout = region_layout(params, lambda);
    try_integrate_double(
        |h_m, h_e| Ok(optimal_power_unchecked(lambda, h_m, h_e) * density.eval(h_m, h_e)),
        &layout,
        spec,
    )
    .map_err(|e| e.context(format!("mean power at lambda = {lambda}")))
}

const MAX_BRACKET_EXPANSIONS: usize = 60;
const SEARCH_REL_TOL: f64 = 1e-7;

/// Finds the multiplier whose allocation spends exactly `p_bar` on
/// average.
///
/// The search runs in `ln(lambda)` on a relaxed quadrature tolerance, then
/// polishes inside a narrow bracket at the caller's tolerance.
pub fn solve_lagrange_multiplier(
    params: &ChannelParams,
    constraint: &PowerConstraint,
    spec: &QuadratureSpec,
) -> Result<PowerPolicy> {
    spec.validate()?;
    let p_bar = constraint.p_bar;
    let relaxed = spec.with_tolerances(spec.rel_tol.max(SEARCH_REL_TOL), spec.abs_tol);
    let residual = |log_lambda: f64, qspec: &QuadratureSpec| -> Result<f64> {
        Ok(mean_power(log_lambda.exp(), params, qspec)?.value / p_bar - 1.0)
    };

    // Geometric bracket expansion from lambda = 1.
    let step = 4f64.ln();
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let first = residual(0.0, &relaxed)?;
    let mut bracketed = first == 0.0;
    for _ in 0..MAX_BRACKET_EXPANSIONS {
        if bracketed {
            break;
        }
        if first > 0.0 {
            // Too much power: raise lambda.
            lo = hi;
            hi += step;
            bracketed = residual(hi, &relaxed)? <= 0.0;
        } else {
            hi = lo;
            lo -= step;
            bracketed = residual(lo, &relaxed)? >= 0.0;
        }
    }
    if !bracketed {
        return Err(Error::Solver(format!(
            "no sign change of E[P] - p_bar after {MAX_BRACKET_EXPANSIONS} expansions \
             (p_bar = {p_bar}, lambda in [{:e}, {:e}], params = {params:?})",
            lo.exp(),
            hi.exp()
        )));
    }

    let log_lambda = if lo == hi {
        lo
    } else {
        let root_spec = RootSpec {
            low: lo,
            high: hi,
            tolerance: 1e-7,
            max_iterations: 200,
            secant: true,
        };
        try_solve_monotone_root(|x| residual(x, &relaxed), &root_spec)
            .map_err(|e| e.context("lagrange multiplier search"))?
    };

    let log_lambda = polish(log_lambda, |x| residual(x, spec))?;
    let lambda = log_lambda.exp();
    let achieved = mean_power(lambda, params, spec)?.value;
    Ok(PowerPolicy {
        lambda,
        params: *params,
        constraint: *constraint,
        achieved_mean_power: achieved,
    })
}

fn polish<G>(start: f64, mut g: G) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let tol = 1e-9;
    if g(start)?.abs() <= tol {
        return Ok(start);
    }
    let mut half_width = 1e-4;
    for _ in 0..20 {
        let (lo, hi) = (start - half_width, start + half_width);
        let (g_lo, g_hi) = (g(lo)?, g(hi)?);
        if g_lo >= 0.0 && g_hi <= 0.0 {
            let spec = RootSpec {
                low: lo,
                high: hi,
                tolerance: tol,
                max_iterations: 200,
                secant: true,
            };
            return try_solve_monotone_root(&mut g, &spec).map_err(|e| e.context("lagrange multiplier polish"));
        }
        half_width *= 4.0;
    }
    Err(Error::Solver(format!(
        "could not bracket the polished multiplier near ln(lambda) = {start}"
    )))
}
