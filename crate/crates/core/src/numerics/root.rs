//! Bracketed root finding for monotone scalar functions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub low: f64,
    pub high: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Try an Illinois false-position step before falling back to bisection.
    pub secant: bool,
}

impl RootSpec {
    pub fn new(low: f64, high: f64, tolerance: f64) -> Result<Self> {
        let spec = RootSpec {
            low,
            high,
            tolerance,
            max_iterations: 200,
            secant: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite() && self.low < self.high) {
            return Err(Error::domain(format!(
                "bracket [{}, {}] must be finite with low < high",
                self.low, self.high
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::domain(format!("tolerance must be > 0, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// Root of a strictly monotone `g` inside `[spec.low, spec.high]`.
///
/// Stops once `|g(x)| <= tolerance` or the bracket is narrower than
/// `tolerance`.
pub fn solve_monotone_root<G>(g: G, spec: &RootSpec) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    let mut g = g;
    try_solve_monotone_root(|x| Ok(g(x)), spec)
}

pub(crate) fn try_solve_monotone_root<G>(mut g: G, spec: &RootSpec) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let (mut lo, mut hi) = (spec.low, spec.high);
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    if g_lo.abs() <= spec.tolerance {
        return Ok(lo);
    }
    if g_hi.abs() <= spec.tolerance {
        return Ok(hi);
    }
    if g_lo.is_nan() || g_hi.is_nan() || g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracket {
            low: lo,
            high: hi,
            g_low: g_lo,
            g_high: g_hi,
        });
    }

    // Which end was kept on the previous step; two in a row halves the
    // retained value (Illinois modification).
    let mut last_kept: Option<bool> = None;
    let mut width_before = hi - lo;
    for iter in 0..spec.max_iterations {
        let width = hi - lo;
        if width <= spec.tolerance {
            return Ok(0.5 * (lo + hi));
        }
        // Guarantee at least halving every other step.
        let stalled = iter % 2 == 1 && width > 0.5 * width_before;
        if iter % 2 == 1 {
            width_before = width;
        }
        let x = if spec.secant && !stalled {
            let candidate = hi - g_hi * (hi - lo) / (g_hi - g_lo);
            if candidate > lo && candidate < hi {
                candidate
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };

        let gx = g(x)?;
        if gx.is_nan() {
            return Err(Error::domain(format!("root function returned NaN at {x}")));
        }
        if gx.abs() <= spec.tolerance {
            return Ok(x);
        }
        if gx.signum() == g_lo.signum() {
            lo = x;
            g_lo = gx;
            if last_kept == Some(true) {
                g_hi *= 0.5;
            }
            last_kept = Some(true);
        } else {
            hi = x;
            g_hi = gx;
            if last_kept == Some(false) {
                g_lo *= 0.5;
            }
            last_kept = Some(false);
        }
    }
    Err(Error::RootConvergence {
        iterations: spec.max_iterations,
        low: lo,
        high: hi,
    })
}
