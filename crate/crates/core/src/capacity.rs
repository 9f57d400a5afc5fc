//! Secrecy capacity: the ergodic value under optimal power allocation,
//! its high-SNR limit (closed form and by quadrature over the gain ratio),
//! bounds and asymptotes of the limit, and a sampled estimate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{ratio_pdf_unchecked, ChannelParams, ChannelSample, JointDensity, PairGenerator};
use crate::error::{Error, Result};
use crate::montecarlo::BatchMeans;
use crate::numerics::{graded_cuts, integrate_interval, try_integrate_double, Estimate, QuadratureSpec};
use crate::power::{optimal_power_unchecked, region_layout, solve_lagrange_multiplier, PowerConstraint, PowerPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Quadrature,
    ClosedForm,
    MonteCarlo,
    BoundLower,
    BoundUpper,
}

/// Average power at which a capacity was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PowerLevel {
    Finite(f64),
    #[serde(with = "infinite_tag")]
    Infinite,
}

mod infinite_tag {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("infinite")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "infinite" {
            Ok(())
        } else {
            Err(de::Error::custom(format!("expected \"infinite\", got {s:?}")))
        }
    }
}

/// A capacity value in nats with its error estimate and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub error: f64,
    pub method: Method,
    pub params: ChannelParams,
    pub p_bar: PowerLevel,
}

/// Ergodic secrecy capacity with the budget-exhausting optimal policy.
pub fn ergodic_secrecy_capacity(
    params: &ChannelParams,
    constraint: &PowerConstraint,
    spec: &QuadratureSpec,
) -> Result<CapacityEstimate> {
    let policy = solve_lagrange_multiplier(params, constraint, spec)
        .map_err(|e| e.context(format!("solving the power budget for p_bar = {}", constraint.p_bar)))?;
    capacity_under_policy(&policy, spec)
}

/// `E[ln(1 + h_m P) - ln(1 + h_e P)]` over `h_m > h_e` for a fixed policy.
///
/// The integrand vanishes unless `h_m - h_e > lambda`, so the inner
/// integral starts there.
pub fn capacity_under_policy(policy: &PowerPolicy, spec: &QuadratureSpec) -> Result<CapacityEstimate> {
    let params = policy.params;
    let lambda = policy.lambda;
    let density = JointDensity::new(&params)?;
    let est = try_integrate_double(
        |h_m, h_e| {
            let p = optimal_power_unchecked(lambda, h_m, h_e);
            if p == 0.0 {
                return Ok(0.0);
            }
            let rate = ((h_m - h_e) * p / (1.0 + h_e * p)).ln_1p();
            Ok(rate * density.eval(h_m, h_e))
        },
        &region_layout(&params, lambda),
        spec,
    )
    .map_err(|e| e.context("ergodic secrecy capacity integral"))?;
    Ok(CapacityEstimate {
        value: est.value.max(0.0),
        error: est.error,
        method: Method::Quadrature,
        params,
        p_bar: PowerLevel::Finite(policy.constraint.p_bar),
    })
}

/// High-SNR limit as `int_1^inf ln(u) f_U(u) du`.
///
/// `f_U` peaks at `u = kappa` with half-width about `2 kappa sqrt(1 - rho)`;
/// the partition is graded around that peak and the tail map is scaled by
/// `max(kappa, 1)`.
pub fn limit_via_ratio_integral(params: &ChannelParams, spec: &QuadratureSpec) -> Result<CapacityEstimate> {
    let rho = params.density_pcc()?;
    let kappa = params.cgr();
    let integrand = |u: f64| {
        let v = ratio_pdf_unchecked(kappa, rho, u);
        if v == 0.0 {
            0.0
        } else {
            u.ln() * v
        }
    };
    let width = 2.0 * kappa * (1.0 - rho).sqrt();
    let cuts = graded_cuts(kappa, width, 1.0, f64::INFINITY);
    let est = crate::numerics::integrate_semi_infinite_with_breakpoints(
        integrand,
        1.0,
        &cuts,
        &spec.with_scale(kappa.max(1.0)),
    )
    .map_err(|e| e.context("ratio integral for the capacity limit"))?;
    Ok(CapacityEstimate {
        value: est.value.max(0.0),
        error: est.error,
        method: Method::Quadrature,
        params: *params,
        p_bar: PowerLevel::Infinite,
    })
}

/// `1/2 (1 + k + sqrt((1 - k)^2 + 4 (1 - rho) k)) - 1`, the argument of
/// `ln_1p` in the closed-form limit, without cancellation for small `k`.
fn closed_form_excess(kappa: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        // The root is exactly 1 + kappa here; skip the rounding of sqrt.
        return kappa;
    }
    let root = ((1.0 - kappa) * (1.0 - kappa) + 4.0 * (1.0 - rho) * kappa).sqrt();
    if kappa < 1.0 {
        2.0 * (1.0 - rho) * kappa / (root + 1.0 - kappa)
    } else {
        0.5 * (kappa - 1.0 + root)
    }
}

/// `ln(1 + k) + ln(1/2 + sqrt(1/4 - rho k / (1 + k)^2))`, valid for
/// `0 <= rho <= 1`.
///
/// Evaluated as `ln_1p` of [`closed_form_excess`], which is the same
/// quantity after folding the two logarithms together.
pub fn secrecy_limit_closed_form(params: &ChannelParams) -> Result<CapacityEstimate> {
    let kappa = params.cgr();
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("cgr must be positive, got {kappa}")));
    }
    let value = closed_form_excess(kappa, params.pcc).ln_1p();
    Ok(CapacityEstimate {
        value,
        error: 4.0 * f64::EPSILON * value.abs(),
        method: Method::ClosedForm,
        params: *params,
        p_bar: PowerLevel::Infinite,
    })
}

/// Second term of the closed form, the loss from correlation. Lies in
/// `[-ln 2, 0]`.
pub fn correlation_loss(kappa: f64, rho: f64) -> Result<f64> {
    ChannelParams::from_cgr(kappa, rho)?;
    // ln(1/2 + sqrt(1/4 - x)) = ln(1 - x / (1/2 + sqrt(1/4 - x))) with
    // x = rho k / (1 + k)^2 in [0, 1/4], so the result stays in [-ln 2, 0].
    let x = rho * kappa / ((1.0 + kappa) * (1.0 + kappa));
    Ok((-x / (0.5 + (0.25 - x).max(0.0).sqrt())).ln_1p())
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("cgr must be positive and finite, got {kappa}")))
    }
}

/// Limit for independent channels, `ln(1 + kappa)`.
pub fn limit_independent(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(kappa.ln_1p())
}

/// Limit for fully correlated channels: `ln kappa` above 1, else 0.
pub fn limit_fully_correlated(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(kappa.ln().max(0.0))
}

/// Small- and large-CGR approximations of `ln(1 + kappa)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgrAsymptotes {
    /// `kappa`, accurate for `kappa << 1`.
    pub low: f64,
    /// `ln kappa`, accurate for `kappa >> 1`.
    pub high: f64,
}

pub fn limit_low_high_cgr_approx(kappa: f64) -> Result<CgrAsymptotes> {
    check_kappa(kappa)?;
    Ok(CgrAsymptotes {
        low: kappa,
        high: kappa.ln(),
    })
}

/// `(1 - rho) ln(1 + kappa) <= limit <= ln(1 + kappa)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn limit_bounds(params: &ChannelParams) -> Result<LimitBounds> {
    let upper = limit_independent(params.cgr())?;
    Ok(LimitBounds {
        lower: (1.0 - params.pcc) * upper,
        upper,
    })
}

/// Power used by [`monte_carlo_capacity`].
#[derive(Debug, Clone, Copy)]
pub enum SampledPower<'a> {
    Policy(&'a PowerPolicy),
    /// High-SNR limit: averages `ln(h_m / h_e)` over `h_m > h_e`.
    Infinite,
}

pub const MIN_MC_SAMPLES: usize = 1_000;

/// Sample average of the secrecy rate over gain pairs drawn from `rng`;
/// the error is the batch-means standard error.
pub fn monte_carlo_capacity<R: Rng + ?Sized>(
    params: &ChannelParams,
    power: SampledPower<'_>,
    samples: usize,
    rng: &mut R,
) -> Result<CapacityEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::domain(format!(
            "need at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    if let SampledPower::Policy(policy) = power {
        if policy.params != *params {
            return Err(Error::domain("policy was solved for different channel parameters"));
        }
    }
    let rate = |s: ChannelSample| -> f64 {
        if s.h_main <= s.h_eve {
            return 0.0;
        }
        match power {
            SampledPower::Infinite => (s.h_main / s.h_eve).ln(),
            SampledPower::Policy(policy) => {
                let p = policy.power(s.h_main, s.h_eve);
                ((s.h_main - s.h_eve) * p / (1.0 + s.h_eve * p)).ln_1p()
            }
        }
    };
    let generator = PairGenerator::new(params)?;
    let mut acc = BatchMeans::new(samples);
    for _ in 0..samples {
        acc.push(rate(generator.draw(rng)));
    }
    let (mean, se) = acc.finish();
    Ok(CapacityEstimate {
        value: mean,
        error: se,
        method: Method::MonteCarlo,
        params: *params,
        p_bar: match power {
            SampledPower::Policy(policy) => PowerLevel::Finite(policy.constraint.p_bar),
            SampledPower::Infinite => PowerLevel::Infinite,
        },
    })
}

/// Convenience for tests and callers that want `int_a^b f_U`.
pub fn ratio_probability(params: &ChannelParams, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let rho = params.density_pcc()?;
    let kappa = params.cgr();
    integrate_interval(|u| ratio_pdf_unchecked(kappa, rho, u), a, b, &[], spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::stream_rng;
    use std::f64::consts::{E, LN_2};

    fn params(kappa: f64, rho: f64) -> ChannelParams {
        ChannelParams::from_cgr(kappa, rho).unwrap()
    }

    /// The closed form exactly as printed, two logarithms and all.
    fn textbook_limit(kappa: f64, rho: f64) -> f64 {
        (1.0 + kappa).ln() + (0.5 + (0.25 - rho * kappa / ((1.0 + kappa) * (1.0 + kappa))).sqrt()).ln()
    }

    #[test]
    fn closed_form_examples() {
        let v = |k, r| secrecy_limit_closed_form(&params(k, r)).unwrap().value;
        assert!((v(1.0, 0.0) - LN_2).abs() < 1e-15);
        assert!(v(1.0, 1.0).abs() < 1e-15);
        assert!((v(2.0, 1.0) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn closed_form_agrees_with_textbook_expression() {
        for &k in &[0.05, 0.5, 1.0, 3.0, 40.0] {
            for &r in &[0.0, 0.3, 0.8, 0.99] {
                let a = secrecy_limit_closed_form(&params(k, r)).unwrap().value;
                let b = textbook_limit(k, r);
                assert!((a - b).abs() < 1e-13, "({k}, {r}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn closed_form_mixed_example() {
        let v = secrecy_limit_closed_form(&params(0.5, 0.8)).unwrap().value;
        assert!((v - 0.142_465_144_052_769_8).abs() < 1e-14, "{v}");
    }

    #[test]
    fn ratio_integral_examples() {
        let spec = QuadratureSpec::default();
        let v = |k, r| limit_via_ratio_integral(&params(k, r), &spec).unwrap().value;
        assert!((v(1.0, 0.0) - LN_2).abs() < 1e-8);
        assert!((v(2.0, 0.0) - 3f64.ln()).abs() < 1e-8);
        assert!((v(0.5, 0.8) - 0.142_465_144_052_769_8).abs() < 1e-6);
        assert!(limit_via_ratio_integral(&params(1.0, 1.0), &spec).is_err());
    }

    #[test]
    fn asymptotes() {
        assert!((limit_independent(1.0).unwrap() - LN_2).abs() < 1e-15);
        let k = 1e-6;
        assert!((limit_independent(k).unwrap() / k - 1.0).abs() < 1e-5);
        assert!((limit_independent(100.0).unwrap() - 100f64.ln() - 1.01f64.ln()).abs() < 1e-13);
        assert_eq!(limit_fully_correlated(0.5).unwrap(), 0.0);
        assert_eq!(limit_fully_correlated(1.0).unwrap(), 0.0);
        assert!((limit_fully_correlated(E).unwrap() - 1.0).abs() < 1e-15);
        let a = limit_low_high_cgr_approx(1e-3).unwrap();
        assert!((a.low - limit_independent(1e-3).unwrap()).abs() < 1e-6);
        let a = limit_low_high_cgr_approx(1e4).unwrap();
        assert!((a.high - limit_independent(1e4).unwrap()).abs() < 1e-3);
        assert!(limit_independent(0.0).is_err());
        assert!(limit_fully_correlated(-1.0).is_err());
        assert!(limit_low_high_cgr_approx(f64::NAN).is_err());
    }

    #[test]
    fn bounds_examples() {
        let b = limit_bounds(&params(1.0, 0.0)).unwrap();
        assert_eq!(b.lower, b.upper);
        assert!((b.upper - LN_2).abs() < 1e-15);
        let b = limit_bounds(&params(1.0, 0.5)).unwrap();
        assert!((b.lower - 0.346_573_590_279_972_6).abs() < 1e-12);
        assert!((b.upper - LN_2).abs() < 1e-15);
        let k = 1e-4;
        let ratio = secrecy_limit_closed_form(&params(k, 0.7)).unwrap().value / k.ln_1p();
        assert!((ratio - 0.3).abs() < 1e-3);
    }

    #[test]
    fn loss_term_range() {
        for &k in &[1e-3, 0.1, 1.0, 10.0, 1e3] {
            for &r in &[0.0, 0.5, 1.0] {
                let loss = correlation_loss(k, r).unwrap();
                assert!((-LN_2..=0.0).contains(&loss), "({k}, {r}): {loss}");
            }
        }
    }

    #[test]
    fn infinite_power_monte_carlo_independent() {
        let p = params(1.0, 0.0);
        let mut rng = stream_rng(42, 0);
        let est = monte_carlo_capacity(&p, SampledPower::Infinite, 1_000_000, &mut rng).unwrap();
        assert!(((est.value - LN_2) / est.error).abs() < 3.0, "{est:?}");
        assert_eq!(est.method, Method::MonteCarlo);
    }

    #[test]
    fn monte_carlo_rejects_small_runs() {
        let p = params(1.0, 0.0);
        let mut rng = stream_rng(1, 0);
        assert!(monte_carlo_capacity(&p, SampledPower::Infinite, 10, &mut rng).is_err());
    }

    #[test]
    fn ergodic_capacity_tiny_power_is_tiny() {
        let p = params(1.0, 0.0);
        let spec = QuadratureSpec::default();
        let c = |p_bar| ergodic_secrecy_capacity(&p, &PowerConstraint::new(p_bar).unwrap(), &spec).unwrap();
        let (small, tiny) = (c(1e-3), c(1e-5));
        assert!(small.value < 1e-2, "{small:?}");
        assert!(tiny.value >= 0.0 && tiny.value < small.value, "{tiny:?}");
        assert!(small.error < 1e-6 * small.value.max(1e-3), "{small:?}");
    }
}
