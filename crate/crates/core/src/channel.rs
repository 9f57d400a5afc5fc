//! Correlated Rayleigh wiretap channel: the joint law of the power gains
//! `(h_m, h_e)`, the law of their ratio `U = h_m / h_e`, and a seeded
//! sampler of gain pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::i0e_unchecked;

/// Largest correlation used by any density evaluation. Exact `rho = 1` is
/// only served by the closed-form limits.
pub const MAX_DENSITY_PCC: f64 = 1.0 - 1e-9;

/// Mean power gains of the main and eavesdropper channels and their power
/// correlation coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub mean_gain_main: f64,
    pub mean_gain_eve: f64,
    pub pcc: f64,
}

impl ChannelParams {
    /// `pcc` may be 1 here; operations that need a density reject it.
    pub fn new(mean_gain_main: f64, mean_gain_eve: f64, pcc: f64) -> Result<Self> {
        if !(mean_gain_main > 0.0 && mean_gain_main.is_finite()) {
            return Err(Error::domain(format!(
                "main mean gain must be > 0, got {mean_gain_main}"
            )));
        }
        if !(mean_gain_eve > 0.0 && mean_gain_eve.is_finite()) {
            return Err(Error::domain(format!(
                "eavesdropper mean gain must be > 0, got {mean_gain_eve}"
            )));
        }
        if !(0.0..=1.0).contains(&pcc) {
            return Err(Error::domain(format!(
                "power correlation must lie in [0, 1], got {pcc}"
            )));
        }
        Ok(ChannelParams {
            mean_gain_main,
            mean_gain_eve,
            pcc,
        })
    }

    /// Unit-mean eavesdropper channel and main channel of mean `kappa`.
    pub fn from_cgr(kappa: f64, pcc: f64) -> Result<Self> {
        ChannelParams::new(kappa, 1.0, pcc)
    }

    /// Channel gain ratio `mean_gain_main / mean_gain_eve`.
    pub fn cgr(&self) -> f64 {
        self.mean_gain_main / self.mean_gain_eve
    }

    /// Correlation to plug into densities: errors at exactly 1, capped at
    /// [`MAX_DENSITY_PCC`] otherwise.
    pub fn density_pcc(&self) -> Result<f64> {
        if self.pcc >= 1.0 {
            return Err(Error::domain("density evaluation requires pcc < 1"));
        }
        Ok(self.pcc.min(MAX_DENSITY_PCC))
    }
}

/// Instantaneous power gains of one channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSample {
    pub h_main: f64,
    pub h_eve: f64,
}

/// Joint density of `(h_m, h_e)` with its constants folded in, for use in
/// quadrature inner loops.
#[derive(Debug, Clone, Copy)]
pub(crate) struct JointDensity {
    inv_main: f64,
    inv_eve: f64,
    inv_one_minus: f64,
    log_norm: f64,
    bessel_coef: f64,
}

impl JointDensity {
    pub(crate) fn new(params: &ChannelParams) -> Result<Self> {
        let rho = params.density_pcc()?;
        let one_minus = 1.0 - rho;
        let inv_main = params.mean_gain_main.recip();
        let inv_eve = params.mean_gain_eve.recip();
        Ok(JointDensity {
            inv_main,
            inv_eve,
            inv_one_minus: one_minus.recip(),
            log_norm: -(params.mean_gain_main * params.mean_gain_eve * one_minus).ln(),
            bessel_coef: 2.0 / one_minus * (rho * inv_main * inv_eve).sqrt(),
        })
    }

    /// Density at nonnegative gains; no validation.
    #[inline]
    pub(crate) fn eval(&self, h_m: f64, h_e: f64) -> f64 {
        let a = (h_m * self.inv_main + h_e * self.inv_eve) * self.inv_one_minus;
        let b = self.bessel_coef * (h_m * h_e).sqrt();
        (self.log_norm - a + b).exp() * i0e_unchecked(b)
    }
}

fn check_gain(name: &str, h: f64) -> Result<()> {
    if h >= 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and nonnegative, got {h}")))
    }
}

/// Bivariate density of the power gains:
///
/// `f(h_m, h_e) = exp(-(h_m/g_m + h_e/g_e)/(1-rho)) I_0(2/(1-rho) sqrt(rho h_m h_e/(g_m g_e))) / (g_m g_e (1-rho))`
///
/// evaluated as `exp(log_norm - a + b) * e^(-b) I_0(b)` so that neither
/// factor overflows as `rho -> 1`.
pub fn joint_power_gain_pdf(params: &ChannelParams, h_m: f64, h_e: f64) -> Result<f64> {
    check_gain("h_m", h_m)?;
    check_gain("h_e", h_e)?;
    Ok(JointDensity::new(params)?.eval(h_m, h_e))
}

/// `(u + k)^2 - 4 rho k u`, written as a sum of nonnegative terms.
fn ratio_discriminant(kappa: f64, rho: f64, u: f64) -> f64 {
    let d = u - kappa;
    d * d + 4.0 * (1.0 - rho) * kappa * u
}

fn check_ratio(u: f64) -> Result<()> {
    if u >= 0.0 && !u.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("ratio must be nonnegative, got {u}")))
    }
}

/// Density of `U = h_m / h_e`: `k (1-rho) (u+k) / ((u+k)^2 - 4 rho k u)^(3/2)`.
pub fn ratio_pdf(params: &ChannelParams, u: f64) -> Result<f64> {
    check_ratio(u)?;
    let rho = params.density_pcc()?;
    Ok(ratio_pdf_unchecked(params.cgr(), rho, u))
}

#[inline]
pub(crate) fn ratio_pdf_unchecked(kappa: f64, rho: f64, u: f64) -> f64 {
    if u.is_infinite() {
        return 0.0;
    }
    let disc = ratio_discriminant(kappa, rho, u);
    kappa * (1.0 - rho) * (u + kappa) / (disc * disc.sqrt())
}

/// Antiderivative of [`ratio_pdf`]: `(u - k) / (2 sqrt((u+k)^2 - 4 rho k u))`.
/// Ranges over `[-1/2, 1/2]`, so `P(U > u) = 1/2 - F(u)`.
pub fn ratio_antiderivative(params: &ChannelParams, u: f64) -> Result<f64> {
    check_ratio(u)?;
    let rho = params.density_pcc()?;
    Ok(ratio_antiderivative_unchecked(params.cgr(), rho, u))
}

pub(crate) fn ratio_antiderivative_unchecked(kappa: f64, rho: f64, u: f64) -> f64 {
    if u.is_infinite() {
        return 0.5;
    }
    (u - kappa) / (2.0 * ratio_discriminant(kappa, rho, u).sqrt())
}

/// Draws one gain pair: `g_m = sqrt(g_m_bar) z1`,
/// `g_e = sqrt(g_e_bar) (sqrt(rho) z1 + sqrt(1-rho) z2)` with `z1, z2`
/// independent unit-power circular complex Gaussians, returning squared
/// magnitudes. The complex correlation is `sqrt(rho)`, real and
/// nonnegative.
pub fn sample_channel_pair<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> Result<ChannelSample> {
    Ok(PairGenerator::new(params)?.draw(rng))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PairGenerator {
    amp_main: f64,
    amp_shared: f64,
    amp_private: f64,
}

impl PairGenerator {
    pub(crate) fn new(params: &ChannelParams) -> Result<Self> {
        if params.pcc >= 1.0 {
            return Err(Error::domain("sampling requires pcc < 1"));
        }
        let rho = params.pcc;
        // Each quadrature has variance 1/2 so that E|z|^2 = 1.
        let half = std::f64::consts::FRAC_1_SQRT_2;
        Ok(PairGenerator {
            amp_main: params.mean_gain_main.sqrt() * half,
            amp_shared: (params.mean_gain_eve * rho).sqrt() * half,
            amp_private: (params.mean_gain_eve * (1.0 - rho)).sqrt() * half,
        })
    }

    #[inline]
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelSample {
        let z1_re: f64 = rng.sample(StandardNormal);
        let z1_im: f64 = rng.sample(StandardNormal);
        let z2_re: f64 = rng.sample(StandardNormal);
        let z2_im: f64 = rng.sample(StandardNormal);
        let m_re = self.amp_main * z1_re;
        let m_im = self.amp_main * z1_im;
        let e_re = self.amp_shared * z1_re + self.amp_private * z2_re;
        let e_im = self.amp_shared * z1_im + self.amp_private * z2_im;
        ChannelSample {
            h_main: m_re * m_re + m_im * m_im,
            h_eve: e_re * e_re + e_im * e_im,
        }
    }
}

/// Seeded stream of channel samples. Streams keyed by the same seed and
/// different `stream` indices are independent, which lets grid points run
/// concurrently and still reproduce bit for bit.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    generator: PairGenerator,
    rng: ChaCha8Rng,
}

impl ChannelSampler {
    pub fn new(params: &ChannelParams, seed: u64, stream: u64) -> Result<Self> {
        Ok(ChannelSampler {
            generator: PairGenerator::new(params)?,
            rng: stream_rng(seed, stream),
        })
    }

    pub fn sample(&mut self) -> ChannelSample {
        self.generator.draw(&mut self.rng)
    }
}

impl Iterator for ChannelSampler {
    type Item = ChannelSample;

    fn next(&mut self) -> Option<ChannelSample> {
        Some(self.sample())
    }
}

/// ChaCha8 generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kappa: f64, rho: f64) -> ChannelParams {
        ChannelParams::from_cgr(kappa, rho).unwrap()
    }

    #[test]
    fn joint_pdf_independent_examples() {
        assert!((joint_power_gain_pdf(&params(1.0, 0.0), 0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let v = joint_power_gain_pdf(&params(1.0, 0.0), 1.0, 2.0).unwrap();
        assert!((v - (-3.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn joint_pdf_correlated_example() {
        // 2 e^{-4} I_0(2 sqrt 2)
        let v = joint_power_gain_pdf(&params(1.0, 0.5), 1.0, 1.0).unwrap();
        assert!((v - 0.155_769_046_274_322_5).abs() < 1e-14, "{v}");
    }

    #[test]
    fn joint_pdf_factorizes_when_uncorrelated() {
        let p = ChannelParams::new(2.5, 0.7, 0.0).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                let (m, e) = (0.13 * i as f64, 0.07 * j as f64);
                let product = (-m / 2.5).exp() / 2.5 * (-e / 0.7).exp() / 0.7;
                let v = joint_power_gain_pdf(&p, m, e).unwrap();
                assert!((v - product).abs() < 1e-12, "({m}, {e})");
            }
        }
    }

    #[test]
    fn joint_pdf_is_finite_near_full_correlation() {
        let p = params(1.0, 1.0 - 1e-12);
        for &(m, e) in &[(1.0, 1.0), (500.0, 500.0), (1e-9, 3.0)] {
            let v = joint_power_gain_pdf(&p, m, e).unwrap();
            assert!(v.is_finite() && v >= 0.0);
        }
    }

    #[test]
    fn joint_pdf_rejects_bad_input() {
        assert!(joint_power_gain_pdf(&params(1.0, 1.0), 1.0, 1.0).is_err());
        assert!(joint_power_gain_pdf(&params(1.0, 0.0), -1.0, 1.0).is_err());
        assert!(joint_power_gain_pdf(&params(1.0, 0.0), 1.0, f64::NAN).is_err());
    }

    #[test]
    fn ratio_pdf_examples() {
        assert!((ratio_pdf(&params(1.0, 0.0), 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((ratio_pdf(&params(2.0, 0.0), 0.0).unwrap() - 0.5).abs() < 1e-15);
        let v = ratio_pdf(&params(1.0, 0.5), 1.0).unwrap();
        assert!((v - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(ratio_pdf(&params(1.0, 0.0), -0.1).is_err());
    }

    #[test]
    fn antiderivative_examples() {
        for &k in &[0.1, 1.0, 7.0] {
            for &r in &[0.0, 0.5, 0.99] {
                assert_eq!(ratio_antiderivative(&params(k, r), k).unwrap(), 0.0);
            }
        }
        let far = ratio_antiderivative(&params(1.0, 0.3), 1e12).unwrap();
        assert!((far - 0.5).abs() < 1e-11);
        assert!((ratio_antiderivative(&params(1.0, 0.0), 3.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(ratio_antiderivative(&params(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(0.0, 1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, -1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.5).is_err());
        assert!(ChannelParams::new(1.0, 1.0, -0.1).is_err());
        let p = ChannelParams::new(3.0, 1.5, 1.0).unwrap();
        assert_eq!(p.cgr(), 2.0);
        assert!(p.density_pcc().is_err());
        assert_eq!(params(1.0, 1.0 - 1e-12).density_pcc().unwrap(), MAX_DENSITY_PCC);
    }

    #[test]
    fn sampler_streams_are_reproducible_and_distinct() {
        let p = params(1.0, 0.5);
        let a: Vec<_> = ChannelSampler::new(&p, 7, 0).unwrap().take(16).collect();
        let b: Vec<_> = ChannelSampler::new(&p, 7, 0).unwrap().take(16).collect();
        let c: Vec<_> = ChannelSampler::new(&p, 7, 1).unwrap().take(16).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(ChannelSampler::new(&params(1.0, 1.0), 7, 0).is_err());
    }

    #[test]
    fn sampler_means() {
        let p = ChannelParams::new(1.0, 3.0, 0.4).unwrap();
        let n = 1_000_000;
        let (mut sm, mut se) = (0.0, 0.0);
        for s in ChannelSampler::new(&p, 11, 0).unwrap().take(n) {
            assert!(s.h_main >= 0.0 && s.h_eve >= 0.0);
            sm += s.h_main;
            se += s.h_eve;
        }
        assert!((sm / n as f64 - 1.0).abs() < 3e-3);
        assert!((se / n as f64 - 3.0).abs() < 9e-3);
    }
}
