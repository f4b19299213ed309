//! Wald-type detection: threshold, amplitude-estimate spread, test statistic,
//! observation discretization and the detection-probability oracle.
//!
//! Under the asymptotic law `(alpha_hat - alpha) / sigma_hat ~ CN(0, 1)` the
//! normalized statistic `2 |alpha_hat|^2 / sigma_hat^2` is chi-square with two
//! degrees of freedom under H0 and noncentral (noncentrality
//! `2 |alpha|^2 / sigma_hat^2`) under H1.

mod marcum;

pub use marcum::marcum_q1;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// `lambda = -2 ln(P_FA)`, the chi-square(2) upper quantile.
pub fn threshold_for(p_fa: f64) -> Result<f64> {
    if !(p_fa > 0.0 && p_fa < 1.0) {
        return Err(crate::error::invalid(format!("P_FA must lie in (0, 1), got {p_fa}")));
    }
    Ok(-2.0 * p_fa.ln())
}

/// Gaussian disturbance over the virtual channels: white, or real AR(1)
/// correlation `sigma_c^2 rho^|i-j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disturbance {
    sigma_c: f64,
    rho: f64,
}

impl Disturbance {
    pub fn white(sigma_c: f64) -> Result<Self> {
        Self::ar1(sigma_c, 0.0)
    }

    pub fn ar1(sigma_c: f64, rho: f64) -> Result<Self> {
        if !(sigma_c > 0.0 && sigma_c.is_finite()) {
            return Err(crate::error::invalid(format!("sigma_c must be positive, got {sigma_c}")));
        }
        if !(rho.abs() < 1.0) {
            return Err(crate::error::invalid(format!("AR(1) coefficient must satisfy |rho| < 1, got {rho}")));
        }
        Ok(Self { sigma_c, rho })
    }

    pub fn sigma_c(&self) -> f64 {
        self.sigma_c
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Entry `(i, j)` of the covariance matrix.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.sigma_c * self.sigma_c * self.rho.powi(i.abs_diff(j) as i32)
    }

    /// `v^H Sigma v` in O(N).
    pub fn quad_form(&self, v: &[Complex64]) -> f64 {
        let power: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let cross = if self.rho == 0.0 {
            0.0
        } else {
            // acc_j = sum_{i<j} conj(v_i) rho^(j-i)
            let mut acc = Complex64::new(0.0, 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 1..v.len() {
                acc = (acc + v[j - 1].conj()) * self.rho;
                sum += v[j] * acc;
            }
            2.0 * sum.re
        };
        self.sigma_c * self.sigma_c * (power + cross)
    }

    /// One disturbance vector `c ~ CN(0, Sigma)` of length `n`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Complex64> {
        let innovation = self.sigma_c * (1.0 - self.rho * self.rho).sqrt();
        let mut out = Vec::with_capacity(n);
        let mut prev = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let e = standard_complex_normal(rng);
            prev = if i == 0 { e * self.sigma_c } else { prev * self.rho + e * innovation };
            out.push(prev);
        }
        out
    }
}

/// `z ~ CN(0, 1)`: independent real and imaginary parts with variance 1/2.
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `alpha_hat ~ CN(alpha, sigma^2)`.
pub fn sample_alpha_hat<R: Rng + ?Sized>(alpha: Complex64, sigma: f64, rng: &mut R) -> Complex64 {
    alpha + standard_complex_normal(rng) * sigma
}

/// Spread of the amplitude estimate, `sqrt(v^H Sigma v) / ||v||^2`.
pub fn sigma_hat(v: &[Complex64], disturbance: &Disturbance) -> Result<f64> {
    let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if !(n2 > 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(disturbance.quad_form(v).sqrt() / n2)
}

/// Least-squares amplitude estimate `v^H y / ||v||^2`.
pub fn estimate_alpha(v: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if !(n2 > 0.0) {
        return Err(Error::ZeroVector);
    }
    let ip: Complex64 = v.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    Ok(ip / n2)
}

/// `Lambda = 2 |alpha_hat|^2 / sigma_hat^2`.
pub fn wald_statistic(alpha_hat: Complex64, sigma_hat: f64) -> f64 {
    2.0 * alpha_hat.norm_sqr() / (sigma_hat * sigma_hat)
}

/// Observation discretization step `beta = sqrt(3) sigma_hat`.
pub fn step_size(sigma_hat: f64) -> f64 {
    3f64.sqrt() * sigma_hat
}

/// `floor(|alpha_hat| / beta)`.
pub fn discretize(raw_mag: f64, sigma_hat: f64) -> u32 {
    debug_assert!(raw_mag >= 0.0 && sigma_hat > 0.0);
    (raw_mag / step_size(sigma_hat)).floor() as u32
}

/// `P_D = Q1(sqrt(2 snr_out), sqrt(lambda))`, `snr_out = |alpha|^2 / sigma_hat^2`.
pub fn pd_oracle(snr_out: f64, lambda: f64) -> f64 {
    marcum_q1((2.0 * snr_out).sqrt(), lambda.sqrt())
}

/// Discretized observation key used by the search tree and the belief filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObsKey {
    Empty,
    Bin(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observation {
    Empty,
    Detected { raw_mag: f64, disc_bin: u32, sigma_hat: f64 },
}

impl Observation {
    pub fn detected(raw_mag: f64, sigma_hat: f64) -> Self {
        Observation::Detected { raw_mag, disc_bin: discretize(raw_mag, sigma_hat), sigma_hat }
    }

    pub fn key(&self) -> ObsKey {
        match self {
            Observation::Empty => ObsKey::Empty,
            Observation::Detected { disc_bin, .. } => ObsKey::Bin(*disc_bin),
        }
    }

    pub fn is_detection(&self) -> bool {
        matches!(self, Observation::Detected { .. })
    }
}

/// Result of testing one angle bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionOutcome {
    pub lambda_stat: f64,
    pub alpha_hat: Complex64,
    pub sigma_hat: f64,
    pub detected: bool,
    pub bin: usize,
}

impl DetectionOutcome {
    pub fn new(alpha_hat: Complex64, sigma_hat: f64, threshold: f64, bin: usize) -> Self {
        let lambda_stat = wald_statistic(alpha_hat, sigma_hat);
        Self { lambda_stat, alpha_hat, sigma_hat, detected: lambda_stat >= threshold, bin }
    }

    pub fn observation(&self) -> Observation {
        if self.detected {
            Observation::detected(self.alpha_hat.norm(), self.sigma_hat)
        } else {
            Observation::Empty
        }
    }
}
