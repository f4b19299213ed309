//! Transmit waveform design.
//!
//! Three strategies share one representation: the waveform matrix `W`, its
//! covariance `R = W W^H`, and the per-target powers. Multi-beam strategies
//! build `R = sum_m p_m a_m a_m^H` from unit-norm conjugate steering vectors
//! `a_m` at the target bins, so `W` is the rank-M factor `[sqrt(p_m) a_m]`
//! padded with zero columns.
//!
//! The power-aware design maximizes the minimum range-weighted beampattern
//! `delta_k * a_T^T(theta_k) R a_T^*(theta_k)` within that span of beams, which
//! reduces to an M-variable max-min LP over the gain matrix
//! `G_km = |a_T^T(theta_k) a_m|^2` (see [`maxmin`]).

pub mod maxmin;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::array::{steer, AngleGrid};
use crate::error::{Error, Result};
use crate::scenario::TargetState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Orthogonal,
    Uniform,
    #[default]
    PowerAware,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Orthogonal, Strategy::Uniform, Strategy::PowerAware];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Orthogonal => "orthogonal",
            Strategy::Uniform => "uniform",
            Strategy::PowerAware => "power-aware",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "orthogonal" => Ok(Strategy::Orthogonal),
            "uniform" => Ok(Strategy::Uniform),
            "power-aware" | "power_aware" => Ok(Strategy::PowerAware),
            other => Err(crate::error::invalid(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Predicted angle and power weight of one target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetWeight {
    pub theta_deg: f64,
    /// `1 / R^4` at the predicted range, km^-4.
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub struct WaveformSpec {
    pub w: Array2<Complex64>,
    pub r: Array2<Complex64>,
    /// Per-target powers; empty for the orthogonal waveform.
    pub powers: Vec<f64>,
    pub beam_angles_deg: Vec<f64>,
    pub strategy: Strategy,
}

impl WaveformSpec {
    pub fn n_t(&self) -> usize {
        self.w.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.r.diag().iter().map(|z| z.re).sum()
    }

    pub fn beampattern(&self, theta_deg: f64) -> f64 {
        beampattern(&self.r, theta_deg)
    }

    /// Power attributed to target `m`: its beam power, or `P_T / N_T` per
    /// orthogonal channel.
    pub fn allocated_power(&self, m: usize) -> f64 {
        match self.strategy {
            Strategy::Orthogonal => self.trace() / self.n_t() as f64,
            _ => self.powers[m],
        }
    }
}

/// Transmit beampattern `a_T^T(theta) R a_T^*(theta)`.
pub fn beampattern(r: &Array2<Complex64>, theta_deg: f64) -> f64 {
    let a = steer(theta_deg, r.nrows());
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (j, aj) in a.iter().enumerate() {
            row += r[[i, j]] * aj.conj();
        }
        acc += ai * row;
    }
    acc.re
}

/// Scaled identity `sqrt(P_T / N_T) I`.
pub fn orthogonal_waveform(n_t: usize, p_t: f64) -> Result<WaveformSpec> {
    check_budget(n_t, p_t)?;
    let amp = Complex64::new((p_t / n_t as f64).sqrt(), 0.0);
    let w = Array2::from_diag_elem(n_t, amp);
    let r = Array2::from_diag_elem(n_t, Complex64::new(p_t / n_t as f64, 0.0));
    Ok(WaveformSpec { w, r, powers: Vec::new(), beam_angles_deg: Vec::new(), strategy: Strategy::Orthogonal })
}

/// Equal power `P_T / M` in a beam at each bin center.
pub fn uniform_waveform(bins: &[usize], grid: &AngleGrid, n_t: usize, p_t: f64) -> Result<WaveformSpec> {
    check_budget(n_t, p_t)?;
    check_distinct_bins(bins)?;
    if bins.iter().any(|&b| b >= grid.len()) {
        return Err(crate::error::invalid("bin index outside the angle grid"));
    }
    let thetas: Vec<f64> = bins.iter().map(|&b| grid.center_deg(b)).collect();
    let powers = vec![p_t / bins.len() as f64; bins.len()];
    beam_waveform(&thetas, powers, n_t, Strategy::Uniform)
}

/// Max-min range-weighted beampattern over the beams at the predicted angles.
pub fn power_aware_waveform(weights: &[TargetWeight], n_t: usize, p_t: f64) -> Result<WaveformSpec> {
    check_budget(n_t, p_t)?;
    if weights.is_empty() {
        return Err(crate::error::invalid("power-aware design needs at least one target"));
    }
    for (i, a) in weights.iter().enumerate() {
        if !(a.delta > 0.0 && a.delta.is_finite()) {
            return Err(crate::error::invalid(format!("delta must be positive, got {}", a.delta)));
        }
        if weights[..i].iter().any(|b| b.theta_deg == a.theta_deg) {
            return Err(Error::DuplicateBin(i));
        }
    }
    let thetas: Vec<f64> = weights.iter().map(|w| w.theta_deg).collect();
    let g = gain_matrix(&thetas, n_t);
    let h: Vec<Vec<f64>> = g
        .iter()
        .zip(weights)
        .map(|(row, wt)| row.iter().map(|x| wt.delta * x).collect())
        .collect();
    let sol = maxmin::solve(&h, p_t);
    beam_waveform(&thetas, sol.powers, n_t, Strategy::PowerAware)
}

/// Range weight `1 / R^4` of a predicted state.
pub fn predict_delta(predicted: &TargetState) -> Result<f64> {
    let r = predicted.range();
    if !(r > 0.0) {
        return Err(Error::ZeroRange);
    }
    Ok(1.0 / r.powi(4))
}

/// Cross-beam gains `G[k][m] = |a_T^T(theta_k) a_m|^2` with `a_m` the
/// unit-norm conjugate steering vector at `theta_m`.
pub fn gain_matrix(thetas_deg: &[f64], n_t: usize) -> Vec<Vec<f64>> {
    let steering: Vec<Vec<Complex64>> = thetas_deg.iter().map(|&t| steer(t, n_t)).collect();
    steering
        .iter()
        .map(|ak| {
            steering
                .iter()
                .map(|am| {
                    let ip: Complex64 = ak.iter().zip(am).map(|(x, y)| x * y.conj()).sum();
                    ip.norm_sqr() / n_t as f64
                })
                .collect()
        })
        .collect()
}

/// Weighted beampatterns `delta_k * beampattern(theta_k)`.
pub fn weighted_beampatterns(spec: &WaveformSpec, weights: &[TargetWeight]) -> Vec<f64> {
    weights.iter().map(|w| w.delta * spec.beampattern(w.theta_deg)).collect()
}

fn beam_waveform(thetas: &[f64], powers: Vec<f64>, n_t: usize, strategy: Strategy) -> Result<WaveformSpec> {
    if thetas.len() > n_t {
        return Err(crate::error::invalid(format!(
            "{} beams exceed the {n_t} transmit elements",
            thetas.len()
        )));
    }
    let norm = (n_t as f64).sqrt();
    let mut w = Array2::<Complex64>::zeros((n_t, n_t));
    for (m, (&theta, &p)) in thetas.iter().zip(&powers).enumerate() {
        let amp = p.sqrt() / norm;
        for (i, a) in steer(theta, n_t).into_iter().enumerate() {
            w[[i, m]] = a.conj() * amp;
        }
    }
    let r = w.dot(&w.t().mapv(|z| z.conj()));
    Ok(WaveformSpec { w, r, powers, beam_angles_deg: thetas.to_vec(), strategy })
}

fn check_budget(n_t: usize, p_t: f64) -> Result<()> {
    if n_t == 0 {
        return Err(crate::error::invalid("n_t must be positive"));
    }
    if !(p_t > 0.0 && p_t.is_finite()) {
        return Err(crate::error::invalid(format!("p_t must be positive, got {p_t}")));
    }
    Ok(())
}

fn check_distinct_bins(bins: &[usize]) -> Result<()> {
    if bins.is_empty() {
        return Err(crate::error::invalid("at least one bin is required"));
    }
    for (i, b) in bins.iter().enumerate() {
        if bins[..i].contains(b) {
            return Err(Error::DuplicateBin(*b));
        }
    }
    Ok(())
}
