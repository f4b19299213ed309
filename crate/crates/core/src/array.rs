//! Array geometry: the angle-bin grid over the field of view, half-wavelength
//! ULA steering vectors, and the virtual-array vector `(W^T a_T) ⊗ a_R`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scenario::TargetState;

pub const FOV_MIN_DEG: f64 = -90.0;
pub const FOV_MAX_DEG: f64 = 90.0;

/// Uniform partition of `[-90, 90)` degrees into left-closed bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleGrid {
    bins: usize,
}

impl AngleGrid {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(crate::error::invalid("angle grid needs at least one bin"));
        }
        Ok(Self { bins })
    }

    pub fn len(&self) -> usize {
        self.bins
    }

    pub fn is_empty(&self) -> bool {
        self.bins == 0
    }

    pub fn width_deg(&self) -> f64 {
        (FOV_MAX_DEG - FOV_MIN_DEG) / self.bins as f64
    }

    pub fn center_deg(&self, bin: usize) -> f64 {
        FOV_MIN_DEG + (bin as f64 + 0.5) * self.width_deg()
    }

    /// `[lower, upper)` edges of `bin` in degrees.
    pub fn edges_deg(&self, bin: usize) -> (f64, f64) {
        let w = self.width_deg();
        (FOV_MIN_DEG + bin as f64 * w, FOV_MIN_DEG + (bin + 1) as f64 * w)
    }

    pub fn bin_of_angle(&self, angle_deg: f64) -> Result<usize> {
        if !(FOV_MIN_DEG..FOV_MAX_DEG).contains(&angle_deg) {
            return Err(Error::OutOfFieldOfView(angle_deg));
        }
        let k = ((angle_deg - FOV_MIN_DEG) / self.width_deg()).floor() as usize;
        Ok(k.min(self.bins - 1))
    }

    pub fn bin_of_state(&self, s: &TargetState) -> Result<usize> {
        if s.range() <= 0.0 {
            return Err(Error::ZeroRange);
        }
        self.bin_of_angle(s.angle_deg())
    }
}

/// Half-wavelength ULA response `exp(j pi k sin(theta))`, `k = 0..n`.
pub fn steer(theta_deg: f64, n: usize) -> Vec<Complex64> {
    let phase = PI * theta_deg.to_radians().sin();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, phase * k as f64))
        .collect()
}

/// `W^T a_T(theta)`.
pub fn transmit_response(w: &Array2<Complex64>, theta_deg: f64) -> Array1<Complex64> {
    let a_t = Array1::from(steer(theta_deg, w.nrows()));
    w.t().dot(&a_t)
}

/// Virtual-array vector `v = (W^T a_T(theta)) ⊗ a_R(theta)`, length `n_t * n_r`.
pub fn virtual_vector(w: &Array2<Complex64>, theta_deg: f64, n_r: usize) -> Vec<Complex64> {
    let u = transmit_response(w, theta_deg);
    let a_r = steer(theta_deg, n_r);
    let mut v = Vec::with_capacity(u.len() * n_r);
    for ui in u.iter() {
        v.extend(a_r.iter().map(|ar| ui * ar));
    }
    v
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
