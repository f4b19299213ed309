//! Target kinematics, the nearly-constant-velocity motion model and the
//! radar-equation amplitude map.

mod config;

pub use config::{
    DisturbanceConfig, EnvironmentMode, PlannerConfig, ScenarioConfig, TargetConfig,
};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Kinematic state `[x, vx, y, vy]` of one target. Positions in km,
/// velocities in km/s, radar at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetState {
    pub x: f64,
    pub vx: f64,
    pub y: f64,
    pub vy: f64,
}

impl TargetState {
    /// Validated constructor: finite components and non-zero range.
    pub fn new(x: f64, vx: f64, y: f64, vy: f64) -> Result<Self> {
        let s = Self { x, vx, y, vy };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.as_array().iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState);
        }
        if self.range() <= 0.0 {
            return Err(Error::ZeroRange);
        }
        Ok(())
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { x: a[0], vx: a[1], y: a[2], vy: a[3] }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x, self.vx, self.y, self.vy]
    }

    pub fn range(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Bearing `atan2(y, x)` in degrees; broadside is +x.
    pub fn angle_deg(&self) -> f64 {
        self.y.atan2(self.x).to_degrees()
    }

    pub fn position_error(&self, other: &TargetState) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn velocity_error(&self, other: &TargetState) -> f64 {
        (self.vx - other.vx).hypot(self.vy - other.vy)
    }
}

/// Discrete white-acceleration motion model `s' = A s + G w`,
/// `w ~ N(0, sigma_s^2 I_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionModel {
    pub dt: f64,
    pub sigma_s: f64,
}

impl MotionModel {
    pub fn new(dt: f64, sigma_s: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(crate::error::invalid(format!("dt must be positive, got {dt}")));
        }
        if !(sigma_s >= 0.0 && sigma_s.is_finite()) {
            return Err(crate::error::invalid(format!(
                "sigma_s must be non-negative, got {sigma_s}"
            )));
        }
        Ok(Self { dt, sigma_s })
    }

    /// Transition matrix `A = blkdiag(A_b, A_b)`, `A_b = [[1, dt], [0, 1]]`.
    pub fn transition(&self) -> [[f64; 4]; 4] {
        let dt = self.dt;
        [
            [1.0, dt, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, dt],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    /// Noise-shaping matrix `G = blkdiag(G_b, G_b)`, `G_b = [dt^2/2, dt]^T`.
    pub fn noise_gain(&self) -> [[f64; 2]; 4] {
        let dt = self.dt;
        [[dt * dt / 2.0, 0.0], [dt, 0.0], [0.0, dt * dt / 2.0], [0.0, dt]]
    }

    /// Deterministic part `A s`.
    pub fn propagate(&self, s: &TargetState) -> TargetState {
        TargetState {
            x: s.x + self.dt * s.vx,
            vx: s.vx,
            y: s.y + self.dt * s.vy,
            vy: s.vy,
        }
    }

    /// One stochastic step `A s + G w`.
    pub fn step<R: Rng + ?Sized>(&self, s: &TargetState, rng: &mut R) -> TargetState {
        let mut next = self.propagate(s);
        if self.sigma_s > 0.0 {
            let wx: f64 = rng.sample::<f64, _>(StandardNormal) * self.sigma_s;
            let wy: f64 = rng.sample::<f64, _>(StandardNormal) * self.sigma_s;
            let half_dt2 = self.dt * self.dt / 2.0;
            next.x += half_dt2 * wx;
            next.vx += self.dt * wx;
            next.y += half_dt2 * wy;
            next.vy += self.dt * wy;
        }
        next
    }

    /// Per-component standard deviation of one step's noise, `[pos, vel]`.
    pub fn noise_std(&self) -> (f64, f64) {
        (self.dt * self.dt / 2.0 * self.sigma_s, self.dt * self.sigma_s)
    }
}

/// `|alpha| = kappa / R^2`: RCS and two-way path loss folded into one constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarEquationMap {
    pub kappa: f64,
}

impl RadarEquationMap {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(crate::error::invalid(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Self { kappa })
    }

    pub fn magnitude_at_range(&self, range: f64) -> Result<f64> {
        if !(range > 0.0) {
            return Err(Error::ZeroRange);
        }
        Ok(self.kappa / (range * range))
    }

    pub fn magnitude(&self, s: &TargetState) -> Result<f64> {
        self.magnitude_at_range(s.range())
    }

    /// Inverse map: the range at which the amplitude magnitude equals `mag`.
    pub fn range_for_magnitude(&self, mag: f64) -> f64 {
        (self.kappa / mag).sqrt()
    }

    /// Complex amplitude with uniformly random phase on `(0, 2*pi)`.
    pub fn amplitude<R: Rng + ?Sized>(&self, s: &TargetState, rng: &mut R) -> Result<Complex64> {
        let mag = self.magnitude(s)?;
        let phase = rng.random::<f64>() * 2.0 * PI;
        Ok(Complex64::from_polar(mag, phase))
    }

    /// Per-virtual-channel SNR `|alpha|^2 / sigma_c^2` in dB at `range`.
    pub fn snr_db_at(&self, range: f64, sigma_c: f64) -> Result<f64> {
        let mag = self.magnitude_at_range(range)?;
        Ok(20.0 * (mag / sigma_c).log10())
    }
}

/// `kappa` such that the per-channel SNR at range `r0` equals `snr_db`.
pub fn calibrate_kappa(snr_db: f64, r0: f64, sigma_c: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::ZeroRange);
    }
    if !(sigma_c > 0.0) {
        return Err(crate::error::invalid("sigma_c must be positive"));
    }
    Ok(r0 * r0 * sigma_c * 10f64.powf(snr_db / 20.0))
}
