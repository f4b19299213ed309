use serde::{Deserialize, Serialize};
use std::path::Path;

use super::{calibrate_kappa, MotionModel, RadarEquationMap, TargetState};
use crate::array::AngleGrid;
use crate::detection::{threshold_for, Disturbance};
use crate::error::{Error, Result};
use crate::waveform::Strategy;

/// One target: initial state plus exactly one of `snr_db` (per-channel SNR at
/// the initial range, from which kappa is calibrated) or an explicit `kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub initial_state: TargetState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum DisturbanceConfig {
    #[default]
    White,
    /// Real AR(1) correlation `rho^|i-j|` across the virtual channels.
    Ar1 { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvironmentMode {
    /// Draw the amplitude estimate from its asymptotic complex-Gaussian law.
    #[default]
    Analytic,
    /// Synthesize the full virtual-array return and estimate the amplitude from it.
    Signal,
}

impl std::str::FromStr for EnvironmentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "signal" => Ok(Self::Signal),
            other => Err(crate::error::invalid(format!("unknown environment mode `{other}`"))),
        }
    }
}

fn default_discount() -> f64 {
    0.95
}
fn default_rollout_depth() -> usize {
    5
}
fn default_true() -> bool {
    true
}
fn default_rejection_factor() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerConfig {
    pub n_sim: usize,
    pub n_particles: usize,
    pub c_ucb: f64,
    #[serde(default = "default_discount")]
    pub discount: f64,
    /// Search horizon in steps below the root (tree descent plus random rollout).
    #[serde(default = "default_rollout_depth")]
    pub rollout_depth: usize,
    /// Keep the subtree under the realized (action, observation) branch.
    #[serde(default = "default_true")]
    pub reuse_tree: bool,
    /// Rejection-sampling budget as a multiple of `n_particles`.
    #[serde(default = "default_rejection_factor")]
    pub rejection_factor: usize,
}

fn default_v_max() -> f64 {
    0.3
}
fn default_max_scan_dwells() -> usize {
    100
}
fn default_max_range() -> f64 {
    300.0
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub targets: Vec<TargetConfig>,
    pub dt: f64,
    pub t_max: usize,
    pub sigma_s: f64,
    #[serde(default = "default_v_max")]
    pub v_max: f64,
    pub n_t: usize,
    pub n_r: usize,
    pub l_theta: usize,
    pub p_t: f64,
    pub p_fa: f64,
    pub sigma_c: f64,
    #[serde(default)]
    pub disturbance: DisturbanceConfig,
    pub planner: PlannerConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub mode: EnvironmentMode,
    #[serde(default = "default_max_scan_dwells")]
    pub max_scan_dwells: usize,
    /// Upper range bound (km) for initial beliefs when the amplitude interval
    /// reaches zero.
    #[serde(default = "default_max_range")]
    pub max_range: f64,
}

/// Per-channel SNR offset that keeps output SNRs of a smaller array equal to
/// those of the 100 x 100 reference array: `10 log10(10^4 / (n_t n_r))`.
pub fn array_gain_offset_db(n_t: usize, n_r: usize) -> f64 {
    10.0 * (1.0e4 / (n_t * n_r) as f64).log10()
}

impl ScenarioConfig {
    /// Three-target scenario at full array scale.
    pub fn paper() -> Self {
        Self {
            targets: reference_targets(0.0),
            dt: 1.0,
            t_max: 350,
            sigma_s: 0.004,
            v_max: 0.3,
            n_t: 100,
            n_r: 100,
            l_theta: 100,
            p_t: 1.0,
            p_fa: 1e-4,
            sigma_c: 1.0,
            disturbance: DisturbanceConfig::White,
            planner: PlannerConfig {
                n_sim: 12_000,
                n_particles: 12_000,
                c_ucb: std::f64::consts::SQRT_2,
                discount: 0.95,
                rollout_depth: 5,
                reuse_tree: true,
                rejection_factor: 10,
            },
            seed: 0,
            strategy: Strategy::PowerAware,
            mode: EnvironmentMode::Analytic,
            max_scan_dwells: 100,
            max_range: 300.0,
        }
    }

    /// Desk-scale variant: 20 x 20 array, 20 bins, 120 steps of 3 s (same
    /// 360 s geometry), initial SNRs raised by the array-gain ratio. The
    /// per-step noise std shrinks by `sqrt(dt)` so velocity diffusion over the
    /// horizon matches the 1 s reference.
    pub fn desk() -> Self {
        let mut cfg = Self::paper();
        cfg.n_t = 20;
        cfg.n_r = 20;
        cfg.l_theta = 20;
        cfg.t_max = 120;
        cfg.dt = 3.0;
        cfg.sigma_s = 0.004 / 3f64.sqrt();
        cfg.p_fa = 1e-2;
        cfg.planner.n_sim = 2000;
        cfg.planner.n_particles = 2000;
        cfg.targets = reference_targets(array_gain_offset_db(20, 20));
        cfg
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Parse without semantic validation. Parse errors carry line and column.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigRead {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|source| Error::ConfigParse {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn num_targets(&self) -> usize {
        self.targets.len()
    }

    pub fn motion(&self) -> Result<MotionModel> {
        MotionModel::new(self.dt, self.sigma_s)
    }

    pub fn grid(&self) -> Result<AngleGrid> {
        AngleGrid::new(self.l_theta)
    }

    pub fn threshold(&self) -> Result<f64> {
        threshold_for(self.p_fa)
    }

    pub fn disturbance(&self) -> Result<Disturbance> {
        match self.disturbance {
            DisturbanceConfig::White => Disturbance::white(self.sigma_c),
            DisturbanceConfig::Ar1 { rho } => Disturbance::ar1(self.sigma_c, rho),
        }
    }

    /// Radar-equation maps, one per target.
    pub fn radar_maps(&self) -> Result<Vec<RadarEquationMap>> {
        self.targets
            .iter()
            .map(|t| {
                let kappa = match (t.snr_db, t.kappa) {
                    (Some(snr), None) => {
                        calibrate_kappa(snr, t.initial_state.range(), self.sigma_c)?
                    }
                    (None, Some(k)) => k,
                    _ => {
                        return Err(crate::error::invalid(
                            "each target needs exactly one of snr_db or kappa",
                        ))
                    }
                };
                RadarEquationMap::new(kappa)
            })
            .collect()
    }

    /// Every violated rule, each prefixed with its rule name. Empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let m = self.targets.len();
        if m == 0 {
            v.push("target-count: at least one target is required".to_string());
        }
        for (name, value) in [
            ("n_t", self.n_t),
            ("n_r", self.n_r),
            ("l_theta", self.l_theta),
            ("t_max", self.t_max),
            ("planner.n_sim", self.planner.n_sim),
            ("planner.n_particles", self.planner.n_particles),
            ("max_scan_dwells", self.max_scan_dwells),
        ] {
            if value == 0 {
                v.push(format!("positive-counts: {name} must be positive"));
            }
        }
        if self.l_theta < m {
            v.push(format!("bins-per-target: l_theta = {} < {m} targets", self.l_theta));
        }
        if self.n_t < m {
            v.push(format!("beams-per-target: n_t = {} < {m} targets", self.n_t));
        }
        if !(self.p_fa > 0.0 && self.p_fa < 1.0) {
            v.push(format!("false-alarm-range: p_fa = {} not in (0, 1)", self.p_fa));
        }
        if !(self.p_t > 0.0 && self.p_t.is_finite()) {
            v.push(format!("power-positive: p_t = {} must be positive", self.p_t));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            v.push(format!("time-step-positive: dt = {}", self.dt));
        }
        if !(self.sigma_s >= 0.0 && self.sigma_s.is_finite()) {
            v.push(format!("process-noise: sigma_s = {}", self.sigma_s));
        }
        if !(self.v_max >= 0.0 && self.v_max.is_finite()) {
            v.push(format!("v-max: v_max = {}", self.v_max));
        }
        if !(self.sigma_c > 0.0 && self.sigma_c.is_finite()) {
            v.push(format!("disturbance-std: sigma_c = {}", self.sigma_c));
        }
        if let DisturbanceConfig::Ar1 { rho } = self.disturbance {
            if !(rho.abs() < 1.0) {
                v.push(format!("ar1-coefficient: |rho| = {} must be < 1", rho.abs()));
            }
        }
        if !(self.max_range > 0.0) {
            v.push(format!("max-range: {}", self.max_range));
        }
        let p = &self.planner;
        if !(p.c_ucb >= 0.0 && p.c_ucb.is_finite()) {
            v.push(format!("exploration-constant: c_ucb = {}", p.c_ucb));
        }
        if !(p.discount > 0.0 && p.discount <= 1.0) {
            v.push(format!("discount-range: discount = {}", p.discount));
        }
        if p.rollout_depth == 0 {
            v.push("rollout-depth: must be at least 1".to_string());
        }
        if p.rejection_factor == 0 {
            v.push("rejection-factor: must be at least 1".to_string());
        }

        for (i, t) in self.targets.iter().enumerate() {
            let id = i + 1;
            if let Err(e) = t.initial_state.validate() {
                v.push(format!("valid-state: target {id}: {e}"));
            }
            match (t.snr_db, t.kappa) {
                (Some(snr), None) if !snr.is_finite() => {
                    v.push(format!("amplitude-calibration: target {id} snr_db not finite"))
                }
                (None, Some(k)) if !(k > 0.0 && k.is_finite()) => {
                    v.push(format!("amplitude-calibration: target {id} kappa must be positive"))
                }
                (Some(_), None) | (None, Some(_)) => {}
                _ => v.push(format!(
                    "amplitude-calibration: target {id} needs exactly one of snr_db or kappa"
                )),
            }
        }
        if !v.is_empty() {
            return v;
        }

        let grid = AngleGrid::new(self.l_theta).expect("l_theta checked");
        let motion = MotionModel::new(self.dt, 0.0).expect("dt checked");
        let mut bins: Vec<Option<usize>> = Vec::with_capacity(m);
        for (i, t) in self.targets.iter().enumerate() {
            let mut s = t.initial_state;
            let mut exit = None;
            for step in 0..=self.t_max {
                if s.range() <= 0.0 || grid.bin_of_state(&s).is_err() {
                    exit = Some((step, s.angle_deg()));
                    break;
                }
                s = motion.propagate(&s);
            }
            if let Some((step, angle)) = exit {
                v.push(format!(
                    "fov-containment: target {} leaves [-90, 90) deg at step {step} (angle {angle:.2} deg)",
                    i + 1
                ));
            }
            bins.push(grid.bin_of_state(&t.initial_state).ok());
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if let (Some(a), Some(b)) = (bins[i], bins[j]) {
                    if a == b {
                        v.push(format!(
                            "distinct-initial-bins: targets {} and {} share bin {a}",
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

fn reference_targets(snr_offset_db: f64) -> Vec<TargetConfig> {
    let target = |x, vx, y, vy, snr: f64| TargetConfig {
        initial_state: TargetState { x, vx, y, vy },
        snr_db: Some(snr + snr_offset_db),
        kappa: None,
    };
    vec![
        target(20.0, 0.05, -60.0, 0.01, -12.0),
        target(60.0, 0.20, 7.5, 0.10, -11.0),
        target(5.0, 0.05, 60.0, 0.01, -12.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        ScenarioConfig::paper().validate().unwrap();
        ScenarioConfig::desk().validate().unwrap();
    }

    #[test]
    fn paper_constants() {
        let c = ScenarioConfig::paper();
        assert_eq!(c.n_t * c.n_r, 10_000);
        assert_eq!(c.l_theta, 100);
        assert_eq!(c.p_t, 1.0);
        assert_eq!(c.p_fa, 1e-4);
        assert_eq!(c.sigma_s, 0.004);
        assert_eq!(c.planner.n_sim, 12_000);
        assert_eq!(c.planner.n_particles, 12_000);
        assert_eq!(c.planner.c_ucb, 2f64.sqrt());
        assert_eq!(c.targets[1].initial_state, TargetState { x: 60.0, vx: 0.2, y: 7.5, vy: 0.1 });
    }

    #[test]
    fn json_round_trip() {
        let c = ScenarioConfig::desk();
        let back = ScenarioConfig::from_json_str(&c.to_json_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut value: serde_json::Value =
            serde_json::from_str(&ScenarioConfig::desk().to_json_string()).unwrap();
        value["bogus"] = serde_json::json!(1);
        assert!(ScenarioConfig::from_json_str(&value.to_string()).is_err());
    }

    #[test]
    fn shared_bin_is_named() {
        let mut c = ScenarioConfig::desk();
        c.targets[1].initial_state = TargetState { x: 21.0, vx: 0.0, y: -61.0, vy: 0.0 };
        let v = c.violations();
        assert!(v.iter().any(|m| m.starts_with("distinct-initial-bins")), "{v:?}");
    }

    #[test]
    fn negative_x_is_outside_fov() {
        let mut c = ScenarioConfig::desk();
        c.targets[0].initial_state.x = -20.0;
        let v = c.violations();
        assert!(v.iter().any(|m| m.starts_with("fov-containment")), "{v:?}");
    }

    #[test]
    fn horizon_exit_detected() {
        let mut c = ScenarioConfig::desk();
        c.targets[2].initial_state.vx = -0.2;
        assert!(c.violations().iter().any(|m| m.contains("leaves")));
    }

    #[test]
    fn both_calibrations_rejected() {
        let mut c = ScenarioConfig::desk();
        c.targets[0].kappa = Some(1.0);
        assert!(c.violations().iter().any(|m| m.starts_with("amplitude-calibration")));
    }

    #[test]
    fn desk_preserves_output_snr() {
        let desk = ScenarioConfig::desk();
        let paper = ScenarioConfig::paper();
        let d = desk.radar_maps().unwrap();
        let p = paper.radar_maps().unwrap();
        for (a, b) in d.iter().zip(p.iter()) {
            let ratio = a.kappa.powi(2) * 400.0 / (b.kappa.powi(2) * 1.0e4);
            assert!((ratio - 1.0).abs() < 1e-12);
        }
    }
}
