use rand::Rng;
use std::fmt;

use crate::array::{virtual_vector, AngleGrid};
use crate::detection::{estimate_alpha, sample_alpha_hat, sigma_hat, DetectionOutcome, Disturbance};
use crate::error::Result;
use crate::scenario::{EnvironmentMode, MotionModel, RadarEquationMap, ScenarioConfig, TargetState};
use crate::waveform::WaveformSpec;
use num_complex::Complex64;

/// Why an episode stopped early.
#[derive(Debug, Clone, PartialEq)]
pub enum Abort {
    LeftFieldOfView { target_id: usize, t: usize },
    BinCollision { first: usize, second: usize, bin: usize, t: usize },
    FailedToAcquire { dwells: usize },
    Numerical(String),
}

impl fmt::Display for Abort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Abort::LeftFieldOfView { target_id, t } => {
                write!(f, "target {target_id} left field of view at t={t}")
            }
            Abort::BinCollision { first, second, bin, t } => {
                write!(f, "targets {first} and {second} share bin {bin} at t={t}")
            }
            Abort::FailedToAcquire { dwells } => {
                write!(f, "failed to acquire all targets within {dwells} dwells")
            }
            Abort::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<crate::Error> for Abort {
    fn from(e: crate::Error) -> Self {
        Abort::Numerical(e.to_string())
    }
}

/// Ground truth and the measurement channel.
#[derive(Debug, Clone)]
pub struct Environment {
    pub targets: Vec<TargetState>,
    /// Number of motion steps taken since the start.
    pub t: usize,
    pub disturbance: Disturbance,
    pub mode: EnvironmentMode,
    pub motion: MotionModel,
    pub radars: Vec<RadarEquationMap>,
    pub grid: AngleGrid,
    pub n_t: usize,
    pub n_r: usize,
    pub threshold: f64,
}

impl Environment {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        Ok(Self {
            targets: cfg.targets.iter().map(|t| t.initial_state).collect(),
            t: 0,
            disturbance: cfg.disturbance()?,
            mode: cfg.mode,
            motion: cfg.motion()?,
            radars: cfg.radar_maps()?,
            grid: cfg.grid()?,
            n_t: cfg.n_t,
            n_r: cfg.n_r,
            threshold: cfg.threshold()?,
        })
    }

    pub fn true_bin(&self, m: usize) -> Option<usize> {
        self.grid.bin_of_state(&self.targets[m]).ok()
    }

    /// Advances every target one step and checks the scenario assumptions.
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) -> std::result::Result<(), Abort> {
        for s in self.targets.iter_mut() {
            *s = self.motion.step(s, rng);
        }
        self.t += 1;
        let mut bins = Vec::with_capacity(self.targets.len());
        for m in 0..self.targets.len() {
            let bin = self.true_bin(m).ok_or(Abort::LeftFieldOfView { target_id: m + 1, t: self.t })?;
            if let Some(first) = bins.iter().position(|&b| b == bin) {
                return Err(Abort::BinCollision { first: first + 1, second: m + 1, bin, t: self.t });
            }
            bins.push(bin);
        }
        Ok(())
    }

    /// Per-channel SNR of target `m` at its current range, dB.
    pub fn snr_db(&self, m: usize) -> f64 {
        self.radars[m]
            .snr_db_at(self.targets[m].range(), self.disturbance.sigma_c())
            .unwrap_or(f64::NEG_INFINITY)
    }

    /// Tests each target's chosen bin under waveform `w`.
    ///
    /// A target contributes its amplitude only when its chosen bin is its true
    /// bin; otherwise the bin holds disturbance alone.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        w: &WaveformSpec,
        chosen: &[usize],
        rng: &mut R,
    ) -> Result<Vec<DetectionOutcome>> {
        chosen
            .iter()
            .enumerate()
            .map(|(m, &bin)| {
                let theta = self.grid.center_deg(bin);
                let v = virtual_vector(&w.w, theta, self.n_r);
                let sigma = sigma_hat(&v, &self.disturbance)?;
                let alpha = if self.true_bin(m) == Some(bin) {
                    self.radars[m].amplitude(&self.targets[m], rng)?
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let alpha_hat = match self.mode {
                    EnvironmentMode::Analytic => sample_alpha_hat(alpha, sigma, rng),
                    EnvironmentMode::Signal => {
                        let c = self.disturbance.sample(v.len(), rng);
                        let y: Vec<Complex64> = v.iter().zip(&c).map(|(vi, ci)| alpha * vi + ci).collect();
                        estimate_alpha(&v, &y)?
                    }
                };
                Ok(DetectionOutcome::new(alpha_hat, sigma, self.threshold, bin))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::waveform::{orthogonal_waveform, uniform_waveform};

    fn small_config() -> ScenarioConfig {
        let mut cfg = ScenarioConfig::desk();
        cfg.n_t = 6;
        cfg.n_r = 5;
        cfg.p_fa = 1e-2;
        cfg
    }

    #[test]
    fn missed_bin_fires_at_false_alarm_rate() {
        let env = Environment::from_config(&small_config()).unwrap();
        let w = orthogonal_waveform(6, 1.0).unwrap();
        let wrong: Vec<usize> = (0..3).map(|m| (env.true_bin(m).unwrap() + 2) % 20).collect();
        let mut rng = stream(61, 0);
        let n = 50_000;
        let mut hits = 0;
        for _ in 0..n {
            hits += env.measure(&w, &wrong, &mut rng).unwrap().iter().filter(|o| o.detected).count();
        }
        let rate = hits as f64 / (3 * n) as f64;
        assert!((rate - 1e-2).abs() < 4.0 * (1e-2 / (3 * n) as f64).sqrt(), "{rate}");
    }

    #[test]
    fn signal_mode_estimate_variance() {
        let mut cfg = small_config();
        cfg.mode = EnvironmentMode::Signal;
        cfg.sigma_c = 1.5;
        let env = Environment::from_config(&cfg).unwrap();
        let w = orthogonal_waveform(6, 1.0).unwrap();
        let bins = [(env.true_bin(0).unwrap() + 5) % 20, env.true_bin(1).unwrap(), env.true_bin(2).unwrap()];
        let v = virtual_vector(&w.w, env.grid.center_deg(bins[0]), 5);
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let mut rng = stream(62, 0);
        let n = 100_000;
        let var = (0..n)
            .map(|_| env.measure(&w, &bins, &mut rng).unwrap()[0].alpha_hat.norm_sqr())
            .sum::<f64>()
            / n as f64;
        let expected = 1.5 * 1.5 / norm2;
        assert!((var / expected - 1.0).abs() < 0.02, "{var} vs {expected}");
    }

    #[test]
    fn concentrated_beam_raises_statistic() {
        let cfg = small_config();
        let env = Environment::from_config(&cfg).unwrap();
        let bins: Vec<usize> = (0..3).map(|m| env.true_bin(m).unwrap()).collect();
        let ort = orthogonal_waveform(6, 1.0).unwrap();
        let uni = uniform_waveform(&bins, &env.grid, 6, 1.0).unwrap();
        let mut rng = stream(63, 0);
        let n = 20_000;
        let mean_snr = |w: &WaveformSpec, rng: &mut crate::rng::SimRng| {
            (0..n)
                .map(|_| {
                    let o = env.measure(w, &bins, rng).unwrap()[1];
                    o.lambda_stat / 2.0 - 1.0
                })
                .sum::<f64>()
                / n as f64
        };
        let gain = mean_snr(&uni, &mut rng) / mean_snr(&ort, &mut rng);
        // beampattern ratio at the target bin (about N_T p_k / P_T)
        let theta = env.grid.center_deg(bins[1]);
        let expected = uni.beampattern(theta) / ort.beampattern(theta);
        assert!((gain / expected - 1.0).abs() < 0.05, "{gain} vs {expected}");
        assert!((expected - 6.0 / 3.0).abs() < 0.5);
    }

    #[test]
    fn collision_aborts() {
        let mut cfg = small_config();
        cfg.sigma_s = 0.0;
        let mut env = Environment::from_config(&cfg).unwrap();
        env.targets[1] = TargetState { x: env.targets[0].x * 1.01, y: env.targets[0].y * 1.01, ..env.targets[0] };
        let err = env.advance(&mut stream(64, 0)).unwrap_err();
        assert!(matches!(err, Abort::BinCollision { first: 1, second: 2, .. }));
    }

    #[test]
    fn fov_exit_aborts() {
        let cfg = small_config();
        let mut env = Environment::from_config(&cfg).unwrap();
        env.targets[2] = TargetState { x: 0.01, vx: -1.0, y: 60.0, vy: 0.0 };
        let err = env.advance(&mut stream(65, 0)).unwrap_err();
        assert_eq!(err, Abort::LeftFieldOfView { target_id: 3, t: 1 });
    }
}
