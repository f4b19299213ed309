use num_complex::Complex64;
use rand::Rng;

use crate::array::AngleGrid;
use crate::detection::{sample_alpha_hat, step_size, wald_statistic, Observation};
use crate::error::{invalid, Result};
use crate::scenario::{MotionModel, RadarEquationMap, TargetState};

/// Angle bin chosen for one target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(pub usize);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub state: TargetState,
    pub observation: Observation,
    pub reward: f64,
    /// Bin of the next state, `None` once it left the field of view.
    pub true_bin: Option<usize>,
}

/// Black-box generator of one target's planner. Carries the amplitude spread
/// measured at that target's most recent detection.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorState {
    sigma_hat: f64,
    pub motion: MotionModel,
    pub radar: RadarEquationMap,
    pub threshold: f64,
    pub grid: AngleGrid,
}

impl GeneratorState {
    pub fn new(
        sigma_hat: f64,
        motion: MotionModel,
        radar: RadarEquationMap,
        threshold: f64,
        grid: AngleGrid,
    ) -> Result<Self> {
        check_sigma(sigma_hat)?;
        Ok(Self { sigma_hat, motion, radar, threshold, grid })
    }

    pub fn sigma_hat(&self) -> f64 {
        self.sigma_hat
    }

    pub fn beta(&self) -> f64 {
        step_size(self.sigma_hat)
    }

    pub fn num_actions(&self) -> usize {
        self.grid.len()
    }

    /// Replace the spread after a detection. Tree statistics are unaffected.
    pub fn refresh_sigma(&self, sigma_observed: f64) -> Result<Self> {
        check_sigma(sigma_observed)?;
        Ok(Self { sigma_hat: sigma_observed, ..self.clone() })
    }

    /// One simulated transition `(s', o, r)`.
    ///
    /// The observation is empty unless the chosen bin is the true next bin and
    /// the Wald statistic clears the threshold; the reward is the bin-hit
    /// indicator.
    pub fn generate<R: Rng + ?Sized>(&self, s: &TargetState, action: Action, rng: &mut R) -> Transition {
        let state = self.motion.step(s, rng);
        self.observe(state, action, rng)
    }

    /// Observation and reward for a target already at `state`.
    pub fn observe<R: Rng + ?Sized>(&self, state: TargetState, action: Action, rng: &mut R) -> Transition {
        let true_bin = self.grid.bin_of_state(&state).ok();
        let hit = true_bin == Some(action.0);
        let observation = if hit {
            let alpha = self
                .radar
                .amplitude(&state, rng)
                .unwrap_or(Complex64::new(0.0, 0.0));
            let alpha_hat = sample_alpha_hat(alpha, self.sigma_hat, rng);
            if wald_statistic(alpha_hat, self.sigma_hat) >= self.threshold {
                Observation::detected(alpha_hat.norm(), self.sigma_hat)
            } else {
                Observation::Empty
            }
        } else {
            Observation::Empty
        };
        Transition { state, observation, reward: if hit { 1.0 } else { 0.0 }, true_bin }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma_hat must be positive, got {sigma}")));
    }
    Ok(())
}
