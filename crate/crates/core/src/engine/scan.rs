use rand::Rng;

use super::environment::{Abort, Environment};
use crate::array::AngleGrid;
use crate::detection::DetectionOutcome;
use crate::error::Result;
use crate::planner::{BeliefSet, GeneratorState};
use crate::rng::SimRng;
use crate::scenario::{RadarEquationMap, ScenarioConfig, TargetState};
use crate::waveform::orthogonal_waveform;

/// Belief and generator for a target once the scan has detected it.
#[derive(Debug, Clone)]
pub struct Acquisition {
    pub belief: BeliefSet,
    pub generator: GeneratorState,
    /// Environment time of the acquiring dwell.
    pub t: usize,
}

/// One orthogonal dwell of the initial scan.
#[derive(Debug, Clone)]
pub struct ScanDwell {
    /// Environment time after the dwell's motion step.
    pub t: usize,
    pub truth: Vec<TargetState>,
    pub outcomes: Vec<DetectionOutcome>,
    pub estimates: Vec<Option<TargetState>>,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub acquisitions: Vec<Option<Acquisition>>,
    pub dwells: Vec<ScanDwell>,
    pub failure: Option<Abort>,
}

impl ScanResult {
    pub fn complete(&self) -> bool {
        self.failure.is_none() && self.acquisitions.iter().all(Option::is_some)
    }
}

/// Particles consistent with a first detection in `bin`.
///
/// Angle is uniform in the bin; range is uniform over the radar-equation
/// inverse of `[|a| - 3 sigma, |a| + 3 sigma]`, capped at `max_range`;
/// velocity is uniform in `[-v_max, v_max]^2`.
#[allow(clippy::too_many_arguments)]
pub fn initial_belief<R: Rng + ?Sized>(
    target_id: usize,
    bin: usize,
    raw_mag: f64,
    sigma_hat: f64,
    radar: &RadarEquationMap,
    grid: &AngleGrid,
    v_max: f64,
    max_range: f64,
    n_particles: usize,
    rng: &mut R,
) -> Result<BeliefSet> {
    let (lo_deg, hi_deg) = grid.edges_deg(bin);
    let r_near = radar.range_for_magnitude(raw_mag + 3.0 * sigma_hat).min(max_range);
    let far_mag = raw_mag - 3.0 * sigma_hat;
    let r_far = if far_mag > 0.0 { radar.range_for_magnitude(far_mag).min(max_range) } else { max_range };
    let r_far = r_far.max(r_near);
    let particles = (0..n_particles)
        .map(|_| {
            let theta = rng.random_range(lo_deg..hi_deg).to_radians();
            let r = if r_far > r_near { rng.random_range(r_near..r_far) } else { r_near };
            let (vx, vy) = if v_max > 0.0 {
                (rng.random_range(-v_max..=v_max), rng.random_range(-v_max..=v_max))
            } else {
                (0.0, 0.0)
            };
            TargetState { x: r * theta.cos(), vx, y: r * theta.sin(), vy }
        })
        .collect();
    BeliefSet::new(target_id, particles)
}

/// Orthogonal scan until every target is detected at least once.
///
/// Each dwell advances the environment one step and tests every target at its
/// true bin. Acquired targets keep their beliefs propagated by pure motion
/// until the last target is acquired.
pub fn initial_scan(
    env: &mut Environment,
    cfg: &ScenarioConfig,
    env_rng: &mut SimRng,
    target_rngs: &mut [SimRng],
) -> Result<ScanResult> {
    let m_targets = env.targets.len();
    let w = orthogonal_waveform(env.n_t, cfg.p_t)?;
    let mut acquisitions: Vec<Option<Acquisition>> = vec![None; m_targets];
    let mut dwells = Vec::new();
    let mut failure = None;

    for _ in 0..cfg.max_scan_dwells {
        if acquisitions.iter().all(Option::is_some) {
            break;
        }
        if env.t >= cfg.t_max {
            break;
        }
        for (m, acq) in acquisitions.iter_mut().enumerate() {
            if let Some(a) = acq {
                a.belief = a.belief.propagate(&env.motion, &mut target_rngs[m]);
            }
        }
        if let Err(abort) = env.advance(env_rng) {
            failure = Some(abort);
            break;
        }
        let bins: Vec<usize> = (0..m_targets).map(|m| env.true_bin(m).expect("checked by advance")).collect();
        let outcomes = env.measure(&w, &bins, env_rng)?;
        for (m, o) in outcomes.iter().enumerate() {
            if acquisitions[m].is_none() && o.detected {
                let belief = initial_belief(
                    m + 1,
                    o.bin,
                    o.alpha_hat.norm(),
                    o.sigma_hat,
                    &env.radars[m],
                    &env.grid,
                    cfg.v_max,
                    cfg.max_range,
                    cfg.planner.n_particles,
                    &mut target_rngs[m],
                )?;
                let generator =
                    GeneratorState::new(o.sigma_hat, env.motion, env.radars[m], env.threshold, env.grid)?;
                acquisitions[m] = Some(Acquisition { belief, generator, t: env.t });
            }
        }
        let estimates = acquisitions.iter().map(|a| a.as_ref().map(|a| a.belief.mean())).collect();
        dwells.push(ScanDwell { t: env.t, truth: env.targets.clone(), outcomes, estimates });
    }

    if failure.is_none() && acquisitions.iter().any(Option::is_none) {
        failure = Some(Abort::FailedToAcquire { dwells: dwells.len() });
    }
    Ok(ScanResult { acquisitions, dwells, failure })
}
