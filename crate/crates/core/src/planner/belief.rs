use rand::Rng;
use rand_distr::StandardNormal;

use super::generator::{Action, GeneratorState};
use crate::array::AngleGrid;
use crate::detection::Observation;
use crate::error::{invalid, Result};
use crate::scenario::{MotionModel, TargetState};

/// Unweighted particle approximation of one target's posterior.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefSet {
    pub target_id: usize,
    particles: Vec<TargetState>,
}

impl BeliefSet {
    pub fn new(target_id: usize, particles: Vec<TargetState>) -> Result<Self> {
        if particles.is_empty() {
            return Err(invalid("belief needs at least one particle"));
        }
        Ok(Self { target_id, particles })
    }

    pub fn particles(&self) -> &[TargetState] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &TargetState {
        &self.particles[rng.random_range(0..self.particles.len())]
    }

    /// Particle mean, the state estimate.
    pub fn mean(&self) -> TargetState {
        let mut acc = [0.0; 4];
        for p in &self.particles {
            for (a, v) in acc.iter_mut().zip(p.as_array()) {
                *a += v;
            }
        }
        let n = self.particles.len() as f64;
        TargetState::from_array(acc.map(|a| a / n))
    }

    /// Trace of the sample covariance of the positions.
    pub fn position_spread(&self) -> f64 {
        let m = self.mean();
        let n = self.particles.len() as f64;
        self.particles
            .iter()
            .map(|p| (p.x - m.x).powi(2) + (p.y - m.y).powi(2))
            .sum::<f64>()
            / n
    }

    pub fn mean_bin(&self, grid: &AngleGrid) -> Option<usize> {
        grid.bin_of_state(&self.mean()).ok()
    }

    /// Pure motion propagation of every particle.
    pub fn propagate<R: Rng + ?Sized>(&self, motion: &MotionModel, rng: &mut R) -> Self {
        Self {
            target_id: self.target_id,
            particles: self.particles.iter().map(|p| motion.step(p, rng)).collect(),
        }
    }
}

/// Rejection-based belief update.
///
/// Particles drawn from the current belief are pushed through the generator
/// with `action` and kept when their discretized observation equals `obs` and
/// they stay in the field of view. Up to `rejection_factor * n_particles`
/// draws are made; a shortfall is filled by jittered copies of the survivors.
///
/// When no draw survives, either the model's detection probability is off or
/// the observation ruled out the predicted cloud. Half the new belief then
/// comes from [`reinvigorate`], which proposes states consistent with the
/// observation, and the rest is the motion-model prediction.
pub fn update_belief<R: Rng + ?Sized>(
    belief: &BeliefSet,
    action: Action,
    obs: &Observation,
    generator: &GeneratorState,
    n_particles: usize,
    rejection_factor: usize,
    rng: &mut R,
) -> BeliefSet {
    let key = obs.key();
    let budget = rejection_factor.max(1) * n_particles;
    let mut kept = Vec::with_capacity(n_particles);
    for _ in 0..budget {
        if kept.len() == n_particles {
            break;
        }
        let s = belief.sample(rng);
        let tr = generator.generate(s, action, rng);
        if tr.true_bin.is_some() && tr.observation.key() == key {
            kept.push(tr.state);
        }
    }

    if kept.is_empty() {
        let grid = &generator.grid;
        let mut particles = reinvigorate(belief, action, obs, generator, budget, n_particles / 2, rng);
        // predictions outside the field of view are kept only once `budget` tries are spent
        let mut tries = 0;
        while particles.len() < n_particles {
            let p = generator.motion.step(belief.sample(rng), rng);
            tries += 1;
            if tries > budget || grid.bin_of_state(&p).is_ok() {
                particles.push(p);
            }
        }
        return BeliefSet { target_id: belief.target_id, particles };
    }
    refill(belief.target_id, kept, n_particles, &generator.motion, rng)
}

/// Rejection sampling from an observation-driven proposal.
///
/// After an empty look each predicted particle is moved by [`hop_angle`] away
/// from the looked bin. After a detection, a predicted angle outside the
/// looked bin is redrawn inside it, and a predicted range outside the
/// radar-equation inverse of `|a| +/- 3 sigma` is redrawn inside that band.
/// Velocities rotate with the position. Proposals pass the same observation
/// test.
pub fn reinvigorate<R: Rng + ?Sized>(
    belief: &BeliefSet,
    action: Action,
    obs: &Observation,
    generator: &GeneratorState,
    budget: usize,
    n_particles: usize,
    rng: &mut R,
) -> Vec<TargetState> {
    let key = obs.key();
    let grid = &generator.grid;
    let (lo, hi) = grid.edges_deg(action.0);
    let range_band = match *obs {
        Observation::Detected { raw_mag, sigma_hat, .. } if raw_mag > 3.0 * sigma_hat => Some((
            generator.radar.range_for_magnitude(raw_mag + 3.0 * sigma_hat),
            generator.radar.range_for_magnitude(raw_mag - 3.0 * sigma_hat),
        )),
        _ => None,
    };
    let mut kept = Vec::with_capacity(n_particles);
    for _ in 0..budget {
        if kept.len() == n_particles {
            break;
        }
        let predicted = generator.motion.step(belief.sample(rng), rng);
        let (angle, range) = match obs {
            Observation::Empty => (hop_angle(grid, action.0, rng), predicted.range()),
            Observation::Detected { .. } => {
                let angle = match predicted.angle_deg() {
                    a if (lo..hi).contains(&a) => a,
                    _ => rng.random_range(lo..hi),
                };
                let range = match range_band {
                    Some((near, far)) if !(near..=far).contains(&predicted.range()) => {
                        rng.random_range(near..=far)
                    }
                    _ => predicted.range(),
                };
                (angle, range)
            }
        };
        let proposal = place(&predicted, angle, range);
        let tr = generator.observe(proposal, action, rng);
        if tr.true_bin.is_some() && tr.observation.key() == key {
            kept.push(tr.state);
        }
    }
    kept
}

/// Uniform angle in the bin `d` bins to either side of `bin`, with
/// `P(d) = 2^-d` for `d >= 1`. The result can lie outside the field of view.
pub fn hop_angle<R: Rng + ?Sized>(grid: &AngleGrid, bin: usize, rng: &mut R) -> f64 {
    let mut hops = 1.0;
    while rng.random::<bool>() {
        hops += 1.0;
    }
    let side = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let (lo, hi) = grid.edges_deg(bin);
    rng.random_range(lo..hi) + side * hops * grid.width_deg()
}

/// Search prior for a track that stopped producing detections: each particle
/// independently, with probability 1/2, moves to [`hop_angle`] of its own
/// bin, keeping range and rotating velocity. Hops that leave the field of
/// view leave the particle in place.
pub fn spread<R: Rng + ?Sized>(belief: &BeliefSet, grid: &AngleGrid, rng: &mut R) -> BeliefSet {
    let particles = belief
        .particles
        .iter()
        .map(|p| {
            let Ok(bin) = grid.bin_of_state(p) else { return *p };
            if rng.random::<bool>() {
                return *p;
            }
            let angle = hop_angle(grid, bin, rng);
            if grid.bin_of_angle(angle).is_ok() { place(p, angle, p.range()) } else { *p }
        })
        .collect();
    BeliefSet { target_id: belief.target_id, particles }
}

/// `s` moved to polar position `(range, angle)` with its velocity rotated by
/// the same angle change.
fn place(s: &TargetState, angle_deg: f64, range: f64) -> TargetState {
    let turn = (angle_deg - s.angle_deg()).to_radians();
    let (sin, cos) = turn.sin_cos();
    let (sa, ca) = angle_deg.to_radians().sin_cos();
    TargetState {
        x: range * ca,
        vx: cos * s.vx - sin * s.vy,
        y: range * sa,
        vy: sin * s.vx + cos * s.vy,
    }
}

fn refill<R: Rng + ?Sized>(
    target_id: usize,
    mut particles: Vec<TargetState>,
    n_particles: usize,
    motion: &MotionModel,
    rng: &mut R,
) -> BeliefSet {
    let (pos_std, vel_std) = motion.noise_std();
    let survivors = particles.len();
    while particles.len() < n_particles {
        let base = particles[rng.random_range(0..survivors)];
        let mut jitter = |std: f64| -> f64 {
            if std > 0.0 {
                std * rng.sample::<f64, _>(StandardNormal)
            } else {
                0.0
            }
        };
        particles.push(TargetState {
            x: base.x + jitter(pos_std),
            vx: base.vx + jitter(vel_std),
            y: base.y + jitter(pos_std),
            vy: base.vy + jitter(vel_std),
        });
    }
    particles.truncate(n_particles);
    BeliefSet { target_id, particles }
}

/// Predicted next-state mean `(1/|B|) sum A s`.
pub fn predict_mean(belief: &BeliefSet, motion: &MotionModel) -> TargetState {
    motion.propagate(&belief.mean())
}
