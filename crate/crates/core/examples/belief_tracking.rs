//! Track one target with a particle belief: each step points the beam at the
//! most populated bin of the noiseless one-step prediction, draws a detection from the generator's own model,
//! and conditions the belief on the discretized observation.

use cogradar::array::AngleGrid;
use cogradar::detection::threshold_for;
use cogradar::engine::initial_belief;
use cogradar::planner::{update_belief, Action, BeliefSet, GeneratorState};
use cogradar::rng::stream;
use cogradar::scenario::{calibrate_kappa, MotionModel, RadarEquationMap, TargetState};

fn main() -> cogradar::Result<()> {
    let grid = AngleGrid::new(20)?;
    let motion = MotionModel::new(3.0, 0.0023)?;
    let mut truth = TargetState::new(60.0, 0.2, 7.5, 0.1)?;
    // 10 dB per-channel SNR at the start, spread of a 20 x 20 orthogonal look
    let radar = RadarEquationMap::new(calibrate_kappa(10.0, truth.range(), 1.0)?)?;
    let sigma = 1.0 / 20f64.sqrt();
    let generator = GeneratorState::new(sigma, motion, radar, threshold_for(1e-2)?, grid)?;

    let mut rng = stream(9, 0);
    let bin = grid.bin_of_state(&truth)?;
    let mag = radar.magnitude(&truth)?;
    let mut belief = initial_belief(1, bin, mag, sigma, &radar, &grid, 0.3, 300.0, 2000, &mut rng)?;

    println!("{:>4} {:>6} {:>6} {:>4} {:>10} {:>8}", "t", "bin", "beam", "det", "pos err", "spread");
    for t in 1..=30 {
        let beam = modal_bin(&belief, &motion, &grid).unwrap_or(bin);
        let tr = generator.generate(&truth, Action(beam), &mut rng);
        truth = tr.state;
        belief = update_belief(&belief, Action(beam), &tr.observation, &generator, 2000, 10, &mut rng);
        println!(
            "{t:>4} {:>6} {beam:>6} {:>4} {:>10.3} {:>8.3}",
            tr.true_bin.map_or("-".into(), |b| b.to_string()),
            tr.observation.is_detection() as u8,
            belief.mean().position_error(&truth),
            belief.position_spread().sqrt()
        );
    }
    Ok(())
}

fn modal_bin(belief: &BeliefSet, motion: &MotionModel, grid: &AngleGrid) -> Option<usize> {
    let mut counts = vec![0usize; grid.len()];
    for p in belief.particles() {
        if let Ok(b) = grid.bin_of_state(&motion.propagate(p)) {
            counts[b] += 1;
        }
    }
    (0..grid.len()).filter(|&b| counts[b] > 0).max_by_key(|&b| counts[b])
}
