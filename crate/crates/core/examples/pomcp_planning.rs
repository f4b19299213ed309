//! Plan the next angle bin for one target whose belief straddles a bin edge,
//! and show the root statistics of the search tree.

use cogradar::array::AngleGrid;
use cogradar::detection::threshold_for;
use cogradar::planner::{BeliefSet, GeneratorState, Planner, SearchConfig};
use cogradar::rng::stream;
use cogradar::scenario::{MotionModel, RadarEquationMap, TargetState};

fn main() -> cogradar::Result<()> {
    let grid = AngleGrid::new(20)?;
    let motion = MotionModel::new(3.0, 0.0023)?;
    let radar = RadarEquationMap::new(4000.0)?;
    let generator = GeneratorState::new(0.05, motion, radar, threshold_for(1e-2)?, grid)?;

    // 70 % of the mass just below the bin 12 / 13 edge, 30 % just above it
    let (_, edge) = grid.edges_deg(12);
    let mut rng = stream(5, 0);
    let particles: Vec<TargetState> = (0..2000)
        .map(|i| {
            let theta = if i % 10 < 7 { edge - 1.5 } else { edge + 1.5 }.to_radians();
            let r = 55.0 + (i % 50) as f64 * 0.2;
            TargetState { x: r * theta.cos(), vx: 0.0, y: r * theta.sin(), vy: 0.0 }
        })
        .collect();
    let belief = BeliefSet::new(1, particles)?;

    let mut planner = Planner::new(grid.len(), SearchConfig::new(2000, std::f64::consts::SQRT_2));
    let best = planner.plan(&belief, &generator, &mut rng);
    println!("chosen bin: {} ({:.1} deg)", best.0, grid.center_deg(best.0));
    println!("tree nodes: {}", planner.tree().len());
    println!("{:>4} {:>8} {:>8}", "bin", "visits", "Q");
    for a in planner.ranked_actions().iter().take(5) {
        let s = planner.tree().root().actions[a.0];
        println!("{:>4} {:>8} {:>8.4}", a.0, s.visits, s.value);
    }
    Ok(())
}
