//! Compare the three transmit strategies for three targets at different
//! predicted ranges: per-target power, beampattern, and the weighted
//! beampattern `delta_k * B(theta_k)` that the power-aware design equalizes.

use cogradar::array::AngleGrid;
use cogradar::scenario::TargetState;
use cogradar::waveform::{
    orthogonal_waveform, power_aware_waveform, predict_delta, uniform_waveform, weighted_beampatterns, TargetWeight,
};

fn main() -> cogradar::Result<()> {
    let grid = AngleGrid::new(20)?;
    let (n_t, p_t) = (20, 1.0);
    let predicted = [
        TargetState::new(30.0, 0.0, -60.0, 0.0)?,
        TargetState::new(90.0, 0.0, 25.0, 0.0)?,
        TargetState::new(10.0, 0.0, 60.0, 0.0)?,
    ];
    let bins: Vec<usize> = predicted.iter().map(|s| grid.bin_of_state(s)).collect::<Result<_, _>>()?;
    let weights: Vec<TargetWeight> = predicted
        .iter()
        .zip(&bins)
        .map(|(s, &b)| Ok(TargetWeight { theta_deg: grid.center_deg(b), delta: predict_delta(s)? }))
        .collect::<cogradar::Result<_>>()?;

    let designs = [
        orthogonal_waveform(n_t, p_t)?,
        uniform_waveform(&bins, &grid, n_t, p_t)?,
        power_aware_waveform(&weights, n_t, p_t)?,
    ];

    println!("targets:");
    for (m, (s, w)) in predicted.iter().zip(&weights).enumerate() {
        println!("  {}: range {:6.1} km  bin {:2}  theta {:6.1} deg", m + 1, s.range(), bins[m], w.theta_deg);
    }
    for d in &designs {
        let weighted = weighted_beampatterns(d, &weights);
        let worst = weighted.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("\n{} (trace {:.12})", d.strategy, d.trace());
        for (m, w) in weights.iter().enumerate() {
            println!(
                "  target {}: power {:.4}  B(theta) {:8.4}  delta*B {:.3e}",
                m + 1,
                d.allocated_power(m),
                d.beampattern(w.theta_deg),
                weighted[m]
            );
        }
        println!("  min weighted beampattern {worst:.3e}");
    }
    Ok(())
}
