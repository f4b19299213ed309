//! Monte-Carlo comparison of orthogonal, uniform and power-aware transmission
//! on the desk-scale scenario. Usage: `strategy_comparison [runs] [seed]`.

use cogradar::engine::{run_monte_carlo, summary_table, summary_table_header};
use cogradar::scenario::ScenarioConfig;
use cogradar::waveform::Strategy;

fn main() -> cogradar::Result<()> {
    let mut args = std::env::args().skip(1);
    let runs: usize = args.next().map_or(4, |a| a.parse().expect("runs"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let base = ScenarioConfig { seed, ..ScenarioConfig::desk() };
    println!("desk scenario, {runs} runs per strategy, final-quarter averages");
    println!("{}", summary_table_header());
    for strategy in Strategy::ALL {
        let cfg = ScenarioConfig { strategy, ..base.clone() };
        let result = run_monte_carlo(&cfg, runs)?;
        print!("{}", summary_table(strategy.as_str(), &result.summary, cfg.t_max, cfg.num_targets()));
        for (run, reason) in result.failures() {
            println!("  run {run}: {reason}");
        }
    }
    Ok(())
}
