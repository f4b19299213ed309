//! Closed-loop simulation: ground truth, the orthogonal acquisition scan,
//! per-target planning and tracking, and Monte-Carlo aggregation.
//!
//! Every run draws from independent streams derived from its seed: stream 0
//! drives the environment and stream `m` drives target `m`'s planner and
//! filter. Results therefore do not depend on thread scheduling.

mod environment;
mod metrics;
mod output;
mod scan;

pub use environment::{Abort, Environment};
pub use metrics::{summarize, window_mean, MetricsRecord, StepRecord, SummaryRow};
pub use output::{
    format_float, summary_table, summary_table_header, write_plot_script, write_steps_csv, write_summary_csv,
    STEPS_HEADER, SUMMARY_HEADER,
};
pub use scan::{initial_belief, initial_scan, Acquisition, ScanDwell, ScanResult};

use rayon::prelude::*;

use crate::detection::{DetectionOutcome, Observation};
use crate::error::Result;
use crate::planner::{predict_mean, spread, update_belief, Action, BeliefSet, GeneratorState, Planner, SearchConfig};
use crate::rng::{derive_seed, stream, SimRng};
use crate::scenario::{ScenarioConfig, TargetState};
use crate::waveform::{
    orthogonal_waveform, power_aware_waveform, predict_delta, uniform_waveform, Strategy, TargetWeight, WaveformSpec,
};

/// Planner, filter and generator of one tracked target.
#[derive(Debug, Clone)]
pub struct TargetTracker {
    pub belief: BeliefSet,
    pub generator: GeneratorState,
    pub planner: Planner,
    rng: SimRng,
    /// Consecutive looks without a detection.
    misses: usize,
}

/// Consecutive misses after which a track's belief is [`spread`] into a
/// search prior around its bins.
pub const LOST_TRACK_MISSES: usize = 3;

/// Result of all runs of one strategy.
#[derive(Debug, Clone)]
pub struct MonteCarloResult {
    pub strategy: Strategy,
    pub records: Vec<MetricsRecord>,
    pub summary: Vec<SummaryRow>,
}

impl MonteCarloResult {
    pub fn failures(&self) -> impl Iterator<Item = (usize, &str)> {
        self.records.iter().filter_map(|r| r.failure.as_deref().map(|f| (r.run_id, f)))
    }
}

/// Distinct bins: each target takes its planned bin unless an earlier target
/// already holds it, then its next best ranked bin.
pub fn resolve_bins(planned: &[Action], ranked: &[Vec<Action>], num_bins: usize) -> Vec<usize> {
    let mut taken = vec![false; num_bins];
    let mut chosen = Vec::with_capacity(planned.len());
    for (m, a) in planned.iter().enumerate() {
        let bin = std::iter::once(a.0)
            .chain(ranked[m].iter().map(|r| r.0))
            .chain(0..num_bins)
            .find(|&b| !taken[b])
            .expect("more bins than targets");
        taken[bin] = true;
        chosen.push(bin);
    }
    chosen
}

/// Waveform for the chosen bins under `strategy`.
pub fn design_waveform(
    cfg: &ScenarioConfig,
    strategy: Strategy,
    chosen: &[usize],
    beliefs: &[&BeliefSet],
) -> Result<WaveformSpec> {
    let grid = cfg.grid()?;
    match strategy {
        Strategy::Orthogonal => orthogonal_waveform(cfg.n_t, cfg.p_t),
        Strategy::Uniform => uniform_waveform(chosen, &grid, cfg.n_t, cfg.p_t),
        Strategy::PowerAware => {
            let motion = cfg.motion()?;
            let weights = chosen
                .iter()
                .zip(beliefs)
                .map(|(&bin, b)| {
                    Ok(TargetWeight {
                        theta_deg: grid.center_deg(bin),
                        delta: predict_delta(&predict_mean(b, &motion))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            power_aware_waveform(&weights, cfg.n_t, cfg.p_t)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn record_rows(
    record: &mut MetricsRecord,
    env: &Environment,
    t: usize,
    truth: &[TargetState],
    outcomes: &[DetectionOutcome],
    estimates: &[Option<TargetState>],
    chosen: Option<&[usize]>,
    w: &WaveformSpec,
) {
    for (m, o) in outcomes.iter().enumerate() {
        record.rows.push(StepRecord {
            run_id: record.run_id,
            t,
            target_id: m + 1,
            truth: truth[m],
            estimate: estimates[m],
            true_bin: env.grid.bin_of_state(&truth[m]).ok(),
            chosen_bin: chosen.map(|c| c[m]),
            detected: o.detected,
            lambda_stat: o.lambda_stat,
            allocated_power: w.allocated_power(m),
            snr_db: env.radars[m].snr_db_at(truth[m].range(), env.disturbance.sigma_c()).unwrap_or(f64::NEG_INFINITY),
        });
    }
}

/// One episode: initial scan, then planned tracking until `t_max`.
///
/// Early termination (field-of-view exit, shared true bin, failed
/// acquisition) is reported in `failure`; rows up to that point are kept.
pub fn run_episode(cfg: &ScenarioConfig, run_id: usize, seed: u64) -> Result<MetricsRecord> {
    let m_targets = cfg.num_targets();
    let mut record = MetricsRecord::new(run_id, seed, m_targets);
    let mut env = Environment::from_config(cfg)?;
    let mut env_rng = stream(seed, 0);
    let mut rngs: Vec<SimRng> = (0..m_targets).map(|m| stream(seed, m as u64 + 1)).collect();

    let scan = initial_scan(&mut env, cfg, &mut env_rng, &mut rngs)?;
    let scan_w = orthogonal_waveform(cfg.n_t, cfg.p_t)?;
    for dwell in &scan.dwells {
        record_rows(&mut record, &env, dwell.t, &dwell.truth, &dwell.outcomes, &dwell.estimates, None, &scan_w);
    }
    for (m, a) in scan.acquisitions.iter().enumerate() {
        record.acquired_at[m] = a.as_ref().map(|a| a.t);
    }
    if let Some(f) = &scan.failure {
        record.failure = Some(f.to_string());
        return Ok(record);
    }

    let search = SearchConfig::from(&cfg.planner);
    let mut trackers: Vec<TargetTracker> = scan
        .acquisitions
        .into_iter()
        .zip(rngs)
        .map(|(a, rng)| {
            let a = a.expect("complete scan");
            TargetTracker {
                planner: Planner::new(a.generator.num_actions(), search),
                belief: a.belief,
                generator: a.generator,
                rng,
                misses: 0,
            }
        })
        .collect();

    while env.t < cfg.t_max {
        let planned: Vec<(Action, Vec<Action>)> = trackers
            .par_iter_mut()
            .map(|tr| {
                let a = tr.planner.plan(&tr.belief, &tr.generator, &mut tr.rng);
                (a, tr.planner.ranked_actions())
            })
            .collect();
        let (actions, ranked): (Vec<Action>, Vec<Vec<Action>>) = planned.into_iter().unzip();
        let chosen = resolve_bins(&actions, &ranked, env.grid.len());

        let beliefs: Vec<&BeliefSet> = trackers.iter().map(|t| &t.belief).collect();
        let w = design_waveform(cfg, cfg.strategy, &chosen, &beliefs)?;
        debug_assert!((w.trace() - cfg.p_t).abs() <= 1e-9 * cfg.p_t);

        if let Err(abort) = env.advance(&mut env_rng) {
            record.failure = Some(abort.to_string());
            break;
        }
        let outcomes = env.measure(&w, &chosen, &mut env_rng)?;

        let observations: Vec<Observation> = outcomes.iter().map(DetectionOutcome::observation).collect();
        trackers
            .par_iter_mut()
            .zip(observations.par_iter())
            .zip(outcomes.par_iter())
            .zip(chosen.par_iter())
            .try_for_each(|(((tr, obs), o), &bin)| -> Result<()> {
                if o.detected {
                    tr.generator = tr.generator.refresh_sigma(o.sigma_hat)?;
                }
                tr.belief = update_belief(
                    &tr.belief,
                    Action(bin),
                    obs,
                    &tr.generator,
                    cfg.planner.n_particles,
                    cfg.planner.rejection_factor,
                    &mut tr.rng,
                );
                tr.misses = if o.detected { 0 } else { tr.misses + 1 };
                if tr.misses >= LOST_TRACK_MISSES {
                    tr.belief = spread(&tr.belief, &tr.generator.grid, &mut tr.rng);
                    tr.misses = 0;
                }
                tr.planner.advance(Action(bin), obs.key());
                Ok(())
            })?;

        let estimates: Vec<_> = trackers.iter().map(|t| Some(t.belief.mean())).collect();
        record_rows(&mut record, &env, env.t, &env.targets, &outcomes, &estimates, Some(&chosen), &w);
    }
    Ok(record)
}

/// `n_runs` episodes of `cfg.strategy`; run `i` uses seed
/// `derive_seed(cfg.seed, i)`.
pub fn run_monte_carlo(cfg: &ScenarioConfig, n_runs: usize) -> Result<MonteCarloResult> {
    let records = (0..n_runs)
        .into_par_iter()
        .map(|i| run_episode(cfg, i, derive_seed(cfg.seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records, cfg.num_targets());
    Ok(MonteCarloResult { strategy: cfg.strategy, records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collisions_fall_to_next_ranked() {
        let planned = [Action(4), Action(4), Action(7)];
        let ranked = vec![vec![Action(4), Action(5)], vec![Action(4), Action(9), Action(2)], vec![Action(7)]];
        assert_eq!(resolve_bins(&planned, &ranked, 20), vec![4, 9, 7]);
        let ranked_short = vec![vec![], vec![], vec![]];
        assert_eq!(resolve_bins(&[Action(0), Action(0), Action(0)], &ranked_short, 3), vec![0, 1, 2]);
    }
}
