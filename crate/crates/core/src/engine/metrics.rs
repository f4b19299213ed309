use crate::scenario::TargetState;

/// One target at one time step of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub run_id: usize,
    /// Environment time of the recorded state.
    pub t: usize,
    /// 1-based.
    pub target_id: usize,
    pub truth: TargetState,
    /// Belief mean, `None` before acquisition.
    pub estimate: Option<TargetState>,
    pub true_bin: Option<usize>,
    /// `None` during the initial scan.
    pub chosen_bin: Option<usize>,
    pub detected: bool,
    pub lambda_stat: f64,
    pub allocated_power: f64,
    pub snr_db: f64,
}

impl StepRecord {
    pub fn position_error(&self) -> Option<f64> {
        self.estimate.map(|e| e.position_error(&self.truth))
    }

    pub fn velocity_error(&self) -> Option<f64> {
        self.estimate.map(|e| e.velocity_error(&self.truth))
    }
}

/// Everything recorded in one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub run_id: usize,
    pub seed: u64,
    pub rows: Vec<StepRecord>,
    /// Environment time each target was first detected.
    pub acquired_at: Vec<Option<usize>>,
    /// Set when the episode stopped before `t_max`.
    pub failure: Option<String>,
}

impl MetricsRecord {
    pub fn new(run_id: usize, seed: u64, num_targets: usize) -> Self {
        Self { run_id, seed, rows: Vec::new(), acquired_at: vec![None; num_targets], failure: None }
    }

    pub fn rows_for(&self, target_id: usize) -> impl Iterator<Item = &StepRecord> {
        self.rows.iter().filter(move |r| r.target_id == target_id)
    }

    pub fn last_t(&self) -> usize {
        self.rows.iter().map(|r| r.t).max().unwrap_or(0)
    }
}

/// Monte-Carlo aggregate for one `(t, target)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub t: usize,
    pub target_id: usize,
    /// Fraction of runs that detected the target at `t`.
    pub pd_mean: f64,
    /// Over runs with an estimate at `t`; NaN when there are none.
    pub pos_rmse: f64,
    pub vel_rmse: f64,
    pub runs: usize,
}

/// Aggregates per `(t, target)` over all runs that reached `t`.
pub fn summarize(records: &[MetricsRecord], num_targets: usize) -> Vec<SummaryRow> {
    let t_end = records.iter().map(MetricsRecord::last_t).max().unwrap_or(0);
    let slots = (t_end + 1) * num_targets;
    let mut det = vec![0usize; slots];
    let mut runs = vec![0usize; slots];
    let mut pos = vec![0.0f64; slots];
    let mut vel = vec![0.0f64; slots];
    let mut est = vec![0usize; slots];
    for r in records.iter().flat_map(|rec| rec.rows.iter()) {
        let i = r.t * num_targets + (r.target_id - 1);
        runs[i] += 1;
        det[i] += r.detected as usize;
        if let (Some(p), Some(v)) = (r.position_error(), r.velocity_error()) {
            pos[i] += p * p;
            vel[i] += v * v;
            est[i] += 1;
        }
    }
    (0..slots)
        .filter(|&i| runs[i] > 0)
        .map(|i| {
            let rmse = |sum: f64| if est[i] > 0 { (sum / est[i] as f64).sqrt() } else { f64::NAN };
            SummaryRow {
                t: i / num_targets,
                target_id: i % num_targets + 1,
                pd_mean: det[i] as f64 / runs[i] as f64,
                pos_rmse: rmse(pos[i]),
                vel_rmse: rmse(vel[i]),
                runs: runs[i],
            }
        })
        .collect()
}

/// Mean of `f` over summary rows of `target_id` with `t` in `[t_from, t_to]`,
/// skipping NaN.
pub fn window_mean(
    summary: &[SummaryRow],
    target_id: usize,
    t_from: usize,
    t_to: usize,
    f: impl Fn(&SummaryRow) -> f64,
) -> f64 {
    let vals: Vec<f64> = summary
        .iter()
        .filter(|r| r.target_id == target_id && r.t >= t_from && r.t <= t_to)
        .map(f)
        .filter(|v| !v.is_nan())
        .collect();
    if vals.is_empty() {
        f64::NAN
    } else {
        vals.iter().sum::<f64>() / vals.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(run_id: usize, t: usize, target_id: usize, detected: bool, err: Option<f64>) -> StepRecord {
        let truth = TargetState { x: 10.0, vx: 0.0, y: 0.0, vy: 0.0 };
        StepRecord {
            run_id,
            t,
            target_id,
            truth,
            estimate: err.map(|e| TargetState { x: 10.0 + e, vx: e, ..truth }),
            true_bin: Some(10),
            chosen_bin: Some(10),
            detected,
            lambda_stat: 0.0,
            allocated_power: 1.0,
            snr_db: 0.0,
        }
    }

    #[test]
    fn single_run_summary_is_identity() {
        let mut rec = MetricsRecord::new(0, 1, 2);
        rec.rows = vec![row(0, 1, 1, true, Some(3.0)), row(0, 1, 2, false, None), row(0, 2, 1, false, Some(-4.0))];
        let s = summarize(&[rec], 2);
        assert_eq!(s.len(), 3);
        assert_eq!((s[0].t, s[0].target_id, s[0].pd_mean), (1, 1, 1.0));
        assert!((s[0].pos_rmse - 3.0).abs() < 1e-12);
        assert!(s[1].pos_rmse.is_nan());
        assert!((s[2].vel_rmse - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rmse_over_runs() {
        let mut a = MetricsRecord::new(0, 1, 1);
        a.rows = vec![row(0, 5, 1, true, Some(3.0))];
        let mut b = MetricsRecord::new(1, 2, 1);
        b.rows = vec![row(1, 5, 1, false, Some(4.0))];
        let s = summarize(&[a, b], 1);
        assert_eq!(s.len(), 1);
        assert!((s[0].pd_mean - 0.5).abs() < 1e-12);
        assert!((s[0].pos_rmse - (12.5f64).sqrt()).abs() < 1e-12);
        assert!((window_mean(&s, 1, 0, 10, |r| r.pos_rmse) - s[0].pos_rmse).abs() < 1e-15);
    }
}
