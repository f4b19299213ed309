use std::fmt::Write as _;
use std::path::Path;

use super::metrics::{MetricsRecord, SummaryRow};
use crate::error::Result;

pub const STEPS_HEADER: [&str; 17] = [
    "run_id", "t", "target_id", "true_x", "true_y", "true_vx", "true_vy", "est_x", "est_y", "est_vx", "est_vy",
    "true_bin", "chosen_bin", "detected", "lambda_stat", "allocated_power", "snr_db",
];

pub const SUMMARY_HEADER: [&str; 5] = ["t", "target_id", "pd_mean", "pos_rmse", "vel_rmse"];

/// Nine significant digits, shortest of fixed or exponent form; `NaN` for NaN.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt_usize(v: Option<usize>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

pub fn write_steps_csv(path: &Path, records: &[MetricsRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(STEPS_HEADER)?;
    for r in records.iter().flat_map(|rec| rec.rows.iter()) {
        let est = r.estimate.map(|e| [e.x, e.y, e.vx, e.vy]).unwrap_or([f64::NAN; 4]);
        let mut fields = vec![r.run_id.to_string(), r.t.to_string(), r.target_id.to_string()];
        fields.extend([r.truth.x, r.truth.y, r.truth.vx, r.truth.vy].map(format_float));
        fields.extend(est.map(format_float));
        fields.push(opt_usize(r.true_bin));
        fields.push(opt_usize(r.chosen_bin));
        fields.push((r.detected as u8).to_string());
        fields.extend([r.lambda_stat, r.allocated_power, r.snr_db].map(format_float));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv(path: &Path, summary: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for r in summary {
        w.write_record([
            r.t.to_string(),
            r.target_id.to_string(),
            format_float(r.pd_mean),
            format_float(r.pos_rmse),
            format_float(r.vel_rmse),
        ])?;
    }
    w.flush()?;
    Ok(())
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""P_D and RMSE curves per target from <dir>/<strategy>/summary.csv."""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

root = sys.argv[1] if len(sys.argv) > 1 else {root!r}
series = {}
for strategy in sorted(os.listdir(root)):
    path = os.path.join(root, strategy, "summary.csv")
    if not os.path.isfile(path):
        continue
    with open(path) as f:
        for row in csv.DictReader(f):
            key = (strategy, int(row["target_id"]))
            series.setdefault(key, []).append(
                (int(row["t"]), float(row["pd_mean"]), float(row["pos_rmse"]), float(row["vel_rmse"]))
            )

targets = sorted({k[1] for k in series})
labels = ["P_D", "position RMSE (km)", "velocity RMSE (km/s)"]
for target in targets:
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7, 8))
    for (strategy, tid), rows in sorted(series.items()):
        if tid != target:
            continue
        rows.sort()
        t = [r[0] for r in rows]
        for i, ax in enumerate(axes):
            ax.plot(t, [r[i + 1] for r in rows], label=strategy)
    for ax, label in zip(axes, labels):
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    axes[-1].set_xlabel("time step")
    fig.suptitle(f"target {target}")
    fig.tight_layout()
    fig.savefig(os.path.join(root, f"target_{target}.png"), dpi=120)
"#;

/// Writes the plotting script with `root` (the directory holding one
/// sub-directory per strategy) as its default input.
pub fn write_plot_script(path: &Path, root: &Path) -> Result<()> {
    let root = std::path::absolute(root)?;
    let literal = serde_json::to_string(&root.display().to_string())?;
    std::fs::write(path, PLOT_SCRIPT.replace("{root!r}", &literal))?;
    Ok(())
}

/// Final-quarter averages of one strategy, one line per target.
pub fn summary_table(strategy: &str, summary: &[SummaryRow], t_max: usize, num_targets: usize) -> String {
    let from = t_max - t_max / 4;
    let mut s = String::new();
    for m in 1..=num_targets {
        let pd = super::metrics::window_mean(summary, m, from, t_max, |r| r.pd_mean);
        let pos = super::metrics::window_mean(summary, m, from, t_max, |r| r.pos_rmse);
        let vel = super::metrics::window_mean(summary, m, from, t_max, |r| r.vel_rmse);
        let _ = writeln!(s, "{strategy:<12} {m:>6} {pd:>8.3} {pos:>12.4} {vel:>12.5}");
    }
    s
}

pub fn summary_table_header() -> String {
    format!("{:<12} {:>6} {:>8} {:>12} {:>12}", "strategy", "target", "P_D", "pos_rmse", "vel_rmse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-12.5), "-12.5");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333");
        assert_eq!(format_float(123456.789012), "123456.789");
        assert_eq!(format_float(9.9999999999), "10");
        assert_eq!(format_float(1.5e-7), "1.5e-7");
        assert_eq!(format_float(2.0e12), "2e12");
        assert_eq!(format_float(0.00012345678912), "0.000123456789");
    }

    #[test]
    fn float_round_trip_to_nine_digits() {
        for v in [std::f64::consts::PI, -0.000731, 4.0e-9, 18.420680743952367, 63.245553203367585] {
            let back: f64 = format_float(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-8, "{v}");
        }
    }
}
