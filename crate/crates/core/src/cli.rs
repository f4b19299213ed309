//! Library side of the `cogradar` binary: resolve a scenario, run every
//! requested strategy and write `<out>/<strategy>/{steps,summary}.csv`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::engine::{
    run_monte_carlo, summary_table, summary_table_header, write_plot_script, write_steps_csv, write_summary_csv,
    MonteCarloResult,
};
use crate::error::{invalid, Error, Result};
use crate::scenario::{EnvironmentMode, ScenarioConfig};
use crate::waveform::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Paper,
    Desk,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            other => Err(invalid(format!("unknown preset `{other}` (expected paper or desk)"))),
        }
    }
}

impl Preset {
    pub fn config(self) -> ScenarioConfig {
        match self {
            Preset::Paper => ScenarioConfig::paper(),
            Preset::Desk => ScenarioConfig::desk(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSource {
    File(PathBuf),
    Preset(Preset),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub source: ScenarioSource,
    /// Empty means all three.
    pub strategies: Vec<Strategy>,
    pub n_runs: usize,
    pub seed: Option<u64>,
    pub mode: Option<EnvironmentMode>,
    pub out_dir: PathBuf,
}

/// Loads and validates the scenario, applying command-line overrides.
pub fn resolve_config(source: &ScenarioSource, seed: Option<u64>, mode: Option<EnvironmentMode>) -> Result<ScenarioConfig> {
    let mut cfg = match source {
        ScenarioSource::File(path) => ScenarioConfig::load(path)?,
        ScenarioSource::Preset(p) => p.config(),
    };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(mode) = mode {
        cfg.mode = mode;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub results: Vec<MonteCarloResult>,
    pub out_dir: PathBuf,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t_max = self.config.t_max;
        writeln!(f, "final-quarter averages (t >= {}), {} runs", t_max - t_max / 4, self.n_runs())?;
        writeln!(f, "{}", summary_table_header())?;
        for r in &self.results {
            write!(f, "{}", summary_table(r.strategy.as_str(), &r.summary, t_max, self.config.num_targets()))?;
        }
        for r in &self.results {
            for (run, reason) in r.failures() {
                writeln!(f, "{} run {run}: {reason}", r.strategy)?;
            }
        }
        write!(f, "output written to {}", self.out_dir.display())
    }
}

impl RunReport {
    fn n_runs(&self) -> usize {
        self.results.first().map_or(0, |r| r.records.len())
    }
}

pub fn run(req: &RunRequest) -> Result<RunReport> {
    if req.n_runs == 0 {
        return Err(invalid("--runs must be at least 1"));
    }
    let base = resolve_config(&req.source, req.seed, req.mode)?;
    let strategies = if req.strategies.is_empty() { Strategy::ALL.to_vec() } else { req.strategies.clone() };
    std::fs::create_dir_all(&req.out_dir)?;
    let mut results = Vec::with_capacity(strategies.len());
    for strategy in strategies {
        let cfg = ScenarioConfig { strategy, ..base.clone() };
        let result = run_monte_carlo(&cfg, req.n_runs)?;
        write_outputs(&req.out_dir, &result)?;
        results.push(result);
    }
    write_plot_script(&req.out_dir.join("plot_metrics.py"), &req.out_dir)?;
    Ok(RunReport { config: base, results, out_dir: req.out_dir.clone() })
}

pub fn write_outputs(out_dir: &Path, result: &MonteCarloResult) -> Result<()> {
    let dir = out_dir.join(result.strategy.as_str());
    std::fs::create_dir_all(&dir)?;
    write_steps_csv(&dir.join("steps.csv"), &result.records)?;
    write_summary_csv(&dir.join("summary.csv"), &result.summary)
}

/// Outcome of `--validate`: every violated rule, or none.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "scenario is valid");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Parses the scenario and lists rule violations without simulating.
pub fn validate(source: &ScenarioSource) -> Result<ValidationReport> {
    let cfg = match source {
        ScenarioSource::File(path) => ScenarioConfig::load(path)?,
        ScenarioSource::Preset(p) => p.config(),
    };
    Ok(ValidationReport { violations: cfg.violations() })
}
