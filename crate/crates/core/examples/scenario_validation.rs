//! Load the shipped scenarios, then break them and list every violated rule.
//! Geometric rules (field of view over the horizon, distinct bins) are only
//! checked once the scalar parameters are sane.

use cogradar::scenario::{DisturbanceConfig, ScenarioConfig, TargetState};

fn main() -> cogradar::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    for name in ["paper.json", "desk.json"] {
        let cfg = ScenarioConfig::load(format!("{dir}/{name}"))?;
        let status = if cfg.violations().is_empty() { "valid" } else { "INVALID" };
        println!("{name}: {} targets, {} steps, {status}", cfg.num_targets(), cfg.t_max);
    }

    let mut broken = ScenarioConfig::desk();
    broken.p_fa = 1.5;
    broken.l_theta = 2;
    broken.disturbance = DisturbanceConfig::Ar1 { rho: 1.2 };
    println!("\nbad parameters:");
    for v in broken.violations() {
        println!("  {v}");
    }

    let mut geometry = ScenarioConfig::desk();
    geometry.targets[0].initial_state = TargetState { x: 5.0, vx: -0.1, y: -60.0, vy: 0.0 };
    geometry.targets[2].initial_state = TargetState { x: 60.0, vx: 0.2, y: 8.0, vy: 0.1 };
    println!("\nbad geometry:");
    for v in geometry.violations() {
        println!("  {v}");
    }

    let err = ScenarioConfig::from_json_str(r#"{"targets": [], "dt": 1.0, "unknown": 3}"#).unwrap_err();
    println!("\nunknown key: {err}");
    Ok(())
}
