use std::path::Path;
use std::process::{Command, Output};

fn cogradar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogradar")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_shipped_scenario() {
    let o = cogradar(&["--scenario", &scenario("desk.json"), "--validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("valid"));
}

#[test]
fn missing_scenario_is_config_error() {
    let o = cogradar(&["--scenario", "/no/such/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/no/such/file.json"));
}

#[test]
fn invalid_scenario_lists_rules() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(scenario("desk.json")).unwrap().replace("\"p_fa\": 0.01", "\"p_fa\": 2.0");
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let o = cogradar(&["--scenario", p, "--validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("false-alarm-range"));
    let o = cogradar(&["--scenario", p, "--runs", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("false-alarm-range"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cogradar(&["--runs", "1"]).status.code(), Some(2));
    assert_eq!(cogradar(&["--preset", "desk", "--strategies", "greedy"]).status.code(), Some(2));
    assert_eq!(cogradar(&["--preset", "desk", "--scenario", "x.json"]).status.code(), Some(2));
    assert_eq!(cogradar(&["--preset", "huge"]).status.code(), Some(2));
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = cogradar::scenario::ScenarioConfig::desk();
    cfg.t_max = 12;
    cfg.planner.n_sim = 100;
    cfg.planner.n_particles = 100;
    let path = dir.path().join("tiny.json");
    std::fs::write(&path, cfg.to_json_string()).unwrap();
    let out = dir.path().join("out");
    let o = cogradar(&[
        "--scenario",
        path.to_str().unwrap(),
        "--runs",
        "2",
        "--strategies",
        "uniform,power-aware",
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("power-aware") && stdout.contains("pos_rmse"), "{stdout}");
    for s in ["uniform", "power-aware"] {
        assert_eq!(
            header(&out.join(s).join("steps.csv")),
            "run_id,t,target_id,true_x,true_y,true_vx,true_vy,est_x,est_y,est_vx,est_vy,true_bin,chosen_bin,detected,lambda_stat,allocated_power,snr_db"
        );
        assert_eq!(header(&out.join(s).join("summary.csv")), "t,target_id,pd_mean,pos_rmse,vel_rmse");
        let rows = std::fs::read_to_string(out.join(s).join("steps.csv")).unwrap().lines().count();
        assert_eq!(rows, 1 + 2 * 12 * 3);
    }
    assert!(!out.join("orthogonal").exists());
    assert!(out.join("plot_metrics.py").exists());
}
