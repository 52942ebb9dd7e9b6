use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgan_sim::table::{CDF_HEADER, SNAPSHOT_HEADER, TRACKING_HEADER, TRAJECTORY_HEADER};
use qgan_sim::{BatchSummary, ResultDocument};
use tempfile::TempDir;

fn qgan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgan-sim"))
        .args(args)
        .env_remove("QGAN_SIM_SEED")
        .output()
        .expect("binary runs")
}

fn ok(output: Output) -> Output {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    output
}

fn write_config(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

fn first_line(p: impl AsRef<Path>) -> String {
    read(p).lines().next().unwrap().to_string()
}

#[test]
fn exact_run_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"exact_mode": true, "sigma": "pure-ground", "seed": 7}"#);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let out_a = ok(qgan(&["run", "--config", s(&config), "--out", s(&a)]));
    ok(qgan(&["run", "--config", s(&config), "--out", s(&b)]));
    assert_eq!(read(a.join("trajectory.csv")), read(b.join("trajectory.csv")));
    assert_eq!(read(a.join("result.json")), read(b.join("result.json")));
    let line = String::from_utf8(out_a.stdout).unwrap();
    assert!(line.starts_with("c_step=") && line.contains(" F=") && line.contains("termination="), "{line}");
}

#[test]
fn shot_run_oscillates_and_settles() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"shots": 5000, "sigma": "pure-ground", "seed": 1}"#);
    let out = dir.path().join("o");
    ok(qgan(&["run", "--config", s(&config), "--out", s(&out)]));
    let text = read(out.join("trajectory.csv"));
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().any(|r| r[2] == "D") && rows.iter().any(|r| r[2] == "G"));
    let d: Vec<f64> = rows.iter().map(|r| r[10].parse().unwrap()).collect();
    let max = d.iter().cloned().fold(f64::MIN, f64::max);
    assert!(max > 0.1, "d never rose: {max}");
    assert!(d.last().unwrap().abs() < 0.02);
}

#[test]
fn invalid_initial_r_exits_2_naming_field() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"initial": {"generator": {"r": 1.5, "theta": 0, "phi": 0}, "measurement": {"beta": 0, "gamma": 0}}}"#,
    );
    let out = qgan(&["run", "--config", s(&config), "--out", s(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("initial.generator.r"));
}

#[test]
fn io_failures_exit_3() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    let out = qgan(&["run", "--config", s(&missing), "--out", s(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(3));

    let config = write_config(&dir, "c.json", r#"{"exact_mode": true}"#);
    let blocker = write_config(&dir, "file", "");
    let out = qgan(&["run", "--config", s(&config), "--out", s(&blocker)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn seed_flag_beats_environment_beats_file() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"exact_mode": true, "seed": 1}"#);
    let seed_of = |out: &Path| -> u64 {
        let doc: ResultDocument = serde_json::from_str(&read(out.join("result.json"))).unwrap();
        doc.trace.config.seed
    };
    let run = |extra: &[&str], env: Option<&str>, out: &Path| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qgan-sim"));
        cmd.args(["run", "--config", s(&config), "--out", s(out)]).args(extra).env_remove("QGAN_SIM_SEED");
        if let Some(v) = env {
            cmd.env("QGAN_SIM_SEED", v);
        }
        ok(cmd.output().unwrap());
    };
    let out = dir.path().join("o");
    run(&[], None, &out);
    assert_eq!(seed_of(&out), 1);
    run(&[], Some("2"), &out);
    assert_eq!(seed_of(&out), 2);
    run(&["--seed", "3"], Some("2"), &out);
    assert_eq!(seed_of(&out), 3);
}

#[test]
fn headers_are_pinned() {
    assert_eq!(TRAJECTORY_HEADER, "step,round,turn,r,theta,phi,beta,gamma,p_rho_hat,p_sigma_hat,d_hat,fidelity");
    assert_eq!(TRACKING_HEADER, "step,p_sigma_hat,p_rho_hat,d_hat,fidelity");
    assert_eq!(SNAPSHOT_HEADER, "step,rho_x,rho_y,rho_z,sigma_x,sigma_y,sigma_z,m_x,m_y,m_z");
    assert_eq!(CDF_HEADER, "value,cumulative_probability");

    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"exact_mode": true, "seed": 4}"#);
    let out = dir.path().join("o");
    ok(qgan(&["run", "--config", s(&config), "--out", s(&out)]));
    assert_eq!(first_line(out.join("trajectory.csv")), TRAJECTORY_HEADER);
    let result = out.join("result.json");
    for (kind, header) in [("tracking", TRACKING_HEADER), ("bloch-snapshots", SNAPSHOT_HEADER)] {
        let csv = dir.path().join(format!("{kind}.csv"));
        ok(qgan(&["plot-data", "--kind", kind, "--in", s(&result), "--out", s(&csv)]));
        assert_eq!(first_line(&csv), header);
        assert!(!read(&csv).contains('\r'));
    }
}

#[test]
fn result_and_summary_json_round_trip() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"sigma": "bloch-ball", "seed": 10}"#);
    let out = dir.path().join("o");
    ok(qgan(&["run", "--config", s(&config), "--out", s(&out)]));
    let text = read(out.join("result.json"));
    let doc: ResultDocument = serde_json::from_str(&text).unwrap();
    let again: ResultDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);

    ok(qgan(&["batch", "--config", s(&config), "--out", s(&out), "--n", "3"]));
    let summary: BatchSummary = serde_json::from_str(&read(out.join("summary.json"))).unwrap();
    let again: BatchSummary = serde_json::from_str(&serde_json::to_string(&summary).unwrap()).unwrap();
    assert_eq!(summary, again);
    assert_eq!(summary.config_echo.game.c_limit, 300);
}

#[test]
fn single_game_batch_cdf_is_one_step() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"exact_mode": true, "seed": 21}"#);
    let out = dir.path().join("o");
    ok(qgan(&["batch", "--config", s(&config), "--out", s(&out), "--n", "1"]));
    ok(qgan(&["run", "--config", s(&config), "--out", s(&out)]));
    let doc: ResultDocument = serde_json::from_str(&read(out.join("result.json"))).unwrap();
    let summary: BatchSummary = serde_json::from_str(&read(out.join("summary.json"))).unwrap();
    assert_eq!(summary.cdf_c_step, vec![(doc.trace.c_step_total as f64, 1.0)]);
    assert_eq!(summary.cdf_fidelity, vec![(doc.trace.final_fidelity, 1.0)]);
    assert_eq!(read(out.join("cdf_c_step.csv")), format!("{CDF_HEADER}\n{},1\n", doc.trace.c_step_total));
}

#[test]
fn batch_games_replay_as_single_runs() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"sigma": "bloch-ball", "seed": 100}"#);
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    ok(qgan(&["batch", "--config", s(&config), "--out", s(&serial), "--n", "4", "--emit-traces"]));
    ok(qgan(&["batch", "--config", s(&config), "--out", s(&parallel), "--n", "4", "--jobs", "3", "--emit-traces"]));
    for name in ["summary.json", "cdf_c_step.csv", "cdf_fidelity.csv"] {
        assert_eq!(read(serial.join(name)), read(parallel.join(name)), "{name}");
    }
    for k in 0..4 {
        let single = dir.path().join(format!("single{k}"));
        let seed = (100 + k).to_string();
        ok(qgan(&["run", "--config", s(&config), "--out", s(&single), "--seed", &seed]));
        for name in ["result.json", "trajectory.csv"] {
            let batched = read(serial.join("traces").join(format!("game_{k:04}_{name}")));
            assert_eq!(batched, read(single.join(name)), "game {k} {name}");
            assert_eq!(batched, read(parallel.join("traces").join(format!("game_{k:04}_{name}"))));
        }
    }
}

#[test]
fn tracking_rows_match_steps() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"c_limit": 10, "seed": 3}"#);
    let out = dir.path().join("o");
    ok(qgan(&["run", "--config", s(&config), "--out", s(&out)]));
    let csv = dir.path().join("t.csv");
    ok(qgan(&["plot-data", "--kind", "tracking", "--in", s(&out.join("result.json")), "--out", s(&csv)]));
    assert_eq!(read(&csv).lines().count(), 11);
}

#[test]
fn snapshot_of_matching_states_has_equal_vectors() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"exact_mode": true, "initial": {"generator": {"r": 1, "theta": 0, "phi": 0}, "measurement": {"beta": 1, "gamma": 0}}}"#,
    );
    let out = dir.path().join("o");
    ok(qgan(&["run", "--config", s(&config), "--out", s(&out)]));
    let csv = dir.path().join("snap.csv");
    let result = out.join("result.json");
    ok(qgan(&["plot-data", "--kind", "bloch-snapshots", "--in", s(&result), "--out", s(&csv), "--steps", "0"]));
    let text = read(&csv);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1..4], row[4..7]);

    let bad = qgan(&["plot-data", "--kind", "bloch-snapshots", "--in", s(&result), "--out", s(&csv), "--steps", "99999"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cdf_of_hundred_games() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"exact_mode": true, "seed": 0}"#);
    let out = dir.path().join("o");
    ok(qgan(&["batch", "--config", s(&config), "--out", s(&out), "--n", "100", "--jobs", "2"]));
    for quantity in ["c-step", "fidelity"] {
        let csv = dir.path().join(format!("{quantity}.csv"));
        let summary = out.join("summary.json");
        ok(qgan(&["plot-data", "--kind", "cdf", "--in", s(&summary), "--out", s(&csv), "--quantity", quantity]));
        let text = read(&csv);
        let rows: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let (v, p) = l.split_once(',').unwrap();
                (v.parse().unwrap(), p.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 100);
        assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 < w[1].1));
        assert_eq!(rows.last().unwrap().1, 1.0);
    }
}

#[test]
fn unknown_plot_kind_exits_2() {
    let out = qgan(&["plot-data", "--kind", "histogram", "--in", "x", "--out", "y"]);
    assert_eq!(out.status.code(), Some(2));
}
