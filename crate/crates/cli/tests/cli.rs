use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phonon-discord"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

const SMALL: &str = r#"{
    "grid": {"k_max": 6, "n_k": 256, "n_theta": 32},
    "n_times": 10,
    "t_max_ps": 3,
    "temperatures_K": [0, 100],
    "alpha2_values": [0, 0.25, 0.5]
}"#;

fn small_config(dir: &Path) -> String {
    let path = dir.join("config.json");
    fs::write(&path, SMALL).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn fig1_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("fig1");
    let o = run_in(
        dir.path(),
        &["fig1", "--config", &cfg, "--out", out.to_str().unwrap()],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("fig1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t_ps,T_K,discord_lower,discord_upper"));
    assert_eq!(lines.next(), Some("0,0,0,0"));
    assert_eq!(csv.lines().count(), 1 + 2 * 11);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], "fig1_grid");
    assert_eq!(manifest["outputs"][0]["rows"], 22);
    assert_eq!(manifest["config"]["temperatures_k"][1], 100.0);
}

#[test]
fn overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("steady");
    let o = run_in(
        dir.path(),
        &[
            "steady",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--temperature-k",
            "200",
            "--alpha2",
            "0.3",
            "--distance-nm",
            "12",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("steady.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "alpha2,T_K,pure_lo,pure_hi,x_lo,x_hi");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0.3,200,"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["distance_nm"], 12.0);
}

#[test]
fn traces_and_kernel_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("o");
    let o = run_in(
        dir.path(),
        &["traces", "--config", &cfg, "--out", out.to_str().unwrap()],
    );
    assert!(o.status.success());
    assert!(out.join("traces_T0.csv").exists());
    assert!(out.join("traces_T100.csv").exists());
    let o = run_in(
        dir.path(),
        &["kernel", "--config", &cfg, "--out", out.to_str().unwrap()],
    );
    assert!(o.status.success());
    let k = fs::read_to_string(out.join("kernel_T100.csv")).unwrap();
    assert!(k.starts_with("t_ps,a01,a03,b01,b03,b12\n0,0,0,0,0,0\n"));
}

#[test]
fn state_subcommand_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let state = dir.path().join("bell.json");
    fs::write(
        &state,
        "[[[0.5,0],[0,0],[0,0],[0.5,0]],[[0,0],[0,0],[0,0],[0,0]],\
         [[0,0],[0,0],[0,0],[0,0]],[[0.5,0],[0,0],[0,0],[0.5,0]]]",
    )
    .unwrap();
    let out = dir.path().join("s");
    let o = run_in(
        dir.path(),
        &[
            "state",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--state",
            state.to_str().unwrap(),
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("state_reports.json")).unwrap()).unwrap();
    let first = &reports[0]["report"];
    assert!((first["d_lower"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!((first["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(reports.as_array().unwrap().len(), 22);
}

#[test]
fn invalid_state_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let state = dir.path().join("bad.json");
    fs::write(
        &state,
        "[[[0.9,0],[0,0],[0,0],[0,0]],[[0,0],[0.3,0],[0,0],[0,0]],\
         [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]",
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &[
            "state",
            "--config",
            &cfg,
            "--state",
            state.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trace"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, r#"{"bogus_key": 1}"#).unwrap();
    let o = run_in(dir.path(), &["fig1", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_in(
        dir.path(),
        &["fig1", "--config", path.to_str().unwrap(), "--alpha2", "2"],
    );
    assert_eq!(o.status.code(), Some(2));
    fs::write(&path, r#"{"experiment": "steady_state_vs_alpha2"}"#).unwrap();
    let o = run_in(dir.path(), &["fig1", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resolution_error_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(
        &path,
        r#"{"grid": {"k_max": 6, "n_k": 16, "n_theta": 16}, "t_max_ps": 10}"#,
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &["kernel", "--config", path.to_str().unwrap(), "--out", "x"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_k >="));
}

#[test]
fn io_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["fig1", "--config", "does-not-exist.json"]);
    assert_eq!(o.status.code(), Some(4));
    let cfg = small_config(dir.path());
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run_in(
        dir.path(),
        &[
            "fig1",
            "--config",
            &cfg,
            "--out",
            blocker.join("sub").to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(4));
}
