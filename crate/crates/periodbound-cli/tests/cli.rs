//! End-to-end runs of the compiled binary: config loading, report
//! layout, determinism, plot data, and the exit-status contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_periodbound")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn bound_scenario_reports_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bound.conf",
        "[scenario]\nkind = bound\n\n[params]\nalpha = 0.5\n",
    );
    let out_dir = dir.path().join("out");
    let output = run(&[
        "bound",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let json = fs::read_to_string(out_dir.join("bound_report.json")).unwrap();
    // K at alpha = 1/2 is about 0.098889.
    assert!(json.contains("\"k_value\": 9.8888379032267"));
    assert!(json.contains("\"verdict\": {\"pass\": true, \"passed\": 1, \"failed\": 0}"));
    assert!(stdout_of(&output).contains("verdict: pass"));
}

#[test]
fn identical_config_and_seed_reproduce_the_report_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "nse.conf",
        "[params]\ngrid = 16\npairs = 10\ngrashofs = 2, 8\n",
    );
    let mut reports = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let output = run(&[
            "nse-estimate",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "7",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "stderr: {}", stderr_of(&output));
        let json = fs::read_to_string(out_dir.join("nse-estimate_report.json")).unwrap();
        let stable: Vec<&str> = json
            .lines()
            .filter(|line| !line.contains("duration_s"))
            .collect();
        reports.push(stable.join("\n"));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn out_of_range_delta_is_rejected_at_parse_stage() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.conf",
        "[params]\nalpha = 0.5\ndelta = 0.7\np = 1.5\n",
    );
    let output = run(&["bound", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("delta must lie in (0, 1/2)"));
}

#[test]
fn unknown_keys_and_sections_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "typo.conf",
        "[params]\nalpha = 0.5\nbogus = 1\n",
    );
    let output = run(&["bound", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("unknown key `bogus`"));

    let config = write_config(dir.path(), "extra.conf", "[params]\nalpha = 0.5\n[junk]\nx = 1\n");
    let output = run(&["bound", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("unknown config sections"));
}

#[test]
fn mismatched_kind_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "kind.conf",
        "[scenario]\nkind = sweep\n\n[params]\nalpha = 0.5\n",
    );
    let output = run(&["bound", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("declares kind `sweep`"));
}

#[test]
fn sweep_emits_certificate_rows_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.conf",
        "[params]\nlambdas = 1, 2\nomegas = 1\nalphas = 0, 0.5\n",
    );
    let out_dir = dir.path().join("out");
    let output = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "csv",
        "--jobs",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let csv = fs::read_to_string(out_dir.join("sweep_report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5, "header plus four grid cells");
    assert!(lines[0].starts_with("lambda,omega,alpha,period,lipschitz,bound,slack"));
    for row in &lines[1..] {
        assert!(row.ends_with(",true"));
    }
}

#[test]
fn per_case_errors_fail_the_verdict_without_aborting_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    // alpha = 1.5 is outside the admissible range: that cell must fail
    // and the remaining cells must still be reported.
    let config = write_config(
        dir.path(),
        "sweep.conf",
        "[params]\nlambdas = 1\nomegas = 1\nalphas = 0, 1.5\n",
    );
    let out_dir = dir.path().join("out");
    let output = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1), "fail verdict exits 1");
    let json = fs::read_to_string(out_dir.join("sweep_report.json")).unwrap();
    assert!(json.contains("\"verdict\": {\"pass\": false, \"passed\": 1, \"failed\": 1}"));
    assert!(json.contains("\"error\""));
    assert!(stdout_of(&output).contains("verdict: fail (1 of 2 cases pass)"));
}

#[test]
fn bound_grid_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "grid.conf",
        "[params]\nalphas = 0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9\n\n[plot]\nfields = alpha, k_value\n",
    );
    let out_dir = dir.path().join("out");
    let output = run(&[
        "bound",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let plot = fs::read_to_string(out_dir.join("bound_plotdata.csv")).unwrap();
    let lines: Vec<&str> = plot.lines().collect();
    assert_eq!(lines.len(), 11, "header plus ten grid rows");
    assert_eq!(lines[0], "alpha,k_value");
    // The alpha = 0 row carries the closed-form constant 1/(2 + gamma).
    assert!(lines[1].contains("2.2019185356758"));
}

#[test]
fn unknown_plot_field_is_a_parameter_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "plot.conf",
        "[params]\nalpha = 0.5\n\n[plot]\nfields = alpha, slack\n",
    );
    let output = run(&["bound", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("unknown field `slack`"));
}

#[test]
fn orbit_scenario_detects_and_refines() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "orbit.conf",
        "[params]\nlambda = 1\nomega = 2\nalpha = 0.5\nperturbation = 0.01\nsteps_per_period = 2048\n",
    );
    let out_dir = dir.path().join("out");
    let output = run(&[
        "orbit",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let json = fs::read_to_string(out_dir.join("orbit_report.json")).unwrap();
    // Period 2*pi/2 = pi, detected and refined.
    assert!(json.contains("\"refined_period\": 3.141592653"));
    assert!(json.contains("\"provenance\": \"refined\""));
}

#[test]
fn missing_config_is_fatal_for_parameterized_scenarios() {
    let output = run(&["rd"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("requires --config"));
}

#[test]
fn verify_all_passes_without_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let output = run(&[
        "verify-all",
        "--out",
        out_dir.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let json = fs::read_to_string(out_dir.join("verify-all_report.json")).unwrap();
    assert!(json.contains("\"verdict\": {\"pass\": true, \"passed\": 9, \"failed\": 0}"));
    assert!(stdout_of(&output).contains("verdict: pass (9 of 9 cases pass)"));
}
