use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qif-mzi"))
}

fn preset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("presets")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn every_preset_runs() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(preset("")).unwrap() {
        let path = entry.unwrap().path();
        if path.file_name().unwrap() == "verify.conf" {
            continue;
        }
        let out = dir.path().join("out.csv");
        let o = bin()
            .arg("--config")
            .arg(&path)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.lines().count() >= 2, "{}", path.display());
        assert!(!text.contains("NaN"));
    }
}

#[test]
fn sweep_has_full_grid() {
    let o = run(&["--config", preset("fig4.conf").to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "delta_over_W,phi_rad,mean_p1_over_W,mean_p1_printed_over_W,difference_over_W"
    );
    assert_eq!(lines.count(), 10201);
}

#[test]
fn sweep_rows_are_row_major() {
    let o = run(&["sweep", "--delta-over-w-steps", "2", "--phi-steps", "3"]);
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(2).map(|v| v.parse().unwrap()).collect())
        .collect();
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(rows.len(), 6);
}

#[test]
fn flags_override_config_file() {
    let o = run(&[
        "--config",
        preset("fig2c.conf").to_str().unwrap(),
        "--grid-points",
        "3",
        "--grid_half_width_over_w=1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn summary_goes_to_stdout_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ports.json");
    let o = run(&[
        "ports",
        "--delta-over-w",
        "0.3",
        "--phi",
        "0.75pi",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Ehrenfest"));
    let json = fs::read_to_string(&path).unwrap();
    assert!(json.starts_with("[\n"));
    assert!(json.contains("\"port\": \"total\""));
}

#[test]
fn dark_port_exits_nonzero() {
    let o = run(&["distributions", "--delta-over-w", "0", "--phi", "pi"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("zero post-selection probability"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn unwritable_output_path() {
    let o = run(&[
        "ports",
        "--delta-over-w",
        "0.3",
        "--phi",
        "1",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("/nonexistent/dir/out.csv"));
}

#[test]
fn config_errors() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing required keys: mode"));

    let o = run(&["ports", "--phi", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("delta_over_w"));

    let o = run(&["ports", "--delta-over-w", "zero", "--phi", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a number"));

    let o = run(&["ports", "--colour", "red"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key `colour`"));

    let o = run(&["ports", "--phi"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_error_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    fs::write(&path, "mode = ports\n# ok\nphi 1\n").unwrap();
    let o = bin().arg("--config").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"));
}

#[test]
fn help() {
    let o = run(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("usage: qif-mzi"));
}

#[test]
fn quick_verify_passes() {
    let o = run(&[
        "verify",
        "--oracle-draws",
        "2",
        "--algebra-draws",
        "20",
        "--seed",
        "9",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 11);
    assert!(!table.contains(",fail"));
}

#[test]
fn design_reports_units() {
    let o = run(&[
        "--config",
        preset("design_reference.conf").to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    for col in [
        "separation_m",
        "delta_kg_m_per_s",
        "alpha_rad",
        "fringe_spacing_m",
        "tuned_separation_m",
    ] {
        assert!(header.split(',').any(|c| c == col), "{col}");
    }
    assert!(stderr(&o).contains("PASS"));
}
