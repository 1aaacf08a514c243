use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .env_remove("CASIMIR_MEDIUM_RELTOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn vacuum_force_row() {
    let out = casimir(&["force", "--hmin", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "H,force_per_area,error_estimate,vacuum_ratio,evaluations,converged"
    );
    let row = &rows(&text)[0];
    assert_eq!(row[0].parse::<f64>().unwrap(), 1.0);
    let f: f64 = row[1].parse().unwrap();
    assert!((f + PI * PI / 480.0).abs() < 1e-7);
    assert!((row[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(row[5], "true");
}

#[test]
fn constant_medium_halves_the_force() {
    let dir = tempfile::tempdir().unwrap();
    let medium = write(
        dir.path(),
        "c3.json",
        r#"{"electric": {"type": "constant", "chi0": 3}}"#,
    );
    let out = casimir(&["force", "--medium", &medium, "--hmin", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let ratio: f64 = rows(&stdout(&out))[0][3].parse().unwrap();
    assert!((ratio - 0.5).abs() < 1e-9);
}

#[test]
fn missing_medium_file_exits_1_without_rows() {
    let out = casimir(&["force", "--medium", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("medium"));
}

#[test]
fn malformed_medium_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let medium = write(
        dir.path(),
        "bad.json",
        "{\n  \"electric\": {\"type\": \"drude\", \"omega_p\": 1, \"gamma\": -1}\n}",
    );
    let out = casimir(&["force", "--medium", &medium]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("electric.gamma"));
}

#[test]
fn bad_grid_and_flags_exit_1() {
    assert_eq!(casimir(&["force", "--hmin", "0"]).status.code(), Some(1));
    assert_eq!(
        casimir(&["force", "--hmin", "2", "--hmax", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(casimir(&["force", "--points", "0"]).status.code(), Some(1));
    assert_eq!(
        casimir(&["force", "--field", "vector"]).status.code(),
        Some(1)
    );
    assert_eq!(
        casimir(&["force", "--rel-tol", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(casimir(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn unstable_magnetic_medium_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let medium = write(
        dir.path(),
        "m.json",
        r#"{"electric": {"type": "constant", "chi0": 0}, "magnetic": {"type": "constant", "chi0": 1.5}}"#,
    );
    let out = casimir(&["force", "--medium", &medium, "--field", "em"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
}

#[test]
fn unconverged_rows_exit_3_but_are_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "run.json",
        r#"{"rel_tol": 1e-15, "abs_tol": 1e-300, "hmin": 1, "hmax": 2, "points": 2}"#,
    );
    let out = casimir(&["force", "--config", &config]);
    assert_eq!(out.status.code(), Some(3));
    let rows = rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().any(|r| r[5] == "false"));
}

#[test]
fn grid_order_and_byte_determinism() {
    let args = [
        "force", "--hmin", "0.5", "--hmax", "5", "--points", "12", "--log",
    ];
    let first = casimir(&args);
    let second = casimir(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let hs: Vec<f64> = rows(&stdout(&first))
        .iter()
        .map(|r| r[0].parse().unwrap())
        .collect();
    assert_eq!(hs.len(), 12);
    assert!(hs.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(hs[0], 0.5);
    assert_eq!(hs[11], 5.0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("force.json");
    let config = write(
        dir.path(),
        "run.json",
        &format!(
            r#"{{"field": "em", "hmin": 2, "format": "json", "out": "{}"}}"#,
            out_path.display()
        ),
    );
    let out = casimir(&["force", "--config", &config, "--hmin", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let row = &rows[0];
    assert_eq!(row["H"].as_f64(), Some(1.0));
    let f = row["force_per_area"].as_f64().unwrap();
    assert!((f + PI * PI / 240.0).abs() < 1e-7);
}

#[test]
fn reltol_environment_default_and_flag_precedence() {
    let run = |extra: &[&str]| {
        let mut args = vec!["force", "--hmin", "1"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_casimir"))
            .args(&args)
            .env("CASIMIR_MEDIUM_RELTOL", "1e-3")
            .output()
            .unwrap()
    };
    let loose = rows(&stdout(&run(&[])))[0][2].parse::<f64>().unwrap();
    let tight = rows(&stdout(&run(&["--rel-tol", "1e-10"])))[0][2]
        .parse::<f64>()
        .unwrap();
    assert!(loose > 1e-8, "{loose}");
    assert!(tight < 1e-11, "{tight}");
    let bad = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["force"])
        .env("CASIMIR_MEDIUM_RELTOL", "tight")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn scale_multiplies_force_columns() {
    let base = rows(&stdout(&casimir(&["force"])))[0][1]
        .parse::<f64>()
        .unwrap();
    let scaled = rows(&stdout(&casimir(&["force", "--scale", "2"])))[0][1]
        .parse::<f64>()
        .unwrap();
    assert_eq!(scaled, 2.0 * base);
}

#[test]
fn polarization_bc_runs() {
    let dir = tempfile::tempdir().unwrap();
    let medium = write(
        dir.path(),
        "l.json",
        r#"{"electric": {"type": "lorentz", "omega_p": 1, "omega_0": 1, "gamma": 0.5}}"#,
    );
    let out = casimir(&["force", "--medium", &medium, "--bc", "polarization"]);
    assert_eq!(out.status.code(), Some(0));
    let ratio: f64 = rows(&stdout(&out))[0][3].parse().unwrap();
    assert!(ratio > 0.0 && ratio < 1.0);
}

#[test]
fn check_suites() {
    let out = casimir(&["check", "limits"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
    let kk = casimir(&["check", "kk"]);
    assert_eq!(kk.status.code(), Some(0));
    for line in stdout(&kk).lines().filter(|l| l.starts_with("PASS")) {
        let dev: f64 = line
            .split("deviation ")
            .nth(1)
            .unwrap()
            .split(' ')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!(dev < 1e-6);
    }
    assert_eq!(casimir(&["check", "dyson"]).status.code(), Some(0));
}

#[test]
fn unknown_suite_exits_1_with_usage() {
    let out = casimir(&["check", "everything"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn propagator_dump() {
    let out = casimir(&["propagator", "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "axis,kind,k,freq,re,im\neuclidean,Gphiphi,1,1,0.5,0\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let medium = write(
        dir.path(),
        "l.json",
        r#"{"electric": {"type": "lorentz", "omega_p": 1, "omega_0": 1, "gamma": 0.1}}"#,
    );
    let out = casimir(&[
        "propagator",
        "--medium",
        &medium,
        "--axis",
        "real",
        "--point",
        "1,0",
        "--kind",
        "GphiP",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().nth(1), Some("real,GphiP,1,0,0,0"));

    let out = casimir(&[
        "propagator",
        "--medium",
        &medium,
        "--axis",
        "real",
        "--point",
        "1,0.5",
        "--point",
        "2,0.3",
        "--kind",
        "G0,Gomega,Gphiphi,GphiP,GphiM,GPP,GMM",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&stdout(&out)).len(), 14);
}

#[test]
fn propagator_pole_sentinel_exits_3() {
    let out = casimir(&[
        "propagator",
        "--axis",
        "real",
        "--point",
        "1,1",
        "--point",
        "2,1",
        "--kind",
        "G0",
        "--eta",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("real,G0,1,1,pole,pole"));
    assert!(!text.to_lowercase().contains("nan"));
    assert_eq!(rows(&text).len(), 2);
}

#[test]
fn propagator_invalid_points_exit_1() {
    assert_eq!(
        casimir(&["propagator", "--point", "-1,1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        casimir(&["propagator", "--point", "1,-1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        casimir(&["propagator", "--point", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        casimir(&["propagator", "--point", "1,1", "--kind", "GPP"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        casimir(&["propagator", "--point", "1,1", "--kind", "Gfoo"])
            .status
            .code(),
        Some(1)
    );
}
