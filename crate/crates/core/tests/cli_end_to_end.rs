use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degenpar"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, base: &str, edits: &[(&str, &str)]) -> PathBuf {
    let text = std::fs::read_to_string(configs().join(base)).unwrap();
    let mut lines: Vec<String> = text
        .lines()
        .filter(|l| {
            !edits
                .iter()
                .any(|(k, _)| l.split('=').next().unwrap().trim() == *k)
        })
        .map(String::from)
        .collect();
    lines.extend(edits.iter().map(|(k, v)| format!("{k} = {v}")));
    let path = dir.join("run.conf");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

fn check_rows(report: &str) -> Vec<(String, bool)> {
    report
        .lines()
        .skip_while(|l| *l != "check,pass,tolerance")
        .skip(1)
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].to_string(), cols[1] == "true")
        })
        .collect()
}

#[test]
fn alpha_range_prints_interval() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["alpha-range"],
        &configs().join("alpha_range.conf"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "[-3.8708287, -0.1291713]"
    );
}

#[test]
fn verify_certifies_cosine_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify"],
        &configs().join("cosine_certify.conf"),
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let rows = check_rows(&report);
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|(_, pass)| *pass), "{rows:?}");
    assert!(!dir.path().join("FAILED").exists());
    for f in [
        "eps_convergence.csv",
        "witness.csv",
        "limit/manifest.csv",
        "plot/profile_t0.csv",
    ] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
}

#[test]
fn verify_rejects_small_gamma_as_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "cosine_certify.conf", &[("gamma", "0.2")]);
    let out = run(&["verify"], &cfg, &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    let solve = run(&["solve"], &cfg, &dir.path().join("solve"));
    assert_eq!(solve.status.code(), Some(0));
}

#[test]
fn failed_check_exits_one_with_marker() {
    let dir = tempfile::tempdir().unwrap();
    let times: Vec<String> = (0..=16)
        .map(|k| format!("{}", 0.2 * k as f64 / 16.0))
        .collect();
    let cfg = write_config(
        dir.path(),
        "cosine_certify.conf",
        &[("snapshots", &times.join(", "))],
    );
    let out_dir = dir.path().join("out");
    let out = run(&["verify"], &cfg, &out_dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(out_dir.join("FAILED").exists());
    let report = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(check_rows(&report)
        .iter()
        .any(|(name, pass)| name.starts_with("weak_residual") && !pass));
}

#[test]
fn unknown_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gaussian.conf", &[("viscosity", "1")]);
    let out = run(&["solve"], &cfg, &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("viscosity"));
}

#[test]
fn mms_table_meets_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_degenpar"))
        .args(["mms", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let table = std::fs::read_to_string(dir.path().join("mms.csv")).unwrap();
    let mut affine = 0;
    for line in table.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let err: f64 = cols[2].parse().unwrap();
        match cols[0] {
            "affine" => {
                affine += 1;
                assert!(err <= 1e-10, "{line}");
            }
            "uniform_ode" => assert!(err <= 5e-4, "{line}"),
            _ => {}
        }
    }
    assert_eq!(affine, 3);
    assert!(dir.path().join("mms_time.csv").exists());
}

#[test]
fn sweep_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "gaussian.conf",
        &[("n", "64"), ("eps_count", "3")],
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        assert_eq!(run(&["sweep-eps"], &cfg, out).status.code(), Some(0));
    }
    for f in [
        "eps_convergence.csv",
        "eps_2/manifest.csv",
        "eps_2/snap_0010.field.csv",
        "plot/profile_t3.csv",
    ] {
        let x = std::fs::read(a.join(f)).unwrap();
        let y = std::fs::read(b.join(f)).unwrap();
        assert_eq!(x, y, "{f} differs");
    }
}
