use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn coolgrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coolgrid"))
        .args(args)
        .env_remove("COOLGRID_DATA")
        .output()
        .expect("binary runs")
}

fn sample() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/sample")
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compare against a golden file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn help_matches_golden() {
    let o = coolgrid(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert_golden("help.txt", &stdout(&o));

    let o = coolgrid(&["run", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert_golden("run_help.txt", &stdout(&o));
}

#[test]
fn version_subcommand() {
    let o = coolgrid(&["version"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        format!("coolgrid {}", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn validate_sample() {
    let o = coolgrid(&["validate", "--data", &sample()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert!(out.contains("cells: 4"));
    assert!(out.trim_end().ends_with("ok"));
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = coolgrid(&[
        "run",
        "--data",
        &sample(),
        "--years",
        "2020:2040:10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for f in [
        "capacity_by_region_year.csv",
        "match_by_region_year.csv",
        "flex_curve_by_year.csv",
        "run_manifest.txt",
    ] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let capacity = fs::read_to_string(out.join("capacity_by_region_year.csv")).unwrap();
    assert!(capacity.starts_with("year,region,interpolated,"));
    assert_eq!(
        capacity.lines().filter(|l| l.contains(",World,")).count(),
        21
    );
    let manifest = fs::read_to_string(out.join("run_manifest.txt")).unwrap();
    assert!(manifest.contains("config_hash = "));
    assert!(manifest.contains("config.years = 2020:2040:10"));
}

#[test]
fn flex_windows_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = coolgrid(&[
        "flex",
        "--data",
        &sample(),
        "--years",
        "2050",
        "--windows",
        "1,24,720,8760",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(dir.path().join("flex_curve_by_year.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert!(!rows.is_empty());
    assert_eq!(rows.len() % 4, 0);
    for group in rows.chunks(4) {
        let windows: Vec<&str> = group.iter().map(|r| r[3]).collect();
        assert_eq!(windows, ["1", "24", "720", "8760"]);
        assert!(group.iter().all(|r| r[1] == group[0][1]));
        let last: f64 = group[3][5].parse().unwrap();
        assert!((last - 1.0).abs() < 1e-9, "{last}");
    }
}

#[test]
fn cell_command_prints_chain() {
    let o = coolgrid(&["cell", "--id", "2", "--year", "2050", "--data", &sample()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    for section in [
        "demand",
        "sizing",
        "match",
        "flexibility",
        "storage_fraction",
    ] {
        assert!(out.contains(section), "{section} missing");
    }

    let o = coolgrid(&["cell", "--id", "99", "--year", "2050", "--data", &sample()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        coolgrid(&["run", "--years", "2100:2010"]).status.code(),
        Some(2)
    );
    assert_eq!(coolgrid(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        coolgrid(&["run", "--windows", "0,24"]).status.code(),
        Some(2)
    );
    assert_eq!(
        coolgrid(&["run", "--storage", "maybe"]).status.code(),
        Some(2)
    );
    assert_eq!(
        coolgrid(&["run", "--set", "no_such_key=1"]).status.code(),
        Some(2)
    );
    assert_eq!(coolgrid(&[]).status.code(), Some(2));
}

#[test]
fn missing_data_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = coolgrid(&[
        "validate",
        "--data",
        dir.path().join("absent").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# scenario\nyears = 2030:2030\nssp = ssp3\nwarming = rcp85\nstorage = off\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = coolgrid(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--data",
        &sample(),
        "--ssp",
        "ssp5",
        "--set",
        "t_base=292.15",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let manifest = fs::read_to_string(out.join("run_manifest.txt")).unwrap();
    assert!(
        manifest.contains("config.years = 2030:2030:1"),
        "{manifest}"
    );
    assert!(manifest.contains("config.ssp = ssp5"));
    assert!(manifest.contains("config.warming = rcp85"));
    assert!(manifest.contains("config.storage = off"));
    assert!(manifest.contains("config.t_base = 292.15"));

    fs::write(&cfg, "years = 2030\nnot_a_key = 3\n").unwrap();
    let o = coolgrid(&[
        "validate",
        "--config",
        cfg.to_str().unwrap(),
        "--data",
        &sample(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.cfg:2:"));
}
