use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lambda-euler"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

/// Data rows of a CSV report as field vectors, quotes stripped.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|f| f.trim_matches('"').to_string()).collect())
        .collect()
}

fn header(text: &str, key: &str) -> Option<String> {
    text.lines().find_map(|l| l.strip_prefix(&format!("# {key}=")).map(str::to_string))
}

const HYPERSURFACE: &str = "family = smooth_hypersurface\nq = 2\nell = 1\nbase = P1\nN = 4\nK = 4\n";

#[test]
fn selftest_passes_every_property() {
    let dir = TempDir::new().unwrap();
    let out = run(&["selftest"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().filter(|l| !l.contains("properties pass")).collect();
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l.starts_with("pass ")), "{text}");
}

#[test]
fn theory_table_has_point_count_mean() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", HYPERSURFACE);
    let out = run(&["theory", "--config", &cfg], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(header(&text, "schema_version").as_deref(), Some("1"));
    assert_eq!(header(&text, "config.family").as_deref(), Some("smooth_hypersurface"));
    let rows = csv_rows(&text);
    let m1 = rows.iter().find(|r| r[0] == "1" && r[1] == "1").expect("m_(1) row");
    assert_eq!(m1[2], "1");
    // every partition of size <= 4 at four ghost indices
    assert_eq!(rows.len(), (1 + 1 + 2 + 3 + 5) * 4);
}

#[test]
fn point_count_mean_is_one_at_every_ghost() {
    // ghost k of m_(1) is [P^1]_k * p_k = (q^k + 1)(q^k - 1)/(q^2k - 1)
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", HYPERSURFACE);
    let rows = csv_rows(&stdout(&run(&["theory", "--config", &cfg], dir.path())));
    let m1: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "1").collect();
    assert_eq!(m1.len(), 4);
    assert!(m1.iter().all(|r| r[2] == "1"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "sim.cfg",
        "family = smooth_hypersurface\nq = 3\nd = 5\nN = 3\nsampling = monte_carlo\nsamples = 5000\nseed = 11\n",
    );
    for cmd in ["theory", "simulate", "compare"] {
        let a = run(&[cmd, "--config", &cfg], dir.path());
        let b = run(&[cmd, "--config", &cfg], dir.path());
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let a = run(&["simulate", "--config", &cfg, "--seed", "12"], dir.path());
    let b = run(&["simulate", "--config", &cfg], dir.path());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn compare_identical_tables_has_zero_deviation() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", HYPERSURFACE);
    for format in ["csv", "json"] {
        let table = dir.path().join(format!("t.{format}"));
        let table = table.to_str().unwrap();
        assert!(run(&["theory", "--config", &cfg, "--format", format, "--out", table], dir.path()).status.success());
        let cmp = write(dir.path(), "cmp.cfg", &format!("theory_table = {table}\nempirical_table = {table}\n"));
        let out = run(&["compare", "--config", &cmp], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let text = stdout(&out);
        assert_eq!(header(&text, "summary.max_abs_dev").as_deref(), Some("0"));
        assert!(csv_rows(&text).iter().all(|r| r[2] == "0" && r[6] == "0"));
    }
}

#[test]
fn simulated_hypersurface_tracks_theory() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", "family = smooth_hypersurface\nq = 3\nd = 8\nN = 3\n");
    let out = run(&["compare", "--config", &cfg], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(header(&text, "summary.empirical.sampling").as_deref(), Some("exhaustive"));
    let max: f64 = header(&text, "summary.max_abs_dev").unwrap().parse().unwrap();
    assert!(max < 0.05, "max deviation {max}");
}

#[test]
fn auto_sampling_falls_back_to_monte_carlo() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", "family = smooth_hypersurface\nq = 3\nd = 8\nN = 2\nbudget = 100\nsamples = 2000\n");
    let text = stdout(&run(&["simulate", "--config", &cfg], dir.path()));
    assert_eq!(header(&text, "summary.sampling").as_deref(), Some("monte_carlo samples=2000 seed=0"));
    let forced = run(&["simulate", "--config", &cfg, "--exhaustive"], dir.path());
    assert!(!forced.status.success(), "exhaustive scan must respect the budget");
}

#[test]
fn json_report_carries_schema_and_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", HYPERSURFACE);
    let out = run(&["theory", "--config", &cfg, "--format", "json", "--N", "2", "--K", "2"], dir.path());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "theory");
    assert_eq!(doc["config"]["N"], "2");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), (1 + 1 + 2) * 2);
    assert!(rows.iter().all(|r| r["value_exact"].is_string() && r["ghost_k"].is_u64()));
}

#[test]
fn strict_config_errors_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    for body in [
        "family = smooth_hypersurface\nq = 2\nbogus = 1\n",
        "family = smooth_hypersurface\nq = 2\nq = 3\n",
        "family = smooth_hypersurface\nq = two\n",
        "family = nonsense\nq = 2\n",
        "family = smooth_hypersurface\nq = 2\nno equals sign\n",
        "family = smooth_hypersurface\nq = 6\n",
    ] {
        let cfg = write(dir.path(), "bad.cfg", body);
        let out = run(&["theory", "--config", &cfg], dir.path());
        assert!(!out.status.success(), "accepted {body:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn unsupported_simulation_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", "family = hirzebruch\nq = 2\nd = 3\n");
    assert!(!run(&["simulate", "--config", &cfg], dir.path()).status.success());
}
