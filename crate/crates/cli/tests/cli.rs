//! End-to-end runs of the `modkernel` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn modkernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modkernel"))
        .args(args)
        .env_remove("MODKERNEL_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows after the `#` header and the column line.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn header(text: &str, key: &str) -> Option<String> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .find_map(|l| l.strip_prefix(&format!("{key} = ")).map(String::from))
}

const SMALL_WEDGE: &[&str] = &[
    "--region", "wedge", "--edge", "0", "--mass", "1", "--cells", "16", "--digits", "60",
];

#[test]
fn selfcheck_passes_and_reports_each_check() {
    let o = modkernel(&["selfcheck", "--digits", "40"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 8);
    assert!(!out.contains("FAIL"));
}

#[test]
fn injected_fault_fails_selfcheck_with_exit_one() {
    let o = modkernel(&[
        "selfcheck",
        "--digits",
        "40",
        "--inject-fault",
        "momentum-vs-position",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL momentum-vs-position"));
    let o = modkernel(&["selfcheck", "--inject-fault", "no-such-check"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn configuration_errors_exit_three() {
    for args in [
        vec![
            "scan",
            "--region",
            "wedge",
            "--edge",
            "0",
            "--mu-range",
            "1:2",
            "--digits",
            "40",
        ],
        vec!["scan", "--region", "disc", "--mu", "0", "--digits", "40"],
        vec![
            "scan", "--region", "interval", "--left", "1", "--right", "-1", "--mu", "0",
            "--digits", "40",
        ],
        vec![
            "scan", "--region", "wedge", "--edge", "0.1", "--cells", "8", "--mu", "1", "--digits",
            "40",
        ],
        vec![
            "scan", "--region", "wedge", "--edge", "9", "--mu", "1", "--digits", "40",
        ],
        vec![
            "scan", "--region", "wedge", "--edge", "0", "--mass", "-1", "--mu", "1", "--digits",
            "40",
        ],
        vec![
            "scan", "--region", "wedge", "--edge", "0", "--mu", "3.9", "--digits", "40",
        ],
    ] {
        let o = modkernel(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("modkernel: "));
    }
}

#[test]
fn empty_region_exits_two_with_forbidden_spectrum() {
    let o = modkernel(&[
        "scan", "--region", "wedge", "--edge", "4", "--mass", "1", "--cells", "8", "--mu", "1",
        "--digits", "40",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("forbidden"));
}

#[test]
fn kernel_csv_is_a_symmetric_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kernel.csv");
    let o = modkernel(&[
        "kernel",
        "--region",
        "interval",
        "--left",
        "-1",
        "--right",
        "1",
        "--mass",
        "1",
        "--cells",
        "32",
        "--halfwidth",
        "2",
        "--allow-small-box",
        "--digits",
        "120",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# modkernel "));
    let data = rows(&text);
    assert_eq!(data.len(), 31 * 31);
    let value = |r: usize, c: usize| data[r * 31 + c][2].parse::<f64>().unwrap();
    for r in 0..31 {
        for c in 0..31 {
            let (a, b) = (value(r, c), value(c, r));
            assert!(
                (a - b).abs() <= 1e-20 * a.abs().max(1.0),
                "({r},{c}): {a} vs {b}"
            );
        }
    }
    assert!(header(&text, "band_mass_region").is_some());
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# small wedge\nregion = wedge\nedge = 0\nmass = 1\ncells = 16\ndigits = 60\nmu = 1, 2\nsigma = 0.25\n",
    )
    .unwrap();
    let o = modkernel(&["scan", "--config", cfg.to_str().unwrap(), "--mu", "1.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let data = rows(&stdout(&o));
    assert_eq!(data.len(), 1);
    assert!(data[0][0].starts_with("1.5"));

    fs::write(&cfg, "region = wedge\ncolour = blue\n").unwrap();
    let o = modkernel(&["scan", "--config", cfg.to_str().unwrap(), "--mu", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn wedge_scan_carries_reference_columns() {
    let mut args = vec!["scan"];
    args.extend_from_slice(SMALL_WEDGE);
    args.extend_from_slice(&["--mu-range", "1:2:0.5", "--sigma", "0.25"]);
    let o = modkernel(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines().find(|l| !l.starts_with('#')),
        Some("mu,value,analytic_ref,abs_gap")
    );
    let data = rows(&text);
    assert_eq!(data.len(), 3);
    for row in &data {
        let mu: f64 = row[0].parse().unwrap();
        let reference: f64 = row[2].parse().unwrap();
        assert!((reference - 2.0 * std::f64::consts::PI * mu).abs() < 1e-12);
    }
    assert_eq!(header(&text, "regime").as_deref(), Some("any"));
    assert!(stderr(&o).contains("[modkernel]"));
}

#[test]
fn mass_ladder_writes_one_file_per_mass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let mut args = vec!["scan"];
    args.extend_from_slice(SMALL_WEDGE);
    args.extend_from_slice(&["--mass", "4", "--mu", "1", "--out", out.to_str().unwrap()]);
    let o = modkernel(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    for m in ["1", "4"] {
        let p = dir.path().join(format!("scan_m{m}.csv"));
        let text = fs::read_to_string(&p).unwrap_or_else(|_| panic!("{} missing", p.display()));
        assert_eq!(header(&text, "mass").as_deref(), Some(m));
    }
    assert!(!Path::new(&out).exists());
}

#[test]
fn converge_reports_differences_and_records_failed_rungs() {
    let mut args = vec!["converge"];
    args.extend_from_slice(SMALL_WEDGE);
    args.extend_from_slice(&[
        "--mu", "1", "--ladder", "8:4:60", "--ladder", "16:4:60", "--ladder", "16:4:5",
    ]);
    let o = modkernel(&args);
    let text = stdout(&o);
    let data = rows(&text);
    assert_eq!(data.len(), 3, "{text}\n{}", stderr(&o));
    assert_eq!(data[0][10], "ok");
    assert!(data[0][11].is_empty());
    assert_eq!(data[1][10], "ok");
    assert!(!data[1][12].is_empty());
    // the starved rung is reported in its row; the ladder still completes
    assert_ne!(data[2][10], "ok");
    assert!(data[2][5].is_empty());
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn single_rung_ladder_has_no_difference_column_values() {
    let mut args = vec!["converge"];
    args.extend_from_slice(SMALL_WEDGE);
    args.extend_from_slice(&["--mu", "1", "--mu", "2", "--ladder", "16:4:60"]);
    let o = modkernel(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let data = rows(&stdout(&o));
    assert_eq!(data.len(), 2);
    assert!(data.iter().all(|r| r[10] == "ok" && r[11].is_empty()));
}

#[test]
fn scan_output_is_deterministic() {
    let mut args = vec!["scan"];
    args.extend_from_slice(SMALL_WEDGE);
    args.extend_from_slice(&["--mu-range", "0.5:2:0.5"]);
    let a = modkernel(&args);
    let b = modkernel(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
