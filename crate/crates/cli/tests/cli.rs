use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SAMPLE: &str = r#"{
    "process": {"kind": "poisson", "intensity": 2.0},
    "window": {"lo": 0.0, "hi": 20.0},
    "replications": 5,
    "master_seed": 3
}"#;

const WIDTHS: &str = r#"{
    "experiment": "widths",
    "process": {"kind": "poisson", "intensity": 1.0},
    "variance": 2.0,
    "interval": {"lo": -3.0, "hi": 3.0},
    "window": {"lo": -12.0, "hi": 12.0},
    "replications": 6,
    "x_grid": [3, 4, 5, 6]
}"#;

fn randop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "widths.json", WIDTHS);
    let out_dir = dir.path().join("run");
    let out = randop(&[
        "widths",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--check",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["replications"], 6);
    let widths = fs::read_to_string(out_dir.join("widths.csv")).unwrap();
    assert!(widths.starts_with("replication,n,d_n,log_d_n,y_n\n"));
    assert!(out_dir.join("tail_bound.csv").exists());
}

#[test]
fn seed_and_reps_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sample.json", SAMPLE);
    let out_dir = dir.path().join("run");
    let out = randop(&[
        "sample",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--seed",
        "99",
        "--reps",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["master_seed"], 99);
    assert_eq!(report["replications"], 2);
    let count = fs::read_to_string(out_dir.join("count.csv")).unwrap();
    assert_eq!(count.lines().count(), 3);
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "widths.json", WIDTHS);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(
            code(&randop(&[
                "widths",
                "--config",
                &cfg,
                "--out",
                d.to_str().unwrap()
            ])),
            0
        );
    }
    let mut names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().ends_with(".csv"))
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap()
        );
    }
}

#[test]
fn invalid_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(
        code(&randop(&["sample", "--config", missing.to_str().unwrap()])),
        1
    );

    let unknown = write_config(
        dir.path(),
        "bad.json",
        &SAMPLE.replace("\"window\"", "\"extra\": 1, \"window\""),
    );
    assert_eq!(code(&randop(&["sample", "--config", &unknown])), 1);

    let cfg = write_config(dir.path(), "widths.json", WIDTHS);
    assert_eq!(code(&randop(&["nuclear", "--config", &cfg])), 1);
    assert_eq!(
        code(&randop(&["widths", "--config", &cfg, "--reps", "0"])),
        1
    );
    assert_eq!(code(&randop(&["bogus", "--config", &cfg])), 1);
    assert_eq!(code(&randop(&["widths"])), 1);
}

#[test]
fn overflow_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{
        "process": {"kind": "shifted-lattice", "spacing": 1.0},
        "window": {"lo": -20.0, "hi": 20.0},
        "target": [{"indicator": {"lo": 0.0, "hi": 1.0, "coefficient": 1e200}}]
    }"#;
    let cfg = write_config(dir.path(), "frame.json", body);
    let out_dir = dir.path().join("run");
    let out = randop(&[
        "frame-bound",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failed_check_exits_three_only_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    // an impossible distance threshold makes the density check fail
    let body = r#"{
        "process": {"kind": "poisson", "intensity": 0.5},
        "interval": {"lo": -5.0, "hi": 5.0},
        "window": {"lo": -8.0, "hi": 8.0},
        "replications": 3,
        "target": [{"indicator": {"lo": -1.0, "hi": 1.0}}],
        "muntz_threshold": 0.0
    }"#;
    let cfg = write_config(dir.path(), "muntz.json", body);
    let out_dir = dir.path().join("run");
    let out_dir = out_dir.to_str().unwrap();
    assert_eq!(
        code(&randop(&["muntz", "--config", &cfg, "--out", out_dir])),
        0
    );
    let out = randop(&["muntz", "--config", &cfg, "--out", out_dir, "--check"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL median_final_distance"));
}
