use randop_core::harness::{format_float, run};
use randop_core::{Error, Experiment, ExperimentConfig};

const WIDTHS: &str = r#"{
    "process": {"kind": "poisson", "intensity": 1.0},
    "variance": 2.0,
    "interval": {"lo": -3.0, "hi": 3.0},
    "window": {"lo": -12.0, "hi": 12.0},
    "replications": 4,
    "master_seed": 17,
    "x_grid": [3, 5, 8]
}"#;

const GROWTH: &str = r#"{
    "process": {"kind": "poisson", "intensity": 1.0},
    "window": {"lo": -30.0, "hi": 30.0},
    "replications": 3,
    "n_grid": [4, 8, 16]
}"#;

fn csv<'a>(files: &'a [(String, String)], name: &str) -> &'a str {
    &files.iter().find(|(n, _)| n == name).unwrap().1
}

#[test]
fn widths_csv_columns_and_precision() {
    let cfg = ExperimentConfig::from_json(WIDTHS).unwrap();
    let report = run(Experiment::Widths, &cfg).unwrap();
    let files = report.csv_files();
    let widths = csv(&files, "widths.csv");
    let mut lines = widths.lines();
    assert_eq!(lines.next(), Some("replication,n,d_n,log_d_n,y_n"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 5);
    let mantissa = row[2].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{}", row[2]);
    assert_eq!(row[0], "0");
    let d: f64 = row[2].parse().unwrap();
    let log_d: f64 = row[3].parse().unwrap();
    assert_eq!(d.ln(), log_d);
}

#[test]
fn norm_growth_csv_columns() {
    let cfg = ExperimentConfig::from_json(GROWTH).unwrap();
    let report = run(Experiment::NormGrowth, &cfg).unwrap();
    let files = report.csv_files();
    let table = csv(&files, "norm_growth.csv");
    assert_eq!(
        table.lines().next(),
        Some("replication,n,norm,max_count,scaled_statistic,rayleigh_bound")
    );
    assert_eq!(table.lines().count(), 1 + 3 * 3);
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn floats_round_trip_exactly() {
    for x in [0.1, 1.0 / 3.0, 6.907755278982137, 1e-300, -2.5e17, 0.0] {
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}

#[test]
fn report_json_carries_config_and_checks() {
    let cfg = ExperimentConfig::from_json(WIDTHS).unwrap();
    let report = run(Experiment::Widths, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    report.write_to(dir.path()).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(json["experiment"], "widths");
    assert_eq!(json["master_seed"], 17);
    assert_eq!(json["config"]["experiment"], "widths");
    assert!(json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "tail_bound"));
    for (name, body) in report.csv_files() {
        assert_eq!(
            std::fs::read_to_string(dir.path().join(name)).unwrap(),
            body
        );
    }
}

#[test]
fn config_errors() {
    let unknown = WIDTHS.replace("\"variance\"", "\"bogus\": 1, \"variance\"");
    assert!(matches!(
        ExperimentConfig::from_json(&unknown),
        Err(Error::Config(_))
    ));
    assert!(ExperimentConfig::from_json("{").is_err());
    let bad_window = WIDTHS.replace("\"lo\": -12.0, \"hi\": 12.0", "\"lo\": 12.0, \"hi\": -12.0");
    assert!(ExperimentConfig::from_json(&bad_window).is_err());
    let bad_kind = WIDTHS.replace("poisson", "cox");
    assert!(ExperimentConfig::from_json(&bad_kind).is_err());

    let cfg = ExperimentConfig::from_json(WIDTHS).unwrap();
    assert!(matches!(
        run(Experiment::Muntz, &cfg),
        Err(Error::Config(_))
    ));
    let mut zero = cfg.clone();
    zero.replications = 0;
    assert!(matches!(
        run(Experiment::Widths, &zero),
        Err(Error::Config(_))
    ));
}

#[test]
fn shipped_configs_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::load(&path).unwrap();
        let experiment = cfg.experiment.expect("config names its experiment");
        cfg.validate(experiment)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(
            path.file_stem().unwrap().to_str().unwrap(),
            experiment.name()
        );
        seen.push(experiment);
    }
    assert_eq!(seen.len(), 9);
}
