use std::process::Command;

use qchardy::{emit, run, CliError, Experiment, ExperimentReport, ExperimentSpec, Format, Row, RowClass};
use qchardy_core::boundary_maps::MapCatalogEntry;
use qchardy_core::classify::Classification;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qchardy"))
}

#[test]
fn csv_of_three_rows_has_four_lines() {
    let report = ExperimentReport::new(
        ExperimentSpec::new(Experiment::Thm1),
        vec![
            Row::new("x", 1.0, 0.0, Classification::Converged),
            Row::new("y", 2.5, 0.1, Classification::Undetermined),
            Row::check("z", 3.0, 0.0, false),
        ],
        Vec::new(),
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    emit(&report, Format::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "quantity,value,error,classification");
    assert_eq!(lines[3], "z,3,0,fail");
    assert!(!report.passed());
}

#[test]
fn json_round_trips() {
    let report = run(&ExperimentSpec::new(Experiment::Thm2).with_map(MapCatalogEntry::Identity)).unwrap();
    // identity control: the boundary norm of 1/(1 − z) is infinite
    assert_eq!(report.row("boundary_lp_norm_f").unwrap().value, f64::INFINITY);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    emit(&report, Format::Json, &path).unwrap();
    let back = ExperimentReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn identity_proxy_is_one_and_passes() {
    let report = run(&ExperimentSpec::new(Experiment::Thm1).with_map(MapCatalogEntry::Identity)).unwrap();
    let proxy = report.row("proxy_sup").unwrap();
    assert!((proxy.value - 1.0).abs() < 1e-6);
    assert_eq!(report.row("check_joint_classification").unwrap().classification, RowClass::Pass);
    assert!(report.passed());
    let names: Vec<&str> = report.rows.iter().map(|r| r.quantity.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn lemma1_power_map_has_finite_apertures() {
    let report = run(&ExperimentSpec::new(Experiment::Lemma1)).unwrap();
    assert_eq!(report.spec.map, MapCatalogEntry::Power(2.0));
    assert!(report.row("aperture_max").unwrap().value.is_finite());
    assert!(report.passed());
}

#[test]
fn bad_specs_are_rejected() {
    assert!(matches!("thm4".parse::<Experiment>(), Err(CliError::UnknownExperiment(_))));
    let af = ExperimentSpec::new(Experiment::AfConformal).with_map(MapCatalogEntry::Thm2Sqrt);
    assert!(matches!(run(&af), Err(CliError::InvalidPairing { .. })));
    assert!(matches!(run(&ExperimentSpec::new(Experiment::Thm2).with_p(0.0)), Err(CliError::InvalidSpec(_))));
    let mut deep = ExperimentSpec::new(Experiment::Thm1);
    deep.depth = 31;
    assert!(run(&deep).is_err());
}

#[test]
fn emit_reports_the_path() {
    let report = ExperimentReport::new(ExperimentSpec::new(Experiment::Thm1), Vec::new(), Vec::new());
    let err = emit(&report, Format::Csv, std::path::Path::new("/nonexistent/dir/r.csv")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/r.csv"));
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("{i}.csv"));
        let status = bin()
            .args(["af_conformal", "--map", "moebius:0.5", "--seed", "7", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn binary_exit_codes() {
    let ok = bin().args(["thm1", "--map", "identity", "--format", "json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let report = ExperimentReport::from_json(std::str::from_utf8(&ok.stdout).unwrap()).unwrap();
    assert!(report.metadata.wall_time_s.is_none());

    let unknown = bin().arg("thm9").output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let pairing = bin().args(["af_conformal", "--map", "power:2"]).output().unwrap();
    assert_eq!(pairing.status.code(), Some(2));
    let negative = bin().args(["thm2", "--p", "-1"]).output().unwrap();
    assert_eq!(negative.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&negative.stderr).contains("p must be positive"));
}
