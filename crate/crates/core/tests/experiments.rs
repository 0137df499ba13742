//! End-to-end scenario runs on small systems.

use std::fs;

use iqa_core::experiments::{run, Cell, ExperimentConfig, RunOptions, Scenario, PROVENANCE_FILE};
use iqa_core::metrics::max_r;
use iqa_core::{anneal_pair, fidelity, RunParams};

fn small_config(scenario: Scenario) -> String {
    let body = match scenario {
        Scenario::Adiabaticity | Scenario::MaxRScaling => {
            "N_list = 8, 10\nl_list = 2\nT_list = 20, 40"
        }
        Scenario::FidelityMap => "N_list = 8\nl_list = 1..2\nT_list = 30",
        Scenario::FidelityVsL | Scenario::LEpsilon => "N_list = 8, 10\nT_list = 30\nepsilon = 0.05",
        Scenario::CouplingDecay | Scenario::RangeScaling => "N_list = 8, 12\nT_list = 30",
        Scenario::OracleCheck => "N_list = 4, 6",
    };
    format!("scenario = {scenario}\n{body}\nlambda_points = 21\n")
}

fn run_in(dir: &std::path::Path, text: &str) -> iqa_core::experiments::RunOutput {
    let cfg: ExperimentConfig = text.parse().unwrap();
    run(
        &cfg,
        &RunOptions {
            workers: Some(2),
            output_dir: Some(dir.to_path_buf()),
        },
    )
    .unwrap()
}

#[test]
fn every_scenario_is_byte_deterministic() {
    for scenario in Scenario::ALL {
        let text = small_config(scenario);
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let out_a = run_in(a.path(), &text);
        let out_b = run_in(b.path(), &text);
        assert_eq!(out_a.files.len(), out_a.tables.len() + 1);
        assert!(out_a.scenario_dir.ends_with(scenario.name()));
        for (fa, fb) in out_a.files.iter().zip(&out_b.files) {
            assert_eq!(
                fs::read(fa).unwrap(),
                fs::read(fb).unwrap(),
                "{}",
                fa.display()
            );
        }
        assert!(out_a.scenario_dir.join(PROVENANCE_FILE).exists());
        for t in &out_a.tables {
            assert!(!t.rows().is_empty(), "{scenario}: empty table");
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let text = small_config(Scenario::FidelityVsL);
    let cfg: ExperimentConfig = text.parse().unwrap();
    let one = tempfile::tempdir().unwrap();
    let many = tempfile::tempdir().unwrap();
    let a = run(
        &cfg,
        &RunOptions {
            workers: Some(1),
            output_dir: Some(one.path().into()),
        },
    )
    .unwrap();
    let b = run(
        &cfg,
        &RunOptions {
            workers: Some(4),
            output_dir: Some(many.path().into()),
        },
    )
    .unwrap();
    assert_eq!(a.tables, b.tables);
}

#[test]
fn oracle_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &small_config(Scenario::OracleCheck));
    let t = &out.tables[0];
    // N=4: l ∈ {1,2}; N=6: l ∈ {1,2,3}; five λ each.
    assert_eq!(t.rows().len(), 25);
    for c in ["max_abs_K_diff", "fidelity_diff"] {
        for v in t.column(c).unwrap() {
            assert!(v.as_f64().unwrap() <= 1e-10, "{c}: {v:?}");
        }
    }
}

#[test]
fn rows_reproduce_library_calls() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &small_config(Scenario::MaxRScaling));
    let t = &out.tables[0];
    let row = &t.rows()[0];
    assert_eq!(&row[..3], &[Cell::Int(8), Cell::Int(2), Cell::Real(20.0)]);
    let (a, b) = anneal_pair(&RunParams::new(8, 2, 20.0).with_sample_count(21)).unwrap();
    let peak = max_r(&a, &b).unwrap();
    assert_eq!(row[3], Cell::Real(peak.lambda));
    assert_eq!(row[4], Cell::Real(peak.value));

    let out = run_in(dir.path(), &small_config(Scenario::FidelityMap));
    let row = &out.tables[0].rows()[14];
    let traj = iqa_core::anneal_run(&RunParams::new(8, 1, 30.0).with_sample_count(21)).unwrap();
    assert_eq!(
        row[4],
        Cell::Real(fidelity(&traj.couplings(14), 0.7).fidelity)
    );
}

#[test]
fn csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &small_config(Scenario::RangeScaling));
    let text = fs::read_to_string(out.scenario_dir.join("effective_range.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,lambda,r_avg_h,r_avg_K"));
    assert_eq!(lines.count(), 2);
    assert!(!text.contains('\r'));
    let prov = fs::read_to_string(out.scenario_dir.join(PROVENANCE_FILE)).unwrap();
    assert!(prov.contains("scenario = range-scaling"));
}

#[test]
fn l_epsilon_rows_cover_lambda_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &small_config(Scenario::LEpsilon));
    let t = &out.tables[0];
    assert_eq!(t.rows().len(), 42);
    // At λ = 0 every range reproduces the start exactly.
    assert_eq!(t.rows()[0][3], Cell::Int(1));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let err =
        ExperimentConfig::from_file(std::path::Path::new("/nonexistent/iqa.cfg")).unwrap_err();
    assert!(matches!(err, iqa_core::Error::Io { .. }));
}
