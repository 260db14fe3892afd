use copycat_core::scenarios::credit::{generate_credit_like, CreditGenConfig};
use copycat_core::scenarios::{run_scenario1, run_scenario2, run_toy, ScenarioConfig};

fn quick(seed: u64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::desk(seed);
    cfg.copy.n_train = 5_000;
    cfg.copy.n_test = 5_000;
    cfg.copy.runs = 2;
    cfg.grid_resolution = 25;
    cfg
}

#[test]
fn scenario1_copies_on_raw_attributes() {
    let cfg = quick(0);
    let data = generate_credit_like(&cfg.credit).unwrap();
    let report = run_scenario1(&data, &cfg).unwrap();
    assert_eq!(report.copy_input_dim, 19);
    assert_eq!(report.original.input_dim, 19);
    assert_eq!(report.original.internal_dim, Some(6));
    assert_eq!(report.copy_study.per_run.len(), 2);
    assert!(report.copy_summary.contains(" ± "));
    assert_eq!(report.data.test_rows + report.data.train_rows, 1328);
    assert_eq!(report, run_scenario1(&data, &cfg).unwrap());
}

#[test]
fn scenario2_reports_aligned_importances() {
    let cfg = quick(1);
    let data = generate_credit_like(&cfg.credit).unwrap();
    let report = run_scenario2(&data, &cfg).unwrap();
    let imp = report.importance.as_ref().unwrap();
    assert_eq!(imp.rows.len(), 19);
    for v in [imp.original(), imp.copy()] {
        assert!(v.iter().all(|&x| x >= 0.0));
        assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
    assert!(report.baseline("raw_lr").is_some());
}

#[test]
fn scenarios_reject_foreign_schemas() {
    let cfg = quick(0);
    let toy = copycat_core::scenarios::toy::generate_moons(&cfg.toy).unwrap();
    assert!(run_scenario2(&toy, &cfg).is_err());
    let small = generate_credit_like(&CreditGenConfig { n_rows: 40, ..cfg.credit }).unwrap();
    assert!(run_scenario1(&small, &cfg).is_ok());
}

#[test]
fn toy_grid_has_resolution_squared_rows_and_repeats() {
    let mut cfg = quick(2);
    cfg.train.mlp.epochs = 30;
    let a = run_toy(&cfg).unwrap();
    assert_eq!(a.grid.points.len(), 25 * 25);
    let b = run_toy(&cfg).unwrap();
    assert_eq!(a.grid, b.grid);
    assert_eq!(a.report, b.report);
}
