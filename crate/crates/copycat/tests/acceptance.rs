//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs at desk scale (N = 10^5 synthetic points, 30 runs).

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use copycat_core::copier::{build_copy, fidelity_vs_n_sweep, CopyConfig};
use copycat_core::data::{anonymous_schema, stratified_split, train_count, LabeledDataset, SplitConfig, Standardizer};
use copycat_core::models::gbt::{self, RegressionNode};
use copycat_core::models::logistic::{self, LogisticRegressionModel};
use copycat_core::models::mlp::{self, MlpModel};
use copycat_core::models::{tree, CartConfig, Classifier, DecisionTreeModel, GbtConfig, Model, TreeNode};
use copycat_core::rng;
use copycat_core::sampler::SamplingRegion;
use copycat_core::scenarios::credit::generate_credit_like;
use copycat_core::scenarios::{run_scenario1, run_scenario2, run_toy, ScenarioConfig, ScenarioReport};
use copycat_core::Matrix;
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs as f64, || {
        format!("took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

fn random_region(rng: &mut impl Rng, d: usize) -> SamplingRegion {
    let lower: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
    let upper = lower.iter().map(|l| l + rng.random_range(0.1..10.0)).collect();
    SamplingRegion::new(lower, upper).unwrap()
}

/// Points drawn inside `region` for fitting random oracles.
fn points_in(rng: &mut impl Rng, region: &SamplingRegion, n: usize) -> Matrix {
    let d = region.dim();
    let data = (0..n * d)
        .map(|i| {
            let j = i % d;
            rng.random_range(region.lower[j]..region.upper[j])
        })
        .collect();
    Matrix::from_vec(n, d, data).unwrap()
}

fn random_oracle(rng: &mut impl Rng, kind: usize, region: &SamplingRegion) -> Model {
    let d = region.dim();
    match kind {
        0 => Model::Lr(LogisticRegressionModel {
            weights: (0..d).map(|_| rng.random_range(-2.0..2.0)).collect(),
            bias: rng.random_range(-1.0..1.0),
        }),
        1 => {
            let k = rng.random_range(2..4);
            Model::Mlp(MlpModel::init(d, &[8], k, rng.random()))
        }
        _ => {
            let x = points_in(rng, region, 400);
            let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mid: Vec<f64> = (0..d).map(|j| 0.5 * (region.lower[j] + region.upper[j])).collect();
            let k = if kind == 2 { 2 } else { rng.random_range(2..4) };
            let y: Vec<usize> = x
                .iter_rows()
                .map(|r| {
                    let s: f64 = r.iter().zip(&w).zip(&mid).map(|((a, b), m)| (a - m) * b).sum();
                    ((s.sin() + 1.0) * k as f64 / 2.0).floor().min(k as f64 - 1.0) as usize
                })
                .collect();
            let data = LabeledDataset::new(x, y, anonymous_schema(d), k).unwrap();
            if kind == 2 {
                let cfg = GbtConfig { rounds: 20, tree_depth: 3, learning_rate: 0.3 };
                Model::Gbt(gbt::train(&data, &cfg).unwrap())
            } else {
                Model::Cart(tree::train(&data, &CartConfig::default()).unwrap())
            }
        }
    }
}

fn ac1_zero_empirical_error() -> Check {
    let start = Instant::now();
    let mut failures = Vec::new();
    for t in 0..50u64 {
        let mut rng = rng::seeded(1_000 + t);
        let d = rng.random_range(2..7);
        let region = random_region(&mut rng, d);
        let oracle = random_oracle(&mut rng, (t % 4) as usize, &region);
        let cfg = CopyConfig { n_train: 10_000, n_test: 1_000, ..CopyConfig::default() };
        match build_copy(&oracle, &region, &cfg, rng.random(), None) {
            Ok(r) if r.metrics.synthetic_train_accuracy == 1.0 => {}
            Ok(r) => failures.push(format!("triple {t}: accuracy {}", r.metrics.synthetic_train_accuracy)),
            Err(e) => failures.push(format!("triple {t}: {e}")),
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    within(start.elapsed(), 60)?;
    Ok("50/50 unconstrained copies reach training accuracy 1.0 at N=10^4".into())
}

fn sweep_oracle() -> (Model, SamplingRegion) {
    let mut rng = rng::seeded(2);
    let x = random_matrix(&mut rng, 2_000, 5, -1.0, 1.0);
    let y = x
        .iter_rows()
        .map(|r| {
            let s = (3.0 * r[0] + 2.0 * r[1]).sin() + (3.0 * r[2] - r[3]).cos() * r[4] + r[0] * r[3];
            usize::from(s + rng.random_range(-0.1..0.1) > 0.0)
        })
        .collect();
    let data = LabeledDataset::new(x, y, anonymous_schema(5), 2).unwrap();
    let model = gbt::train(&data, &GbtConfig::default()).unwrap();
    (Model::Gbt(model), SamplingRegion::new(vec![-1.0; 5], vec![1.0; 5]).unwrap())
}

fn ac2_asymptotic_fidelity() -> Check {
    let start = Instant::now();
    let (oracle, region) = sweep_oracle();
    let ns = [100, 1_000, 10_000, 100_000];
    let rows = fidelity_vs_n_sweep(&oracle, &region, &ns, 20, 0, None, &CopyConfig::default()).map_err(|e| e.to_string())?;
    let curve: Vec<String> = rows.iter().map(|r| format!("{}:{:.4}±{:.4}", r.n, r.mean_fidelity, r.std_fidelity)).collect();
    for w in rows.windows(2) {
        let pooled = ((w[0].std_fidelity.powi(2) + w[1].std_fidelity.powi(2)) / 2.0).sqrt();
        ensure(w[1].mean_fidelity >= w[0].mean_fidelity - pooled, || {
            format!("fidelity drops from N={} to N={}: {}", w[0].n, w[1].n, curve.join(" "))
        })?;
    }
    let gain = rows[3].mean_fidelity - rows[0].mean_fidelity;
    ensure(gain >= 0.05, || format!("gain {gain:.4} < 0.05: {}", curve.join(" ")))?;
    within(start.elapsed(), 600)?;
    Ok(format!("gain {gain:.4}; {}", curve.join(" ")))
}

fn depth_three_oracle() -> DecisionTreeModel {
    let split = |feature, threshold, left, right| TreeNode::Split { feature, threshold, left, right };
    let leaf = |label: usize| TreeNode::Leaf { histogram: vec![1 - label as u64, label as u64], label };
    DecisionTreeModel {
        n_features: 3,
        n_classes: 2,
        nodes: vec![
            split(0, 0.5, 1, 2),
            split(1, 0.3, 3, 4),
            split(1, 0.65, 5, 6),
            split(2, 0.2, 7, 8),
            split(2, 0.45, 9, 10),
            split(2, 0.7, 11, 12),
            split(2, 0.85, 13, 14),
            leaf(0),
            leaf(1),
            leaf(1),
            leaf(0),
            leaf(0),
            leaf(1),
            leaf(1),
            leaf(0),
        ],
    }
}

/// Agreement over the `per_axis^d` cell centres of `region`.
fn grid_fidelity<A: Classifier, B: Classifier>(a: &A, b: &B, region: &SamplingRegion, per_axis: usize) -> f64 {
    let d = region.dim();
    let total = per_axis.pow(d as u32);
    let mut point = vec![0.0; d];
    let mut agree = 0usize;
    for cell in 0..total {
        let mut rest = cell;
        for (j, x) in point.iter_mut().enumerate() {
            let t = ((rest % per_axis) as f64 + 0.5) / per_axis as f64;
            *x = region.lower[j] + (region.upper[j] - region.lower[j]) * t;
            rest /= per_axis;
        }
        agree += usize::from(a.predict_unchecked(&point) == b.predict_unchecked(&point));
    }
    agree as f64 / total as f64
}

fn ac3_in_class_recovery() -> Check {
    let start = Instant::now();
    let oracle = depth_three_oracle();
    oracle.validate().map_err(|e| e.to_string())?;
    let region = SamplingRegion::unit_cube(3);
    let cfg = CopyConfig::default();
    let r = build_copy(&oracle, &region, &cfg, 0, None).map_err(|e| e.to_string())?;
    let sampled = r.metrics.synthetic_test_fidelity;
    let grid = grid_fidelity(&oracle, &r.copy, &region, 100);
    ensure(sampled >= 0.995, || format!("synthetic-test fidelity {sampled:.5} < 0.995"))?;
    ensure(grid >= 0.995, || format!("10^6-point grid fidelity {grid:.5} < 0.995"))?;
    within(start.elapsed(), 120)?;
    Ok(format!("synthetic-test fidelity {sampled:.5}, grid fidelity {grid:.5}"))
}

fn ac4_toy() -> Check {
    let start = Instant::now();
    let outcome = run_toy(&ScenarioConfig::desk(0)).map_err(|e| e.to_string())?;
    let original = outcome.report.original.test_accuracy;
    let copy = outcome.report.copy_study.headline().mean;
    ensure(original >= 0.95, || format!("MLP test accuracy {original:.4} < 0.95"))?;
    ensure(copy >= original - 0.05, || format!("copy {copy:.4} < MLP {original:.4} - 0.05"))?;
    within(start.elapsed(), 300)?;
    Ok(format!("MLP {original:.4}, copy {}", outcome.report.copy_summary))
}

fn ac5_ordering(s1: &ScenarioReport, s2: &ScenarioReport, elapsed: Duration) -> Check {
    let lr = s2.baseline("raw_lr").ok_or("scenario 2 has no raw_lr baseline")?;
    let gbt = s2.original.test_accuracy;
    let copy = s2.copy_study.headline().mean;
    ensure(lr <= copy && copy <= gbt, || format!("ordering fails: raw LR {lr:.4}, copy {copy:.4}, GBT {gbt:.4}"))?;
    ensure(gbt - copy <= 0.06, || format!("scenario 2 gap {:.4} > 0.06", gbt - copy))?;
    let pipe = s1.original.test_accuracy;
    let copy1 = s1.copy_study.headline().mean;
    ensure((pipe - copy1).abs() <= 0.06, || format!("scenario 1 gap {:.4} > 0.06", pipe - copy1))?;
    within(elapsed, 900)?;
    Ok(format!(
        "raw LR {lr:.4} <= copy {} <= GBT {gbt:.4}; scenario 1 pipeline {pipe:.4} -> copy {}",
        s2.copy_summary, s1.copy_summary
    ))
}

fn central_difference(params: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut p = params.to_vec();
    (0..params.len())
        .map(|i| {
            p[i] = params[i] + h;
            let up = f(&p);
            p[i] = params[i] - h;
            let down = f(&p);
            p[i] = params[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(a).max(norm(b)).max(1e-300)
}

fn lr_loss(w: &[f64], b: f64, x: &Matrix, y: &[usize], l2: f64) -> f64 {
    let total: f64 = x
        .iter_rows()
        .zip(y)
        .map(|(row, &label)| {
            let z = row.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b;
            (1.0 + z.exp()).ln() - if label == 1 { z } else { 0.0 }
        })
        .sum();
    total / x.rows() as f64 + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

fn mlp_loss(model: &MlpModel, x: &Matrix, y: &[usize]) -> f64 {
    let mut total = 0.0;
    for (row, &label) in x.iter_rows().zip(y) {
        let mut a = row.to_vec();
        for (li, layer) in model.layers.iter().enumerate() {
            let mut out: Vec<f64> = (0..layer.outputs)
                .map(|o| {
                    let w = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    w.iter().zip(&a).map(|(p, q)| p * q).sum::<f64>() + layer.bias[o]
                })
                .collect();
            if li + 1 < model.layers.len() {
                out.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            a = out;
        }
        let m = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        total += m + a.iter().map(|v| (v - m).exp()).sum::<f64>().ln() - a[label];
    }
    total / x.rows() as f64
}

fn ac6_numerics() -> Check {
    let mut rng = rng::seeded(606);
    let mut worst_lr = 0.0f64;
    let mut worst_mlp = 0.0f64;
    for point in 0..20 {
        let x = random_matrix(&mut rng, 30, 5, -2.0, 2.0);
        let y: Vec<usize> = (0..30).map(|_| rng.random_range(0..2)).collect();
        let l2 = if point % 2 == 0 { 0.0 } else { 0.05 };
        let model = LogisticRegressionModel {
            weights: (0..5).map(|_| rng.random_range(-1.5..1.5)).collect(),
            bias: rng.random_range(-1.0..1.0),
        };
        let (_, mut analytic, gb) = logistic::loss_and_gradient(&model, &x, &y, l2);
        analytic.push(gb);
        let mut params = model.weights.clone();
        params.push(model.bias);
        let fd = central_difference(&params, 1e-5, |p| lr_loss(&p[..5], p[5], &x, &y, l2));
        worst_lr = worst_lr.max(relative_error(&analytic, &fd));

        let x = random_matrix(&mut rng, 15, 3, -2.0, 2.0);
        let y: Vec<usize> = (0..15).map(|_| rng.random_range(0..3)).collect();
        let mut net = MlpModel::init(3, &[7, 4], 3, 100 + point);
        let params: Vec<f64> = net.parameters().iter().map(|p| p + rng.random_range(-0.3..0.3)).collect();
        net.set_parameters(&params);
        let (_, analytic) = mlp::loss_and_gradient(&net, &x, &y);
        let mut probe = net.clone();
        let fd = central_difference(&params, 1e-6, |p| {
            probe.set_parameters(p);
            mlp_loss(&probe, &x, &y)
        });
        worst_mlp = worst_mlp.max(relative_error(&analytic, &fd));
    }
    ensure(worst_lr <= 1e-6, || format!("LR gradient relative error {worst_lr:e} > 1e-6"))?;
    ensure(worst_mlp <= 1e-5, || format!("MLP gradient relative error {worst_mlp:e} > 1e-5"))?;

    let x = random_matrix(&mut rng, 400, 4, -2.0, 2.0);
    let y = x.iter_rows().map(|r| usize::from(r[0] * r[1] - 0.4 * r[2] + r[3].abs() > 0.5)).collect();
    let data = LabeledDataset::new(x, y, anonymous_schema(4), 2).unwrap();
    let model = gbt::train(&data, &GbtConfig { rounds: 50, tree_depth: 3, learning_rate: 0.15 }).map_err(|e| e.to_string())?;
    for i in 0..100 {
        let p: Vec<f64> = (0..4).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mut sum = 0.0;
        for t in &model.trees {
            let mut n = 0;
            sum += loop {
                match &t.nodes[n] {
                    RegressionNode::Split { feature, threshold, left, right, .. } => {
                        n = if p[*feature] <= *threshold { *left } else { *right }
                    }
                    RegressionNode::Leaf { value, .. } => break *value,
                }
            };
        }
        let score = model.initial_score + model.learning_rate * sum;
        ensure(model.score(&p) == score, || format!("GBT point {i}: {} != {score}", model.score(&p)))?;
        ensure(model.predict_unchecked(&p) == usize::from(score > 0.0), || format!("GBT point {i}: class differs"))?;
    }
    Ok(format!(
        "LR max rel err {worst_lr:.1e}, MLP max rel err {worst_mlp:.1e} over 20 points; GBT exact on 100 points"
    ))
}

fn ac7_preprocessing() -> Check {
    let mut rng = rng::seeded(707);
    let credit = generate_credit_like(&ScenarioConfig::desk(0).credit).map_err(|e| e.to_string())?;
    let shifted = {
        let m = random_matrix(&mut rng, 500, 6, -1.0, 1.0);
        let data = m.as_slice().iter().enumerate().map(|(i, v)| v * 10f64.powi((i % 6) as i32) + 1e4).collect();
        Matrix::from_vec(500, 6, data).unwrap()
    };
    let mut worst = 0.0f64;
    for m in [credit.features(), &shifted] {
        let z = Standardizer::fit(m).and_then(|s| s.transform(m)).map_err(|e| e.to_string())?;
        for j in 0..z.cols() {
            let col = z.column(j);
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            worst = worst.max(mean.abs()).max((var - 1.0).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("moment error {worst:e} > 1e-9"))?;

    let labels: Vec<usize> = (0..1328).map(|i| usize::from(i < 303)).collect();
    let rows: Vec<Vec<f64>> = (0..1328).map(|i| vec![i as f64]).collect();
    let data = LabeledDataset::new(Matrix::from_rows(&rows).unwrap(), labels, anonymous_schema(1), 2).unwrap();
    for seed in 0..10 {
        let (train, test) = stratified_split(&data, &SplitConfig { train_fraction: 0.8, seed }).map_err(|e| e.to_string())?;
        ensure(test.class_counts() == [205, 61], || format!("seed {seed}: test counts {:?}", test.class_counts()))?;
        ensure(train.class_counts() == [820, 242], || format!("seed {seed}: train counts {:?}", train.class_counts()))?;
    }
    for (k, fraction) in [0.1, 0.25, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let (train, _) = stratified_split(&credit, &SplitConfig { train_fraction: fraction, seed: k as u64 }).map_err(|e| e.to_string())?;
        for (c, &n) in credit.class_counts().iter().enumerate() {
            let expected = ((fraction * n as f64 + 0.5).floor() as usize).clamp(1, n - 1);
            ensure(train.class_counts()[c] == expected && train_count(fraction, n) == expected, || {
                format!("fraction {fraction}, class {c}: {} != {expected}", train.class_counts()[c])
            })?;
        }
    }
    Ok(format!("max moment error {worst:.1e}; 1328/303 split leaves 61 test defaults"))
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_copycat"))
        .args(args)
        .env_remove("COPYCAT_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("copycat {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ac8_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let (data, model) = (path("credit.csv"), path("gbt.json"));
    run_cli(&["generate", "credit", "--seed", "0", "--out", &data])?;
    run_cli(&["train", "--data", &data, "--label", "status", "--model", "gbt", "--split", "0.8", "--seed", "0", "--out", &model])?;
    let copy = |threads: Option<&str>, out: &str| -> Result<String, String> {
        let mut args = Vec::new();
        if let Some(t) = threads {
            args.extend(["--threads", t]);
        }
        args.extend([
            "copy", "--oracle", &model, "--data", &data, "--n", "100000", "--runs", "30", "--seed", "0", "--split", "0.8",
            "--out", out,
        ]);
        run_cli(&args)
    };
    let outs = [path("a.json"), path("b.json"), path("t1.json"), path("t4.json")];
    let stdout = copy(None, &outs[0])?;
    copy(None, &outs[1])?;
    copy(Some("1"), &outs[2])?;
    copy(Some("4"), &outs[3])?;
    let line = stdout.lines().find(|l| l.starts_with("copy accuracy: ")).ok_or("no copy accuracy line")?;
    ensure(line.contains(" ± "), || format!("unexpected summary line `{line}`"))?;
    let first = fs::read(Path::new(&outs[0])).map_err(|e| e.to_string())?;
    for o in &outs[1..] {
        let other = fs::read(Path::new(o)).map_err(|e| e.to_string())?;
        ensure(first == other, || format!("{o} differs from {}", outs[0]))?;
    }
    Ok(format!("4 invocations (2 default, --threads 1, --threads 4) byte-identical; {line}"))
}

fn ac9_importance(s2: &ScenarioReport) -> Check {
    let imp = s2.importance.as_ref().ok_or("scenario 2 report has no importance section")?;
    for (name, v) in [("original", imp.original()), ("copy", imp.copy())] {
        ensure(v.len() == 19, || format!("{name}: {} entries", v.len()))?;
        ensure(v.iter().all(|&x| x >= 0.0), || format!("{name}: negative importance"))?;
        let sum: f64 = v.iter().sum();
        ensure((sum - 1.0).abs() <= 1e-12, || format!("{name}: sum {sum}"))?;
    }
    ensure(imp.top3_overlap >= 2, || format!("top-3 overlap {} < 2", imp.top3_overlap))?;
    ensure(imp.original_concentration.is_finite() && imp.copy_concentration.is_finite(), || {
        "concentration indices missing".into()
    })?;
    Ok(format!(
        "top-3 overlap {}, concentration {:.3} (GBT) vs {:.3} (copy)",
        imp.top3_overlap, imp.original_concentration, imp.copy_concentration
    ))
}

fn report(id: &str, title: &str, elapsed: Duration, result: std::thread::Result<Check>) -> bool {
    let (pass, detail) = match result {
        Ok(Ok(detail)) => (true, detail),
        Ok(Err(why)) => (false, why),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (false, format!("panicked: {msg}"))
        }
    };
    println!(
        "{id} {} {title} ({:.1}s): {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn timed<T>(f: impl FnOnce() -> T) -> (Duration, std::thread::Result<T>) {
    let start = Instant::now();
    let r = catch_unwind(AssertUnwindSafe(f));
    (start.elapsed(), r)
}

fn run(id: &str, title: &str, f: impl FnOnce() -> Check) -> bool {
    let (t, r) = timed(f);
    report(id, title, t, r)
}

fn main() -> ExitCode {
    let mut results = vec![
        run("AC1", "zero empirical error", ac1_zero_empirical_error),
        run("AC2", "asymptotic fidelity", ac2_asymptotic_fidelity),
        run("AC3", "in-class oracle recovery", ac3_in_class_recovery),
        run("AC4", "toy boundary copy", ac4_toy),
    ];

    let (t, scenarios) = timed(|| -> Result<(ScenarioReport, ScenarioReport), String> {
        let cfg = ScenarioConfig::desk(0);
        let data = generate_credit_like(&cfg.credit).map_err(|e| e.to_string())?;
        let s1 = run_scenario1(&data, &cfg).map_err(|e| e.to_string())?;
        let s2 = run_scenario2(&data, &cfg).map_err(|e| e.to_string())?;
        Ok((s1, s2))
    });
    let scenarios = match scenarios {
        Ok(r) => r,
        Err(_) => Err("scenario run panicked".to_string()),
    };
    let ac5 = scenarios.clone().and_then(|(s1, s2)| ac5_ordering(&s1, &s2, t));
    results.push(report("AC5", "scenario ordering", t, Ok(ac5)));

    results.push(run("AC6", "numerical correctness", ac6_numerics));
    results.push(run("AC7", "preprocessing exactness", ac7_preprocessing));
    results.push(run("AC8", "CLI determinism", ac8_determinism));
    results.push(run("AC9", "importance reporting", || match &scenarios {
        Ok((_, s2)) => ac9_importance(s2),
        Err(e) => Err(format!("scenario 2 unavailable: {e}")),
    }));

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria PASS", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
