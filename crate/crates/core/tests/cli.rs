mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::oracles::sin3x_task;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-rff"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_training(dir: &Path) -> std::path::PathBuf {
    let (x, y) = sin3x_task(200, 1);
    let mut text = String::from("x,y\n");
    for (xi, yi) in x.iter().zip(&y) {
        text += &format!("{},{}\n", xi[0], yi);
    }
    let file = dir.join("train.csv");
    std::fs::write(&file, text).unwrap();
    file
}

#[test]
fn sample_writes_header_and_rows_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for f in [&a, &b] {
        let out = run(&["sample", "--kernel", "gaussian", "--dim", "2", "--features", "4000", "--seed", "7", "--out", path(f)]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# spectral-rff v1; kernel="));
    assert!(header.ends_with("; seed=7; stream=0; mode=isotropic"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4000);
    assert!(rows.iter().all(|r| r.split(',').count() == 2));
}

#[test]
fn thread_cap_does_not_change_output() {
    let outs: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|t| {
            let out = bin()
                .env("SPECTRAL_RFF_THREADS", t)
                .args(["sample", "--kernel", "kummer", "--alpha", "1.2", "--beta", "1", "--gamma", "2", "--dim", "3", "--features", "2000"])
                .output()
                .unwrap();
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let bad = bin().env("SPECTRAL_RFF_THREADS", "zero").args(["sample", "--kernel", "laplace"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn alpha_outside_range_is_a_usage_error() {
    let out = run(&["sample", "--kernel", "gaussian", "--alpha", "2.5", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.starts_with("error:") && msg.contains("(0, 2]"), "{msg}");
    let out = run(&["sample", "--kernel", "tricomi", "--alpha", "1.0", "--beta", "-1", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["sample", "--kernel", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["sample"]).status.code(), Some(2));
}

#[test]
fn compare_one_and_two_dimensional() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let out = run(&["compare", "--kernel", "gaussian", "--features", "1000", "--grid", "-5:5:201", "--out", path(&one)]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("sup_error="));
    let text = std::fs::read_to_string(&one).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(text.lines().next().unwrap(), "r,analytic,approx,diff");
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[100], vec![0.0, 1.0, 1.0, 0.0]);
    assert!(rows.iter().all(|r| r[3].abs() <= 0.13));

    let two = dir.path().join("two.csv");
    let out = run(&[
        "compare", "--kernel", "tricomi", "--alpha", "1.5", "--beta", "1.5", "--gamma", "1.5", "--dim", "2", "--features", "4000",
        "--grid", "-4:4:81", "--out", path(&two),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&two).unwrap();
    assert_eq!(text.lines().next().unwrap(), "u1,u2,analytic,approx,diff");
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 81 * 81);
    // Row-major: u1 is constant across each run of 81 rows.
    assert!(rows[..81].iter().all(|r| r[0] == -4.0));
    assert_eq!((rows[1][0], rows[1][1]), (-4.0, -3.9));
    assert!(rows.iter().map(|r| r[4].abs()).fold(0.0, f64::max) <= 0.08);
}

#[test]
fn compare_reads_sampled_projections() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.csv");
    let flags = ["--kernel", "laplace", "--features", "500", "--seed", "3"];
    assert!(run(&[&["sample"][..], &flags, &["--out", path(&p)]].concat()).status.success());
    let direct = run(&[&["compare"][..], &flags].concat());
    let from_file = run(&["compare", "--kernel", "laplace", "--in", path(&p)]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(direct.stdout, from_file.stdout);
    let wrong = run(&["compare", "--kernel", "gaussian", "--in", path(&p)]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn gram_reports_eigenvalues() {
    let out = run(&["gram", "--kernel", "beta", "--alpha", "1.5", "--beta", "1.5", "--gamma", "1.5", "--dim", "2", "--n", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let min: f64 = text.split_whitespace().find_map(|t| t.strip_prefix("min_eigenvalue=")).unwrap().parse().unwrap();
    assert!(min >= -1e-8);

    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "x1,x2\n0.3,0.4\n").unwrap();
    let out = run(&["gram", "--kernel", "gaussian", "--points", path(&pts)]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("n=1 kind=analytic min_eigenvalue=1e0"));

    let out = run(&["gram", "--kernel", "laplace", "--approx", "--features", "7", "--dim", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let min: f64 = text.split_whitespace().find_map(|t| t.strip_prefix("min_eigenvalue=")).unwrap().parse().unwrap();
    assert!(min >= -1e-10);
}

#[test]
fn fit_then_predict_reproduces_fitted_values() {
    let dir = tempfile::tempdir().unwrap();
    let train = write_training(dir.path());
    let model = dir.path().join("model.txt");
    let out = run(&[
        "fit", "--kernel", "gaussian", "--lengthscale", "0.5", "--features", "500", "--ridge", "0.01", "--seed", "2", "--in", path(&train),
        "--out", path(&model),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary = String::from_utf8(out.stdout).unwrap();
    let train_rmse: f64 = summary.split_whitespace().find_map(|t| t.strip_prefix("train_rmse=")).unwrap().parse().unwrap();
    assert!(train_rmse <= 0.15);

    let pred = dir.path().join("pred.csv");
    let out = run(&["predict", "--model", path(&model), "--in", path(&train), "--out", path(&pred)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let preds: Vec<f64> = std::fs::read_to_string(&pred).unwrap().lines().skip(1).map(|l| l.parse().unwrap()).collect();
    let ys: Vec<f64> = std::fs::read_to_string(&train).unwrap().lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(preds.len(), 200);
    let rmse = (preds.iter().zip(&ys).map(|(p, y)| (p - y).powi(2)).sum::<f64>() / 200.0).sqrt();
    assert!((rmse - train_rmse).abs() < 1e-12);

    let again = dir.path().join("model2.txt");
    run(&[
        "fit", "--kernel", "gaussian", "--lengthscale", "0.5", "--features", "500", "--ridge", "0.01", "--seed", "2", "--in", path(&train),
        "--out", path(&again),
    ]);
    assert_eq!(std::fs::read(&model).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn fit_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.txt");
    let one_col = dir.path().join("one.csv");
    std::fs::write(&one_col, "x\n0.1\n0.2\n").unwrap();
    let out = run(&["fit", "--kernel", "gaussian", "--in", path(&one_col), "--out", path(&model)]);
    assert_eq!(out.status.code(), Some(2));

    let train = write_training(dir.path());
    let out = run(&["fit", "--kernel", "gaussian", "--target", "z", "--in", path(&train), "--out", path(&model)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("target column `z`"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n0.1,1.0\n0.2,oops\n").unwrap();
    let out = run(&["fit", "--kernel", "gaussian", "--in", path(&bad), "--out", path(&model)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "x,y\n0.1,1.0\n0.2\n").unwrap();
    let out = run(&["fit", "--kernel", "gaussian", "--in", path(&ragged), "--out", path(&model)]);
    assert!(stderr(&out).contains("line 3"));

    let out = run(&["fit", "--kernel", "gaussian", "--in", path(&dir.path().join("missing.csv")), "--out", path(&model)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_reports_variate_counts() {
    let out = run(&["bench", "--dims", "1,10,100", "--features", "500", "--no-timing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("d=1 isotropic_variates=3 tensor_variates=3 ratio=1.0000"));
    assert!(text.contains("d=10 isotropic_variates=12 tensor_variates=30 ratio=2.5000"));
    assert!(text.contains("d=100 isotropic_variates=102 tensor_variates=300 ratio=2.9412"));
    assert_eq!(text, String::from_utf8(run(&["bench", "--dims", "1,10,100", "--features", "500", "--no-timing"]).stdout).unwrap());
}
