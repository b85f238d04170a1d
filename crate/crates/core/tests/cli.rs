use std::path::Path;
use std::process::{Command, Output};

use locsvm::evaluation::{read_report_csv, ReportRow};

fn locsvm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locsvm"))
        .args(args)
        .current_dir(dir)
        .env_remove("LOCSVM_SEED")
        .output()
        .unwrap()
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_field(text: &str, column: &str) -> String {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == column).unwrap();
    r.records().next().unwrap().unwrap()[idx].to_string()
}

fn generate(dir: &Path, ty: &str, n: &str) {
    ok(locsvm(
        &["generate", "--type", ty, "--n-train", n, "--n-test", n, "--seed", "7"],
        dir,
    ));
}

#[test]
fn generate_writes_four_files_and_the_bayes_risk() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(locsvm(
        &["generate", "--type", "V", "--n-train", "300", "--n-test", "200", "--seed", "7"],
        dir.path(),
    ));
    for f in ["typeV_train.libsvm", "typeV_test.libsvm", "typeV_train_truth.csv", "typeV_test_truth.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let risk: f64 = out.trim().strip_prefix("bayes_risk ").unwrap().parse().unwrap();
    assert!(risk > 0.0 && risk < 1.0);
}

#[test]
fn unknown_type_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = locsvm(&["generate", "--type", "VI"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn train_reports_working_sets() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "I", "200");
    let base = ["--input", "typeI_train.libsvm", "--model-out", "m.json", "--grid-size", "3"];
    let vp = ok(locsvm(&[&["train", "--method", "vp", "--radius", "0.5"][..], &base].concat(), dir.path()));
    assert!(csv_field(&vp, "num_ws").parse::<usize>().unwrap() >= 2);
    let rc = ok(locsvm(&[&["train", "--method", "rc", "--chunks", "1"][..], &base].concat(), dir.path()));
    assert_eq!(csv_field(&rc, "num_ws"), "1");
    let th = ok(locsvm(
        &[&["train", "--method", "theory", "--beta", "3", "--alpha", "1"][..], &base].concat(),
        dir.path(),
    ));
    assert_eq!(csv_field(&th, "method"), "theory");

    let missing = locsvm(&[&["train", "--method", "rc"][..], &base].concat(), dir.path());
    assert_eq!(missing.status.code(), Some(2));
    let both = locsvm(&[&["train", "--method", "vp", "--radius", "0.5", "--chunks", "2"][..], &base].concat(), dir.path());
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn evaluate_emits_a_report_and_checks_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "I", "150");
    generate(dir.path(), "IV", "50");
    ok(locsvm(
        &["train", "--method", "vp", "--radius", "0.4", "--grid-size", "3", "--input", "typeI_train.libsvm", "--model-out", "m.json"],
        dir.path(),
    ));
    let text = ok(locsvm(
        &["evaluate", "--model", "m.json", "--test", "typeI_test.libsvm", "--truth", "typeI_test_truth.csv", "--predictions", "p.txt"],
        dir.path(),
    ));
    let rows = read_report_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].l2_mean.is_some());
    let preds = std::fs::read_to_string(dir.path().join("p.txt")).unwrap();
    assert_eq!(preds.lines().count(), 150);

    let bad = locsvm(&["evaluate", "--model", "m.json", "--test", "typeIV_test.libsvm"], dir.path());
    assert_eq!(bad.status.code(), Some(3));
    let missing = locsvm(&["evaluate", "--model", "m.json", "--test", "nope.libsvm"], dir.path());
    assert_eq!(missing.status.code(), Some(3));
}

fn bench(dir: &Path, extra: &[&str]) -> Vec<ReportRow> {
    let args = [
        &["benchmark", "--type", "V", "--sizes", "40,60,80", "--reps", "2", "--n-test", "50", "--grid-size", "3"][..],
        extra,
    ]
    .concat();
    read_report_csv(ok(locsvm(&args, dir)).as_bytes()).unwrap()
}

#[test]
fn benchmark_rows_and_ratio_column() {
    let dir = tempfile::tempdir().unwrap();
    let rows = bench(dir.path(), &["--radius", "0.7", "--seed", "3"]);
    assert_eq!(rows.iter().filter(|r| r.runs == 1).count(), 6);
    assert_eq!(rows.iter().filter(|r| r.runs == 2).count(), 3);

    let rows = bench(dir.path(), &["--radius", "0.7", "--also", "global", "--seed", "3"]);
    let agg: Vec<_> = rows.iter().filter(|r| r.runs == 2).collect();
    assert_eq!(agg.len(), 6);
    assert!(agg.iter().all(|r| r.train_time_vs_global.is_some()));
}

#[test]
fn benchmark_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |rows: Vec<ReportRow>| -> Vec<(f64, Option<f64>, u64)> {
        rows.into_iter().map(|r| (r.test_err_mean, r.l2_mean, r.seed)).collect()
    };
    let a = strip(bench(dir.path(), &["--radius", "0.5", "--workers", "1", "--seed", "11"]));
    let b = strip(bench(dir.path(), &["--radius", "0.5", "--workers", "4", "--seed", "11"]));
    assert_eq!(a, b);
    let env_seed = Command::new(env!("CARGO_BIN_EXE_locsvm"))
        .args(["benchmark", "--type", "V", "--sizes", "40,60,80", "--reps", "2", "--n-test", "50", "--grid-size", "3", "--radius", "0.5"])
        .env("LOCSVM_SEED", "11")
        .output()
        .unwrap();
    let c = strip(read_report_csv(ok(env_seed).as_bytes()).unwrap());
    assert_eq!(a, c);
}

#[test]
fn learning_curve_mode() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(locsvm(
        &["benchmark", "--type", "V", "--method", "theory", "--sizes", "100,200", "--reps", "1", "--n-test", "100", "--learning-curve"],
        dir.path(),
    ));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["method", "n_train", "test_err_mean", "l2_mean"]);
    assert_eq!(r.records().count(), 2);
}

#[test]
fn partition_exports() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "IV", "100");
    let cells = ok(locsvm(
        &["partition", "--input", "typeIV_train.libsvm", "--radius", "0.5", "--cover-out", "c.csv"],
        dir.path(),
    ));
    assert!(cells.starts_with("point,cell\n"));
    assert_eq!(cells.lines().count(), 101);
    let cover = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(cover.starts_with("center,c1,c2,radius\n"));
}
