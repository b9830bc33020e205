use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hqcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqcs")).args(args).output().expect("spawn hqcs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn out_dir(dir: &TempDir, name: &str) -> (PathBuf, String) {
    let p = dir.path().join(name);
    let s = p.display().to_string();
    (p, s)
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

/// 100 rows, two well separated classes.
fn separable_csv() -> String {
    let mut s = String::from("f1,f2,f3,label\n");
    for i in 0..100 {
        let t = (i % 10) as f64 * 0.01;
        if i % 2 == 0 {
            s.push_str(&format!("{},{},0.01,yes\n", 1.0 + t, 0.1 + t));
        } else {
            s.push_str(&format!("0.01,{},{},no\n", 0.1 + t, 1.0 + t));
        }
    }
    s
}

#[test]
fn predict_on_separable_data_is_perfect() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "toy.csv", &separable_csv());
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["predict", "--k", "1", "--data", &csv, "--out", &out_s]);
    assert!(o.status.success(), "{}", stderr(&o));

    let record = json(&out.join("record.json"));
    assert_eq!(record["schema_version"], 1);
    assert_eq!(record["dataset"], "toy");
    for r in record["records"].as_array().unwrap() {
        assert_eq!(r["mean_f1"], 1.0);
        assert_eq!(r["per_fold_f1"].as_array().unwrap().len(), 5);
        assert!(r["wall_clock_seconds"].is_null());
    }

    let scores = fs::read_to_string(out.join("scores.csv")).unwrap();
    let mut lines = scores.lines();
    assert_eq!(lines.next().unwrap(), "row_id,fid_score,hqcs_score,fid_label,hqcs_label");
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 100);
    for (i, line) in rows.iter().enumerate() {
        let cells: Vec<_> = line.split(',').collect();
        assert_eq!(cells[0], (i + 1).to_string());
        let expected = if i % 2 == 0 { "yes" } else { "no" };
        assert_eq!(cells[3], expected);
        assert_eq!(cells[4], expected);
    }
}

#[test]
fn cross_class_duplicates_are_skipped_with_a_warning() {
    let dir = TempDir::new().unwrap();
    let mut text = separable_csv();
    // same features under both labels, in every fold's training set
    for _ in 0..5 {
        text.push_str("0.5,0.5,0.5,yes\n0.5,0.5,0.5,no\n");
    }
    let csv = write(&dir, "dup.csv", &text);
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["predict", "--k", "2", "--data", &csv, "--out", &out_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning:"), "{}", stderr(&o));
    let record = json(&out.join("record.json"));
    let hqcs_record = &record["records"][0];
    assert_eq!(hqcs_record["classifier"], "HQCS");
    let skipped: u64 = hqcs_record["skipped_pairs"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert!(skipped > 0);
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let csv = data("wine.csv");
    for (cmd, extra) in [
        ("predict", vec!["--k", "2.5"]),
        ("sweep", vec!["--k-max", "5", "--svg"]),
        ("categorize", vec![]),
    ] {
        let mut outputs = Vec::new();
        for (run, jobs) in [(1, "1"), (2, "4")] {
            let (out, out_s) = out_dir(&dir, &format!("{cmd}{run}"));
            let mut args = vec![cmd, "--data", &csv, "--class-pair", "1,2", "--out", &out_s, "--jobs", jobs];
            args.extend(&extra);
            let o = hqcs(&args);
            assert!(o.status.success(), "{cmd}: {}", stderr(&o));
            outputs.push(read_all(&out));
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
    }
}

#[test]
fn default_sweep_has_400_rows_and_consistent_best() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "toy.csv", &separable_csv());
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["sweep", "--data", &csv, "--out", &out_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!out.join("sweep.svg").exists());

    let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 13);
    assert_eq!(&header[..4], ["k", "f1_hqcs_mean", "f1_fid_mean", "f1_hqcs_fold1"]);
    assert_eq!(header[12], "f1_fid_fold5");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 400);
    assert_eq!(rows[0][0], 0.25);
    assert_eq!(rows[399][0], 100.0);

    let best = json(&out.join("best.json"));
    for (col, key) in [(1, "hqcs"), (2, "fid")] {
        let max = rows.iter().map(|r| r[col]).fold(f64::MIN, f64::max);
        let first = rows.iter().position(|r| r[col] == max).unwrap();
        assert_eq!(best["best"][key]["f1_mean"].as_f64().unwrap(), max);
        assert_eq!(best["best"][key]["k"].as_f64().unwrap(), rows[first][0]);
    }
    assert_eq!(best["grid"]["points"], 400);
}

#[test]
fn sweep_svg_on_request() {
    let dir = TempDir::new().unwrap();
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&[
        "sweep", "--data", &data("iris.csv"), "--class-pair", "Iris-versicolor,Iris-virginica", "--k-max", "10",
        "--svg", "--folds", "3", "--out", &out_s,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = fs::read_to_string(out.join("sweep.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    let header = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert!(header.starts_with("k,f1_hqcs_mean,f1_fid_mean,f1_hqcs_fold1,f1_hqcs_fold2,f1_hqcs_fold3,f1_fid_fold1,"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "toy.csv", &separable_csv());
    let (out, out_s) = out_dir(&dir, "out");
    let cfg = write(
        &dir,
        "run.cfg",
        &format!("# sweep settings\ndata = {csv}\nout = {out_s}\nk_min = 1\nk_max = 3\nk_step = 1\nfolds = 4\n"),
    );
    let o = hqcs(&["sweep", "--config", &cfg, "--k-step", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let best = json(&out.join("best.json"));
    assert_eq!(best["grid"]["points"], 5);
    assert_eq!(best["folds"], 4);
}

#[test]
fn verify_reports_every_check() {
    let dir = TempDir::new().unwrap();
    let (out, out_s) = out_dir(&dir, "v");
    let o = hqcs(&["verify", "--out", &out_s]);
    let text = stdout(&o);
    for name in [
        "lemma1_eigenvalues",
        "fid_vs_oracle",
        "fid_kernel_form",
        "hqcs_vs_centroid_oracle",
        "pairwise_identity",
        "hqcs_vs_pairwise_oracle",
    ] {
        assert!(text.contains(name), "{text}");
    }
    let report = json(&out.join("verify.json"));
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["evaluations"], 100);
        if check["name"] != "hqcs_vs_centroid_oracle" && check["name"] != "pairwise_identity" {
            assert_eq!(check["passed"], true, "{check}");
            assert!(check["max_deviation"].as_f64().unwrap() <= 1e-9);
        }
    }
    // the exit status follows the report
    let expected = if report["passed"] == true { 0 } else { 3 };
    assert_eq!(o.status.code(), Some(expected));
}

#[test]
fn verify_restricted_to_single_pairs_passes() {
    let o = hqcs(&["verify", "--dims", "2", "--per-class", "1", "--k-max", "1", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_zero_trials_is_vacuous() {
    let o = hqcs(&["verify", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("vacuous"));
}

#[test]
fn verify_size_cap_is_an_input_error() {
    let o = hqcs(&["verify", "--dims", "8", "--k-max", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"), "{}", stderr(&o));
}

#[test]
fn categorize_six_point_fixture() {
    let dir = TempDir::new().unwrap();
    // every point's five neighbours are the other five points
    let csv = write(&dir, "six.csv", "x,y,class\n0,0,a\n1,0,a\n0,1,a\n1,1,a\n5,5,b\n6,5,b\n");
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["categorize", "--data", &csv, "--out", &out_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    let types = fs::read_to_string(out.join("types.csv")).unwrap();
    assert_eq!(
        types,
        "row_id,class,type\n1,a,borderline\n2,a,borderline\n3,a,borderline\n4,a,borderline\n5,b,rare\n6,b,rare\n"
    );
    let profile = json(&out.join("profile.json"));
    assert_eq!(profile["counts"]["borderline"], 4);
    assert_eq!(profile["counts"]["rare"], 2);
    assert_eq!(profile["points"], 6);
}

#[test]
fn categorize_iris_is_all_safe() {
    let dir = TempDir::new().unwrap();
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&[
        "categorize", "--data", &data("iris.csv"), "--class-pair", "Iris-setosa,Iris-versicolor", "--out", &out_s,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&out.join("profile.json"));
    assert_eq!(p["safe_pct"], 100.0);
    assert_eq!(p["points"], 100);
}

#[test]
fn categorize_typed_class() {
    let dir = TempDir::new().unwrap();
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["categorize", "--data", &data("haberman.csv"), "--typed-class", "positive", "--out", &out_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = json(&out.join("profile.json"));
    assert_eq!(p["points"], 81);
    assert_eq!(p["typed_class"], "positive");
    let o = hqcs(&["categorize", "--data", &data("haberman.csv"), "--typed-class", "maybe", "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let (_, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["predict", "--k", "1", "--data", &data("iris.csv"), "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("3 classes"), "{}", stderr(&o));

    let bad = write(&dir, "bad.csv", "x,y,label\n1,2,a\n3,abc,b\n");
    let o = hqcs(&["sweep", "--data", &bad, "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));

    let o = hqcs(&["sweep", "--data", "/no/such/file.csv", "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not found"));

    let o = hqcs(&["predict", "--k", "-1", "--data", &bad, "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));

    let o = hqcs(&["sweep", "--data", &bad, "--folds", "1", "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));

    let o = hqcs(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn no_temporary_files_are_left_behind() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "toy.csv", &separable_csv());
    let (out, out_s) = out_dir(&dir, "out");
    let o = hqcs(&["sweep", "--data", &csv, "--k-max", "2", "--svg", "--out", &out_s]);
    assert!(o.status.success());
    let names: Vec<_> = read_all(&out).into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, ["best.json", "sweep.csv", "sweep.svg"]);
}
