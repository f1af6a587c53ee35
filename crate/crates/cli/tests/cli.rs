use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn weylperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylperm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn sample_into(dir: &Path) -> Output {
    weylperm(&["sample", "--n", "20", "--d", "3", "--replicas", "4", "--seed", "11", "--out", dir.to_str().unwrap()])
}

#[test]
fn sample_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(sample_into(a.path()).status.success());
    assert!(sample_into(b.path()).status.success());
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4 * 3 + 2);
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn sample_files_carry_provenance_and_pinned_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sample_into(dir.path()).status.success());
    let perms = fs::read_to_string(dir.path().join("permutations.txt")).unwrap();
    assert!(perms.starts_with("# weylperm sample n=20 d=3 replicas=4 seed=11"));
    assert_eq!(perms.lines().count(), 5);
    for i in 0..4 {
        let csv = fs::read_to_string(dir.path().join(format!("p_sigma_{i}.csv"))).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].contains("seed=11") && lines[0].ends_with(&format!("replica={i}")));
        assert_eq!(lines[1], "t,y_1,y_2,y_3");
        for row in [lines[2], lines[lines.len() - 1]] {
            let v: Vec<f64> = row.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
            assert_eq!(v, vec![0.0; 3]);
        }
        assert!(lines[lines.len() - 1].starts_with("1.0"));
        let svg = fs::read_to_string(dir.path().join(format!("overlay_{i}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["seed"], 11);
    assert_eq!(summary["records"].as_array().unwrap().len(), 4);
}

#[test]
fn format_flag_limits_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylperm(&["sample", "--n", "10", "--d", "2", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(dir.path().join("summary.json").exists());
    assert!(!dir.path().join("p_sigma_0.csv").exists());
    assert!(!weylperm(&["sample", "--format", "png"]).status.success());
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let o = weylperm(&["sample", "--n", "5", "--d", "2", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn compare_self_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("compare.json");
    let o = weylperm(&[
        "compare", "--mode", "self", "--n", "10", "--d", "3", "--replicas", "300", "--grid", "32", "--out",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 9);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["mode"], "self");
    assert_eq!(v["all_pass"], true);
}

#[test]
fn compare_refuses_too_few_replicas() {
    let o = weylperm(&["compare", "--n", "10", "--d", "2", "--replicas", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("insufficient replicas") && err.contains("use at least"), "{err}");
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("verify.json");
    let o = weylperm(&["verify", "--out", json.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["all_pass"], true);
}

#[test]
fn enumerate_lists_avoiders() {
    let o = weylperm(&["enumerate", "--n", "4", "--d", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 14);
    assert!(!out.lines().any(|l| l == "4 3 2 1" || l == "3 2 1 4"));
    let words = stdout(&weylperm(&["enumerate", "--n", "3", "--d", "2", "--words"]));
    assert!(words.lines().any(|l| l == "111,111"));
}

#[test]
fn bridge_dp_counts_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("dp.json");
    let o = weylperm(&["bridge-dp", "--n", "2", "--d", "2", "--samples", "4", "--out", json.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "bridges 5"));
    assert_eq!(out.lines().filter(|l| l.contains(',')).count(), 4);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["n"], 2);
    assert!(v["states"].as_array().unwrap().iter().any(|s| s["gaps"] == serde_json::json!([0]) && s["count"] == "5"));
    let refused = weylperm(&["bridge-dp", "--n", "201", "--d", "3"]);
    assert_eq!(refused.status.code(), Some(2));
}
