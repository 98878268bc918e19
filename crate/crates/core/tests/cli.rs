use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_neuromem");

struct Sandbox {
    dir: tempfile::TempDir,
}

impl Sandbox {
    fn new() -> Self {
        let s = Sandbox {
            dir: tempfile::tempdir().unwrap(),
        };
        s.write("mem.txt", "1 1 1 1\n1 -1 1 -1\n");
        s
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN)
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> Value {
        let out = self.run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        serde_json::from_slice(&out.stdout).unwrap()
    }

    fn code(&self, args: &[&str]) -> (i32, String) {
        let out = self.run(args);
        (
            out.status.code().unwrap(),
            String::from_utf8_lossy(&out.stderr).into_owned(),
        )
    }

    fn trained(&self) -> &Path {
        let out = self.run(&["train", "--memories", "mem.txt", "--out", "w.json"]);
        assert!(out.status.success());
        Path::new("w.json")
    }
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect()
}

#[test]
fn train_writes_the_weight_matrix() {
    let s = Sandbox::new();
    s.trained();
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(s.path("w.json")).unwrap()).unwrap();
    assert_eq!(report["tool"], "neuromem");
    assert_eq!(report["format_version"], 1);
    assert_eq!(report["config"]["command"], "train");
    let rows: Vec<Vec<i64>> = report["result"]["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(ints)
        .collect();
    assert_eq!(
        rows,
        vec![
            vec![0, 0, 2, 0],
            vec![0, 0, 0, 2],
            vec![2, 0, 0, 0],
            vec![0, 2, 0, 0]
        ]
    );
}

#[test]
fn spread_from_one_neuron_recovers_the_first_memory() {
    let s = Sandbox::new();
    let w = s.trained().to_str().unwrap().to_string();
    let r = s.ok(&[
        "spread",
        "--weights",
        &w,
        "--start",
        "1:+1",
        "--memories",
        "mem.txt",
    ]);
    let result = &r["result"];
    assert_eq!(ints(&result["final_state"]), vec![1, 1, 1, 1]);
    assert_eq!(result["matched_memory"], 1);
    assert_eq!(result["fixed_point"], true);
    assert_eq!(result["consistency_flags"].as_array().unwrap().len(), 0);

    let r = s.ok(&[
        "spread",
        "--weights",
        &w,
        "--start",
        "1:+1,2:-1",
        "--memories",
        "mem.txt",
    ]);
    assert_eq!(ints(&r["result"]["final_state"]), vec![1, -1, 1, -1]);
    assert_eq!(r["result"]["matched_memory"], 2);
}

#[test]
fn spread_with_proximity_follows_distance() {
    let s = Sandbox::new();
    let w = s.trained().to_str().unwrap().to_string();
    s.write("p.txt", "0 3 1 2\n3 0 2 1\n1 2 0 3\n2 1 3 0\n");
    let r = s.ok(&[
        "spread",
        "--weights",
        &w,
        "--proximity",
        "p.txt",
        "--start",
        "1:-1",
    ]);
    assert_eq!(ints(&r["result"]["order"]), vec![1, 3, 4, 2]);
}

#[test]
fn recall_modes() {
    let s = Sandbox::new();
    let w = s.trained().to_str().unwrap().to_string();
    let r = s.ok(&["recall", "--weights", &w, "--state", "1,1,-1,1", "--async"]);
    assert_eq!(ints(&r["result"]["final_state"]), vec![-1, 1, -1, 1]);
    assert_eq!(r["result"]["converged"], true);

    let r = s.ok(&["recall", "--weights", &w, "--state", "1,1,1,1"]);
    assert_eq!(r["result"]["stored"], true);

    let r = s.ok(&[
        "recall",
        "--weights",
        &w,
        "--state",
        "1,1,-1,1",
        "--async",
        "--seed",
        "9",
    ]);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["result"]["converged"], true);
}

#[test]
fn fixed_points_census() {
    let s = Sandbox::new();
    let w = s.trained().to_str().unwrap().to_string();
    let r = s.ok(&["fixed-points", "--weights", &w, "--memories", "mem.txt"]);
    assert_eq!(r["result"]["count"], 4);
    assert_eq!(r["result"]["census"]["stored"], 2);
    assert_eq!(r["result"]["census"]["complement"], 2);
    assert_eq!(r["result"]["census"]["spurious"], 0);
}

#[test]
fn collapse_count_and_sampling() {
    let s = Sandbox::new();
    let r = s.ok(&["collapse", "--count-levels", "10"]);
    assert_eq!(r["result"]["reorganizations"], 100);
    assert_eq!(r["result"]["distinct_count"], 100);

    let a = s.run(&[
        "collapse",
        "--amps",
        "0.6,-0.8",
        "--samples",
        "500",
        "--seed",
        "3",
    ]);
    let b = s.run(&[
        "collapse",
        "--amps",
        "0.6,-0.8",
        "--samples",
        "500",
        "--seed",
        "3",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn capacity_is_reproducible() {
    let s = Sandbox::new();
    let args = [
        "capacity", "--n", "20", "--m-list", "1,2,4", "--trials", "50", "--seed", "11",
    ];
    let a = s.run(&args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    let b = s.run(&threaded);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["result"]["rows"][0]["per_bit_instability"], 0.0);
}

#[test]
fn usage_errors_exit_2() {
    let s = Sandbox::new();
    assert_eq!(s.code(&["train", "--bogus"]).0, 2);
    assert_eq!(s.code(&["frobnicate"]).0, 2);
    assert_eq!(s.code(&["train", "--memories", "mem.txt"]).0, 2);
    let w = s.trained().to_str().unwrap().to_string();
    // a seed only applies to the asynchronous schedule
    assert_eq!(
        s.code(&[
            "recall",
            "--weights",
            &w,
            "--state",
            "1,1,1,1",
            "--seed",
            "1"
        ])
        .0,
        2
    );
}

#[test]
fn parse_errors_exit_3_with_position() {
    let s = Sandbox::new();
    s.write("bad.txt", "1 1 1\n# note\n1 x 1\n");
    let (code, err) = s.code(&["train", "--memories", "bad.txt", "--out", "o.json"]);
    assert_eq!(code, 3);
    assert!(err.contains("line 3, column 3"), "{err}");
    assert!(!s.path("o.json").exists());

    s.write("w.json", "{ \"tool\": ");
    let (code, _) = s.code(&["recall", "--weights", "w.json", "--state", "1,1"]);
    assert_eq!(code, 3);

    let w = s.trained().to_str().unwrap().to_string();
    let (code, err) = s.code(&["spread", "--weights", &w, "--start", "1:+1,2:0"]);
    assert_eq!(code, 3);
    assert!(err.contains("column 6"), "{err}");
}

#[test]
fn dimension_errors_exit_4() {
    let s = Sandbox::new();
    s.write("ragged.txt", "1 1 1\n1 -1\n");
    assert_eq!(
        s.code(&["train", "--memories", "ragged.txt", "--out", "o.json"])
            .0,
        4
    );
    let w = s.trained().to_str().unwrap().to_string();
    assert_eq!(s.code(&["recall", "--weights", &w, "--state", "1,1"]).0, 4);
    s.write("p3.txt", "0 1 1\n1 0 1\n1 1 0\n");
    assert_eq!(
        s.code(&[
            "spread",
            "--weights",
            &w,
            "--proximity",
            "p3.txt",
            "--start",
            "1:+1"
        ])
        .0,
        4
    );
}

#[test]
fn parameter_errors_exit_5() {
    let s = Sandbox::new();
    let cap = |n: &str, m: &str, trials: &str| {
        s.code(&[
            "capacity", "--n", n, "--m-list", m, "--trials", trials, "--seed", "1",
        ])
        .0
    };
    assert_eq!(cap("5", "1", "50"), 5);
    assert_eq!(cap("20", "1", "10"), 5);
    assert_eq!(cap("20", "4,2", "50"), 5);
    assert_eq!(
        s.code(&[
            "collapse",
            "--amps",
            "0.6,0.6",
            "--samples",
            "5",
            "--seed",
            "1"
        ])
        .0,
        5
    );
    let w = s.trained().to_str().unwrap().to_string();
    assert_eq!(s.code(&["spread", "--weights", &w, "--start", "9:+1"]).0, 5);
}

#[test]
fn missing_files_exit_6() {
    let s = Sandbox::new();
    let (code, err) = s.code(&["train", "--memories", "missing.txt", "--out", "o.json"]);
    assert_eq!(code, 6);
    assert!(err.contains("missing.txt"), "{err}");
}

#[test]
fn help_and_version_exit_0() {
    let s = Sandbox::new();
    assert_eq!(s.code(&["--help"]).0, 0);
    assert_eq!(s.code(&["--version"]).0, 0);
}
