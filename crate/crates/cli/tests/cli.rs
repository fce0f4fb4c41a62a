use std::path::PathBuf;
use std::process::{Command, Output};

use energy_core::json::matrix_from_json;
use energy_core::{parse_function, EnergyFunction};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn energy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_energy")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = energy(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn reach_on_fig2() {
    let f = path("fig2.ea");
    assert_eq!(run(&["reach", &f, "--from", "1", "--energy", "2", "--accepting", "3"]).0, 0);
    let (code, out, _) = run(&["reach", &f, "--from", "1", "--energy", "1", "--accepting", "3"]);
    assert_eq!((code, out.trim()), (1, "FALSE"));
}

#[test]
fn buchi_on_car() {
    let f = path("car.ea");
    let (code, out, _) = run(&["buchi", &f, "--from", "W", "--energy", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out, "TRUE\nwitness: W\n");
    for x in ["0", "11", "119/10"] {
        for method in ["cycle", "omega"] {
            assert_eq!(run(&["buchi", &f, "--energy", x, "--method", method]).0, 1, "{x} {method}");
        }
    }
    for x in ["12", "1201/100", "100"] {
        assert_eq!(run(&["buchi", &f, "--energy", x, "--method", "omega"]).0, 0, "{x}");
    }
}

#[test]
fn cover_on_fig4() {
    let f = path("fig4.ea");
    let (code, out, _) = run(&["cover", &f, "--from", "s", "--energy", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "TRUE\nbasis:\n  s (0, 2)\n  s (1, 1)\n  s (2, 0)\n  acc (0, 0)\n");
    assert_eq!(run(&["cover", &f, "--energy", "2,0"]).0, 0);
    assert_eq!(run(&["cover", &f, "--energy", "0,0"]).0, 1);
    assert_eq!(run(&["cover", &f, "--energy", "0,1"]).0, 1);
}

#[test]
fn closure_text() {
    let (code, out, _) = run(&["closure", &path("fig2.ea")]);
    assert_eq!(code, 0);
    assert!(out.contains("2 -> 3 : x-1 | x>1, inf | x>2\n"), "{out}");
    assert_eq!(out.lines().count(), 7);
    let (_, out, _) = run(&["closure", &path("car.ea"), "--omega"]);
    assert!(out.contains("omega W : x>=12\n"), "{out}");
}

#[test]
fn closure_json_matches_golden_file() {
    let (code, out, _) = run(&["closure", &path("fig2.ea"), "--dump-json"]);
    assert_eq!(code, 0);
    let golden = include_str!("golden/fig2_closure.json");
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want: serde_json::Value = serde_json::from_str(golden).unwrap();
    assert_eq!(got, want);

    // the golden file itself decodes to the expected closure
    let rows = matrix_from_json(&want["closure"].to_string()).unwrap();
    let expect = [
        ["x | x>=0", "bot | x>=0", "bot | x>=0"],
        ["inf | x>1", "x | x>=0, inf | x>2", "x+1 | x>=0, inf | x>1"],
        ["inf | x>1", "x-1 | x>1, inf | x>2", "x | x>=0, inf | x>1"],
    ];
    for (i, row) in expect.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let f: EnergyFunction = parse_function(text).unwrap();
            assert_eq!(rows[i][j], f, "entry ({}, {})", i + 1, j + 1);
        }
    }
}

#[test]
fn simulate_reports_witness_and_exit_codes() {
    let f = path("fig2.ea");
    let (code, out, _) = run(&["simulate", &f, "--energy", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("witness: 1 [2] -> 2 [5] -> 3 [4]"), "{out}");
    assert_eq!(run(&["simulate", &f, "--energy", "1"]).0, 1);

    let car = path("car.ea");
    let (code, out, _) = run(&["simulate", &car, "--energy", "12", "--buchi", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "TRUE");
    assert_eq!(v["acceptingState"], "W");
    assert_eq!(v["witness"][0], serde_json::json!({"state": "W", "energy": "12"}));
    assert_eq!(run(&["simulate", &car, "--energy", "12", "--buchi", "--cap", "1"]).0, 3);
}

#[test]
fn json_verdicts() {
    let (_, out, _) = run(&["reach", &path("fig2.ea"), "--energy", "5/2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"query": "reach", "from": "1", "energy": "5/2", "accepting": ["3"], "verdict": "TRUE"})
    );
    let (_, out, _) = run(&["buchi", &path("car.ea"), "--energy", "11", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "FALSE");
    assert_eq!(v["witness"], serde_json::Value::Null);
}

#[test]
fn check_and_errors() {
    assert_eq!(run(&["check", &path("fig4.ea")]).1, "valid: 2 states, 2 edges, dimension 2\n");
    assert_eq!(run(&["check", &path("piecewise.ea")]).0, 0);

    let (code, _, err) = run(&["reach", &path("fig2.ea"), "--energy", "0.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("decimal"), "{err}");
    assert_eq!(run(&["reach", &path("fig2.ea"), "--energy", "1", "--from", "Z"]).0, 2);
    assert_eq!(run(&["reach", &path("fig2.ea"), "--energy", "-1"]).0, 2);
    assert_eq!(run(&["reach", &path("fig2.ea")]).0, 2);
    assert_eq!(run(&["reach", &path("missing.ea"), "--energy", "1"]).0, 2);
    assert_eq!(run(&["cover", &path("fig4.ea"), "--energy", "1"]).0, 2);
    assert_eq!(run(&["reach", &path("fig4.ea"), "--energy", "1"]).0, 2);

    let dir = std::env::temp_dir().join(format!("energy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.ea");
    std::fs::write(&bad, "states: 2\ninitial: 1\naccepting: 2\nedge 1 -> 2 : 1/2x | x>=0\n").unwrap();
    let (code, _, err) = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.ea:4:"), "{err}");
    assert!(err.contains("edge 1 (1 -> 2)"), "{err}");
    let empty = dir.join("empty.ea");
    std::fs::write(&empty, "states: 2\ninitial: 1\naccepting: 2\n").unwrap();
    assert_eq!(run(&["reach", empty.to_str().unwrap(), "--energy", "100"]).0, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
