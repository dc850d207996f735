use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn graphcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphcode"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graphcode-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Independent check of a witness from the JSON alone: the vector must solve
/// the equations of the unaffected outputs and violate one conclusion.
fn witness_checks_out(doc: &Value, w: &Value) -> bool {
    let n = doc["graph"]["vertices"].as_u64().unwrap() as usize;
    let mut gamma = vec![vec![0i64; n]; n];
    for e in doc["graph"]["edges"].as_array().unwrap() {
        let (u, v, wt) = (
            e[0].as_u64().unwrap() as usize,
            e[1].as_u64().unwrap() as usize,
            e[2].as_i64().unwrap(),
        );
        gamma[u][v] = wt;
        gamma[v][u] = wt;
    }
    let d = w["factor"].as_i64().unwrap();
    let support: Vec<usize> = w["support"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let values: Vec<i64> = w["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    let config: Vec<usize> = w["config"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let inputs: Vec<usize> = doc["graph"]["inputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let outputs: Vec<usize> = doc["graph"]["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let value_at = |v: usize| {
        support
            .iter()
            .position(|&s| s == v)
            .map_or(0, |k| values[k])
    };
    let solves = outputs.iter().filter(|y| !config.contains(y)).all(|&i| {
        support
            .iter()
            .map(|&s| gamma[i][s] * value_at(s))
            .sum::<i64>()
            .rem_euclid(d)
            == 0
    });
    let input_nonzero = inputs.iter().any(|&x| value_at(x).rem_euclid(d) != 0);
    let coupling = inputs.iter().any(|&x| {
        config
            .iter()
            .map(|&e| gamma[x][e] * value_at(e))
            .sum::<i64>()
            .rem_euclid(d)
            != 0
    });
    solves && (input_nonzero || coupling)
}

#[test]
fn detect_exit_codes() {
    let ok = graphcode(&[
        "detect",
        "--builtin",
        "wheel",
        "--group",
        "2",
        "--config",
        "1,2",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["detected"], Value::Bool(true));

    let fails = graphcode(&[
        "detect",
        "--builtin",
        "wheel",
        "--group",
        "2",
        "--config",
        "1,2,3",
    ]);
    assert_eq!(fails.status.code(), Some(1));
    let doc = json(&fails);
    assert_eq!(doc["detected"], Value::Bool(false));
    assert!(witness_checks_out(&doc, &doc["witness"]));

    let bad = graphcode(&[
        "detect",
        "--builtin",
        "wheel",
        "--group",
        "2",
        "--config",
        "0",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["detect", "--builtin", "wheel"],
        vec!["detect", "--builtin", "nosuch", "--config", "1"],
        vec![
            "detect",
            "--builtin",
            "wheel",
            "--graph",
            "x",
            "--config",
            "1",
        ],
        vec![
            "detect",
            "--builtin",
            "wheel",
            "--group",
            "1",
            "--config",
            "1",
        ],
        vec![
            "detect",
            "--builtin",
            "wheel",
            "--group",
            "2,x",
            "--config",
            "1",
        ],
        vec![
            "sweep",
            "--builtin",
            "wheel",
            "--detect",
            "1",
            "--correct",
            "1",
        ],
        vec![
            "detect",
            "--graph",
            "/nonexistent/graph.txt",
            "--config",
            "1",
        ],
        vec!["census", "--n", "5"],
        vec!["census", "--n", "6", "--prime", "4"],
        vec!["subdets", "--builtin", "wheel", "--inputs", "0,1,2,3"],
        vec!["frobnicate"],
    ] {
        assert_eq!(graphcode(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(graphcode(&["--help"]).status.code(), Some(0));
    let help = String::from_utf8(graphcode(&["detect", "--help"]).stdout).unwrap();
    assert!(help.contains("qubit case") && help.contains("[default: 2]"));
}

#[test]
fn sweep_examples() {
    let tenfold = graphcode(&[
        "sweep",
        "--builtin",
        "tenfold",
        "--group",
        "2",
        "--detect",
        "3",
    ]);
    assert_eq!(tenfold.status.code(), Some(0));
    let doc = json(&tenfold);
    assert_eq!(doc["checked"], 176);
    assert_eq!(doc["detected"], 176);

    let oracle = graphcode(&[
        "sweep",
        "--builtin",
        "wheel",
        "--group",
        "3",
        "--correct",
        "1",
        "--oracle",
    ]);
    assert_eq!(oracle.status.code(), Some(0));
    let doc = json(&oracle);
    assert_eq!(doc["oracle"]["status"], "checked");
    assert_eq!(doc["oracle"]["disagreements"].as_array().unwrap().len(), 0);

    let two = graphcode(&[
        "sweep",
        "--builtin",
        "wheel",
        "--group",
        "2",
        "--correct",
        "2",
    ]);
    assert_eq!(two.status.code(), Some(1));
    let doc = json(&two);
    let witnesses = doc["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    assert!(witnesses.iter().all(|w| witness_checks_out(&doc, w)));
}

#[test]
fn oracle_over_cap_is_skipped_with_warning() {
    let out = graphcode(&[
        "sweep",
        "--builtin",
        "tenfold",
        "--group",
        "5",
        "--detect",
        "1",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["oracle"]["status"], "skipped");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn graph_files_and_input_override() {
    let path = scratch("ring.graph");
    // a triangle with an input hanging off one corner
    fs::write(
        &path,
        "vertices: 4\ninputs: 0\n0 1 1\n1 2 1\n2 3 1\n1 3 1\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = graphcode(&["detect", "--graph", p, "--config", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["graph"]["source"], "file");

    for v in ["1", "2", "3", "4", "5"] {
        let out = graphcode(&[
            "sweep",
            "--builtin",
            "wheel",
            "--inputs",
            v,
            "--correct",
            "1",
        ]);
        assert_eq!(out.status.code(), Some(0), "input {v}");
    }

    fs::write(&path, "vertices: 2\ninputs: 0\n0 0 1\n").unwrap();
    let out = graphcode(&["detect", "--graph", p, "--config", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-loop"));
}

#[test]
fn subdets_search_census_export() {
    let doc = json(&graphcode(&["subdets", "--builtin", "matrix19"]));
    assert_eq!(doc["bad_primes"], serde_json::json!([2, 3, 5, 11]));
    assert_eq!(doc["partitions"].as_array().unwrap().len(), 35);

    let skeleton = scratch("k4.skeleton");
    fs::write(
        &skeleton,
        "vertices: 4\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n",
    )
    .unwrap();
    let s = skeleton.to_str().unwrap();
    let exhausted = graphcode(&[
        "search",
        "--skeleton",
        s,
        "--bound",
        "1",
        "--budget",
        "1000",
    ]);
    assert_eq!(exhausted.status.code(), Some(1));
    assert_eq!(json(&exhausted)["status"], "exhausted");
    let found = graphcode(&[
        "search",
        "--skeleton",
        s,
        "--bound",
        "2",
        "--budget",
        "1000",
    ]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(json(&found)["status"], "found");

    let sparse = scratch("zero-row.skeleton");
    fs::write(&sparse, "vertices: 4\n0 1 1\n").unwrap();
    let out = graphcode(&["search", "--skeleton", sparse.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "infeasible");

    let census = graphcode(&["census", "--n", "6"]);
    assert_eq!(census.status.code(), Some(0));
    let text = String::from_utf8(census.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text
        .lines()
        .all(|l| l.split(' ').next().unwrap().len() == 15));

    let csv =
        String::from_utf8(graphcode(&["export", "--builtin", "wheel", "--group", "2"]).stdout)
            .unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "row,col,re,im");
    assert_eq!(rows.len(), 1 + 32 * 2);
    for line in &rows[1..] {
        let f: Vec<f64> = line
            .split(',')
            .skip(2)
            .map(|t| t.parse().unwrap())
            .collect();
        assert!(((f[0] * f[0] + f[1] * f[1]).sqrt() - 32f64.powf(-0.5)).abs() < 1e-12);
    }
}

#[test]
fn shipped_examples_work() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let wheel = dir.join("wheel.graph");
    let out = graphcode(&[
        "sweep",
        "--graph",
        wheel.to_str().unwrap(),
        "--correct",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let from_file = json(&out);
    let builtin = json(&graphcode(&[
        "sweep",
        "--builtin",
        "wheel",
        "--correct",
        "1",
    ]));
    assert_eq!(from_file["graph"]["edges"], builtin["graph"]["edges"]);

    let skeleton = dir.join("k4.skeleton");
    let out = graphcode(&[
        "search",
        "--skeleton",
        skeleton.to_str().unwrap(),
        "--bound",
        "2",
        "--budget",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
}
