use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use shellfill::circle::ModelParams;
use shellfill::shell_lab::{build_shell, construct_min_fill, ShellSpec};
use shellfill::simplex::SimplexChain;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellfill")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn min_fill(n: i64, k1: i64, k2: i64, k3: i64) -> SimplexChain {
    let spec = ShellSpec::new(ModelParams::new(n).unwrap(), k1, k2, k3).unwrap();
    construct_min_fill(&spec, &build_shell(&spec)).unwrap().chain
}

fn write_chain(dir: &TempDir, name: &str, c: &SimplexChain) -> String {
    let path = dir.path().join(name);
    fs::write(&path, serde_json::to_string(c).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn table_matches_and_has_fixed_columns() {
    let out = run(&["table", "--n", "2..6", "--oracle-max", "9"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k1,k2,k3,k4,n_s,oracle_len,lascar_len,match"));
    assert_eq!(lines.clone().count(), 8 + 27 + 64 + 125 + 216);
    assert!(lines.all(|l| l.ends_with(",true")));
    assert!(text.lines().any(|l| l.starts_with("5,0,0,2,2,5,")));
}

#[test]
fn table_json_mirrors_csv() {
    let out = run(&["table", "--n", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 27);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let first = &text[..text.find('}').unwrap()];
    let at: Vec<usize> = ["n", "k1", "k2", "k3", "k4", "n_s", "oracle_len", "lascar_len", "match"]
        .iter()
        .map(|k| first.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn table_config_errors_and_mismatches() {
    assert_eq!(code(&run(&["table", "--n", "1..3"])), 2);
    assert_eq!(code(&run(&["table", "--n", "2..4", "--oracle-max", "8"])), 2);
    assert_eq!(code(&run(&["table", "--n", "abc"])), 2);
    assert_eq!(code(&run(&["table", "--n", "5", "--oracle-max", "3"])), 1);
}

#[test]
fn fill_from_spec() {
    let out = run(&["fill", "--n", "5", "--spec", "0,0,2"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["n_s"], 5);
    let fills = report["fills"].as_array().unwrap();
    assert_eq!(fills[0]["method"], "construction");
    assert_eq!(fills[0]["length"], 5);
    assert!(fills.iter().all(|f| f["verified"] == true));

    let trivial = json(&run(&["fill", "--n", "5", "--spec", "1,1,0", "--method", "construction"]));
    assert_eq!(trivial["k4"], 0);
    assert_eq!(trivial["fills"][0]["length"], 1);
    assert_eq!(code(&run(&["fill", "--n", "5", "--spec", "0,7,2"])), 2);
}

#[test]
fn fill_from_shell_file() {
    let dir = TempDir::new().unwrap();
    let spec = ShellSpec::new(ModelParams::new(6).unwrap(), 2, 5, 1).unwrap();
    let shell = write_chain(&dir, "shell.json", &build_shell(&spec).chain());
    let out = run(&["fill", "--n", "6", "--shell", &shell]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!((report["k1"].as_i64(), report["k2"].as_i64(), report["k3"].as_i64()), (Some(2), Some(5), Some(1)));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"terms\": [").unwrap();
    assert_eq!(code(&run(&["fill", "--n", "6", "--shell", bad.to_str().unwrap()])), 2);
}

#[test]
fn classify_reports() {
    let dir = TempDir::new().unwrap();
    let single = write_chain(&dir, "single.json", &min_fill(5, 1, 1, 0));
    let out = run(&["classify", &single, "--n", "5"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["kind"], "NR");
    assert_eq!(report["minimal"], "yes");
    assert!(report["standard_form"].is_null());

    let three = min_fill(3, 1, 2, 0);
    assert_eq!(three.length(), 3);
    let path = write_chain(&dir, "three.json", &three);
    let report = json(&run(&["classify", &path, "--n", "3", "--budget", "200"]));
    assert_eq!(report["kind"], "RN");
    assert_eq!(report["length"], 3);
    let sf: SimplexChain = serde_json::from_value(report["standard_form"]["chain"].clone()).unwrap();
    assert_eq!(sf.length(), 3);
}

#[test]
fn classify_rejects_non_shell_boundaries() {
    let dir = TempDir::new().unwrap();
    let spec = ShellSpec::new(ModelParams::new(4).unwrap(), 0, 0, 0).unwrap();
    let one_chain = write_chain(&dir, "edges.json", &build_shell(&spec).chain());
    assert_eq!(code(&run(&["classify", &one_chain, "--n", "4"])), 3);
    assert_eq!(code(&run(&["classify", "/nonexistent/chain.json", "--n", "4"])), 2);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let chain = write_chain(&dir, "c.json", &min_fill(5, 0, 0, 2));
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("out{i}.json"));
            let table = dir.path().join(format!("table{i}.csv"));
            let o = out.to_str().unwrap();
            assert_eq!(code(&run(&["classify", &chain, "--n", "5", "--budget", "200", "--seed", "4", "--out", o])), 0);
            assert_eq!(code(&run(&["table", "--n", "2..4", "--out", table.to_str().unwrap()])), 0);
            [fs::read(&out).unwrap(), fs::read(&table).unwrap()].concat()
        })
        .collect();
    assert_eq!(files[0], files[1]);
    assert!(Path::new(&chain).exists());
}

#[test]
fn chains_round_trip() {
    let c = min_fill(7, 0, 1, 2);
    let text = serde_json::to_string(&c).unwrap();
    assert_eq!(serde_json::from_str::<SimplexChain>(&text).unwrap(), c);
}
