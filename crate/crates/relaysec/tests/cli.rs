use std::path::PathBuf;
use std::process::Command;

use relaysec::cli::{run, Outcome};
use relaysec::formats::{parse_code, write_code, write_distribution, write_matrix};
use relaysec_core::algebra::Matrix;
use relaysec_core::codes::standard_nonlinear_code;
use relaysec_core::info::{JointDistribution, Variable};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

fn go(args: &[&str]) -> Outcome {
    run(std::iter::once("relaysec").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> serde_json::Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid JSON")
}

#[test]
fn every_selftest_passes() {
    for cmd in ["classify", "antilatin", "capacity", "mincut", "mds", "wiretap2", "han"] {
        let out = go(&[cmd, "--selftest"]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.stdout);
        assert!(!out.stdout.contains("FAIL"));
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(go(&["--help"]).code, 0);
    assert!(go(&["--version"]).stdout.contains("relaysec"));
    assert_eq!(go(&["classify", "--help"]).code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(go(&["frobnicate"]).code, 2);
    assert_eq!(go(&["classify"]).code, 2);
    assert_eq!(go(&["classify", "--family", "standard", "--d", "2", "--class", "sneaky"]).code, 2);
    assert_eq!(go(&["mincut", "--net", "/nonexistent/net"]).code, 2);
    assert_eq!(go(&["mds", "build", "--k", "4", "--r", "2", "--q", "6"]).code, 2);
    assert_eq!(go(&["mincut", "--net", &fixture("six_node.net"), "--format", "csv"]).code, 2);
}

#[test]
fn classify_standard_code_json() {
    let v = json(&go(&["--format", "json", "classify", "--family", "standard", "--d", "2", "--class", "passive"]));
    assert_eq!(v["schema"], "relaysec/v1");
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["class"], "deterministic-passive");
    assert_eq!(verdict["level"], "imperfectly-secret");
    assert!((verdict["max_leakage_bits"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn class_aliases_map_to_columns() {
    let v = json(&go(&[
        "--format", "json", "classify", "--family", "standard", "--d", "2", "--class", "passive,active,adaptive",
    ]));
    let classes: Vec<&str> = v["verdicts"].as_array().unwrap().iter().map(|x| x["class"].as_str().unwrap()).collect();
    assert_eq!(classes, ["deterministic-passive", "deterministic-active", "adaptive-passive"]);
}

#[test]
fn json_output_is_reproducible() {
    let args = ["--format", "json", "classify", "--table", "--d", "2,3"];
    assert_eq!(go(&args).stdout, go(&args).stdout);
    let args = ["--format", "json", "--seed", "7", "antilatin", "maxset", "--d", "4", "--method", "heuristic"];
    let (a, b) = (go(&args), go(&args));
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_csv_has_one_line_per_cell() {
    let out = go(&["--format", "csv", "classify", "--table", "--d", "2", "--expect-table1"]);
    assert_eq!(out.code, 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| &r[5] == "true"));
}

#[test]
fn code_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("std2.json");
    let code = standard_nonlinear_code(2).unwrap();
    std::fs::write(&path, write_code(&code)).unwrap();
    assert_eq!(parse_code(&std::fs::read_to_string(&path).unwrap()).unwrap(), code);
    let v = json(&go(&["--format", "json", "classify", "--code", path.to_str().unwrap(), "--class", "adaptive"]));
    assert_eq!(v["verdicts"][0]["level"], "insecure");
    let out = go(&["classify", "--code", path.to_str().unwrap(), "--per-shot", "--class", "passive"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("per-shot"));
}

#[test]
fn antilatin_actions() {
    let a = "0,1,0;1,1,2;0,2,2";
    assert_eq!(go(&["antilatin", "verify", "--square", a]).code, 0);
    assert_eq!(go(&["antilatin", "verify", "--square", "0,1,2;1,2,0;2,0,1"]).code, 1);
    assert_eq!(go(&["antilatin", "verify", "--square", "0,1;1"]).code, 2);
    let v = json(&go(&["--format", "json", "antilatin", "find", "--d", "2"]));
    assert_eq!(v["found"], false);
    assert_eq!(v["tables_examined"], 16);
    let v = json(&go(&["--format", "json", "antilatin", "find", "--d", "3"]));
    assert_eq!(v["found"], true);
}

#[test]
fn square_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.txt");
    std::fs::write(&path, "# square\n1 1\n1 1\n").unwrap();
    let out = go(&["antilatin", "verify", "--square", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
}

#[test]
fn six_node_mincut_and_capacity() {
    let v = json(&go(&["--format", "json", "mincut", "--net", &fixture("six_node.net")]));
    assert_eq!((v["mincut1"].as_u64(), v["mincut2"].as_u64()), (Some(3), Some(2)));
    assert_eq!(v["pseudo_sources"][0], "5");
    let v = json(&go(&["--format", "json", "capacity", "--net", &fixture("six_node.net"), "--r", "2"]));
    assert_eq!((v["C2"].as_u64(), v["C1_lower"].as_u64(), v["C1_upper"].as_u64()), (Some(0), Some(0), Some(1)));
    let v = json(&go(&["--format", "json", "capacity", "--net", &fixture("six_node.net"), "--r", "5"]));
    assert_eq!(v["clamped"], true);
    assert!(v["warning"].is_string());
}

#[test]
fn layered_capacity_inline_and_file() {
    let spec = r#"{"c":2,"k":[2,2],"r":[1,1],"q":2}"#;
    let v = json(&go(&["--format", "json", "capacity", "--layered", spec]));
    assert_eq!(v["C1"].as_f64(), Some(1.0));
    assert_eq!(v["C2"].as_f64(), Some(0.5));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("layered.json");
    std::fs::write(&path, spec).unwrap();
    let w = json(&go(&["--format", "json", "capacity", "--layered", path.to_str().unwrap()]));
    assert_eq!(v, w);
}

#[test]
fn mds_build_and_verify() {
    let out = go(&["mds", "build", "--k", "4", "--r", "2", "--q", "7"]);
    assert_eq!(out.code, 0);
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("g.txt");
    std::fs::write(&good, &out.stdout).unwrap();
    assert_eq!(go(&["mds", "verify", "--matrix", good.to_str().unwrap()]).code, 0);
    let bad = dir.path().join("b.txt");
    let m = Matrix::new(2, 3, 7, vec![1, 0, 1, 0, 1, 0]).unwrap();
    std::fs::write(&bad, write_matrix(&m)).unwrap();
    let out = go(&["mds", "verify", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("singular columns [0, 2]"));
}

#[test]
fn wiretap2_verify_and_encode() {
    let v = json(&go(&["--format", "json", "wiretap2", "--q", "3", "--k", "3", "--r", "1"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["leaking_subsets"].as_array().unwrap().len(), 0);
    let v = json(&go(&[
        "--format", "json", "wiretap2", "--q", "5", "--k", "4", "--r", "2", "--message", "3,4", "--scrambles", "1,2",
    ]));
    assert_eq!(v["decoded"], serde_json::json!([3, 4]));
}

#[test]
fn han_on_a_distribution_file() {
    let vars = vec![Variable::new("A", 2), Variable::new("B", 2), Variable::new("C", 2)];
    let rows = vec![(vec![0, 0, 0], 1), (vec![1, 1, 0], 1), (vec![1, 0, 1], 2)];
    let dist = JointDistribution::from_weights(vars, rows).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.json");
    std::fs::write(&path, write_distribution(&dist)).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&go(&["--format", "json", "han", "--dist", p, "--blocks", "A;B;C", "--r", "2"]));
    assert_eq!(v["holds"], true);
    assert_eq!(v["h"], 2);
    let v = json(&go(&["--format", "json", "han", "--dist", p, "--blocks", "A;B", "--given", "C", "--collection", "0,1", "--h", "1"]));
    assert_eq!(v["slack"].as_f64(), Some(0.0));
    assert_eq!(go(&["han", "--dist", p, "--blocks", "A;Q", "--r", "1"]).code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_relaysec");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["mincut", "--net", &fixture("six_node.net")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("mincut1 = 3"));
    assert_eq!(status(&["antilatin", "verify", "--square", "0,1;1,0"]).status.code(), Some(1));
    assert_eq!(status(&["nope"]).status.code(), Some(2));
    let budget = status(&["--budget", "1", "antilatin", "find", "--d", "5"]);
    assert_eq!(budget.status.code(), Some(3), "{}", String::from_utf8_lossy(&budget.stderr));
}
