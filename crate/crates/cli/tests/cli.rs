use std::path::PathBuf;
use std::process::{Command, Output};

use jointmin::io::from_json;
use jointmin::polyhedra::VertexSet;
use jointmin::{MarkovKernel, Observable};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jointmin")).args(args).output().expect("spawn")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn qubit_check_cross_validates_f1_min() {
    let out = run(&["qubit-check", "--input", &data("f1_min.json"), "--cross-validate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["closed_form"]["decision"], "MINIMAL");
    assert_eq!(v["general"]["decision"], "MINIMAL");
}

#[test]
fn qubit_check_not_minimal_carries_certificate() {
    let out = run(&["qubit-check", "--input", &data("f1_nonmin.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["decision"], "NOT_MINIMAL");
    assert!(v["certificate"]["kernel"]["entries"].is_array());
}

#[test]
fn region_default_grid() {
    let out = run(&["region"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c1,c2,verdict,slack_g1,slack_g2,slack_g3,slack_g4"));
    assert_eq!(lines.count(), 201 * 201);
}

#[test]
fn region_from_instance_with_gamma_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = run(&[
        "region",
        "--input",
        &data("f1_min.json"),
        "--gamma",
        "0.4",
        "--grid",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 11 * 11 + 1);
}

#[test]
fn check_example_trivial() {
    let out = run(&["check", "--input", &data("example_trivial.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["decision"], "NOT_MINIMAL");
    let k: MarkovKernel = serde_json::from_value(v["certificate"]["kernel"].clone()).unwrap();
    for x in 0..4 {
        for y in 0..4 {
            assert!((k.get(x, y) - 0.25).abs() < 1e-9);
        }
    }
    let lower: Observable = serde_json::from_value(v["certificate"]["lower_joint"].clone()).unwrap();
    assert_eq!(lower.len(), 4);
}

#[test]
fn check_with_descent() {
    let out = run(&["check", "--input", &data("example_trivial.json"), "--descend"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["decision"], "NOT_MINIMAL");
    assert_eq!(v["descent"]["status"], "CONVERGED");
    let joint: Observable = serde_json::from_value(v["descent"]["joint"].clone()).unwrap();
    assert_eq!(joint.len(), 4);
}

#[test]
fn check_accepts_qubit_instances() {
    let out = run(&["check", "--input", &data("f1_nonmin.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["decision"], "NOT_MINIMAL");
}

#[test]
fn reduce_output_reparses() {
    let out = run(&["reduce", "--input", &data("duplicated.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let b: Observable = serde_json::from_value(v["observable"].clone()).unwrap();
    assert_eq!(b.len(), 2);
    let f: MarkovKernel = serde_json::from_value(v["forward"].clone()).unwrap();
    let back: MarkovKernel = serde_json::from_value(v["backward"].clone()).unwrap();
    assert_eq!((f.out_set().len(), f.in_set().len()), (2, 3));
    assert_eq!((back.out_set().len(), back.in_set().len()), (3, 2));
}

#[test]
fn joint_from_common_output() {
    let out = run(&["joint", "--input", &data("common.json")]);
    assert_eq!(out.status.code(), Some(0));
    let g: Observable = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(g.outcomes().labels(), ["a,x", "a,y", "b,x", "b,y"]);
    assert!(g.outcomes().factors().is_some());
}

#[test]
fn vertices_of_square() {
    let out = run(&["vertices", "--input", &data("square.json")]);
    assert_eq!(out.status.code(), Some(0));
    let vs: VertexSet = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(vs.len(), 4);
}

#[test]
fn oracle_compare_is_deterministic() {
    let args = ["oracle-compare", "--seed", "5", "--count", "15"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["agree"], 15);
    assert_eq!(v["disagree"], 0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["check"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--input", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["region", "--grid", "many"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--input", &data("square.json")]).status.code(), Some(1));
    assert_eq!(run(&["region", "--tol", "-1"]).status.code(), Some(1));
}

#[test]
fn positivity_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"alpha":1.0,"a":[0.3,0,0],"beta":1.0,"b":[0,0.3,0],"gamma":0.0,"g":[0,0,0]}"#,
    )
    .unwrap();
    let out = run(&["qubit-check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(g"));
}

#[test]
fn unbounded_system_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ray.json");
    std::fs::write(&path, r#"{"n":1,"ineq":[[1,0]]}"#).unwrap();
    let out = run(&["vertices", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
