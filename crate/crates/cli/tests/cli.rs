use std::path::PathBuf;
use std::process::{Command, Output};

fn locdim(args: &[&str]) -> Output {
    locdim_env(args, &[])
}

fn locdim_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_locdim"));
    cmd.args(args);
    for key in ["LOCDIM_EXACT_CAP", "LOCDIM_JOBS", "LOCDIM_SEED", "LOCDIM_STRICT", "LOCDIM_NODE_CAP", "LOCDIM_TRACE"] {
        cmd.env_remove(key);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn construct_exit_codes() {
    let out = locdim(&["construct", "--name", "friendship:2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["W"].as_array().unwrap().len(), 2);
    assert!(v.get("trace").is_none());

    let out = locdim(&["construct", "--name", "K4"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("contains K4"));

    let out = locdim(&["construct", "--name", "C5"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["W"].as_array().unwrap().len() <= 2);

    assert_eq!(code(&locdim(&["construct", "--g6", "not-graph6"])), 2);
    assert_eq!(code(&locdim(&["construct", "--name", "nonsense"])), 2);
    assert_eq!(code(&locdim(&["construct", "--name", "P3"])), 2);
}

#[test]
fn construct_trace_and_node_cap() {
    let out = locdim(&["construct", "--name", "friendship:3", "--trace"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["trace"][0]["step"], "initial");
    assert_eq!(v["division"].as_array().unwrap().len(), 10);

    // greedy diamond packing is not provably maximum here, so the search needs more than one node
    let out = locdim(&["construct", "--g6", "GPdiv[", "--node-cap", "1"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("node budget"));
    assert_eq!(code(&locdim(&["construct", "--g6", "GPdiv["])), 0);
    assert_eq!(code(&locdim_env(&["construct", "--g6", "GPdiv["], &[("LOCDIM_NODE_CAP", "1")])), 4);
}

#[test]
fn exact_examples() {
    let dim = |name: &str| json(&locdim(&["exact", "--name", name]))["dim_l"].as_u64().unwrap();
    assert_eq!(dim("C5"), 2);
    assert_eq!(dim("K5"), 4);
    assert_eq!(dim("P4"), 1);
    let out = locdim(&["exact", "--name", "C5"]);
    assert_eq!(json(&out)["witness"], serde_json::json!([0, 1]));
    assert_eq!(code(&locdim(&["exact", "--name", "petersen", "--exact-cap", "8"])), 4);
}

#[test]
fn flags_override_environment() {
    assert_eq!(code(&locdim_env(&["exact", "--name", "C5"], &[("LOCDIM_EXACT_CAP", "4")])), 4);
    let out = locdim_env(&["exact", "--name", "C5", "--exact-cap", "5"], &[("LOCDIM_EXACT_CAP", "4")]);
    assert_eq!(code(&out), 0);
    let a = stdout(&locdim_env(&["gen", "--name", "random:9:0.5"], &[("LOCDIM_SEED", "11")]));
    let b = stdout(&locdim(&["gen", "--name", "random:9:0.5", "--seed", "11"]));
    let c = stdout(&locdim_env(&["gen", "--name", "random:9:0.5", "--seed", "11"], &[("LOCDIM_SEED", "3")]));
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn verify_examples() {
    let out = locdim(&["verify", "--name", "K3", "--set", "0"]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "fails 1,2"));
    let out = locdim(&["verify", "--name", "C4", "--set", "0"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "ok"));
    assert_eq!(code(&locdim(&["verify", "--name", "diamond", "--set", "0,2"])), 0);
    for bad in ["0,9", "x", "1,1", "-1"] {
        assert_eq!(code(&locdim(&["verify", "--name", "C4", "--set", bad])), 2, "{bad}");
    }
}

#[test]
fn file_input_reads_first_line() {
    let path = scratch_file("single.g6", "\nD?{\nC~\n");
    let out = locdim(&["exact", "--file", path.to_str().unwrap()]);
    assert_eq!(json(&out)["dim_l"], 1);
}

#[test]
fn batch_is_independent_of_jobs() {
    let stream = stdout(&locdim(&["gen", "--name", "random:9:0.45", "--seed", "1", "--count", "40"]));
    let path = scratch_file("jobs.g6", &(stream + "C~\nbad line\n"));
    let file = path.to_str().unwrap();
    let one = locdim(&["batch", "--file", file, "--jobs", "1"]);
    let eight = locdim(&["batch", "--file", file, "--jobs", "8"]);
    let again = locdim(&["batch", "--file", file, "--jobs", "1"]);
    assert_eq!(one.stdout, eight.stdout);
    assert_eq!(one.stdout, again.stdout);
    assert_eq!(code(&one), 0);
    let last = stdout(&one).lines().last().unwrap().to_string();
    let summary: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(summary["summary"]["parse_errors"], 1);
    assert_eq!(summary["summary"]["skipped"], 1);
}

#[test]
fn batch_over_all_connected_k4_free_n5() {
    let stream = stdout(&locdim(&["gen", "--name", "labeled:5"]));
    assert_eq!(stream.lines().count(), 667);
    let path = scratch_file("n5.g6", &stream);
    let report = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("n5.jsonl");
    let out = locdim(&["batch", "--file", path.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let s = json(&out);
    assert_eq!(s["graphs"], 667);
    assert_eq!(s["bound_ok"], 667);
    assert_eq!(s["repairs"], 0);
    assert_eq!(std::fs::read_to_string(report).unwrap().lines().count(), 668);
}

#[test]
fn batch_edge_cases() {
    let empty = scratch_file("empty.g6", "");
    let out = locdim(&["batch", "--file", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["graphs"], 0);

    let k4 = scratch_file("k4.g6", "C~\n");
    let out = locdim(&["batch", "--file", k4.to_str().unwrap()]);
    let line: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(line["status"], "skipped");
    assert!(line["reason"].as_str().unwrap().contains("contains K4"));

    assert_eq!(code(&locdim(&["batch", "--file", "/nonexistent/graphs.g6"])), 2);
}

#[test]
fn gen_outputs() {
    let out = locdim(&["gen", "--name", "friendship:3"]);
    assert_eq!(stdout(&out).trim(), "F{eCG");
    assert_eq!(stdout(&locdim(&["gen", "--name", "random-tf:8:0.5", "--count", "3"])).lines().count(), 3);
    assert_eq!(code(&locdim(&["gen", "--name", "labeled:9"])), 2);
}
