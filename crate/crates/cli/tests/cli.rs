use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sigtensor"));
    c.env_remove("SIGTENSOR_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn axis3(dir: &TempDir) -> PathBuf {
    write(
        dir,
        "axis3.json",
        &json!({"dim": 3, "increments": [["1","0","0"], ["0","1","0"], ["0","0","1"]]}),
    )
}

#[test]
fn signature_of_axis_path() {
    let dir = TempDir::new().unwrap();
    let r = report(&run(&["signature", "--path", s(&axis3(&dir)), "--level", "3"]));
    assert_eq!(r["command"], "signature");
    assert_eq!(r["inputs"]["level"], 3);
    let level3 = &r["result"]["levels"][3]["entries"];
    // e_123 is entry (0,1,2) → offset 5; e_111 → 0; e_112 → 1
    assert_eq!(level3[5], "1");
    assert_eq!(level3[0], "1/6");
    assert_eq!(level3[1], "1/2");
    assert_eq!(level3[3], "0");
    let sig: sigtensor::TruncatedSignature = serde_json::from_value(r["result"].clone()).unwrap();
    assert_eq!(sig.max_level(), 3);
}

#[test]
fn signature_from_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("ts.csv");
    fs::write(&csv, "x,y\n0,0\n1,0\n1,1\n").unwrap();
    let r = report(&run(&["signature", "--csv", s(&csv), "--header", "--level", "2"]));
    assert_eq!(r["result"]["levels"][1]["entries"], json!(["1", "1"]));
    assert_eq!(
        r["result"]["levels"][2]["entries"],
        json!(["1/2", "1", "0", "1/2"])
    );
}

#[test]
fn rank_bound_and_shuffle() {
    let r = report(&run(&["rank-bound", "--k", "3", "--m", "5"]));
    assert_eq!(r["result"]["bound"], 8);
    let r = report(&run(&["shuffle", "--w1", "12", "--w2", "34"]));
    let sum = r["result"].as_object().unwrap();
    assert_eq!(sum.len(), 6);
    assert!(sum.values().all(|c| c == 1));
    assert!(sum.contains_key("1324"));
}

#[test]
fn exp_and_log_round_trip() {
    let dir = TempDir::new().unwrap();
    let sig = report(&run(&["signature", "--path", s(&axis3(&dir)), "--level", "3"]));
    let sig_path = write(&dir, "sig.json", &sig["result"]);
    let log = report(&run(&["log", "--sig", s(&sig_path)]));
    let log_path = write(&dir, "log.json", &log["result"]);
    let back = report(&run(&["exp", "--logsig", s(&log_path)]));
    assert_eq!(back["result"], sig["result"]);
    let lower = report(&run(&["exp", "--logsig", s(&log_path), "--level", "2"]));
    assert_eq!(lower["result"]["max_level"], 2);
    assert_eq!(
        run(&["exp", "--logsig", s(&log_path), "--level", "5"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn decompose_and_certify() {
    let dir = TempDir::new().unwrap();
    let r = report(&run(&["decompose", "--path", s(&axis3(&dir)), "--level", "3"]));
    let cert = &r["certificates"]["rank"];
    assert_eq!(
        (cert["lower"].as_u64(), cert["upper"].as_u64()),
        (Some(4), Some(4))
    );
    assert_eq!(cert["status"], "exact");

    let sig = report(&run(&["signature", "--path", s(&axis3(&dir)), "--level", "3"]));
    let t = write(&dir, "t.json", &sig["result"]["levels"][3]);
    let w = write(&dir, "w.json", &r["result"]);
    let c = report(&run(&["certify", "--tensor", s(&t), "--witness", s(&w)]));
    assert_eq!(c["result"]["upper"], 4);

    let wrong = write(&dir, "t2.json", &sig["result"]["levels"][2]);
    assert_eq!(
        run(&["certify", "--tensor", s(&wrong), "--witness", s(&w)])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn classify_and_symmetry() {
    let dir = TempDir::new().unwrap();
    let w_state = write(
        &dir,
        "w.json",
        &json!({"order": 3, "dim": 2, "entries": ["0","1","1","0","1","0","0","0"]}),
    );
    let r = report(&run(&["classify222", "--tensor", s(&w_state)]));
    assert_eq!(r["result"]["complex_rank"], 3);
    assert_eq!(r["result"]["hyperdeterminant"], "0");
    let r = report(&run(&["symmetry", "--tensor", s(&w_state)]));
    assert_eq!(r["result"]["is_symmetric"], true);
    assert_eq!(r["result"]["witness"]["property"], "skew");
}

#[test]
fn sig222_partial_symmetry() {
    let r = report(&run(&["sig222", "--params", "6,-6,1,1,1"]));
    let res = &r["result"];
    assert_eq!(res["report"]["is_symmetric"], false);
    assert_eq!(res["report"]["partial"], json!(["first_k_minus1"]));
    assert_eq!(res["constraints"]["first_k_minus1"], true);
    assert_eq!(res["hyperdeterminant"], "0");
    assert_eq!(res["complex_rank"], 3);
}

#[test]
fn concise_and_pure_volume() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "flat.json",
        &json!({"dim": 3, "increments": [["0","1","0"], ["0","0","2"], ["0","-1","1"]]}),
    );
    let sig = report(&run(&["signature", "--path", s(&p), "--level", "4"]));
    let sig_path = write(&dir, "sig.json", &sig["result"]);
    let r = report(&run(&["concise", "--sig", s(&sig_path)]));
    assert_eq!(r["result"]["confining_subspace"]["dim"], 2);
    assert!(r["certificates"]["subspace"].is_object());

    let logsig = write(
        &dir,
        "area.json",
        &json!({"dim": 2, "max_level": 4, "levels": [
            {"order": 1, "dim": 2, "entries": ["0","0"]},
            {"order": 2, "dim": 2, "entries": ["0","1","-1","0"]},
            {"order": 3, "dim": 2, "entries": ["0","0","0","0","0","0","0","0"]},
            {"order": 4, "dim": 2, "entries": vec!["0"; 16]},
        ]}),
    );
    let exp = report(&run(&["exp", "--logsig", s(&logsig)]));
    let exp_path = write(&dir, "exp.json", &exp["result"]);
    let r = report(&run(&[
        "pure-volume",
        "--sig",
        s(&exp_path),
        "--n",
        "2",
        "--k0",
        "3",
    ]));
    assert_eq!(r["result"]["pure_volume"], true);
    let r = report(&run(&[
        "pure-volume",
        "--sig",
        s(&sig_path),
        "--n",
        "2",
        "--k0",
        "3",
    ]));
    assert_eq!(r["result"]["pure_volume"], false);
}

#[test]
fn verify_is_reproducible() {
    let a = run(&["verify", "--seed", "5", "--size", "2"]);
    let b = run(&["verify", "--seed", "5", "--size", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["result"]["passed"], true);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"dim\": 2,\n  \"increments\": [[\"1\", \"x\"]]\n}").unwrap();
    let out = run(&["signature", "--path", s(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["signature", "--path", s(&missing)]).status.code(), Some(3));

    let out = run(&["decompose", "--path", s(&axis3(&dir)), "--level", "0"]);
    assert_eq!(out.status.code(), Some(4));

    let big = write(&dir, "big.json", &json!({"dim": 7, "increments": [vec!["1"; 7]]}));
    let out = run(&["signature", "--path", s(&big), "--level", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--allow-large"));
    assert!(
        run(&["--allow-large", "signature", "--path", s(&big), "--level", "2"])
            .status
            .success()
    );
}

#[test]
fn output_destinations_and_float() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["rank-bound", "--k", "4", "--m", "3", "--out", s(&out)]);
    assert!(o.status.success() && o.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["result"]["bound"], 7);

    let o = bin()
        .args(["shuffle", "--w1", "1", "--w2", "2"])
        .env("SIGTENSOR_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("shuffle.json").exists());

    let r = report(&run(&["--float", "sig222", "--params", "1,0,0,0,0"]));
    assert_eq!(r["lossy_float"]["tensor"]["entries"][0], 1.0 / 6.0);
    assert_eq!(r["result"]["tensor"]["entries"][0], "1/6");
}
