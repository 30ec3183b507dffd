use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dichotomy"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn pair_and_pcode() {
    assert_eq!(run(&["pair", "decode", "4"]).1, "n=1 p=1 M=2\n");
    assert_eq!(run(&["pair", "encode", "1", "1"]).1, "4\n");
    let (code, _, err) = run(&["pcode", "decode", "50", "--bound", "10"]);
    assert_eq!(code, 1);
    assert!(err.contains("bound exceeded"));
}

#[test]
fn placed_words_round_trip_through_kt_membership() {
    for u in ["0", "1", "0010", "0011", "001111"] {
        let v = json(&["placed", "decode", u]);
        let t: Vec<String> = v["t"].as_array().unwrap().iter().map(|n| n.to_string()).collect();
        let m = json(&["member", "--family", "kt", "--t", &t.join(","), "--point", u]);
        assert_eq!(m["verdict"], "IN", "{u}");
    }
    let (code, _, err) = run(&["placed", "decode", "00"]);
    assert_eq!(code, 1);
    assert!(err.contains("not placed"));
}

#[test]
fn edges_and_graphs() {
    let e = json(&["edge", "--family", "g0", "--left", "00;0", "--right", "01;0"]);
    assert_eq!((e["edge"].clone(), e["parameter"].clone()), (Value::Bool(true), Value::from(1)));
    let e = json(&["edge", "--family", "a2", "--left", "3;2", "--right", "3;3"]);
    assert_eq!(e["parameter"], serde_json::json!([3]));
    let e = json(&["edge", "--family", "a1", "--left", "01;0", "--right", "1;0"]);
    assert_eq!(e["edge"], false);
    let (code, dot, _) = run(&["graph", "--family", "g0", "--level", "1", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph g0_level_1 {") && dot.contains("\"0\" -- \"1\";"));
}

#[test]
fn membership_families() {
    assert_eq!(json(&["member", "--family", "s3", "--i", "1", "--eps", "0", "--point", "20;0"])["verdict"], "IN");
    assert_eq!(json(&["member", "--family", "a2part", "--q", "0", "--p", "2", "--point", "5;5"])["verdict"], "IN");
    let x = json(&["member", "--family", "x3", "--point", "0;1"]);
    assert_eq!(x["verdict"], "IN");
    assert_eq!(x["certificate"]["kind"], "recurring");
    let (code, _, err) = run(&["member", "--family", "kt", "--point", "0;0"]);
    assert_eq!(code, 1);
    assert!(err.contains("--t"));
}

#[test]
fn witnesses() {
    let w = json(&["witness", "--x3", "0110"]);
    assert_eq!(w["x3"]["verdict"], "IN");
    let w = json(&["witness", "--ht", "0", "0010"]);
    assert_eq!((w["h"].clone(), w["x3"]["verdict"].clone()), (Value::Bool(true), Value::from("IN")));
}

#[test]
fn verify_exit_codes_and_jobs() {
    let (code, a, _) = run(&["verify", "--suite", "lemma5.9", "maxlen=12", "--jobs", "1"]);
    assert_eq!(code, 0);
    let (_, z, _) = run(&["verify", "--suite", "lemma5.9", "maxlen=12", "--jobs", "3"]);
    assert_eq!(a, z);
    let r: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["failures"], serde_json::json!([]));
    assert_eq!(run(&["verify", "--suite", "lemma5.9", "maxlen=99"]).0, 1);
    assert_eq!(run(&["verify", "--suite", "lemma5.9", "maxlen"]).0, 1);
    assert_eq!(run(&["verify"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "g0-tree", "--format", "xml"]).0, 2);
    let (_, t, _) = run(&["verify", "--suite", "g0-tree", "N=3", "--timing"]);
    assert!(t.contains("elapsed_ms"));
}

#[test]
fn scan_reports_witnesses() {
    let r = json(&["scan", "--family", "g0", "--depth", "2"]);
    let w = r["witnesses"].as_array().unwrap();
    assert_eq!(w.len(), 4);
    assert!(w.iter().any(|w| w["cylinder"] == "11" && w["parameter"] == "6"));
    assert_eq!(run(&["scan", "--family", "a3rel", "--depth", "9"]).0, 1);
}
