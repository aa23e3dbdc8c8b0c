use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiseg")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is json");
    (out.status.code().unwrap(), v)
}

#[test]
fn eval_prints_result_and_trace() {
    let out = run(&["eval", "D_R([0,1], St{[0,1],[1]})"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("St{[1,1]@r}\n"), "{text}");
    assert!(text.contains("D^R_{[0,1]@r}"));
}

#[test]
fn eval_json_envelope() {
    let (code, v) = json(&["eval", "I_R([2,3], Z<[0,1]>)"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["inputs"]["expr"], "I_R([2,3], Z<[0,1]>)");
    assert_eq!(v["result"], "L{[0,0]@r,[1,1]@r,[2,3]@r}");
    assert_eq!(v["trace"].as_array().unwrap().len(), 1);
}

#[test]
fn eval_invariants() {
    let (_, v) = json(&["eval", "St{[0,2]}", "--invariant", "eta", "--seg", "[1,2]"]);
    assert_eq!(v["result"], serde_json::json!([0, 0]));
    let (_, v) = json(&["eval", "St{[0,1],[1]}", "--invariant", "eps", "--seg", "[1]"]);
    assert_eq!(v["result"], 1);
    let (_, v) = json(&["eval", "St{[0,1],[1]}", "--invariant", "level"]);
    assert_eq!(v["result"], 3);
    let out = run(&["eval", "St{[0,1]}", "--invariant", "mx"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_triple_kinds() {
    let (code, v) = json(&["check-triple", "--d1", "[1]", "--d2", "[0,1]", "--pi", "St{[0,1],[1]}"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["outcome"], "True");
    assert_eq!(v["reason"], "EtaEqual");
    let (_, v) = json(&["check-triple", "--d1", "[0,1]", "--d2", "[0,1]", "--pi", "St{[0,1],[1]}"]);
    assert_eq!(v["result"]["outcome"], "False");
    assert_eq!(v["reason"], "EtaDiffer");
    let (_, v) = json(&["check-triple", "--kind", "multi", "--d1", "{[1]}", "--d2", "{[0],[0]}", "--pi", "Z<[0,1]>"]);
    assert_eq!(v["result"]["outcome"], "True");
    for kind in ["ldri", "dual-rdli"] {
        let out = run(&["check-triple", "--kind", kind, "--d1", "[1]", "--d2", "[0,1]", "--pi", "St{[0,1],[1]}"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
    }
}

#[test]
fn relevant_and_dualize() {
    let (code, v) = json(&["relevant", "--pi", "St{[0,1]}", "--pi2", "St{[0]}"]);
    assert_eq!(code, 0);
    assert_eq!(v["reason"], "CertificateFound");
    assert!(!v["result"]["certificates"].as_array().unwrap().is_empty());

    let (code, v) = json(&["dualize", "--pi", "St{[0,1]}", "--pi2", "St{[0]}", "--m", "{[1/2,3/2]}", "--n", "{[0]}"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pi"], "St{[0,0]@r}");
    assert_eq!(v["result"]["pi2"], "St{[-1,0]@r}");
    assert_eq!(v["result"]["dual"]["verdict"]["outcome"], "True");
}

#[test]
fn jacquet_lists_trivial_layer_first() {
    let (code, v) = json(&["jacquet", "--k", "1", "St{[0,1],[1]}"]);
    assert_eq!(code, 0);
    let layers = v["result"].as_array().unwrap();
    assert_eq!(layers.len(), 2);
    assert_eq!(layers[0]["index"]["rows"], serde_json::json!([[2, 0], [0, 1]]));
}

#[test]
fn sweep_small_window_is_clean() {
    let dir = std::env::temp_dir().join(format!("multiseg-sweep-{}.json", std::process::id()));
    let path = dir.to_str().unwrap();
    let out = run(&["sweep", "--hi", "2", "--max-labs", "3", "--properties", "inverse-laws,dual-switch", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inverse-laws"));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&dir).unwrap()).unwrap();
    std::fs::remove_file(&dir).ok();
    assert_eq!(saved["properties"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "St{[0,1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "St{[0,1],[1,2]}"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "I_R([0], Z<[0,1]>)"]).status.code(), Some(3));
    assert_eq!(run(&["sweep", "--properties", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--max-labs", "0"]).status.code(), Some(2));

    let (code, v) = json(&["eval", "I_R([0], Z<[0,1]>)"]);
    assert_eq!(code, 3);
    assert!(v["reason"].as_str().unwrap().contains("supported"));
}

#[test]
fn line_table_file() {
    let path = std::env::temp_dir().join(format!("multiseg-lines-{}.txt", std::process::id()));
    std::fs::write(&path, "# two lines\nline q weight 2 dual s\n").unwrap();
    let out = run(&["--lines", path.to_str().unwrap(), "eval", "dual(St{[0,1]@q})"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("St{[-1,0]@s}"), "{text}");
}
