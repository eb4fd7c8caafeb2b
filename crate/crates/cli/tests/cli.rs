use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3kummer")).args(args).output().expect("spawn k3kummer")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json on stdout")
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("k3kummer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const U2_PLUS_N: &str = r#"{
  "dim": 5,
  "gram": [
    [0, 2, 0, 0, 0],
    [2, 0, 0, 0, 0],
    [0, 0, 2, 1, 2],
    [0, 0, 1, -2, 0],
    [0, 0, 2, 0, 0]
  ]
}"#;

#[test]
fn classify_csv_has_seventeen_rows_and_total() {
    let o = run(&["classify", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1), "row 1 sign discrepancy is reported");
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "row,name,size,alpha,disc_orders,condition3");
    assert_eq!(lines.len(), 19);
    assert_eq!(*lines.last().unwrap(), "total=373");
    let sizes: usize = lines[1..18].iter().map(|l| l.split(',').nth(2).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(sizes, 373);
    assert!(String::from_utf8_lossy(&o.stderr).contains("row1-q-sign"));
}

#[test]
fn classify_json_rows() {
    let o = run(&["classify", "--format", "json"]);
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 17);
    let rows_seen: Vec<u64> = rows.iter().map(|r| r["row"].as_u64().unwrap()).collect();
    assert!((1..=17).all(|k| rows_seen.contains(&k)));
}

#[test]
fn orbits_json_shape() {
    let o = run(&["orbits", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let orbits = v.as_array().unwrap();
    assert_eq!(orbits.len(), 31 - 14);
    let total: u64 = orbits.iter().map(|x| x["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 373);
    for x in orbits {
        let rep = x["rep"].as_array().unwrap();
        assert_eq!(rep.len() as u64, x["dim"].as_u64().unwrap());
        assert!(rep.iter().all(|b| b.as_str().unwrap().len() == 5));
    }
}

#[test]
fn discform_of_u2_plus_n() {
    let p = temp_file("u2n.json", U2_PLUS_N);
    let o = run(&["discform", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["rank"], 5);
    assert_eq!(v["signature"], serde_json::json!([2, 3]));
    let mut orders: Vec<u64> = v["form"]["orders"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    orders.sort_unstable();
    assert_eq!(orders, [2, 2, 8]);
}

#[test]
fn discform_rejects_asymmetric_gram() {
    let p = temp_file("bad.json", r#"{"dim": 2, "gram": [[2, 1], [0, 2]]}"#);
    let o = run(&["discform", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn discform_rejects_unknown_fields() {
    let p = temp_file("extra.json", r#"{"dim": 1, "gram": [[2]], "name": "x"}"#);
    assert_eq!(run(&["discform", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn embed_check_lattice_file() {
    let p = temp_file("u2n-embed.json", U2_PLUS_N);
    let o = run(&["embed-check", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["embeds"], true);
}

#[test]
fn embed_check_form_needs_signature() {
    let p = temp_file("form.json", r#"{"orders": [2], "q": ["1/2"], "b": [["1/2"]]}"#);
    assert_eq!(run(&["embed-check", "--form", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn even_eight_families() {
    for (fam, code) in [("e", 0), ("a", 1), ("b", 0)] {
        let o = run(&["even-eight", "verify", fam, "--format", "json"]);
        assert_eq!(o.status.code(), Some(code), "family {fam}");
        let v = json(&o);
        assert_eq!(v["verdict"]["is_even_eight"], true, "family {fam}");
        assert_eq!(v["classes"].as_array().unwrap().len(), 8);
    }
    let o = run(&["even-eight", "verify", "a"]);
    assert!(stdout(&o).contains("DISCREPANCY san2-witness"));
}

#[test]
fn even_eight_unknown_family_is_usage_error() {
    assert_eq!(run(&["even-eight", "verify", "z"]).status.code(), Some(2));
}

#[test]
fn divisor_eval_sum() {
    let o = run(&["divisor", "eval", "e5 + E34"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("self-product 0"));
    assert!(text.contains("in S_Y true"));
}

#[test]
fn divisor_eval_parse_error() {
    assert_eq!(run(&["divisor", "eval", "L + + Q7"]).status.code(), Some(2));
}

#[test]
fn fibration_audit_exit_codes() {
    let ok = run(&["fibration", "audit", "--fibers", "6I2,I5*,I1", "--section", "--mw-order", "2", "--disc", "64"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["fibration", "audit", "--fibers", "I2,I10*,6I2", "--section", "--mw-order", "1", "--disc", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    let fixed = run(&["fibration", "audit", "--fibers", "6I1,I2,I10*", "--section", "--mw-order", "2", "--disc", "2"]);
    assert_eq!(fixed.status.code(), Some(0));
}

#[test]
fn selftest_is_clean() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pinned set matched"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["discform", "/nonexistent/lattice.json"]).status.code(), Some(2));
    assert_eq!(run(&["selftest", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [&["classify", "--format", "json"][..], &["orbits", "--format", "csv"], &["selftest", "--format", "json"]] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn json_output_round_trips() {
    for args in [
        &["classify", "--format", "json"][..],
        &["orbits", "--format", "json"],
        &["selftest", "--format", "json"],
        &["even-eight", "verify", "b", "--format", "json"],
    ] {
        let o = run(args);
        let v = json(&o);
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again.as_bytes(), &o.stdout[..], "{args:?}");
    }
}
