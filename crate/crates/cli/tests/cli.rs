use std::process::{Command, Output};

use serde_json::Value;

fn nearvec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearvec"))
        .args(args)
        .env_remove("NEARVEC_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = nearvec(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn group_tables() {
    let v = json(&["group", "--p", "5", "--n", "2", "--format", "json"]);
    assert_eq!(v["G"], serde_json::json!([1, 7, 13, 19]));
    assert_eq!(v["table"][1], serde_json::json!([7, 1, 19, 13]));
    let o = nearvec(&["group", "--p", "2", "--n", "1"]);
    assert!(stdout(&o).contains("trivial"));
    assert_eq!(nearvec(&["group", "--p", "4", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn table_both_methods() {
    let o = nearvec(&["table", "--p", "5", "--n", "2", "--m-range", "4..8", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("all cells MATCH"));
    assert!(!text.contains("MISMATCH"));

    let v = json(&["table", "--p", "5", "--n", "2", "--m-range", "4..8", "--method", "both", "--format", "json"]);
    let totals: Vec<u64> = v.as_array().unwrap().iter().map(|d| d["total"].as_u64().unwrap()).collect();
    assert_eq!(totals, [11, 14, 24, 30, 45]);
    assert_eq!(v[2]["per_N"]["4"]["T_N"], 4);
    assert_eq!(v[2]["per_N"]["4"]["match"], true);
    assert!(v[0]["classes"].is_null());

    let one = json(&["table", "--p", "7", "--n", "1", "--m-range", "1..1", "--format", "json"]);
    assert_eq!(one[0]["total"], 1);
}

#[test]
fn table_csv_rows() {
    let o = nearvec(&["table", "--p", "3", "--n", "3", "--m-range", "4", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,n,m,N,t_N,T_N,method");
    assert!(lines.contains(&"3,3,4,2,9,5,formula"));
    assert!(lines.contains(&"3,3,4,total,20,10,formula"));
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        &["table", "--p", "3", "--n", "3", "--m-range", "1..30", "--format", "json"][..],
        &["classes", "--p", "5", "--n", "2", "--m", "4", "--format", "json"][..],
        &["group", "--p", "2", "--n", "6", "--format", "json"][..],
        &["witness", "--p", "3", "--n", "3", "--s1", "1,1,5,5", "--s2", "1,1,7,7", "--format", "json"][..],
    ] {
        let text = stdout(&nearvec(args));
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let mut again = serde_json::to_string_pretty(&parsed).unwrap();
        again.push('\n');
        assert_eq!(again, text, "{args:?}");
    }
    // large totals survive as exact integers
    let text = stdout(&nearvec(&["table", "--p", "2", "--n", "7", "--m-range", "400", "--format", "json"]));
    let parsed: Value = serde_json::from_str(&text).unwrap();
    let total = parsed[0]["total"].to_string();
    assert!(total.len() > 20 && total.bytes().all(|b| b.is_ascii_digit()), "{total}");
}

#[test]
fn witness_outputs() {
    let o = nearvec(&["witness", "--p", "3", "--n", "3", "--s1", "1,1,5,5", "--s2", "1,1,7,7", "--verify", "sampled"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("q = 5\n"));
    assert!(text.contains("sigma = 3 4 1 2\n"));
    assert!(text.contains("theta(x) = (x3, x4, x1^9, x2^9)"));
    assert!(text.contains("VERIFIED"));

    let o = nearvec(&["witness", "--p", "3", "--n", "3", "--s1", "1,5", "--s2", "1,17"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NOT-ISOMORPHIC\n");

    let o = nearvec(&["witness", "--p", "3", "--n", "3", "--s1", "1,5,7", "--s2", "1,5,7"]);
    assert!(stdout(&o).starts_with("q = 1\nsigma = 1 2 3\n"));
}

#[test]
fn sequence_input_handling() {
    let o = nearvec(&["witness", "--p", "3", "--n", "3", "--s1", "5,1,15", "--s2", "1,5,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("normalized to 1,5,5"));

    for bad in ["1,2", "1,x", "5,5", ""] {
        let o = nearvec(&["witness", "--p", "3", "--n", "3", "--s1", bad, "--s2", "1,5"]);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
    }
    let o = nearvec(&["witness", "--p", "3", "--n", "3", "--s1", "1,5", "--s2", "1,5,5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classes_listing() {
    let v = json(&["classes", "--p", "3", "--n", "3", "--m", "2", "--format", "json"]);
    assert_eq!(v["total"], 3);
    let orbits: Vec<&Value> = v["classes"].as_array().unwrap().iter().map(|c| &c["orbit"]).collect();
    assert_eq!(orbits[1], &serde_json::json!([[1, 5], [1, 7]]));
    assert_eq!(json(&["classes", "--p", "2", "--n", "1", "--m", "3", "--format", "json"])["total"], 1);
    assert_eq!(json(&["classes", "--p", "3", "--n", "3", "--m", "4", "--format", "json"])["total"], 10);
    let csv = stdout(&nearvec(&["classes", "--p", "3", "--n", "3", "--m", "2", "--format", "csv"]));
    assert!(csv.contains("3,3,2,2,2,\"1,5\",\"1,5;1,7\""));
}

#[test]
fn axioms_command() {
    let o = nearvec(&["axioms", "--p", "3", "--n", "2", "--seq", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("NEAR-VECTOR SPACE\n"));
    assert_eq!(nearvec(&["axioms", "--p", "7", "--n", "1", "--seq", "1,2"]).status.code(), Some(2));
    assert_eq!(nearvec(&["axioms", "--p", "2", "--n", "2", "--m", "3", "--seq", "1,1"]).status.code(), Some(2));
}

#[test]
fn budgets_and_exit_codes() {
    let o = Command::new(env!("CARGO_BIN_EXE_nearvec"))
        .args(["classes", "--p", "3", "--n", "3", "--m", "4"])
        .env("NEARVEC_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_nearvec"))
        .args(["witness", "--p", "3", "--n", "3", "--s1", "1,1,5,5", "--s2", "1,1,7,7", "--verify", "exhaustive"])
        .env("NEARVEC_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_nearvec"))
        .args(["classes", "--p", "3", "--n", "3", "--m", "2"])
        .env("NEARVEC_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    // 113 - 1 has 48 units, |G| = 48; m = 8 is far past the default budget
    assert_eq!(nearvec(&["table", "--p", "113", "--n", "1", "--m-range", "8", "--method", "brute"]).status.code(), Some(3));
    assert_eq!(nearvec(&["table", "--p", "3", "--n", "3", "--m-range", "5..2"]).status.code(), Some(2));
    assert_eq!(nearvec(&["group", "--p", "3", "--n", "3", "--format", "csv"]).status.code(), Some(2));
}
