use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superchar"))
        .args(args)
        .env_remove("SUPERCHAR_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("superchar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn table(args: &[&str]) -> Value {
    let o = run(&[&["table"], args].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn uu3_table_is_11_by_11() {
    let t = table(&["--family", "UU", "--n", "3", "--p", "3", "--k", "2"]);
    let rows = t["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(t["superclasses"].as_array().unwrap().len(), 11);
    assert!(rows.iter().all(|r| r["values"].as_array().unwrap().len() == 11));
    let mut degrees: Vec<u64> = rows.iter().map(|r| r["degree"].as_u64().unwrap()).collect();
    degrees.sort();
    assert_eq!(degrees, [1, 1, 1, 1, 1, 1, 1, 1, 1, 9, 9]);
    assert_eq!(t["spec"]["family"], "UU");
}

#[test]
fn ut2_table_is_abelian() {
    let t = table(&["--family", "UT", "--n", "2", "--p", "3"]);
    let rows = t["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["degree"] == 1 && r["n_lambda"] == 1));
    let sizes: Vec<u64> = t["superclasses"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 1, 1]);
}

#[test]
fn csv_has_header_and_one_line_per_row() {
    let o = run(&["table", "--family", "UT", "--n", "2", "--p", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("lambda,n_lambda,degree,"));
    assert_eq!(lines[1], "[0],1,1,1+0·z,1+0·z,1+0·z");
}

#[test]
fn usp_with_odd_n_is_a_usage_error() {
    let o = run(&["table", "--family", "USp", "--n", "3", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));
}

#[test]
fn bad_flags_exit_1() {
    assert_eq!(run(&["table", "--family", "UT", "--n", "2", "--p", "3", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["table", "--family", "XX", "--n", "2", "--p", "3"]).status.code(), Some(1));
    assert_eq!(run(&["table", "--n", "2", "--p", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["table", "--family", "UT", "--n", "2", "--p", "3", "--format", "csv", "-o", "x.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn log_rejected_above_p() {
    let o = run(&["table", "--family", "UO", "--n", "5", "--p", "3", "--springer", "log"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn guard_exit_3_and_force_flag_exists() {
    let o = run(&["table", "--family", "UT", "--n", "6", "--p", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
}

#[test]
fn unwritable_output_exit_4() {
    let o = run(&["table", "--family", "UT", "--n", "2", "--p", "3", "-o", "/nonexistent-dir/t.json"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_uo4_all_pass() {
    let o = run(&["verify", "--family", "UO", "--n", "4", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("seed 0x5eed"));
    assert!(!text.contains("FAIL"));
    for check in ["structure:", "axioms:", "induction:", "intersection:", "left-multiplication:", "theta-independence:"]
    {
        assert!(text.contains(check), "missing {check}");
    }
}

#[test]
fn injected_fault_names_failed_axiom() {
    let o = run(&["verify", "--family", "UO", "--n", "4", "--p", "3", "--check", "axioms", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL axioms: distinct supercharacters are orthogonal"));
    let o = run(&["table", "--family", "UT", "--n", "2", "--p", "3", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn springer_independence_passes() {
    let o = run(&["verify", "--check", "springer-independence", "--family", "UU", "--n", "3", "--p", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS springer-independence"));
}

#[test]
fn spec_file_and_poset_file() {
    let poset = scratch("block.poset");
    std::fs::write(&poset, "4\n1 2\n3 4\n").unwrap();
    let spec = scratch("block.json");
    std::fs::write(&spec, r#"{"family": "UO", "n": 4, "p": 3, "poset": "block.poset"}"#).unwrap();
    let t = table(&["--spec", spec.to_str().unwrap()]);
    assert_eq!(t["rows"].as_array().unwrap().len(), 3);
    assert_eq!(t["spec"]["poset"], serde_json::json!([[1, 2], [3, 4]]));
}

#[test]
fn unitary_check_small_n() {
    for (n, size) in [("1", 1), ("2", 3), ("3", 11)] {
        let o = run(&["unitary-check", "--n", n, "--p", "3"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.contains(&format!("PASS closed-form values: {size}×{size} pairs")), "{text}");
        if n == "3" {
            assert!(text.contains("1⌢3  self-arc       9     81  DIFFERS"), "{text}");
        }
    }
}

#[test]
fn count_partitions_matches_orbits() {
    let o = run(&["count-partitions", "--n", "3", "--p", "3", "--compare"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["partitions"], 11);
    assert_eq!(v["superclasses"], 11);
}

#[test]
fn orbit_dump_lines() {
    let o = run(&["orbits", "--family", "UU", "--n", "3", "--p", "3", "--side", "dual"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines.iter().map(|l| l["size"].as_u64().unwrap()).sum::<u64>(), 27);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["table", "--family", "USp", "--n", "4", "--p", "3"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    let c = Command::new(env!("CARGO_BIN_EXE_superchar")).args(args).env("SUPERCHAR_THREADS", "2").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}
