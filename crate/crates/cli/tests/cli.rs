//! End-to-end tests of the command-line surface: exit codes, wire formats,
//! and byte-determinism across runs and thread counts.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wittforge"))
}

fn write_fixture(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("wittforge-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const QUAD_CATALOG: &str = r#"{
  "schema": 1,
  "field": "Q",
  "vset": {"kind": "all_primes_except", "S": [2]},
  "entries": [
    {"id": "a", "quadratic": ["1", "1", "1", "1", "1"]},
    {"id": "b", "quadratic": ["3", "3", "3", "3", "3"]},
    {"id": "c", "quadratic": ["1", "1", "1", "1", "-1"]}
  ]
}"#;

#[test]
fn classify_and_exit_codes() {
    let path = write_fixture("quad.json", QUAD_CATALOG);
    let out = bin()
        .args(["classify", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let classes = v["classification"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert_eq!(v["classification"]["bound"], 16);
    assert_eq!(v["classification"]["bound_satisfied"], true);
}

#[test]
fn classify_deterministic_across_jobs() {
    let path = write_fixture("quad2.json", QUAD_CATALOG);
    let mut outputs = vec![];
    for jobs in ["1", "4"] {
        let out = bin()
            .args(["--jobs", jobs, "classify", "--catalog"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        outputs.push(out.stdout);
    }
    assert_eq!(
        outputs[0], outputs[1],
        "output must be byte-identical across thread counts"
    );
    // and across repeated runs
    let again = bin()
        .args(["--jobs", "4", "classify", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(outputs[1], again.stdout);
}

#[test]
fn profile_reports_bad_locus() {
    let path = write_fixture(
        "bad.json",
        r#"{
          "schema": 1,
          "field": "Q",
          "vset": {"kind": "all_primes_except", "S": [2]},
          "entries": [{"id": "bad", "quadratic": ["1", "1", "3", "3", "3"]}]
        }"#,
    );
    let out = bin()
        .args(["profile", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let report = &v["reports"][0];
    assert_eq!(report["bad_locus"][0]["prime"], 3);
}

#[test]
fn residue_of_symbol_and_form() {
    let out = bin()
        .args([
            "residue",
            "--field",
            "Q(t)",
            "--place",
            r#"{"poly":"t"}"#,
            "--symbol",
            r#"[["5","7","t"]]"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["residue"]["degree"], 2);
    assert_eq!(v["residue"]["symbols"][0][0], "5");
    assert_eq!(v["residue_field"], "Q");

    let out = bin()
        .args([
            "residue",
            "--field",
            "Q",
            "--place",
            r#"{"prime":3}"#,
            "--form",
            r#"["3","6","1"]"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["split"]["first"].as_array().unwrap().len(), 1);
    assert_eq!(v["split"]["second"].as_array().unwrap().len(), 2);
}

#[test]
fn undecided_exit_code() {
    // a quaternion class over Q(t) ramified at a cubic place: its residue
    // lives over a cubic number field, which no decider covers
    let args = [
        "symbol",
        "--field",
        "Q(t)",
        "--symbol",
        r#"[["t^3+t+1","-1"]]"#,
    ];
    let out = bin().args(args).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["trivial"], "undecided");
    let out = bin().arg("--allow-undecided").args(args).output().unwrap();
    assert!(out.status.success());
    // the degree-4 spinor-norm question over Q(t) falls back to the Witt
    // decider and is answered
    let out = bin()
        .args([
            "spinor-norm",
            "--field",
            "Q(t)",
            "--pfister",
            r#"["t","t+1","t+2"]"#,
            "--element",
            "t+3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["member"], "false");
}

#[test]
fn data_error_exit_code() {
    let path = write_fixture("broken.json", "{ not json");
    let out = bin()
        .args(["classify", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // usage errors are clap's exit 2
    let out = bin().args(["classify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn g2_genus_two_fibers() {
    let path = write_fixture(
        "oct.json",
        r#"{
          "schema": 1,
          "field": "Q(t)",
          "vset": {"kind": "geometric_affine"},
          "entries": [
            {"id": "m", "octonion": ["-1", "-1", "t"]},
            {"id": "n", "octonion": ["2", "3", "t"]}
          ]
        }"#,
    );
    let out = bin()
        .args(["g2-genus", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["obstruction"]["fibers"].as_array().unwrap().len(), 2);
}

#[test]
fn hermitian_eq_pairs() {
    let path = write_fixture(
        "herm.json",
        r#"{
          "schema": 1,
          "field": "Q",
          "entries": [
            {"id": "h1", "hermitian": {"delta": "-1", "entries": ["1"]}},
            {"id": "h5", "hermitian": {"delta": "-1", "entries": ["5"]}},
            {"id": "h3", "hermitian": {"delta": "-1", "entries": ["3"]}}
          ]
        }"#,
    );
    let out = bin()
        .args(["hermitian-eq", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    let find = |a: &str, b: &str| -> bool {
        pairs
            .iter()
            .find(|p| p["left"] == a && p["right"] == b)
            .unwrap()["equivalent"]
            .as_bool()
            .unwrap()
    };
    assert!(find("h1", "h5"));
    assert!(!find("h1", "h3"));
}

#[test]
fn table_override_env() {
    // a table file with a deliberately different bound
    let table = r#"{
      "version": 1,
      "entries": [{
        "field": "Q",
        "vset": {"kind": "all_primes_except", "S": [2]},
        "pic2_order": 1,
        "pic2_provenance": "test",
        "unramified": [
          {"i": 1, "order": 8, "provenance": "test"},
          {"i": 2, "order": 2, "provenance": "test"},
          {"i": 3, "order": 2, "provenance": "test"}
        ],
        "tail_order": 2,
        "tail_provenance": "test",
        "kernel": [
          {"i": 1, "order": 1, "provenance": "test"},
          {"i": 2, "order": 2, "provenance": "test"},
          {"i": 3, "order": 2, "provenance": "test"}
        ],
        "kernel_tail_order": 2
      }]
    }"#;
    let path = write_fixture("table.json", table);
    let out = bin()
        .env("WITTFORGE_TABLE_PATH", &path)
        .args([
            "bound",
            "--field",
            "Q",
            "--vset",
            r#"{"kind":"all_primes_except","S":[2]}"#,
            "--n",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], 32);
}

#[test]
fn pretty_output_renders() {
    let out = bin()
        .args([
            "--pretty",
            "bound",
            "--field",
            "Q",
            "--vset",
            r#"{"kind":"all_primes_except","S":[2]}"#,
            "--n",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("== bound =="));
    assert!(text.contains("bound: 16"));
}

#[test]
fn fiber_command() {
    let path = write_fixture(
        "fiber.json",
        r#"{
          "schema": 1,
          "field": "Q",
          "vset": {"kind": "all_primes_except", "S": [2]},
          "entries": [
            {"id": "s5", "quadratic": ["1", "1", "1", "1", "1"]},
            {"id": "s1", "quadratic": ["1", "1", "1", "-1", "-1"]},
            {"id": "sm3", "quadratic": ["1", "-1", "-1", "-1", "-1"]}
          ]
        }"#,
    );
    let out = bin()
        .args(["fiber", "--base", "s5", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classification"]["class_count"], 3);
    assert_eq!(v["classification"]["bound"], 4);
}

#[test]
fn classify_exhaustive_desk_catalog() {
    // all 5-dimensional forms with entries in {+-1, +-2}, deduplicated by
    // sorted entry multiset: 56 members
    let vals = [1i64, -1, 2, -2];
    let mut seen = std::collections::BTreeSet::new();
    let mut entries = vec![];
    let mut idx = [0usize; 5];
    loop {
        let mut e: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
        e.sort();
        if seen.insert(e.clone()) {
            let id = format!("f{:02}", seen.len());
            let strs: Vec<String> = e.iter().map(|v| format!("\"{v}\"")).collect();
            entries.push(format!(
                "{{\"id\": \"{id}\", \"quadratic\": [{}]}}",
                strs.join(", ")
            ));
        }
        let mut k = 0;
        loop {
            if k == 5 {
                break;
            }
            idx[k] += 1;
            if idx[k] < 4 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == 5 {
            break;
        }
    }
    assert_eq!(seen.len(), 56);
    let doc = format!(
        "{{\"schema\": 1, \"field\": \"Q\", \"vset\": {{\"kind\": \"all_primes_except\", \"S\": [2]}}, \"entries\": [{}]}}",
        entries.join(", ")
    );
    let path = write_fixture("desk56.json", &doc);
    let out = bin()
        .args(["classify", "--catalog"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let count = v["classification"]["class_count"].as_u64().unwrap();
    assert!(count <= 16);
    assert_eq!(v["classification"]["bound_satisfied"], true);
    // the certificate trail covers every member with one label per stage
    let trail = v["classification"]["trail"].as_object().unwrap();
    assert_eq!(trail.len(), 56);
    for labels in trail.values() {
        assert_eq!(labels.as_array().unwrap().len(), 4); // pic2 + 3 stages
    }
}
