use std::path::PathBuf;
use std::process::{Command, Output};

use jlab::maltsev::JonssonSystem;
use jlab::FiniteAlgebra;

fn jlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jlab"))
        .args(args)
        .env_remove("JLAB_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const PROD_CHAIN: &[&str] = &[
    "chain", "--gen", "lattice-prod:2x2", "--alpha", "top", "--beta", "proj1", "--gamma", "proj2", "--elements", "0,1,3,2,2",
];

#[test]
fn missing_input_is_usage_error() {
    let o = jlab(&["terms"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("--gen"));
}

#[test]
fn both_inputs_is_usage_error() {
    let path = temp("a.json", &jlab::catalog::lattice_chain(2).to_json());
    let o = jlab(&["congruences", "--gen", "z2", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_generator_and_bad_file() {
    assert_eq!(jlab(&["congruences", "--gen", "nonsense:7"]).status.code(), Some(2));
    let path = temp("broken.json", "{ \"size\": ");
    let o = jlab(&["congruences", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("jlab:"));
}

#[test]
fn congruences_listing() {
    let o = jlab(&["congruences", "--gen", "lattice-chain:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0: 0 0 0  (top)\n1: 0 0 1\n2: 0 1 1\n3: 0 1 2  (bottom)\n");
}

#[test]
fn algebra_file_matches_generator() {
    let path = temp("prod.json", &jlab::catalog::lattice_prod(2, 2).to_json());
    let a = jlab(&["congruences", "--algebra", path.to_str().unwrap()]);
    let b = jlab(&["congruences", "--gen", "lattice-prod:2x2"]);
    let strip = |s: String| s.lines().map(|l| l.split("  (").next().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(strip(stdout(&a)), strip(stdout(&b)));
}

#[test]
fn terms_found_and_not_found() {
    let o = jlab(&["terms", "--gen", "dualdisc3"]);
    assert_eq!(o.status.code(), Some(0));
    let sys = JonssonSystem::from_json(&stdout(&o)).unwrap();
    assert_eq!(sys.flavor().n(), 2);
    let o = jlab(&["terms", "--gen", "z2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
}

#[test]
fn closure_cap_is_inconclusive() {
    let o = Command::new(env!("CARGO_BIN_EXE_jlab"))
        .args(["terms", "--gen", "lattice-prod:2x2", "--n", "4"])
        .env("JLAB_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_jlab"))
        .args(["terms", "--gen", "z2"])
        .env("JLAB_CAP", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chain_json_is_valid_and_deterministic() {
    let mut args = PROD_CHAIN.to_vec();
    args.extend(["--construction", "thm22", "--format", "json"]);
    let a = jlab(&args);
    let b = jlab(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["start"], 0);
    assert_eq!(v["end"], 2);
    assert!(v["factor_count"].as_u64().unwrap() <= 8);
    assert!(v["steps"].as_array().unwrap().iter().all(|s| s["ok"] == true));
}

#[test]
fn every_construction_runs() {
    for (construction, extra) in [
        ("thm22", vec![]),
        ("thm43", vec!["--n", "6"]),
        ("thm44", vec!["--n", "4"]),
        ("full-reduction", vec![]),
        ("full-reduction", vec!["--paper-reading", "strict"]),
    ] {
        let mut args = PROD_CHAIN.to_vec();
        args.extend(["--construction", construction]);
        args.extend(extra);
        let o = jlab(&args);
        assert_eq!(o.status.code(), Some(0), "{construction}: {}", stderr(&o));
        assert!(stdout(&o).contains("steps: ok"));
    }
    let o = jlab(&[
        "chain", "--gen", "klein4", "--alpha", "top", "--beta", "1", "--gamma", "2", "--elements", "0,1,3,2,0",
        "--construction", "thm23",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn chain_premise_and_missing_n() {
    let o = jlab(&[
        "chain", "--gen", "lattice-prod:2x2", "--alpha", "top", "--beta", "proj1", "--gamma", "proj2", "--elements",
        "0,3,3,3,3", "--construction", "thm22",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not β-related"));
    let mut args = PROD_CHAIN.to_vec();
    args.extend(["--construction", "thm43"]);
    assert_eq!(jlab(&args).status.code(), Some(2));
}

#[test]
fn rejects_non_congruence_literal() {
    let o = jlab(&["check", "--gen", "lattice-chain:3", "--alpha", "0 1 0", "--beta", "1", "--gamma", "2", "--m", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a congruence"));
}

#[test]
fn corrupted_system_names_the_equation() {
    let found = jlab(&["terms", "--gen", "lattice-prod:2x2", "--n", "4"]);
    assert_eq!(found.status.code(), Some(0));
    let good = temp("good.json", &stdout(&found));
    let mut args = PROD_CHAIN.to_vec();
    args.extend(["--construction", "thm22", "--system", good.to_str().unwrap()]);
    assert_eq!(jlab(&args).status.code(), Some(0));

    let mut sys: serde_json::Value = serde_json::from_str(&stdout(&found)).unwrap();
    sys["terms"][0] = serde_json::Value::String("x".into());
    let bad = temp("bad.json", &sys.to_string());
    let mut args = PROD_CHAIN.to_vec();
    args.extend(["--construction", "thm22", "--system", bad.to_str().unwrap()]);
    let o = jlab(&args);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("fails at"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn check_holds_and_fails() {
    let base = ["check", "--gen", "lattice-chain:3", "--alpha", "top", "--beta", "1", "--gamma", "2", "--m", "4"];
    let mut ok = base.to_vec();
    ok.extend(["--k", "8"]);
    let o = jlab(&ok);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "holds"));
    let mut bad = base.to_vec();
    bad.extend(["--k", "1"]);
    let o = jlab(&bad);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).starts_with("fails: ("));
}

#[test]
fn spectrum_csv_and_json_agree() {
    let csv = jlab(&["spectrum", "--gen", "lattice-chain:3", "--m", "2,4"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,gamma,m,minimal_k,witness_pair"));
    assert_eq!(lines.count(), 4 * 4 * 4 * 2);

    let json = jlab(&["spectrum", "--gen", "lattice-chain:3", "--m", "2,4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 128);
    assert_eq!(csv.stdout, jlab(&["spectrum", "--gen", "lattice-chain:3", "--m", "2,4"]).stdout);
}

#[test]
fn help_goes_to_stdout() {
    let o = jlab(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("spectrum"));
}

#[test]
fn algebra_json_from_cli_input_round_trips() {
    let alg = jlab::catalog::dual_discriminator(3);
    let back = FiniteAlgebra::from_json(&alg.to_json()).unwrap();
    assert_eq!(back, alg);
}
