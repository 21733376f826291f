//! End-to-end tests of the binary: exit codes, JSON reports, determinism.

use std::path::Path;
use std::process::{Command, Output};

use diastasis::corpus::{write_potential_file, PotentialSpec};

fn run(args: &[&str]) -> Output {
    run_in(args, None)
}

fn run_in(args: &[&str], env_order: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_diastasis"));
    cmd.args(args).env_remove("DIASTASIS_ORDER");
    if let Some(value) = env_order {
        cmd.env("DIASTASIS_ORDER", value);
    }
    cmd.output().expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn exit_codes_separate_outcome_classes() {
    assert_eq!(code(&run(&["analyze", "fs:2", "--order", "3"])), 0);
    assert_eq!(code(&run(&["analyze", "perturbed_quartic", "--order", "3"])), 1);
    assert_eq!(code(&run(&["analyze", "fs:0", "--order", "3"])), 2);
    assert_eq!(code(&run(&["analyze", "no/such/file.json"])), 2);
    assert_eq!(code(&run(&["nonsense-subcommand"])), 2);

    assert_eq!(code(&run(&["ricci", "flat:2", "--order", "3"])), 0);
    assert_eq!(code(&run(&["ricci", "fs:1", "--order", "3"])), 1);
    assert_eq!(code(&run(&["einstein", "fs:1", "--order", "3"])), 0);
    assert_eq!(code(&run(&["einstein", "perturbed_quartic", "--order", "3"])), 1);

    assert_eq!(code(&run(&["lift", "fs:1", "--order", "3"])), 0);
    assert_eq!(code(&run(&["lift", "fs:1", "--denominator", "2", "--order", "3"])), 1);
    assert_eq!(
        code(&run(&["homothety", "fs:1", "--weight", "1/2", "--factor", "2", "--order", "3"])),
        0
    );

    assert_eq!(code(&run(&["bridge", "fs:1", "--order", "3"])), 0);
    assert_eq!(code(&run(&["bridge", "hyperbolic:1", "--order", "3"])), 1);
    assert_eq!(code(&run(&["flatness", "fs:2", "--order", "4"])), 0);
    assert_eq!(code(&run(&["flatness", "hyperbolic:1", "--order", "4"])), 1);
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args = ["analyze", "fs:2", "--order", "4", "--json", "-"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let args = ["epsilon", "fs:1", "--epsilon", "1/10", "--order", "3", "--json", "-"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_report_structure() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let out = run(&[
        "analyze",
        "perturbed_quartic",
        "--order",
        "3",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(value["schema_version"], 1);
    assert_eq!(value["command"], "analyze");
    assert_eq!(value["parameters"]["order"], "3");
    assert!(value["input_hash"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
    assert_eq!(value["result"]["status"], "not_induced");
    assert_eq!(value["result"]["witness_value"], "-1/12");
    assert_eq!(value["result"]["witness"][0]["monomial"], serde_json::json!([3]));
    assert!(value["conventions"]["monomial_order"]
        .as_str()
        .unwrap()
        .contains("total degree"));
    // nothing environment- or time-dependent may leak into the report
    let text = serde_json::to_string(&value).unwrap();
    assert!(!text.contains("duration"));
    assert!(!text.contains("timestamp"));
}

#[test]
fn order_resolution_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fs1.json");
    let fs = PotentialSpec::parse("fs:1").unwrap().realize(3).unwrap();
    write_potential_file(Path::new(&path), &fs).unwrap();
    let path_str = path.to_str().unwrap();

    // stored window of the file wins over the default
    let out = run(&["analyze", path_str, "--json", "-"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["parameters"]["order"], "3");

    // environment variable beats the stored window
    let out = run_in(&["analyze", path_str, "--json", "-"], Some("2"));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["parameters"]["order"], "2");

    // explicit flag beats the environment
    let out = run_in(&["analyze", path_str, "--order", "1", "--json", "-"], Some("2"));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["parameters"]["order"], "1");

    // builtin without any override uses the default order 4
    let out = run(&["analyze", "fs:1", "--json", "-"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["parameters"]["order"], "4");

    // asking beyond the stored window is refused
    let out = run(&["analyze", path_str, "--order", "9"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn file_input_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quartic.json");
    let pq = PotentialSpec::PerturbedQuartic.realize(4).unwrap();
    write_potential_file(Path::new(&path), &pq).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("not projectively induced"), "{text}");
}

#[test]
fn blocks_and_multiple_report_payloads() {
    let out = run(&["blocks", "fs:1", "--max-block", "3", "--order", "3", "--json", "-"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["result"]["blocks"].as_array().unwrap().len(), 3);

    let out = run(&["multiple", "fs:1:1/2", "--max-multiple", "4", "--order", "4", "--json", "-"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["result"]["minimal"], 2);
    assert_eq!(value["result"]["attempts"][0]["status"], "not_induced");

    let out = run(&["multiple", "fs:1:1/2", "--max-multiple", "1", "--order", "4"]);
    assert_eq!(code(&out), 1);
}
