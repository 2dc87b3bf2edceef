use std::process::Command;

use prelogchow::cli::{run, Report, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use prelogchow::cubic3fold::{CheckStatus, ScenarioDoc, BUILTIN_SCENARIO};
use serde_json::json;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("prelogchow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_prelogchow")).args(args).output().unwrap()
}

#[test]
fn ring_reports_ranks_and_pairing() {
    let (code, out, _) = invoke(&["ring", "LC", "--degree", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Num^2: rank 2"), "{out}");
    assert!(out.contains("pairing with Num^1"), "{out}");

    let (code, out, _) = invoke(&["ring", "Y1", "--json"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ranks: Vec<u64> = doc["pieces"].as_array().unwrap().iter().map(|p| p["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 4, 8, 11, 8, 4, 1]);

    let (_, out, _) = invoke(&["ring", "S", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ranks: Vec<u64> = doc["pieces"].as_array().unwrap().iter().map(|p| p["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 2, 1]);
}

#[test]
fn ring_rejects_unknown_names_and_degrees() {
    let (code, _, err) = invoke(&["ring", "nope"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("nope"), "{err}");
    assert_eq!(invoke(&["ring", "LC", "--degree", "9"]).0, EXIT_USAGE);
}

#[test]
fn complex_ranks_over_q_and_mod_p() {
    let (code, out, _) = invoke(&["complex", "--ranks"]);
    assert_eq!(code, EXIT_OK);
    for line in [
        "delta   39 x 32, rank 22",
        "rho     32 x 39, rank 22",
        "coker delta: Z^17 + Z/2",
        "ker rho: Z^17",
        "M: 17 x 17, rank 6",
    ] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
    let (_, out2, _) = invoke(&["complex", "--char", "2"]);
    assert!(out2.contains("delta   39 x 32, rank 21"), "{out2}");
    let (_, out7, _) = invoke(&["complex", "--char", "7"]);
    assert!(out7.contains("delta   39 x 32, rank 22"), "{out7}");
    let (code, _, err) = invoke(&["complex", "--char", "4"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("not prime"));
}

#[test]
fn verify_writes_a_parseable_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = invoke(&["verify", "--json", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report.passed());
    assert_eq!(report.scenario_id, "cubic-threefold-product-degeneration");
    assert_eq!(report.summary.prelog_rank, Some(6));
    assert!(report.checks.iter().any(|c| c.status == CheckStatus::Info));
    let again: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn verify_only_selects_by_prefix() {
    let (code, out, _) = invoke(&["verify", "--only", "saturation"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 6, "{out}");
    assert!(lines.iter().all(|l| l.contains("saturation.")));
}

#[test]
fn wrong_expectation_gives_failure_exit() {
    let mut doc: ScenarioDoc = serde_json::from_str(BUILTIN_SCENARIO).unwrap();
    let e = doc.expectations.iter_mut().find(|e| e.id == "prelog.rank").expect("prelog.rank registered");
    e.expected = json!(7);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let (code, out, _) = invoke(&["--scenario", path.to_str().unwrap(), "verify", "--only", "prelog.rank"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("FAIL prelog.rank"), "{out}");
}

#[test]
fn bad_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(invoke(&["--scenario", missing.to_str().unwrap(), "report"]).0, EXIT_USAGE);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"id\": 3}").unwrap();
    assert_eq!(invoke(&["--scenario", garbage.to_str().unwrap(), "report"]).0, EXIT_USAGE);
    let unwritable = dir.path().join("no/such/dir/report.json");
    let (code, _, err) = invoke(&["verify", "--only", "saturation", "--json", unwritable.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("report.json"), "{err}");
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn report_lists_tables_and_registry() {
    let (code, out, _) = invoke(&["report"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("ranks of Num^d(Y_ijk)"));
    assert!(out.contains("saturation.index"));
}

#[test]
fn binary_exit_codes() {
    let ok = binary(&["verify", "--only", "saturation"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("6 checks, 0 failed"));

    let usage = binary(&["complex", "--char", "4"]);
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    assert!(!usage.stderr.is_empty());

    let help = binary(&["--help"]);
    assert_eq!(help.status.code(), Some(EXIT_OK));
    for sub in ["ring", "complex", "verify", "report"] {
        assert!(String::from_utf8_lossy(&help.stdout).contains(sub));
    }

    let mut doc: ScenarioDoc = serde_json::from_str(BUILTIN_SCENARIO).unwrap();
    doc.expectations.retain(|e| e.id.starts_with("saturation"));
    doc.expectations[0].expected = json!(-1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let failed = binary(&["--scenario", path.to_str().unwrap(), "verify"]);
    assert_eq!(failed.status.code(), Some(EXIT_FAILED));
}
