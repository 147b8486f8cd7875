use std::path::PathBuf;

use latori::catalog::{catalog_get, list};
use latori::cli::{run_with, EXIT_INPUT, EXIT_OK, EXIT_UNDETERMINED};
use latori::format::LatticeFile;
use latori::isomorphism::{lattices_isomorphic, Isomorphism};
use latori::rationality_verdict;
use latori::classify::SearchOptions;
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("latori").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{}", err);
    serde_json::from_str(&out).unwrap()
}

#[test]
fn swap_file_is_rational_with_permutation_certificate() {
    let doc = json(&["classify", "--input", &data("weil.json"), "--format", "json"]);
    assert_eq!(doc["report"]["level"], "Rational");
    let perm = &doc["verdicts"]["permutation"];
    assert_eq!(perm["status"], "Yes");
    assert_eq!(perm["certificate"]["kind"], "permutation");
}

#[test]
fn norm_one_c2_is_stably_rational_with_rank_one_f() {
    let doc = json(&["classify", "--catalog", "norm_one_C2", "--format", "json"]);
    assert_eq!(doc["report"]["level"], "StablyRational");
    let facts = doc["report"]["justification"].as_array().unwrap();
    let res = facts.iter().find(|f| f["type"] == "resolution").unwrap();
    assert_eq!(res["quotient_rank"], 1);
    assert_eq!(res["verified"], true);
}

#[test]
fn norm_one_v4_resolves_and_is_not_stably_rational() {
    let doc = json(&["resolve", "--catalog", "norm_one_V4", "--format", "json"]);
    assert_eq!(doc["verified"], true);

    let doc = json(&["classify", "--catalog", "norm_one_V4", "--format", "json"]);
    assert_eq!(doc["report"]["level"], "NotStablyRational");
    let obstructions: Vec<&Value> =
        doc["report"]["justification"].as_array().unwrap().iter().filter(|f| f["type"] == "cohomology").collect();
    assert_eq!(obstructions.len(), 1);
    assert_eq!(obstructions[0]["value"]["text"], "Z/2");
    assert_eq!(obstructions[0]["subgroup"].as_array().unwrap().len(), 4);
}

#[test]
fn text_output() {
    let (code, out, _) = run(&["cohomology", "--catalog", "norm_one_C2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("H^1(H, M)"));
    assert!(out.contains("Z/2"));
    let (code, out, _) = run(&["resolve", "--catalog", "weil_restriction_C2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verified: true"));
}

#[test]
fn validate() {
    let (code, out, _) = run(&["validate", "--input", &data("weil.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("ok: weil"));

    let (code, _, err) = run(&["validate", "--input", &data("not_unimodular.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("generators[0].matrix"), "{}", err);

    let (code, _, err) = run(&["validate", "--input", &data("infinite.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cap"), "{}", err);

    let (code, _, err) = run(&["validate", "--input", &data("missing.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("missing.json"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["classify"]).0, EXIT_INPUT);
    assert_eq!(run(&["classify", "--catalog", "nope"]).0, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(run(&["classify", "--catalog", "split_1", "--input", &data("weil.json")]).0, EXIT_INPUT);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn strict_exit() {
    let args = ["classify", "--input", &data("s3_rank2.json"), "--strict-exit"];
    let (code, out, _) = run(&args);
    assert_eq!(code, EXIT_UNDETERMINED);
    assert!(out.contains("rationality: Undetermined"));
    assert_eq!(run(&args[..3]).0, EXIT_OK);
    assert_eq!(run(&["classify", "--catalog", "split_1", "--strict-exit"]).0, EXIT_OK);
}

#[test]
fn catalog_commands() {
    let doc = json(&["catalog", "list", "--format", "json"]);
    assert_eq!(doc.as_array().unwrap().len(), 5);
    let doc = json(&["catalog", "show", "norm_one_V4", "--format", "json"]);
    assert_eq!(doc["lattice"]["rank"], 3);
    assert_eq!(doc["expected_level"], "NotStablyRational");
}

#[test]
fn catalog_round_trip_is_isomorphic() {
    for d in list() {
        let text = LatticeFile::from_lattice(d.name, &d.character_lattice).to_json();
        let back = LatticeFile::parse(text.as_bytes()).unwrap().to_lattice().unwrap();
        match lattices_isomorphic(&d.character_lattice, &back, 1).unwrap() {
            Isomorphism::Yes(x) => {
                for (a, b) in d.character_lattice.actions().iter().zip(back.actions()) {
                    assert_eq!(&x * a, b * &x, "{}", d.name);
                }
            }
            other => panic!("{}: {:?}", d.name, other),
        }
    }
}

#[test]
fn expected_reports_reproduce() {
    for d in list() {
        let report = rationality_verdict(&d.character_lattice, &SearchOptions::default()).unwrap();
        assert!(d.expected_report.matches(&report), "{}: got {}", d.name, report.level);
    }
    assert!(catalog_get("sign_rank1").is_ok());
}

#[test]
fn json_is_deterministic_and_matches_golden() {
    for d in list() {
        let args = ["classify", "--catalog", d.name, "--format", "json"];
        let first = run(&args).1;
        let second = run(&args).1;
        assert_eq!(first, second, "{}", d.name);
        let golden: PathBuf =
            [env!("CARGO_MANIFEST_DIR"), "tests", "golden", &format!("{}.json", d.name)].iter().collect();
        assert_eq!(first, std::fs::read_to_string(golden).unwrap(), "{}", d.name);
    }
}
