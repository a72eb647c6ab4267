mod common;

use nfu_core::cli::{run, SCHEMAS};

fn nfu(args: &[&str]) -> nfu_core::cli::Outcome {
    run(std::iter::once("nfu").chain(args.iter().copied()))
}

#[test]
fn every_fixture_invocation_succeeds() {
    for args in common::cli_invocations() {
        let o = run(std::iter::once("nfu".to_string()).chain(args.clone()));
        assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn russell_prints_a_certificate() {
    let o = nfu(&["stratify", "not (x in x)"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["stratified"], false);
    assert_eq!(v["cycle"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nfu(&["set", "bogus"]).code, 2);
    assert_eq!(nfu(&["stratify", "x in"]).code, 2);
    assert_eq!(nfu(&["set", "collapse", "/nonexistent.json"]).code, 2);
    assert_eq!(nfu(&["schema", "nothing"]).code, 2);
}

#[test]
fn domain_errors_exit_one() {
    assert_eq!(nfu(&["comprehend", "v0 in v0"]).code, 1);
    let f = common::fixture("v3.json");
    assert_eq!(
        nfu(&["q", "code", f.to_str().unwrap(), "--target", "nope"]).code,
        1
    );
}

#[test]
fn worked_tree_prints_b_prime() {
    let f = common::fixture("family4.json");
    let o = nfu(&["ramsey", "tree", "--family", f.to_str().unwrap()]);
    assert_eq!(
        o.stdout,
        "*<> 0\n   <0> 2\n  *<1> 1\n    *<1,0> 3\nB' = {0,1,3}\n"
    );
}

#[test]
fn every_schema_is_json() {
    for name in SCHEMAS {
        let o = nfu(&["schema", name]);
        assert_eq!(o.code, 0, "{name}");
        serde_json::from_str::<serde_json::Value>(&o.stdout).unwrap();
    }
}

#[test]
fn outputs_validate_against_their_schemas() {
    // A light structural check: required top-level keys are present.
    let pairs = [
        (vec!["q", "audit-ext"], "v3.json", "audit-report"),
        (vec!["limit", "check"], "diagram.json", "diagram-report"),
    ];
    for (cmd, fx, schema) in pairs {
        let path = common::fixture(fx);
        let mut args = cmd.clone();
        args.push(path.to_str().unwrap());
        let out: serde_json::Value = serde_json::from_str(&nfu(&args).stdout).unwrap();
        let s: serde_json::Value = serde_json::from_str(&nfu(&["schema", schema]).stdout).unwrap();
        for key in s["required"].as_array().unwrap() {
            assert!(out.get(key.as_str().unwrap()).is_some(), "{schema}: {key}");
        }
    }
}
