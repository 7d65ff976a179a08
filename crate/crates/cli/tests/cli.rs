use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fgverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgverify")).args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> String {
    root().join("scenarios").join(name).to_string_lossy().into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn example_1_axioms_pass() {
    let out = fgverify(&["run", &scenario("example-1-axioms.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  ambient: f-structure"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn scaled_phi_fails_the_cubic_axiom() {
    let out = fgverify(&["run", &scenario("scaled-phi.toml")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL  ambient: f-structure"), "{text}");
}

#[test]
fn empty_suite_list_is_a_validation_error() {
    let path = tmp("empty-suites.toml");
    std::fs::write(&path, "name = \"empty\"\nsuites = []\n[ambient]\nbuiltin = \"example-1\"\n").unwrap();
    let out = fgverify(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("suite list is empty"));
}

#[test]
fn parse_errors_are_located() {
    let path = tmp("broken.toml");
    std::fs::write(&path, "name = \"broken\"\nsuites = [\"structure\"\n").unwrap();
    let out = fgverify(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn shipped_scenarios_pass() {
    for name in ["examples-2-3.toml", "product-warped.toml"] {
        let out = fgverify(&["run", &scenario(name), "--quiet"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn flags_override_the_scenario() {
    let path = tmp("override.json");
    let out = fgverify(&[
        "run",
        &scenario("example-1-axioms.toml"),
        "--samples",
        "3",
        "--seed",
        "9",
        "--quiet",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["samples"], 3);
    assert_eq!(report["seed"], 9);
    assert_eq!(report["records"][0]["samples"], 3);
}

#[test]
fn loose_algebraic_tolerance_admits_scaled_phi() {
    let out = fgverify(&["run", &scenario("scaled-phi.toml"), "--tol-alg", "100", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scenario_reports_are_reproducible() {
    let (a, b) = (tmp("a.json"), tmp("b.json"));
    for p in [&a, &b] {
        fgverify(&["run", &scenario("product-warped.toml"), "--quiet", "--report", p.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn golden_report_is_bit_exact() {
    let path = tmp("golden.json");
    let out =
        fgverify(&["reproduce-paper", "--samples", "8", "--seed", "1", "--quiet", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let golden = root().join("docs/golden/reproduce-paper-samples-8-seed-1.json");
    let expected = std::fs::read(&golden).expect("golden report present");
    assert!(std::fs::read(&path).unwrap() == expected, "report differs from {}", golden.display());
}
