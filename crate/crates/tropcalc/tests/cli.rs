//! Command-line behaviour on the shipped fixtures.

use std::path::PathBuf;

use tropcalc::cli::io::{Document, Object};
use tropcalc::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use tropcalc::deltaforms::DeltaForm;
use tropcalc::linalg::rat::{q, Rat};
use tropcalc::polyhedra::Polyhedron;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn tropcalc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tropcalc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn result_form(stdout: &str) -> DeltaForm {
    match Document::parse(stdout).expect("valid document").objects.remove("result") {
        Some(Object::DeltaForm(d)) => d,
        other => panic!("expected a deltaform result, got {other:?}"),
    }
}

fn origin(r: usize) -> DeltaForm {
    DeltaForm::from_weights(r, r, vec![(Polyhedron::point(&vec![q(0); r]), q(1))]).unwrap()
}

#[test]
fn check_balance_accepts_the_standard_line() {
    let (code, out, _) = tropcalc(&["check-balance", &fixture("line.json"), "L"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.trim(), "L: balanced");
}

#[test]
fn check_balance_reports_the_unbalanced_vertex() {
    let (code, out, _) = tropcalc(&["check-balance", &fixture("two_rays.json"), "R"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.starts_with("R: not balanced at 1 face(s)"), "{out}");
    let report: serde_json::Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    assert!(report["face"].is_object() && report["across"].is_array());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = std::env::temp_dir().join("tropcalc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"objects\": { \"x\": { \"kind\": \"nonsense\" } } }").unwrap();
    assert_eq!(tropcalc(&["check-balance", bad.to_str().unwrap(), "x"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["check-balance", &fixture("line.json"), "nope"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["check-balance", &fixture("line.json"), "phi"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["verify", "--random", "--suite", "bogus"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["verify", "--random", "--suite", "stokes", "--size", "9,1,1"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["compute", &fixture("line.json"), "wedge(L,"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["compute", &fixture("line.json"), "frobnicate(L)"]).0, EXIT_USAGE);
    assert_eq!(tropcalc(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn compute_corner_loci_and_products() {
    let (code, out, _) = tropcalc(&["compute", &fixture("line.json"), "corner(max_x_0, fullspace)"]);
    assert_eq!(code, EXIT_PASS);
    assert!(result_form(&out).equal(&origin(1)).unwrap());

    let (code, out, _) = tropcalc(&["compute", &fixture("line.json"), "corner(phi, fullspace)"]);
    assert_eq!(code, EXIT_PASS);
    let line = Document::parse(&std::fs::read_to_string(fixture("line.json")).unwrap()).unwrap();
    let Some(Object::DeltaForm(l)) = line.objects.get("L") else { panic!("L is a deltaform") };
    assert!(result_form(&out).equal(l).unwrap());

    let (code, out, _) = tropcalc(&["compute", &fixture("line.json"), "wedge(L, L)"]);
    assert_eq!(code, EXIT_PASS);
    assert!(result_form(&out).equal(&origin(2)).unwrap());
}

#[test]
fn compute_rejects_unbalanced_inputs_as_failures() {
    let (code, _, err) = tropcalc(&["compute", &fixture("two_rays.json"), "wedge(R, R)"]);
    assert_eq!(code, EXIT_FAIL, "{err}");
}

#[test]
fn compute_writes_the_output_file() {
    let path = std::env::temp_dir().join("tropcalc-cli-compute.json");
    let (code, out, _) = tropcalc(&["compute", &fixture("line.json"), "bnd1(L)", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(result_form(&written).is_zero());
}

#[test]
fn integrate_prints_exact_values() {
    let cases = [("moment", "unit", "1/2"), ("vol", "square", "1"), ("vol", "Q", "1")];
    for (form, cells, expected) in cases {
        let (code, out, err) = tropcalc(&["integrate", &fixture("integration.json"), form, cells]);
        assert_eq!(code, EXIT_PASS, "{err}");
        assert_eq!(out.trim().parse::<Rat>().unwrap(), expected.parse::<Rat>().unwrap(), "∫_{cells} {form}");
    }
}

#[test]
fn verify_passes_on_the_fixtures() {
    for suite in ["pl", "projection", "assoc"] {
        let (code, out, _) = tropcalc(&["verify", &fixture("line.json"), "--suite", suite]);
        assert_eq!(code, EXIT_PASS, "{suite}: {out}");
    }
    for suite in ["stokes", "green"] {
        let (code, out, _) = tropcalc(&["verify", &fixture("integration.json"), "--suite", suite]);
        assert_eq!(code, EXIT_PASS, "{suite}: {out}");
    }
}

#[test]
fn verify_on_a_corrupted_weight_fails_with_a_dump() {
    let dump = std::env::temp_dir().join("tropcalc-cli-dump.json");
    let _ = std::fs::remove_file(&dump);
    let (code, out, _) =
        tropcalc(&["verify", &fixture("corrupted_line.json"), "--suite", "pl", "--dump", dump.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    let doc = Document::parse(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert!(doc.objects.keys().any(|k| k.ends_with(".alpha")));
}

#[test]
fn random_verification_is_deterministic() {
    let args = ["verify", "--random", "--suite", "stokes", "--seed", "99", "--count", "5"];
    let (c1, o1, _) = tropcalc(&args);
    let (c2, o2, _) = tropcalc(&args);
    assert_eq!(c1, EXIT_PASS, "{o1}");
    assert_eq!((c1, o1), (c2, o2));
}
