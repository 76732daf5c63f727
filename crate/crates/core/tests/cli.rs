use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use pathcat::cli::dsl::BlockKind;
use pathcat::cli::{parse_spec, parse_str, run_command, DslError, Run, DISPATCH};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Run {
    run_command(std::iter::once("pathcat").chain(args.iter().copied()))
}

fn stat<'a>(r: &'a Run, key: &str) -> &'a str {
    let report = r.report().expect("a report");
    report.stats.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).unwrap_or_else(|| panic!("no stat {key}"))
}

fn machine(r: &Run) -> Vec<String> {
    r.report().expect("a report").machine_lines()
}

#[test]
fn minimal_category_file() {
    let doc = parse_str("category One\n object o", "inline", Path::new(".")).unwrap();
    assert_eq!(doc.blocks.len(), 1);
    assert_eq!(doc.blocks[0].kind, BlockKind::Category);
    assert_eq!(doc.blocks[0].name, "One");
}

#[test]
fn arrow_to_unknown_object() {
    let err = parse_str("category C\n object a\n arrow f a b\n", "inline", Path::new(".")).unwrap_err();
    assert!(matches!(err, DslError::UnresolvedReference { ref name, line: 3, .. } if name == "b"), "{err:?}");
}

#[test]
fn cocycle_fixture_has_nine_entries() {
    let doc = parse_spec(Path::new(&fixture("z3_cocycle.spec"))).unwrap();
    let b = doc.sole(BlockKind::Cocycle).unwrap();
    assert_eq!(b.all("f").count(), 9);
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_str("category C\n  object a\n  frob a\n", "f.spec", Path::new(".")).unwrap_err();
    assert!(matches!(err, DslError::ParseError { line: 3, .. }), "{err:?}");
    let err = parse_str("  object a\n", "f.spec", Path::new(".")).unwrap_err();
    assert!(matches!(err, DslError::ParseError { line: 1, col: 3, .. }), "{err:?}");
    let err = parse_str("category C\n object a\ncategory C\n object b\n", "f.spec", Path::new(".")).unwrap_err();
    assert!(matches!(err, DslError::DuplicateName { line: 3, .. }), "{err:?}");
    let err = parse_str("base B\n bicategory Nope\n", "f.spec", Path::new(".")).unwrap_err();
    assert!(matches!(err, DslError::UnresolvedReference { ref name, .. } if name == "Nope"), "{err:?}");
}

#[test]
fn includes_resolve_relative_to_the_file() {
    let doc = parse_spec(Path::new(&fixture("bad.spec"))).unwrap();
    assert!(doc.get(BlockKind::Base, "Q5iso").is_some());
    assert!(doc.get(BlockKind::PathObject, "bad").is_some());
}

#[test]
fn delta_identification_of_the_point() {
    let r = run(&["path", "--category", "One", "--max-len", "4", "--check", "delta-iso"]);
    assert_eq!(r.exit_code(), 0, "{}", r.stdout());
    assert_eq!(machine(&r), ["PASS"]);
    assert_eq!(stat(&r, "|Δ(2,2)|"), "3");
    assert_eq!(stat(&r, "|Δ(3,2)|"), "4");
    assert!(r.stdout().contains("(N=4)"));
}

#[test]
fn metric_round_trip() {
    let r = run(&["roundtrip", "--enriched", "metric3.spec"]);
    assert_eq!(r.exit_code(), 0, "{}", r.stdout());
    assert_eq!(stat(&r, "round-trip equality"), "true");
}

#[test]
fn forced_segal_failure() {
    let r = run(&["segal-check", "--pathobject", &fixture("bad.spec"), "--base", "iso"]);
    assert_eq!(r.exit_code(), 1);
    let lines = machine(&r);
    assert!(!lines.is_empty());
    for line in &lines {
        assert!(line.starts_with("FAIL NonSegalCell (["), "{line}");
    }
    assert!(lines.contains(&"FAIL NonSegalCell ([2,(1,1);(1,2)],[1,(0,1)])".to_string()));
    let all = run(&["segal-check", "--pathobject", &fixture("bad.spec"), "--base", "all"]);
    assert_eq!(all.exit_code(), 0);
}

#[test]
fn input_errors_exit_with_two() {
    let cases: [&[&str]; 5] = [
        &["frobnicate"],
        &["path", "--check", "strict"],
        &["validate", "no-such-file.spec"],
        &["localize", "--category", "interval:1", "--arrows", "nope"],
        &["segal-check", "--pathobject", "bad.spec", "--name", "missing"],
    ];
    for args in cases {
        let r = run(args);
        assert_eq!(r.exit_code(), 2, "{args:?}");
        assert!(r.stderr().contains("FAIL "), "{args:?}");
    }
    assert!(run(&["frobnicate"]).stderr().contains("FAIL UnknownCommand"));
    assert!(run(&["path", "--check", "strict"]).stderr().contains("FAIL MissingArgument"));
    assert!(run(&["bridge"]).stderr().contains("FAIL MissingArgument"));
}

#[test]
fn verification_failures_exit_with_one() {
    let r = run(&["monoid", "--pathobject", &fixture("bad.spec")]);
    assert_eq!(r.exit_code(), 1);
    assert_eq!(machine(&r), ["FAIL ShapeNotTerminal bad"]);
    let r = run(&["reduce", "--pathobject", &fixture("bad.spec"), "--max-len", "2"]);
    assert_eq!(r.exit_code(), 1);
    assert_eq!(machine(&r), ["FAIL NotSegal bad"]);
    let r = run(&["localize", "--spec", &fixture("categories.spec"), "--category", "Idem", "--arrows", "e"]);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(stat(&r, "hom sizes"), "[1]");
}

#[test]
fn machine_sections_are_deterministic() {
    let args = ["segal-check", "--pathobject", "bad.spec", "--base", "iso", "--max-len", "3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(machine(&a), machine(&b));
    let json: Vec<String> = (0..2).map(|_| run(&[&args[..], &["--json"]].concat()).stdout()).collect();
    assert_eq!(json[0], json[1]);
    let v: serde_json::Value = serde_json::from_str(&json[0]).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["truncation"], 3);
}

#[test]
fn binary_reads_truncation_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pathcat"))
        .args(["path", "--category", "One", "--check", "delta-iso"])
        .env("PATHCAT_MAX_LEN", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(N=2)"), "{text}");
    assert!(text.lines().last() == Some("PASS"));

    let out = Command::new(env!("CARGO_BIN_EXE_pathcat"))
        .args(["segal-check", "--pathobject", &fixture("bad.spec"), "--base", "iso", "--max-len", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_pathcat")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

/// Every library operation named in the module list.
const OPERATIONS: &[&str] = &[
    "validate_category",
    "coarse",
    "interval",
    "nerve_level",
    "elements",
    "derive",
    "interior",
    "validate_functor",
    "compose_delta",
    "ordinal_sum",
    "factorize_generators",
    "enumerate_hom",
    "validate_bicategory",
    "suspend_monoidal",
    "validate_colax",
    "validate_transformation",
    "validate_modification",
    "validate_base",
    "canonical_bases",
    "build_path_category",
    "concat_chains",
    "hom_witness",
    "delta_identification",
    "path_functor",
    "embed_and_compress",
    "structural_isos",
    "check_path_object",
    "strict_to_enriched",
    "enriched_to_path",
    "homotopy_monoid_view",
    "simplicial_correspondence",
    "validate_premorphism",
    "base_change",
    "restrict",
    "foliation",
    "cocycle_check",
    "metric_enrichment",
    "thin_bridge",
    "bridge_of_distributor",
    "distributor_of_bridge",
    "validate_bimodule",
    "check_fractions",
    "localize_fractions",
    "curry_adjunction",
    "product_localization_check",
    "secondary_localization",
    "reduce_point",
    "parse_spec",
];

#[test]
fn every_operation_is_dispatched() {
    let reachable: BTreeSet<&str> = DISPATCH.iter().flat_map(|(_, ops)| ops.iter().copied()).collect();
    let missing: Vec<&&str> = OPERATIONS.iter().filter(|op| !reachable.contains(**op)).collect();
    assert!(missing.is_empty(), "unreachable: {missing:?}");
}

#[test]
fn every_dispatched_command_runs() {
    let f = |s: &str| fixture(s);
    let invocations: Vec<(&str, Vec<String>)> = vec![
        ("validate", vec!["validate".into(), f("bimodule2.spec"), "--max-len".into(), "2".into()]),
        ("validate", vec!["validate".into(), f("transport.spec")]),
        ("validate", vec!["validate".into(), f("categories.spec")]),
        ("path", vec!["path".into(), "--category".into(), "interval:2".into(), "--check".into(), "strict".into(), "--max-len".into(), "3".into()]),
        ("path", vec!["path".into(), "--category".into(), "coarse:a,b".into(), "--check".into(), "embed".into(), "--max-len".into(), "3".into()]),
        ("path", vec!["path".into(), "--category".into(), "interval:1".into(), "--check".into(), "opposite".into(), "--max-len".into(), "3".into()]),
        ("path", vec!["path".into(), "--category".into(), "coarse:a,b".into(), "--check".into(), "coproduct:interval:1".into(), "--max-len".into(), "3".into()]),
        ("path", vec!["path".into(), "--category".into(), "coarse:a,b".into(), "--check".into(), "fiber-product:interval:1".into(), "--max-len".into(), "3".into()]),
        ("path", vec!["path".into(), "--spec".into(), f("transport.spec"), "--check".into(), "free-lift".into(), "--transport".into(), "hol".into(), "--max-len".into(), "2".into()]),
        ("segal-check", vec!["segal-check".into(), "--pathobject".into(), f("z3_cocycle.spec"), "--max-len".into(), "2".into()]),
        ("roundtrip", vec!["roundtrip".into(), "--enriched".into(), f("z3_cocycle.spec"), "--max-len".into(), "2".into()]),
        ("monoid", vec!["monoid".into(), "--pathobject".into(), f("monoid.spec")]),
        ("simplicial", vec!["simplicial".into(), "--points".into(), "2".into()]),
        ("bridge", vec!["bridge".into(), "--distributor".into(), f("categories.spec")]),
        ("bimodule", vec!["bimodule".into(), "--spec".into(), f("bimodule2.spec"), "--max-len".into(), "2".into()]),
        ("localize", vec!["localize".into(), "--category".into(), "interval:1".into(), "--arrows".into(), "all".into(), "--product".into(), "interval:1".into(), "--product-arrows".into(), "all".into()]),
        ("localize", vec!["localize".into(), "--spec".into(), f("quantale.spec"), "--base".into(), "Q5iso".into()]),
        ("reduce", vec!["reduce".into(), "--pathobject".into(), f("z3_cocycle.spec"), "--max-len".into(), "2".into()]),
        ("report", vec!["report".into(), f("exp_base_change.spec"), "--max-len".into(), "2".into()]),
        ("report", vec!["report".into(), f("categories.spec"), "--max-len".into(), "2".into()]),
    ];
    let commands: BTreeSet<&str> = DISPATCH.iter().map(|(c, _)| *c).collect();
    let exercised: BTreeSet<&str> = invocations.iter().map(|(c, _)| *c).collect();
    assert_eq!(commands, exercised);
    for (_, args) in &invocations {
        let r = run_command(std::iter::once("pathcat".to_string()).chain(args.iter().cloned()));
        assert_eq!(r.exit_code(), 0, "{args:?}\n{}{}", r.stdout(), r.stderr());
    }
}
