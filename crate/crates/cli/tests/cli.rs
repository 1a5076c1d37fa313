use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/bundles").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincolim"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn run_on(cmd: &str, bundle: &Path, extra: &[&str]) -> (i32, Value, String) {
    let path = bundle.to_str().unwrap();
    let mut args = vec![cmd, path, "--format", "json"];
    args.extend_from_slice(extra);
    let out = run(&args);
    let report: Value = serde_json::from_slice(&out.stdout).expect("a JSON report on stdout");
    (out.status.code().unwrap(), report, String::from_utf8(out.stderr).unwrap())
}

fn write_bundle(dir: &tempfile::TempDir, name: &str, doc: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn minimal() -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture("minimal.json")).unwrap()).unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name} in {report}"))
}

#[test]
fn minimal_bundle_validates() {
    let (code, report, stderr) = run_on("validate", &fixture("minimal.json"), &[]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["field"], "F_2");
    assert!(stderr.is_empty());
}

#[test]
fn out_of_range_constant_names_its_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = minimal();
    doc["categories"]["pt"]["composition"][0]["table"][0][0][0] = json!(2);
    let (code, report, stderr) = run_on("validate", &write_bundle(&dir, "b.json", &doc), &[]);
    assert_eq!(code, 2);
    assert_eq!(report["verdict"], "precondition-error");
    assert!(stderr.contains("/categories/pt/composition/0/table/0/0/0"), "{stderr}");
    assert!(stderr.contains("schema violation"), "{stderr}");
}

#[test]
fn dangling_reference_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = minimal();
    doc["functors"] = json!({"F": {"kind": "identity", "category": "nowhere"}});
    let (code, _, stderr) = run_on("validate", &write_bundle(&dir, "b.json", &doc), &[]);
    assert_eq!(code, 2);
    assert!(stderr.contains("dangling reference at /functors/F/category"), "{stderr}");
    assert!(stderr.contains("`nowhere`"), "{stderr}");
}

#[test]
fn non_prime_modulus_and_bad_version_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = minimal();
    doc["field"]["p"] = json!(4);
    let (code, _, stderr) = run_on("validate", &write_bundle(&dir, "p.json", &doc), &[]);
    assert_eq!(code, 2);
    assert!(stderr.contains("/field/p") && stderr.contains("not prime"), "{stderr}");

    let mut doc = minimal();
    doc["schema_version"] = json!(2);
    let (code, _, stderr) = run_on("validate", &write_bundle(&dir, "v.json", &doc), &[]);
    assert_eq!(code, 2);
    assert!(stderr.contains("/schema_version"), "{stderr}");

    let mut doc = minimal();
    doc["extra"] = json!(1);
    let (code, _, stderr) = run_on("validate", &write_bundle(&dir, "k.json", &doc), &[]);
    assert_eq!(code, 2);
    assert!(stderr.contains("/extra"), "{stderr}");
}

#[test]
fn broken_identity_fails_validation_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = minimal();
    doc["categories"]["pt"]["composition"] = json!([]);
    let (code, report, _) = run_on("validate", &write_bundle(&dir, "b.json", &doc), &[]);
    assert_eq!(code, 1);
    let c = check(&report, "category `pt`");
    assert_eq!(c["verdict"], "fail");
    assert!(c["witness"].as_str().unwrap().contains("id"));
}

#[test]
fn check_lc_failing_g_names_the_missed_object() {
    let args = ["--functor", "incl", "--source", "TX", "--target", "TC"];
    let (code, report, _) = run_on("check-lc", &fixture("arrow.json"), &args);
    assert_eq!(code, 1);
    let g = check(&report, "G");
    assert_eq!(g["verdict"], "fail");
    assert!(g["witness"].as_str().unwrap().contains("`y`"), "{g}");

    let args = ["--functor", "id_C", "--source", "TC", "--target", "TC"];
    let (code, report, _) = run_on("check-lc", &fixture("arrow.json"), &args);
    assert_eq!(code, 0, "{report}");
}

#[test]
fn missing_coherence_cells_exit_2() {
    let (code, report, stderr) = run_on("colimit", &fixture("incoherent.json"), &[]);
    assert_eq!(code, 2);
    assert_eq!(report["verdict"], "precondition-error");
    assert!(stderr.contains("missing coherence cell"), "{stderr}");
}

#[test]
fn unknown_command_exits_2() {
    let out = run(&["frobnicate", fixture("minimal.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn topology_commands() {
    let b = fixture("arrow.json");
    let (code, report, _) = run_on("check-topology", &b, &["--cover-system", "just_f"]);
    assert_eq!(code, 1);
    assert_eq!(check(&report, "Id")["verdict"], "fail");

    let (code, report, _) = run_on("generate-topology", &b, &["--cover-system", "arrow_covers"]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["num_covers"], 3);

    let (code, report, _) = run_on("canonical", &b, &["--category", "C"]);
    assert_eq!(code, 0);
    assert_eq!(check(&report, "maximal")["verdict"], "pass");
    // the arrow alone does not cover y canonically
    assert_eq!(report["details"]["covers"]["y"].as_array().unwrap().len(), 1);
}

#[test]
fn sheaf_check_reports_the_failing_cover() {
    let b = fixture("arrow.json");
    let (code, report, _) = run_on("check-sheaf", &b, &["--presheaf", "hx", "--topology", "Tf"]);
    assert_eq!(code, 1);
    assert!(check(&report, "sheaf")["witness"].as_str().unwrap().contains("not surjective"));
    let (code, _, _) = run_on("check-sheaf", &b, &["--presheaf", "hy", "--topology", "Tf"]);
    assert_eq!(code, 0);
}

#[test]
fn colimit_round_trips_through_the_bundle_format() {
    let (code, report, _) = run_on("colimit", &fixture("colimit.json"), &[]);
    assert_eq!(code, 0, "{report}");
    let tags = report["details"]["tagging"].as_array().unwrap();
    assert_eq!(tags.len(), 2);
    assert_eq!(tags[1]["index"], "B");

    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "schema_version": 1,
        "field": {"kind": "prime", "p": 2},
        "categories": {"L": report["details"]["category"].clone()},
    });
    let (code, again, _) = run_on("validate", &write_bundle(&dir, "l.json", &doc), &[]);
    assert_eq!(code, 0, "{again}");
}

#[test]
fn universal_property_and_union_colimit() {
    let (code, report, _) = run_on("verify-universal", &fixture("colimit.json"), &["--target", "D"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["details"]["functors"], report["details"]["pseudonatural_transformations"]);

    let (code, report, _) = run_on("union-colimit", &fixture("sites.json"), &[]);
    assert_eq!(code, 0, "{report}");
}

#[test]
fn site_colimit_states_the_surrogate() {
    let args = ["--ambient", "K", "--seeds", "left,right"];
    let (code, report, _) = run_on("site-colimit", &fixture("sites.json"), &args);
    assert_eq!(code, 0, "{report}");
    assert!(report["note"].as_str().unwrap().contains("canonical topology"));
    let out = run(&["site-colimit", fixture("sites.json").to_str().unwrap(), "--ambient", "K", "--seeds", "left"]);
    // {x, y} misses z
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`z`"));
}

#[test]
fn tensor_commands() {
    let b = fixture("sites.json");
    let (code, report, _) = run_on("tensor-site", &b, &["--left", "TK", "--right", "Tpt"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["details"]["objects"].as_array().unwrap().len(), 3);
    let args = [
        "--f", "id_K", "--f-source", "TK", "--f-target", "TK", "--g", "id_pt", "--g-source", "Tpt", "--g-target", "Tpt",
    ];
    let (code, report, _) = run_on("check-tensor-lc", &b, &args);
    assert_eq!(code, 0, "{report}");
}

#[test]
fn bounds_are_flags_and_exceeding_one_exits_2() {
    let (code, report, _) = run_on("canonical", &fixture("arrow.json"), &["--max-sieves", "1"]);
    assert_eq!(code, 2);
    assert!(report["error"].as_str().unwrap().contains("bound exceeded"));
    let args = ["--ambient", "K", "--closure-depth", "0"];
    let (code, _, _) = run_on("site-colimit", &fixture("sites.json"), &args);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (cmd, bundle) in [("canonical", "arrow.json"), ("colimit", "colimit.json"), ("union-colimit", "sites.json")] {
        let extra: &[&str] = if cmd == "canonical" { &["--category", "C"] } else { &[] };
        let path = fixture(bundle);
        let mut args = vec![cmd, path.to_str().unwrap()];
        args.extend_from_slice(extra);
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn rational_bundles_parse_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "schema_version": 1,
        "field": {"kind": "rational"},
        "categories": {
            "C": {"builder": "path", "objects": ["x", "y"], "arrows": [{"name": "f", "src": "x", "dst": "y"}]},
        },
        "functors": {
            "half": {"src": "C", "dst": "C", "objects": {"x": "x", "y": "y"},
                     "homs": [{"src": "x", "dst": "x", "images": [[1]]},
                              {"src": "y", "dst": "y", "images": [[1]]},
                              {"src": "x", "dst": "y", "images": [["1/2"]]}]},
        },
    });
    let (code, report, _) = run_on("validate", &write_bundle(&dir, "q.json", &doc), &[]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["field"], "Q");
    // LC needs a finite field
    let mut doc = doc;
    doc["topologies"] = json!({"T": {"category": "C", "kind": "minimal"}});
    let args = ["--functor", "half", "--source", "T", "--target", "T"];
    let (code, _, stderr) = run_on("check-lc", &write_bundle(&dir, "q2.json", &doc), &args);
    assert_eq!(code, 2);
    assert!(stderr.contains("not finite"), "{stderr}");
}
