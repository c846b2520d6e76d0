use std::path::PathBuf;
use std::process::Command;

fn lexicon_path() -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/lexicon.json");
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let lexicon = lexicon_path();
    let mut argv = vec!["lokatif", "--lexicon", lexicon.as_str()];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = lokatif::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut v = vec!["--format", "json"];
    v.extend_from_slice(args);
    let (code, out, err) = run(&v);
    assert!(err.is_empty(), "{err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn check_accepts_toulouse() {
    let (code, doc) = json(&["check", "Max est à Toulouse"]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "Accept");
    assert_eq!(doc["reasons"], serde_json::json!([]));
    assert!(!doc["trace"].as_array().unwrap().is_empty());
}

#[test]
fn check_rejects_knife_with_both_reasons() {
    let (code, doc) = json(&["check", "La mouche est au couteau"]);
    assert_eq!(code, 1);
    assert_eq!(doc["verdict"], "Reject");
    assert_eq!(doc["reasons"], serde_json::json!(["NotFixed", "NoSpacePortion"]));
}

#[test]
fn partwhole_on_starter_scene() {
    let (code, out, _) = run(&["partwhole", "brebis", "troupeau"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("brebis / troupeau: MemberCollection"), "{out}");
    let (code, doc) = json(&["partwhole", "poignée", "porte"]);
    assert_eq!(code, 0);
    assert_eq!(doc["relation"], "ComponentWhole(WholeDependsOnPart, Direct)");
    let (code, doc) = json(&["partwhole", "chute", "table"]);
    assert_eq!(code, 1);
    assert_eq!(doc["relation"], serde_json::Value::Null);
}

#[test]
fn genitive_phrases_through_check() {
    let (code, doc) = json(&["check", "la farine du gâteau"]);
    assert_eq!(code, 0);
    assert_eq!(doc["relation"], "SubstanceWhole");
}

#[test]
fn route_prepositions() {
    let (code, doc) = json(&["check", "Max est par la porte"]);
    assert_eq!((code, doc["route"]["ok"].as_str()), (0, Some("conduit")));
    let (code, doc) = json(&["check", "Max est à travers le gâteau"]);
    assert_eq!((code, doc["route"].as_str()), (1, Some("mismatch")));
    let (code, _, err) = run(&["check", "Max est dans le verre"]);
    assert_eq!(code, 2);
    assert!(err.contains("dans"));
}

#[test]
fn parse_errors_point_at_the_input() {
    let (code, out, err) = run(&["check", "Max est au"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("byte 10") && err.contains('^'), "{err}");
    let (code, _, err) = run(&["check", "Max est à la licorne"]);
    assert_eq!(code, 2);
    assert!(err.contains("licorne"));
}

#[test]
fn infer_and_chain() {
    let (code, doc) = json(&["infer", "maison"]);
    assert_eq!(code, 0);
    let parts: Vec<&str> = doc["parts"].as_array().unwrap().iter().map(|p| p["part"].as_str().unwrap()).collect();
    assert_eq!(parts, ["poignee", "porte"]);
    let (code, out, _) = run(&["chain", "poignee", "porte", "maison"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("composed: ComponentWhole(WholeDependsOnPart, Indirect)"));
}

#[test]
fn nli_and_orientation() {
    let (code, doc) = json(&["nli", "colonne", "haut"]);
    assert_eq!(code, 0);
    assert_eq!(doc["material_zone"].as_array().unwrap().len(), 27);
    let (code, out, _) = run(&["nli", "colonne", "avant"]);
    assert_eq!(code, 1);
    assert!(out.contains("no frontal orientation"));
    let (code, doc) = json(&["orient", "voiture"]);
    assert_eq!(code, 0);
    assert_eq!(doc["orientation"]["front"], "-x");
    assert_eq!(doc["orientation"]["factor"], "motion");
    let (code, _, err) = run(&["nli", "colonne", "rocher"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["orient", "licorne"]);
    assert_eq!(code, 2);
}

#[test]
fn classify_lists_views() {
    let (code, doc) = json(&["classify", "église"]);
    assert_eq!(code, 0);
    assert_eq!(doc["views"].as_array().unwrap().len(), 2);
    let (code, _, _) = run(&["classify", "licorne"]);
    assert_eq!(code, 2);
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["check", "Max est à l'extrémité de la table"][..],
        &["infer", "cheptel"][..],
        &["nli", "tapis", "coin"][..],
    ] {
        let mut v = vec!["--format", "json"];
        v.extend_from_slice(args);
        assert_eq!(run(&v), run(&v));
    }
}

#[test]
fn strict_mode_uses_the_scene() {
    let (code, doc) = json(&["--strict", "check", "Max est à l'extrémité de la table"]);
    assert_eq!(code, 0);
    let checks: Vec<&str> = doc["trace"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|s| s["check"]["check"].as_str())
        .collect();
    assert!(checks.contains(&"nli_in_frame"), "{doc}");
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("lokatif-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn bad_data_exits_three() {
    let bad = temp_file("bad-lexicon.json", "[\n{\"lemma\": \"x\",\n");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = lokatif::run(
        ["lokatif", "--lexicon", bad.to_str().unwrap(), "check", "Max est à Toulouse"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 3);
    assert!(String::from_utf8_lossy(&err).contains("line"));
    let scene = temp_file("bad-scene.json", "[{\"id\": \"a\", \"lemma\": \"licorne\"}]");
    let (code, _, err) = run(&["--scene", scene.to_str().unwrap(), "partwhole", "a", "b"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = run(&["--scene", "/nonexistent/scene.json", "infer", "maison"]);
    assert_eq!(code, 3);
}

#[test]
fn usage_errors_exit_two() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(lokatif::run(["lokatif", "frobnicate"], &mut out, &mut err), 2);
    assert_eq!(lokatif::run(["lokatif", "check", "Max est à Toulouse"], &mut out, &mut err), 2);
    let (code, _, _) = run(&["partwhole", "licorne", "troupeau"]);
    assert_eq!(code, 2);
}

#[test]
fn binary_reads_lexicon_from_environment() {
    let output = Command::new(env!("CARGO_BIN_EXE_lokatif"))
        .args(["check", "Max est à Toulouse"])
        .env("LOKATIF_LEXICON", lexicon_path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).starts_with("Accept"));
    let output = Command::new(env!("CARGO_BIN_EXE_lokatif")).arg("selftest").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
}
