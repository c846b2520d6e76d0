//! Browser bindings over the bundled lexicon and fixture scene. Every
//! export returns a JSON document; failures come back as `{"error": ...}`.

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use lokatif_core::lexicon::Lexicon;
use lokatif_core::meronomy::explain;
use lokatif_core::ontology::{assign_frontal_orientation, GeometryParams};
use lokatif_core::parser::{parse, Ast, Preposition};
use lokatif_core::scene::{EntityId, Scene};
use lokatif_core::semantics::{check_route, judge_a, judge_genitive, resolve_nli};

struct Data {
    lexicon: Lexicon,
    scene: Scene,
}

fn data() -> &'static Data {
    static DATA: OnceLock<Data> = OnceLock::new();
    DATA.get_or_init(|| {
        let lexicon = Lexicon::starter();
        let scene = Scene::starter(&lexicon).expect("bundled scene is valid");
        Data { lexicon, scene }
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("documents serialize")
}

fn error(e: impl std::fmt::Display) -> String {
    to_json(&json!({ "error": e.to_string() }))
}

/// Entities with their extents at time 0, and the internal localization nouns.
pub fn scene_json() -> String {
    let d = data();
    let entities: Vec<Value> = d
        .scene
        .entities()
        .filter(|e| !e.is_collection())
        .filter_map(|e| {
            let extent = e.extent.get(&0)?;
            Some(json!({
                "id": e.id,
                "lemma": e.lemma,
                "view": e.views[0].to_string(),
                "extent": extent,
                "front": assign_frontal_orientation(e).map(|o| o.front.to_string()),
            }))
        })
        .collect();
    let nlis: Vec<&str> = d.lexicon.entries().iter().filter(|e| e.is_nli()).map(|e| e.lemma.as_str()).collect();
    to_json(&json!({ "entities": entities, "nli": nlis }))
}

/// Judge a sentence the way the command-line `check` does.
pub fn check_json(sentence: &str) -> String {
    let d = data();
    let ast = match parse(sentence, &d.lexicon) {
        Ok(ast) => ast,
        Err(e) => return error(e),
    };
    match &ast {
        Ast::Locative { prep: Preposition::A, .. } => match judge_a(&ast, &d.lexicon, None) {
            Ok(j) => {
                let trace: Vec<String> = j.trace.iter().map(ToString::to_string).collect();
                to_json(&json!({ "kind": "locative", "verdict": j.verdict, "reasons": j.reasons, "trace": trace }))
            }
            Err(e) => error(e),
        },
        Ast::Locative { prep: prep @ (Preposition::Par | Preposition::ATravers), site, .. } => {
            match check_route(*prep, &site.head, &d.lexicon) {
                Ok(route) => to_json(&json!({ "kind": "route", "route": route })),
                Err(e) => error(e),
            }
        }
        Ast::Locative { prep, .. } => error(format!("no judgment is defined for « {} »", prep.surface())),
        Ast::NounPhrase { np } => match judge_genitive(np, &d.scene, &d.lexicon) {
            Ok(c) => {
                let trace: Vec<String> = c.facts.iter().map(ToString::to_string).collect();
                to_json(&json!({
                    "kind": "genitive",
                    "part": c.part,
                    "whole": c.whole,
                    "relation": c.relation.to_string(),
                    "trace": trace,
                }))
            }
            Err(e) => error(e),
        },
    }
}

pub fn nli_json(whole: &str, lemma: &str) -> String {
    let d = data();
    match resolve_nli(&EntityId::from(whole), lemma, &d.scene, &d.lexicon, 0, &GeometryParams::default()) {
        Ok(z) => to_json(&z),
        Err(e) => error(e),
    }
}

pub fn part_whole_json(part: &str, whole: &str) -> String {
    let d = data();
    match explain(&EntityId::from(part), &EntityId::from(whole), &d.scene) {
        Ok(c) => {
            let trace: Vec<String> = c.facts.iter().map(ToString::to_string).collect();
            to_json(&json!({ "relation": c.relation.to_string(), "trace": trace }))
        }
        Err(e) => error(e),
    }
}

#[wasm_bindgen]
pub fn scene() -> String {
    scene_json()
}

#[wasm_bindgen]
pub fn check_sentence(sentence: &str) -> String {
    check_json(sentence)
}

#[wasm_bindgen]
pub fn nli_zone(whole: &str, lemma: &str) -> String {
    nli_json(whole, lemma)
}

#[wasm_bindgen]
pub fn part_whole(part: &str, whole: &str) -> String {
    part_whole_json(part, whole)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn scene_lists_material_entities() {
        let v = parsed(scene_json());
        let ids: Vec<&str> = v["entities"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
        assert!(ids.contains(&"table") && !ids.contains(&"troupeau") && !ids.contains(&"chute"));
        assert!(v["nli"].as_array().unwrap().iter().any(|l| l == "coin"));
    }

    #[test]
    fn check_covers_each_kind() {
        assert_eq!(parsed(check_json("Max est au rocher"))["reasons"], json!(["NoSpacePortion"]));
        assert_eq!(parsed(check_json("Max est par le sentier"))["route"]["ok"], "path");
        assert_eq!(parsed(check_json("une brebis du troupeau"))["relation"], "MemberCollection");
        assert!(parsed(check_json("Max est"))["error"].is_string());
    }

    #[test]
    fn zones_and_relations() {
        let z = parsed(nli_json("tapis", "coin"));
        assert_eq!(z["material_zone"].as_array().unwrap().len(), 4);
        assert!(parsed(nli_json("colonne", "avant"))["error"].is_string());
        assert_eq!(parsed(part_whole_json("morceau", "tasse"))["relation"], "PieceWhole");
    }
}
