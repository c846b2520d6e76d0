use lokatif_core::lexicon::{Lexicon, STARTER_LEXICON};
use lokatif_core::scene::{EntityId, Scene};
use lokatif_core::{Error, PartWholeRelation};

#[test]
fn starter_lexicon_round_trips_through_a_reader() {
    let lex = Lexicon::load(STARTER_LEXICON.as_bytes()).unwrap();
    let again = Lexicon::load(lex.to_json().as_bytes()).unwrap();
    assert_eq!(lex.entries(), again.entries());
}

#[test]
fn starter_scene_loads_with_derived_collections() {
    let lex = Lexicon::starter();
    let scene = Scene::starter(&lex).unwrap();
    let cheptel = EntityId::from("cheptel");
    assert_eq!(scene.atoms(&cheptel).len(), 3);
    assert_eq!(scene.extent_at(&cheptel, 0).unwrap().len(), 6);
    assert_eq!(
        lokatif_core::classify(&"troupeau".into(), &cheptel, &scene).unwrap(),
        PartWholeRelation::SubcollectionCollection
    );
}

#[test]
fn scene_errors_carry_lines() {
    let lex = Lexicon::starter();
    let text = "[\n  {\"id\": \"a\",\n   \"lemma\": \"rocher\",\n   \"colour\": \"grey\"}\n]";
    match Scene::from_json(text, &lex) {
        Err(Error::SceneParse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    let empty_extent = r#"[{"id": "a", "lemma": "rocher", "extent": {"0": []}}]"#;
    assert!(matches!(Scene::from_json(empty_extent, &lex), Err(Error::SceneParse { .. })));
    let no_extent = r#"[{"id": "a", "lemma": "rocher"}]"#;
    assert!(matches!(Scene::from_json(no_extent, &lex), Err(Error::InvalidScene(_))));
}

#[test]
fn cyclic_functional_dependence_is_rejected_on_load() {
    let lex = Lexicon::starter();
    let text = r#"[
      {"id": "a", "lemma": "porte", "extent": {"0": [[0, 0, 0]]}, "dependence": [{"on": "b"}]},
      {"id": "b", "lemma": "poignée", "extent": {"0": [[0, 0, 0]]}, "dependence": [{"on": "a"}]}
    ]"#;
    assert!(matches!(Scene::from_json(text, &lex), Err(Error::CycleDetected(_))));
}
