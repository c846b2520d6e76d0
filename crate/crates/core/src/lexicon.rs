//! Lexical knowledge: nouns with one or more category views, internal
//! localization nouns (NLI) and component nouns.

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{Category, MaterialSub, RouteSub, TopCategory, View};

/// Geometry rule selecting the zone an internal localization noun denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NliRule {
    Top,
    Bottom,
    Front,
    Back,
    Left,
    Right,
    Corner,
    End,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub lemma: String,
    pub proper: bool,
    pub views: Vec<View>,
    pub nli_rule: Option<NliRule>,
    pub component_function: Option<String>,
}

impl LexEntry {
    pub fn is_nli(&self) -> bool {
        self.nli_rule.is_some()
    }

    /// The place view an internal localization noun is judged through.
    pub fn place_view(&self) -> Option<&View> {
        self.views.iter().find(|v| v.category.is(MaterialSub::Place) && v.fix && v.esp)
    }

    fn validate(&self) -> Result<(), String> {
        validate_lemma(&self.lemma)?;
        if self.views.is_empty() {
            return Err("an entry needs at least one view".into());
        }
        if self.nli_rule.is_some() && self.component_function.is_some() {
            return Err("an entry cannot be both an NLI and a component noun".into());
        }
        if self.nli_rule.is_some() && self.place_view().is_none() {
            return Err("NLI entries need a +fix +esp place view".into());
        }
        if self.component_function.is_some()
            && !self.views.iter().any(|v| v.category.is(MaterialSub::Object) && !v.esp)
        {
            return Err("component nouns need a -esp object view".into());
        }
        Ok(())
    }
}

/// Function words the tokenizer reserves; they cannot be nouns.
pub(crate) const RESERVED: &[&str] = &[
    "le", "la", "les", "l", "un", "une", "des", "de", "d", "du", "au", "aux", "à", "est", "dans",
    "sur", "sous", "par", "travers", "au-dessus",
];

fn validate_lemma(lemma: &str) -> Result<(), String> {
    if lemma.is_empty() {
        return Err("empty lemma".into());
    }
    if lemma != lemma.to_lowercase() {
        return Err("lemmas must be lowercase".into());
    }
    for word in lemma.split(' ') {
        if word.is_empty() {
            return Err("lemma words must be separated by single spaces".into());
        }
        if !word.chars().all(|c| c.is_alphabetic() || c == '-') || word.starts_with('-') {
            return Err(format!("lemma word `{word}` must be alphabetic"));
        }
        if RESERVED.contains(&word) {
            return Err(format!("`{word}` is a reserved function word"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    index: HashMap<String, usize>,
}

impl Lexicon {
    pub fn new(entries: Vec<LexEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            e.validate()
                .map_err(|reason| Error::InvalidEntry { lemma: e.lemma.clone(), reason })?;
            if index.insert(e.lemma.clone(), i).is_some() {
                return Err(Error::DuplicateLemma(e.lemma.clone()));
            }
        }
        Ok(Lexicon { entries, index })
    }

    /// Load a lexicon from a UTF-8 byte stream.
    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut bytes = Vec::new();
        source
            .read_to_end(&mut bytes)
            .map_err(|e| Error::LexiconParse { line: 0, message: e.to_string() })?;
        let text = std::str::from_utf8(&bytes).map_err(|e| {
            let line = 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
            Error::LexiconParse { line, message: "invalid UTF-8".into() }
        })?;
        Self::from_json(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::LexiconParse { line: e.line(), message: e.to_string() })?;
        let serde_json::Value::Array(items) = value else {
            return Err(Error::LexiconParse {
                line: 1,
                message: "top level must be an array of entries".into(),
            });
        };
        let mut entries = Vec::with_capacity(items.len());
        for (i, item) in items.into_iter().enumerate() {
            let label = item
                .get("lemma")
                .and_then(|l| l.as_str())
                .map_or_else(|| format!("#{i}"), str::to_owned);
            let raw: RawEntry = serde_json::from_value(item)
                .map_err(|e| Error::InvalidEntry { lemma: label.clone(), reason: e.to_string() })?;
            entries.push(raw.into_entry().map_err(|reason| Error::InvalidEntry { lemma: label, reason })?);
        }
        Self::new(entries)
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<RawEntry> = self.entries.iter().map(RawEntry::from).collect();
        serde_json::to_string_pretty(&raw).expect("lexicon serializes")
    }

    /// Bundled lexicon covering the example sentences.
    pub fn starter() -> Self {
        Self::from_json(STARTER_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn get(&self, lemma: &str) -> Option<&LexEntry> {
        self.index.get(lemma).map(|&i| &self.entries[i])
    }

    /// Views in file order; empty for an unknown lemma.
    pub fn lookup(&self, lemma: &str) -> &[View] {
        self.get(lemma).map_or(&[], |e| &e.views)
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest number of words in a lemma.
    pub fn max_lemma_words(&self) -> usize {
        self.entries.iter().map(|e| e.lemma.split(' ').count()).max().unwrap_or(1)
    }
}

pub const STARTER_LEXICON: &str = include_str!("../../../data/lexicon.json");

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawView {
    top: TopCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    material_sub: Option<MaterialSub>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    route_sub: Option<RouteSub>,
    fix: bool,
    esp: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    lemma: String,
    #[serde(default)]
    proper: bool,
    views: Vec<RawView>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nli_rule: Option<NliRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component_function: Option<String>,
}

impl RawEntry {
    fn into_entry(self) -> Result<LexEntry, String> {
        let views = self
            .views
            .into_iter()
            .map(|v| {
                let category = Category::new(v.top, v.material_sub, v.route_sub)?;
                View::new(category, v.fix, v.esp)
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(LexEntry {
            lemma: self.lemma,
            proper: self.proper,
            views,
            nli_rule: self.nli_rule,
            component_function: self.component_function,
        })
    }
}

impl From<&LexEntry> for RawEntry {
    fn from(e: &LexEntry) -> Self {
        RawEntry {
            lemma: e.lemma.clone(),
            proper: e.proper,
            views: e
                .views
                .iter()
                .map(|v| RawView {
                    top: v.category.top(),
                    material_sub: v.category.material_sub(),
                    route_sub: v.category.route_sub(),
                    fix: v.fix,
                    esp: v.esp,
                })
                .collect(),
            nli_rule: e.nli_rule,
            component_function: e.component_function.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(text: &str) -> Result<Lexicon> {
        Lexicon::load(text.as_bytes())
    }

    #[test]
    fn proper_place_loads() {
        let lex = load(
            r#"[{"lemma": "toulouse", "proper": true,
                 "views": [{"top": "material", "material_sub": "place", "fix": true, "esp": true}]}]"#,
        )
        .unwrap();
        let e = lex.get("toulouse").unwrap();
        assert!(e.proper);
        assert_eq!((e.views[0].fix, e.views[0].esp), (true, true));
    }

    #[test]
    fn empty_views_rejected() {
        let err = load(r#"[{"lemma": "vide", "views": []}]"#).unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { ref lemma, .. } if lemma == "vide"));
    }

    #[test]
    fn nli_without_place_view_rejected() {
        let err = load(
            r#"[{"lemma": "extrémité", "nli_rule": "end",
                 "views": [{"top": "material", "material_sub": "object", "fix": true, "esp": false}]}]"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { .. }));
    }

    #[test]
    fn component_noun_needs_object_without_esp() {
        let err = load(
            r#"[{"lemma": "anse", "component_function": "grasp",
                 "views": [{"top": "material", "material_sub": "place", "fix": true, "esp": true}]}]"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { .. }));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = load(
            r#"[{"lemma": "pré", "gender": "m",
                 "views": [{"top": "material", "material_sub": "place", "fix": true, "esp": true}]}]"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { .. }));
        let err = load(
            r#"[{"lemma": "pré",
                 "views": [{"top": "material", "material_sub": "place", "fix": true, "esp": true, "spc": true}]}]"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { .. }));
    }

    #[test]
    fn duplicates_and_syntax_errors() {
        let view = r#"{"top": "substance", "fix": false, "esp": false}"#;
        let dup = format!(r#"[{{"lemma": "eau", "views": [{view}]}}, {{"lemma": "eau", "views": [{view}]}}]"#);
        assert_eq!(load(&dup).unwrap_err(), Error::DuplicateLemma("eau".into()));
        assert!(matches!(load("[\n{\n"), Err(Error::LexiconParse { line: 3, .. })));
        assert!(matches!(Lexicon::load(&[0x5b, 0xff][..]), Err(Error::LexiconParse { .. })));
    }

    #[test]
    fn bad_lemmas_rejected() {
        for lemma in ["Pré", "", "jardin  public", "l'eau", "des", "pomme de terre"] {
            let text = format!(
                r#"[{{"lemma": {lemma:?}, "views": [{{"top": "substance", "fix": false, "esp": false}}]}}]"#
            );
            assert!(matches!(load(&text), Err(Error::InvalidEntry { .. })), "{lemma}");
        }
    }

    #[test]
    fn starter_lookups() {
        let lex = Lexicon::starter();
        let church = lex.lookup("église");
        assert_eq!(church.len(), 2);
        assert!(church[0].is_place_like() && church[0].fix && church[0].esp);
        assert!(church[1].category.is(MaterialSub::Object));

        let knife = lex.lookup("couteau");
        assert_eq!(knife.len(), 1);
        assert!(knife[0].category.is(MaterialSub::Object));
        assert_eq!((knife[0].fix, knife[0].esp), (false, false));

        let rock = lex.lookup("rocher");
        assert_eq!((rock[0].fix, rock[0].esp), (true, false));

        assert!(lex.lookup("licorne").is_empty());
        assert_eq!(lex.get("porte").unwrap().views[0].category.route_sub(), Some(RouteSub::Conduit));
        assert_eq!(lex.get("sentier").unwrap().views[0].category.route_sub(), Some(RouteSub::Path));
        assert_eq!(lex.get("extrémité").unwrap().nli_rule, Some(NliRule::End));
    }

    #[test]
    fn round_trip() {
        let lex = Lexicon::starter();
        assert_eq!(Lexicon::from_json(&lex.to_json()).unwrap(), lex);
    }

    proptest! {
        #[test]
        fn mutated_files_load_or_fail_typed(
            edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..6)
        ) {
            let mut bytes = STARTER_LEXICON.as_bytes().to_vec();
            for (idx, byte) in edits {
                let i = idx.index(bytes.len());
                match byte % 3 {
                    0 => bytes[i] = byte,
                    1 => { bytes.remove(i); }
                    _ => bytes.insert(i, byte),
                }
            }
            match Lexicon::load(&bytes[..]) {
                Ok(lex) => {
                    for e in lex.entries() {
                        prop_assert!(e.validate().is_ok());
                    }
                    prop_assert_eq!(Lexicon::from_json(&lex.to_json()).unwrap(), lex);
                }
                Err(
                    Error::LexiconParse { .. }
                    | Error::InvalidEntry { .. }
                    | Error::DuplicateLemma(_),
                ) => {}
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }
    }
}
