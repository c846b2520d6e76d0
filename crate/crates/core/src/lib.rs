//! Spatial entities and part-whole relations for a controlled fragment of
//! French locative language.
//!
//! Entities carry one or more category views with `fix`/`esp` features.
//! A clause `X est à Y` is accepted when some view of `Y` denotes a fixed
//! portion of space, made specific by its determiner. Genitive phrases are
//! classified into part-whole relations over a voxel scene.

pub mod error;
pub mod lexicon;
pub mod meronomy;
pub mod ontology;
pub mod parser;
pub mod scene;
pub mod selftest;
pub mod semantics;
pub mod substrate;

pub use error::{Error, Result};
pub use lexicon::{LexEntry, Lexicon, NliRule};
pub use meronomy::{classify, explain, transitive_parts, PartWholeRelation};
pub use ontology::{Category, Definiteness, GeometryParams, View};
pub use parser::{parse, tokenize, Ast, NounPhrase, Preposition};
pub use scene::{EntityId, EntityRecord, Scene};
pub use semantics::{judge_a, judge_genitive, resolve_nli, Judgment, Reason, Verdict};
pub use substrate::{Period, Region, Voxel};
