use thiserror::Error;

use crate::scene::EntityId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("region must contain at least one voxel")]
    EmptyRegion,
    #[error("invalid period [{t0}, {t1}]: start after end")]
    InvalidPeriod { t0: u32, t1: u32 },

    // Lexicon ingestion.
    #[error("lexicon parse error at line {line}: {message}")]
    LexiconParse { line: usize, message: String },
    #[error("duplicate lemma `{0}`")]
    DuplicateLemma(String),
    #[error("invalid lexicon entry `{lemma}`: {reason}")]
    InvalidEntry { lemma: String, reason: String },

    // Scene ingestion.
    #[error("scene parse error at line {line}: {message}")]
    SceneParse { line: usize, message: String },
    #[error("invalid scene: {0}")]
    InvalidScene(String),

    // Queries.
    #[error("unknown entity `{0}`")]
    UnknownEntity(EntityId),
    #[error("entity `{entity}` has no extent at time {time}")]
    MissingExtent { entity: EntityId, time: u32 },
    #[error("category mismatch between part `{part}` and whole `{whole}`")]
    HomogeneityViolation { part: EntityId, whole: EntityId },
    #[error("no part-whole relation holds between `{part}` and `{whole}`")]
    NoRelation { part: EntityId, whole: EntityId },
    #[error("no functional dependence path between `{0}` and `{1}`")]
    NoDependence(EntityId, EntityId),
    #[error("functional dependence graph has a cycle through `{0}`")]
    CycleDetected(EntityId),
    #[error("entity `{0}` has no frontal orientation")]
    MissingOrientation(EntityId),
    #[error("`{0}` is not an internal localization noun")]
    NotAnNli(String),
    #[error("{0} zone is empty for this extent")]
    EmptyZone(&'static str),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("expected a clause with preposition « à »")]
    NotLocativeA,
    #[error("expected a route preposition (« par » or « à travers »)")]
    NotRoutePreposition,
    #[error("expected a noun phrase with a genitive complement")]
    NoGenitive,

    // Parsing.
    #[error("empty input")]
    EmptyInput,
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown word `{lemma}` at byte {position}")]
    UnknownWord { lemma: String, position: usize },
}
