//! Typicality-based concept combination over a propositional-literal
//! knowledge base.
//!
//! Typicality inclusions `p :: T(C) ⊑ D` carry a degree of belief in
//! `(0.5, 1]` and are treated as independent. A scenario picks each inclusion
//! as true or false; its probability is the product of `p` or `1 - p`. To
//! combine a HEAD with a MODIFIER, scenarios are scanned in blocks of equal
//! probability from the most likely downwards, discarding inconsistent,
//! trivial, and MODIFIER-preferring ones, and the first block with survivors
//! defines the compound prototype.

mod combine;
mod kb;
mod scenario;
mod search;

pub use combine::{
    combine, generate_compound_prototypes, CombinedPrototype, Combiner, HeadRule, LiteralDoc,
    PrototypeDocument, TypicalDoc, TypicalProperty, PROTOTYPE_SCHEMA,
};
pub use kb::{
    Concept, ConceptAssertion, Degree, KnowledgeBase, Polarity, PropertyLiteral, RigidInclusion,
    TypicalityInclusion,
};
pub use scenario::{
    classify_scenario, enumerate_scenarios, scenario_probability, CombinationSpace, Scenario,
    ScenarioClass, TrivialityRule, DEFAULT_CAP, MAX_INCLUSIONS,
};
pub use search::{
    search_registry, BestFirst, Exhaustive, ScenarioSearch, BLOCK_TOLERANCE, DEFAULT_SEARCH,
};

use crate::registry::RegistryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TclError {
    #[error("invalid property term `{0}`: must be non-empty lowercase without whitespace")]
    InvalidTerm(String),
    #[error("degree {0} outside (0.5, 1]")]
    InvalidDegree(f64),
    #[error("selection has {selection} entries but there are {inclusions} inclusions")]
    LengthMismatch { selection: usize, inclusions: usize },
    #[error("combination too large: {size} typicality inclusions exceed the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("concept `{0}` has no typicality inclusions")]
    EmptyTypicality(String),
    #[error("missing basic prototype for {0}")]
    MissingBasicPrototype(String),
    #[error("`{subject}` already has a typicality inclusion on `{term}`")]
    DuplicateInclusion { subject: String, term: String },
    #[error("rigid inclusions of `{subject}` contain both `{term}` and its negation")]
    RigidConflict { subject: String, term: String },
    #[error("{head} is not a component of {dyad}")]
    InvalidHead { dyad: String, head: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("prototype document: {0}")]
    Schema(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}
