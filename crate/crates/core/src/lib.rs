//! Affective sensemaking over the Plutchik wheel.
//!
//! The crate is layered bottom-up:
//!
//! - [`wheel`]: the fixed catalog of 8 basic emotions and 24 dyads, with the
//!   same / similar / opposite relation used to link stories.
//! - [`tcl`]: typicality knowledge bases with degree-labelled inclusions and
//!   the HEAD/MODIFIER combination procedure that produces compound prototypes.
//! - [`lexicon`]: emotion-intensity lexicon parsing and basic prototypes.
//! - [`text`]: item records, tokenization, lemmatization and frequency profiles.
//! - [`classify`]: the threshold classifier, story aggregation, recommendation
//!   and N-Triples export.
//!
//! Interchangeable algorithms (scenario search, lemmatizers) are registered by
//! name in a [`registry::Registry`] and selected at runtime.

pub mod classify;
pub mod lexicon;
pub mod registry;
pub mod tcl;
pub mod text;
pub mod wheel;

pub use wheel::{build_wheel, EmotionId, EmotionRelation, WheelCatalog};
