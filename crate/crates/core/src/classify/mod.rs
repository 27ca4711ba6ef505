//! Affective classification of items and stories, recommendation across
//! stories, and triple export of the resulting assertions.
//!
//! An item evokes an emotion when its lemma set satisfies every rigid
//! literal of the emotion's prototype and matches at least `threshold` of its
//! typical literals (inclusive; 30% by default).

mod recommend;
mod story;
mod triples;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lexicon::BasicPrototype;
use crate::tcl::{CombinedPrototype, Polarity, PropertyLiteral, TypicalProperty};
use crate::text::ItemProfile;
use crate::wheel::EmotionId;

pub use recommend::{
    recommend, Recommendation, RecommendationEntry, RecommendationKind, RecommendError,
    StoryEntry,
};
pub use story::{
    classify_story, Comments, Emoji, Story, StoryBounds, StoryEmotionProfile, StoryError,
    StoryItem, STORY_SCHEMA,
};
pub use triples::{export_assignments, TRIPLES_SCHEMA};

pub const DEFAULT_THRESHOLD: f64 = 0.30;
/// Slack for the inclusive threshold comparison on ratios like 3/10.
const THRESHOLD_EPSILON: f64 = 1e-12;

/// Prototype of one emotion in the form the classifier consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionPrototype {
    pub emotion: EmotionId,
    pub rigid: Vec<PropertyLiteral>,
    pub typical: Vec<TypicalProperty>,
}

impl EmotionPrototype {
    pub fn from_combined(emotion: EmotionId, p: &CombinedPrototype) -> Self {
        EmotionPrototype {
            emotion,
            rigid: p.rigid.clone(),
            typical: p.typical.clone(),
        }
    }

    pub fn from_basic(p: &BasicPrototype) -> Self {
        EmotionPrototype {
            emotion: p.emotion,
            rigid: p.rigid.clone(),
            typical: p
                .typical
                .iter()
                .map(|(term, degree)| TypicalProperty {
                    literal: PropertyLiteral::positive(term.clone()).expect("normalized term"),
                    degree: *degree,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "id", rename_all = "lowercase")]
pub enum Target {
    Item(String),
    Story(String),
}

impl Target {
    pub fn id(&self) -> &str {
        match self {
            Target::Item(id) | Target::Story(id) => id,
        }
    }
}

/// `target evokes emotion`, with the matched fraction as score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionAssignment {
    pub target: Target,
    pub emotion: EmotionId,
    pub score: f64,
    pub matched: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
}

#[derive(Debug, Clone)]
pub struct Classifier {
    threshold: f64,
    check_rigid: bool,
    translation: BTreeMap<String, String>,
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier {
            threshold: DEFAULT_THRESHOLD,
            check_rigid: true,
            translation: BTreeMap::new(),
        }
    }
}

impl Classifier {
    pub fn new(threshold: f64) -> Result<Self, ClassifyError> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(ClassifyError::InvalidThreshold(threshold));
        }
        Ok(Classifier {
            threshold,
            ..Classifier::default()
        })
    }

    pub fn with_rigid_check(mut self, enabled: bool) -> Self {
        self.check_rigid = enabled;
        self
    }

    /// Item lemma → prototype-language term, applied before matching.
    pub fn with_translation(mut self, map: BTreeMap<String, String>) -> Self {
        self.translation = map;
        self
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    fn lemma_set<'a>(&'a self, profile: &'a ItemProfile) -> std::collections::BTreeSet<&'a str> {
        profile
            .frequencies
            .keys()
            .map(|lemma| {
                self.translation
                    .get(lemma)
                    .map(String::as_str)
                    .unwrap_or(lemma.as_str())
            })
            .collect()
    }

    /// Assignments in prototype order.
    pub fn classify_item(
        &self,
        profile: &ItemProfile,
        prototypes: &[EmotionPrototype],
    ) -> Vec<EmotionAssignment> {
        let lemmas = self.lemma_set(profile);
        let holds = |literal: &PropertyLiteral| match literal.polarity() {
            Polarity::Positive => lemmas.contains(literal.term()),
            Polarity::Negative => !lemmas.contains(literal.term()),
        };
        let mut out = Vec::new();
        for proto in prototypes {
            if proto.typical.is_empty() {
                tracing::warn!(emotion = %proto.emotion, "skipping prototype without typical properties");
                continue;
            }
            if self.check_rigid && !proto.rigid.iter().all(holds) {
                continue;
            }
            let mut matched: Vec<String> = proto
                .typical
                .iter()
                .filter(|t| holds(&t.literal))
                .map(|t| t.literal.to_string())
                .collect();
            let score = matched.len() as f64 / proto.typical.len() as f64;
            if score + THRESHOLD_EPSILON >= self.threshold {
                matched.sort();
                out.push(EmotionAssignment {
                    target: Target::Item(profile.id.clone()),
                    emotion: proto.emotion,
                    score,
                    matched,
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tcl::Degree;

    fn proto(emotion: &str, terms: &[&str]) -> EmotionPrototype {
        EmotionPrototype {
            emotion: EmotionId::from_name(emotion).unwrap(),
            rigid: vec![],
            typical: terms
                .iter()
                .map(|t| TypicalProperty {
                    literal: t.parse().unwrap(),
                    degree: Degree::new(0.8).unwrap(),
                })
                .collect(),
        }
    }

    fn profile(lemmas: &[&str]) -> ItemProfile {
        let w = 1.0 / lemmas.len() as f64;
        ItemProfile {
            id: "item".into(),
            frequencies: lemmas.iter().map(|l| (l.to_string(), w)).collect(),
        }
    }

    const TEN: [&str; 10] = ["t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "t9"];

    #[test]
    fn threshold_is_inclusive() {
        let c = Classifier::default();
        let protos = [proto("Love", &TEN)];
        let hit = c.classify_item(&profile(&["t0", "t1", "t2", "other"]), &protos);
        assert_eq!(hit.len(), 1);
        assert_eq!(hit[0].score, 0.3);
        assert_eq!(hit[0].matched, ["t0", "t1", "t2"]);
        assert!(c.classify_item(&profile(&["t0", "t1", "other"]), &protos).is_empty());
    }

    #[test]
    fn negative_literals_match_on_absence() {
        let c = Classifier::new(0.5).unwrap();
        let protos = [proto("Hope", &["light", "!dark"])];
        assert_eq!(c.classify_item(&profile(&["sky"]), &protos)[0].score, 0.5);
        assert_eq!(c.classify_item(&profile(&["light"]), &protos)[0].score, 1.0);
        assert!(c.classify_item(&profile(&["dark"]), &protos).is_empty());
    }

    #[test]
    fn rigid_literals_gate() {
        let mut p = proto("Awe", &["vast"]);
        p.rigid = vec!["sky".parse().unwrap()];
        let protos = [p];
        let c = Classifier::default();
        assert!(c.classify_item(&profile(&["vast"]), &protos).is_empty());
        assert_eq!(c.classify_item(&profile(&["vast", "sky"]), &protos).len(), 1);
        let lax = Classifier::default().with_rigid_check(false);
        assert_eq!(lax.classify_item(&profile(&["vast"]), &protos).len(), 1);
    }

    #[test]
    fn translation_map() {
        let c = Classifier::default().with_translation(BTreeMap::from([(
            "mare".to_string(),
            "sea".to_string(),
        )]));
        let protos = [proto("Awe", &["sea"])];
        assert_eq!(c.classify_item(&profile(&["mare"]), &protos).len(), 1);
    }

    #[test]
    fn empty_prototype_skipped() {
        let c = Classifier::default();
        assert!(c.classify_item(&profile(&["x"]), &[proto("Awe", &[])]).is_empty());
        assert!(Classifier::new(0.0).is_err());
        assert!(Classifier::new(1.5).is_err());
        assert!(Classifier::new(1.0).is_ok());
    }

    #[test]
    fn assignment_json() {
        let a = EmotionAssignment {
            target: Target::Item("39138".into()),
            emotion: EmotionId::from_name("Love").unwrap(),
            score: 0.5,
            matched: vec!["a".into()],
        };
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            r#"{"target":{"type":"item","id":"39138"},"emotion":"Love","score":0.5,"matched":["a"]}"#
        );
    }
}
