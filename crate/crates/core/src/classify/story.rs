use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{EmotionAssignment, Target};
use crate::wheel::EmotionId;

pub const STORY_SCHEMA: &str = "story/1";

/// The fixed emoji palette offered during annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emoji {
    Love,
    Curiosity,
    Delight,
    Joy,
    Fear,
    Sadness,
    Disgust,
}

/// Template comments: "it reminds me of", "it makes me think of",
/// "it makes me feel".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comments {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reminds: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub think: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feel: Option<String>,
}

impl Comments {
    fn any(&self) -> bool {
        [&self.reminds, &self.think, &self.feel]
            .into_iter()
            .flatten()
            .any(|c| !c.trim().is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoryItem {
    #[serde(rename = "itemId")]
    pub item_id: String,
    #[serde(default)]
    pub emojis: Vec<Emoji>,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub comments: Comments,
}

impl StoryItem {
    pub fn is_annotated(&self) -> bool {
        !self.emojis.is_empty() || self.tags.iter().any(|t| !t.trim().is_empty()) || self.comments.any()
    }
}

/// An ordered, annotated selection of catalog items (`story/1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Story {
    pub id: String,
    #[serde(default)]
    pub title: String,
    pub creator: String,
    pub items: Vec<StoryItem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoryBounds {
    pub min: usize,
    pub max: usize,
}

impl Default for StoryBounds {
    fn default() -> Self {
        StoryBounds { min: 1, max: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StoryError {
    #[error("malformed story: {0}")]
    Json(String),
    #[error("story field `{0}` must not be empty")]
    EmptyField(&'static str),
    #[error("story has {count} items; allowed {min}..={max}")]
    Bounds { count: usize, min: usize, max: usize },
    #[error("item `{0}` appears more than once in the story")]
    RepeatedItem(String),
    #[error("annotation required for item `{0}`")]
    AnnotationRequired(String),
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("invalid story bounds {min}..={max}")]
    InvalidBounds { min: usize, max: usize },
}

impl StoryBounds {
    pub fn new(min: usize, max: usize) -> Result<Self, StoryError> {
        if min == 0 || min > max {
            return Err(StoryError::InvalidBounds { min, max });
        }
        Ok(StoryBounds { min, max })
    }
}

impl Story {
    pub fn parse(json: &str) -> Result<Story, StoryError> {
        serde_json::from_str(json).map_err(|e| StoryError::Json(e.to_string()))
    }

    pub fn item_ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.item_id.as_str())
    }

    /// Structural checks: non-empty ids, size bounds, distinct items, and at
    /// least one annotation per item.
    pub fn validate(&self, bounds: StoryBounds) -> Result<(), StoryError> {
        if self.id.trim().is_empty() {
            return Err(StoryError::EmptyField("id"));
        }
        if self.creator.trim().is_empty() {
            return Err(StoryError::EmptyField("creator"));
        }
        let count = self.items.len();
        if count < bounds.min || count > bounds.max {
            return Err(StoryError::Bounds {
                count,
                min: bounds.min,
                max: bounds.max,
            });
        }
        let mut seen = BTreeSet::new();
        for item in &self.items {
            if !seen.insert(item.item_id.as_str()) {
                return Err(StoryError::RepeatedItem(item.item_id.clone()));
            }
        }
        for item in &self.items {
            if !item.is_annotated() {
                return Err(StoryError::AnnotationRequired(item.item_id.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryEmotionProfile {
    pub story: String,
    pub emotions: BTreeMap<EmotionId, f64>,
}

impl StoryEmotionProfile {
    pub fn is_empty(&self) -> bool {
        self.emotions.is_empty()
    }

    /// Story-level assertions for triple export.
    pub fn assignments(&self) -> Vec<EmotionAssignment> {
        self.emotions
            .iter()
            .map(|(&emotion, &score)| EmotionAssignment {
                target: Target::Story(self.story.clone()),
                emotion,
                score,
                matched: Vec::new(),
            })
            .collect()
    }
}

/// Unions the emotions of a story's items; each score is the mean over the
/// items where the emotion occurs.
pub fn classify_story(
    story: &Story,
    item_assignments: &BTreeMap<String, Vec<EmotionAssignment>>,
) -> Result<StoryEmotionProfile, StoryError> {
    let mut sums: BTreeMap<EmotionId, (f64, usize)> = BTreeMap::new();
    for item in &story.items {
        let assignments = item_assignments
            .get(&item.item_id)
            .ok_or_else(|| StoryError::UnknownItem(item.item_id.clone()))?;
        for a in assignments {
            let slot = sums.entry(a.emotion).or_insert((0.0, 0));
            slot.0 += a.score;
            slot.1 += 1;
        }
    }
    Ok(StoryEmotionProfile {
        story: story.id.clone(),
        emotions: sums
            .into_iter()
            .map(|(e, (sum, n))| (e, sum / n as f64))
            .collect(),
    })
}
