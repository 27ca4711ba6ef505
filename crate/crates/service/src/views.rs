//! JSON shapes returned by the HTTP API and printed by the CLI.

use std::collections::BTreeMap;

use affekt_core::classify::{EmotionAssignment, Story};
use affekt_core::EmotionId;
use serde::{Deserialize, Serialize};

use crate::store::{StoredItem, StoredStory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionView {
    pub emotion: EmotionId,
    pub score: f64,
    pub matched: Vec<String>,
}

/// `{id, emotions: [...]}` for one item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemEmotions {
    pub id: String,
    pub emotions: Vec<EmotionView>,
}

impl ItemEmotions {
    pub fn new(id: &str, assignments: &[EmotionAssignment]) -> Self {
        ItemEmotions {
            id: id.to_string(),
            emotions: assignments
                .iter()
                .map(|a| EmotionView {
                    emotion: a.emotion,
                    score: a.score,
                    matched: a.matched.clone(),
                })
                .collect(),
        }
    }

    pub fn of(item: &StoredItem) -> Self {
        ItemEmotions::new(&item.record.id, &item.assignments)
    }
}

/// `{id, emotions: {Name: score}}` for one story.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryEmotions {
    pub id: String,
    pub emotions: BTreeMap<EmotionId, f64>,
}

impl StoryEmotions {
    pub fn of(story: &StoredStory) -> Self {
        StoryEmotions {
            id: story.story.id.clone(),
            emotions: story.profile.emotions.clone(),
        }
    }
}

/// A story together with its profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryDetail {
    pub story: Story,
    pub emotions: BTreeMap<EmotionId, f64>,
}

impl StoryDetail {
    pub fn of(story: &StoredStory) -> Self {
        StoryDetail {
            story: story.story.clone(),
            emotions: story.profile.emotions.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorySummary {
    pub id: String,
    pub title: String,
    pub creator: String,
}

impl StorySummary {
    pub fn of(story: &StoredStory) -> Self {
        StorySummary {
            id: story.story.id.clone(),
            title: story.story.title.clone(),
            creator: story.story.creator.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}
