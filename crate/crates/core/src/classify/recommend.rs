use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::StoryEmotionProfile;
use crate::wheel::{EmotionId, EmotionRelation, WheelCatalog};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecommendationKind {
    Same,
    Similar,
    Opposite,
}

impl RecommendationKind {
    pub fn relation(self) -> EmotionRelation {
        match self {
            RecommendationKind::Same => EmotionRelation::Same,
            RecommendationKind::Similar => EmotionRelation::Similar,
            RecommendationKind::Opposite => EmotionRelation::Opposite,
        }
    }

    pub fn as_str(self) -> &'static str {
        self.relation().as_str()
    }
}

impl std::str::FromStr for RecommendationKind {
    type Err = RecommendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "same" => Ok(RecommendationKind::Same),
            "similar" => Ok(RecommendationKind::Similar),
            "opposite" => Ok(RecommendationKind::Opposite),
            other => Err(RecommendError::UnknownKind(other.to_string())),
        }
    }
}

/// A story as seen by the recommender.
#[derive(Debug, Clone, Copy)]
pub struct StoryEntry<'a> {
    pub id: &'a str,
    pub creator: &'a str,
    pub profile: &'a StoryEmotionProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationEntry {
    pub story: String,
    pub relevance: f64,
    /// (source emotion, candidate emotion) realizing the relevance.
    pub pair: (EmotionId, EmotionId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub source: String,
    pub kind: RecommendationKind,
    pub entries: Vec<RecommendationEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecommendError {
    #[error("unknown story `{0}`")]
    UnknownStory(String),
    #[error("no emotions extracted for story `{0}`")]
    EmptyProfile(String),
    #[error("unknown recommendation kind `{0}` (expected same, similar or opposite)")]
    UnknownKind(String),
    #[error("limit must be positive")]
    InvalidLimit,
}

/// Best `(relevance, pair)` linking two profiles under `relation`. Ties on
/// relevance go to the smallest emotion pair.
fn best_pair(
    wheel: &WheelCatalog,
    source: &StoryEmotionProfile,
    candidate: &StoryEmotionProfile,
    relation: EmotionRelation,
) -> Option<(f64, (EmotionId, EmotionId))> {
    let mut best: Option<(f64, (EmotionId, EmotionId))> = None;
    for (&e1, &s1) in &source.emotions {
        for (&e2, &s2) in &candidate.emotions {
            if wheel.relation(e1, e2) != relation {
                continue;
            }
            let relevance = s1 * s2;
            let better = match best {
                None => true,
                Some((r, pair)) => match relevance.total_cmp(&r) {
                    Ordering::Greater => true,
                    Ordering::Equal => (e1, e2) < pair,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((relevance, (e1, e2)));
            }
        }
    }
    best
}

/// Ranks other creators' stories linked to `source` by `kind`.
pub fn recommend(
    wheel: &WheelCatalog,
    source: &str,
    catalog: &[StoryEntry<'_>],
    kind: RecommendationKind,
    limit: usize,
) -> Result<Recommendation, RecommendError> {
    if limit == 0 {
        return Err(RecommendError::InvalidLimit);
    }
    let origin = catalog
        .iter()
        .find(|s| s.id == source)
        .ok_or_else(|| RecommendError::UnknownStory(source.to_string()))?;
    if origin.profile.is_empty() {
        return Err(RecommendError::EmptyProfile(source.to_string()));
    }
    let relation = kind.relation();
    let mut entries: Vec<RecommendationEntry> = catalog
        .iter()
        .filter(|c| c.id != origin.id && c.creator != origin.creator)
        .filter_map(|c| {
            best_pair(wheel, origin.profile, c.profile, relation).map(|(relevance, pair)| {
                RecommendationEntry {
                    story: c.id.to_string(),
                    relevance,
                    pair,
                }
            })
        })
        .collect();
    entries.sort_by(|a, b| {
        b.relevance
            .total_cmp(&a.relevance)
            .then_with(|| a.story.cmp(&b.story))
    });
    entries.truncate(limit);
    Ok(Recommendation {
        source: source.to_string(),
        kind,
        entries,
    })
}
