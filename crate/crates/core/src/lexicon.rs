//! Emotion-intensity lexicon ingestion and basic-emotion prototypes.
//!
//! The input is UTF-8 TSV, one `term<TAB>emotion<TAB>intensity` per line, in
//! the layout of the NRC Emotion Intensity Lexicon. Each basic emotion's
//! prototype keeps its `k` most intense terms, with intensities mapped
//! affinely from `(0, 1]` onto degrees in `(0.5, 1]`.

use std::collections::BTreeMap;
use std::io::BufRead;

use crate::tcl::{
    Degree, KnowledgeBase, PropertyLiteral, PrototypeDocument, RigidInclusion, TclError,
    TypicalProperty, TypicalityInclusion,
};
use crate::text::Lemmatizer;
use crate::wheel::EmotionId;

pub const DEFAULT_TOP_K: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("reading lexicon: {0}")]
    Io(#[from] std::io::Error),
    #[error("{malformed} of {total} lexicon lines are malformed; not an emotion-intensity lexicon?")]
    Format { malformed: usize, total: usize },
    #[error("intensity {0} outside (0, 1]")]
    Domain(f64),
    #[error("top-k must be at least 1")]
    InvalidK,
    #[error("no lexicon entries for: {}", .0.join(", "))]
    MissingEmotions(Vec<String>),
    #[error(transparent)]
    Prototype(#[from] TclError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub term: String,
    pub emotion: EmotionId,
    pub intensity: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedLexicon {
    pub entries: Vec<LexiconEntry>,
    pub skipped: usize,
}

fn parse_line(line: &str) -> Option<LexiconEntry> {
    let mut fields = line.split('\t');
    let (term, emotion, intensity) = (fields.next()?, fields.next()?, fields.next()?);
    if fields.next().is_some() {
        return None;
    }
    let term = term.trim().to_lowercase();
    if term.is_empty() || term.chars().any(char::is_whitespace) || term.starts_with('!') {
        return None;
    }
    let emotion = EmotionId::from_name(emotion).filter(|e| e.is_basic())?;
    let intensity: f64 = intensity.trim().parse().ok()?;
    if !(intensity > 0.0 && intensity <= 1.0) {
        return None;
    }
    Some(LexiconEntry {
        term,
        emotion,
        intensity,
    })
}

/// Parses every valid line, counting the rest. Blank lines are ignored.
pub fn parse_lexicon(reader: impl BufRead) -> Result<ParsedLexicon, LexiconError> {
    let mut parsed = ParsedLexicon::default();
    let mut total = 0;
    for line in reader.lines() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        match parse_line(line) {
            Some(entry) => parsed.entries.push(entry),
            None => parsed.skipped += 1,
        }
    }
    if parsed.skipped * 2 > total {
        return Err(LexiconError::Format {
            malformed: parsed.skipped,
            total,
        });
    }
    if parsed.skipped > 0 {
        tracing::warn!(skipped = parsed.skipped, total, "skipped malformed lexicon lines");
    }
    Ok(parsed)
}

/// `0.5 + t / 2`.
pub fn intensity_to_degree(intensity: f64) -> Result<Degree, LexiconError> {
    if !(intensity > 0.0 && intensity <= 1.0) {
        return Err(LexiconError::Domain(intensity));
    }
    Ok(Degree::new(0.5 + intensity / 2.0)?)
}

/// Rewrites terms through a lemmatizer so prototypes and item profiles share
/// one lemma space. Entries that collapse onto the same (lemma, emotion) keep
/// the highest intensity.
pub fn lemmatize_entries(entries: &[LexiconEntry], lemmatizer: &dyn Lemmatizer) -> Vec<LexiconEntry> {
    let mut merged: BTreeMap<(EmotionId, String), f64> = BTreeMap::new();
    for e in entries {
        let lemma = lemmatizer.lemmatize(&e.term);
        if lemma.is_empty() {
            continue;
        }
        let slot = merged.entry((e.emotion, lemma)).or_insert(e.intensity);
        *slot = slot.max(e.intensity);
    }
    merged
        .into_iter()
        .map(|((emotion, term), intensity)| LexiconEntry {
            term,
            emotion,
            intensity,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasicPrototype {
    pub emotion: EmotionId,
    /// Degree descending, ties by term ascending.
    pub typical: Vec<(String, Degree)>,
    pub rigid: Vec<PropertyLiteral>,
}

impl BasicPrototype {
    pub fn to_document(&self) -> PrototypeDocument {
        let typical: Vec<TypicalProperty> = self
            .typical
            .iter()
            .map(|(term, degree)| TypicalProperty {
                literal: PropertyLiteral::positive(term.clone()).expect("normalized term"),
                degree: *degree,
            })
            .collect();
        PrototypeDocument::new(self.emotion.name(), None, None, &self.rigid, &typical)
    }

    pub fn from_document(doc: &PrototypeDocument) -> Result<BasicPrototype, LexiconError> {
        doc.check_schema()?;
        let emotion = EmotionId::from_name(&doc.concept)
            .filter(|e| e.is_basic())
            .ok_or_else(|| {
                TclError::Schema(format!("`{}` is not a basic emotion", doc.concept))
            })?;
        let typical = doc
            .typical_properties()?
            .into_iter()
            .map(|p| (p.literal.term().to_string(), p.degree))
            .collect();
        Ok(BasicPrototype {
            emotion,
            typical,
            rigid: doc.rigid_literals()?,
        })
    }
}

pub fn build_basic_prototypes(
    entries: &[LexiconEntry],
    k: usize,
) -> Result<BTreeMap<EmotionId, BasicPrototype>, LexiconError> {
    if k == 0 {
        return Err(LexiconError::InvalidK);
    }
    let mut per_emotion: BTreeMap<EmotionId, BTreeMap<&str, f64>> = BTreeMap::new();
    for e in entries {
        let slot = per_emotion
            .entry(e.emotion)
            .or_default()
            .entry(e.term.as_str())
            .or_insert(e.intensity);
        *slot = slot.max(e.intensity);
    }
    let missing: Vec<String> = EmotionId::basics()
        .filter(|e| !per_emotion.contains_key(e))
        .map(|e| e.name().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(LexiconError::MissingEmotions(missing));
    }
    per_emotion
        .into_iter()
        .map(|(emotion, terms)| {
            let mut ranked: Vec<(&str, f64)> = terms.into_iter().collect();
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            ranked.truncate(k);
            let typical = ranked
                .into_iter()
                .map(|(term, t)| Ok((term.to_string(), intensity_to_degree(t)?)))
                .collect::<Result<_, LexiconError>>()?;
            Ok((
                emotion,
                BasicPrototype {
                    emotion,
                    typical,
                    rigid: Vec::new(),
                },
            ))
        })
        .collect()
}

/// Loads basic prototypes into a KB whose subjects are emotion names.
pub fn prototypes_to_kb(
    prototypes: &BTreeMap<EmotionId, BasicPrototype>,
) -> Result<KnowledgeBase, TclError> {
    let mut kb = KnowledgeBase::new();
    for p in prototypes.values() {
        let subject = p.emotion.name();
        for literal in &p.rigid {
            kb.add_rigid(RigidInclusion {
                subject: subject.to_string(),
                property: literal.clone(),
            })?;
        }
        for (term, degree) in &p.typical {
            kb.add_typical(TypicalityInclusion::new(
                subject,
                PropertyLiteral::positive(term.clone())?,
                degree.value(),
            )?)?;
        }
    }
    Ok(kb)
}
