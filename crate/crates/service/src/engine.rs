//! Prototype building and the per-item/per-story analysis the store applies.

use std::collections::BTreeMap;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use affekt_core::classify::{
    classify_story, Classifier, EmotionAssignment, EmotionPrototype, Story, StoryBounds,
    StoryEmotionProfile, StoryError,
};
use affekt_core::lexicon::{
    build_basic_prototypes, lemmatize_entries, parse_lexicon, prototypes_to_kb, BasicPrototype,
    LexiconError,
};
use affekt_core::tcl::{
    generate_compound_prototypes, search_registry, CombinedPrototype, Combiner, HeadRule,
    PrototypeDocument, TclError,
};
use affekt_core::text::{
    lemmatizer_registry, ItemProfile, ItemRecord, Lemmatizer, Stopwords, TextError, TextPipeline,
};
use affekt_core::{build_wheel, EmotionId};
use serde::{Deserialize, Serialize};

use crate::config::ServiceConfig;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("no lexicon configured (set `lexicon` or pass --lexicon)")]
    NoLexicon,
    #[error("lexicon {path}: {source}")]
    Lexicon { path: String, source: LexiconError },
    #[error("translation map {path}: {message}")]
    Translation { path: String, message: String },
    #[error(transparent)]
    Tcl(#[from] TclError),
    #[error("prototype set: {0}")]
    Prototypes(String),
}

/// Basic prototypes from the lexicon plus one combined prototype per dyad.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeSet {
    pub basic: BTreeMap<EmotionId, BasicPrototype>,
    pub compound: BTreeMap<EmotionId, CombinedPrototype>,
}

/// Serialized form of a [`PrototypeSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrototypeSetDocument {
    pub basic: Vec<PrototypeDocument>,
    pub compound: Vec<PrototypeDocument>,
}

impl PrototypeSet {
    pub fn to_document(&self) -> PrototypeSetDocument {
        PrototypeSetDocument {
            basic: self.basic.values().map(BasicPrototype::to_document).collect(),
            compound: self.compound.values().map(CombinedPrototype::to_document).collect(),
        }
    }

    pub fn from_document(doc: &PrototypeSetDocument) -> Result<PrototypeSet, EngineError> {
        let mut basic = BTreeMap::new();
        for d in &doc.basic {
            let p = BasicPrototype::from_document(d).map_err(|e| EngineError::Prototypes(e.to_string()))?;
            basic.insert(p.emotion, p);
        }
        let mut compound = BTreeMap::new();
        for d in &doc.compound {
            let p = d.clone().into_combined()?;
            let dyad = EmotionId::from_name(&p.concept)
                .filter(|e| !e.is_basic())
                .ok_or_else(|| EngineError::Prototypes(format!("`{}` is not a dyad", p.concept)))?;
            compound.insert(dyad, p);
        }
        if basic.len() != 8 || compound.len() != 24 {
            return Err(EngineError::Prototypes(format!(
                "expected 8 basic and 24 compound prototypes, found {} and {}",
                basic.len(),
                compound.len()
            )));
        }
        Ok(PrototypeSet { basic, compound })
    }

    /// Classifier input, basics first when included.
    pub fn classifier_prototypes(&self, include_basics: bool) -> Vec<EmotionPrototype> {
        let basics = self
            .basic
            .values()
            .filter(|_| include_basics)
            .map(EmotionPrototype::from_basic);
        let compounds = self
            .compound
            .iter()
            .map(|(&e, p)| EmotionPrototype::from_combined(e, p));
        basics.chain(compounds).collect()
    }
}

pub fn lemmatizer(config: &ServiceConfig) -> Arc<dyn Lemmatizer> {
    lemmatizer_registry()
        .get(&config.lemmatizer)
        .expect("validated lemmatizer")
}

pub fn combiner(config: &ServiceConfig) -> Combiner {
    Combiner::from_registry(&search_registry(), &config.search)
        .expect("validated search")
        .with_triviality(config.triviality)
}

pub fn head_rule(config: &ServiceConfig) -> Result<HeadRule, TclError> {
    config
        .heads
        .iter()
        .try_fold(HeadRule::default(), |rule, (&dyad, &head)| rule.with_override(dyad, head))
}

/// Reads the lexicon into lemmatized basic prototypes.
pub fn build_basics(
    lexicon: &Path,
    config: &ServiceConfig,
) -> Result<BTreeMap<EmotionId, BasicPrototype>, EngineError> {
    let file = std::fs::File::open(lexicon).map_err(|source| EngineError::Io {
        path: lexicon.display().to_string(),
        source,
    })?;
    let lexicon_err = |source| EngineError::Lexicon {
        path: lexicon.display().to_string(),
        source,
    };
    let parsed = parse_lexicon(BufReader::new(file)).map_err(lexicon_err)?;
    let entries = lemmatize_entries(&parsed.entries, lemmatizer(config).as_ref());
    build_basic_prototypes(&entries, config.top_k).map_err(lexicon_err)
}

/// Reads the lexicon and derives all 32 prototypes.
pub fn build_prototypes(lexicon: &Path, config: &ServiceConfig) -> Result<PrototypeSet, EngineError> {
    let basic = build_basics(lexicon, config)?;
    let kb = prototypes_to_kb(&basic)?;
    let compound =
        generate_compound_prototypes(&build_wheel(), &kb, &head_rule(config)?, &combiner(config))?;
    Ok(PrototypeSet { basic, compound })
}

fn load_translation(path: &Path) -> Result<BTreeMap<String, String>, EngineError> {
    let text = std::fs::read_to_string(path).map_err(|source| EngineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| EngineError::Translation {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Text pipeline, classifier and story rules: everything that turns stored
/// inputs into derived state.
#[derive(Debug, Clone)]
pub struct Analyzer {
    pub pipeline: TextPipeline,
    pub classifier: Classifier,
    pub bounds: StoryBounds,
    pub include_basics: bool,
}

impl Analyzer {
    pub fn from_config(config: &ServiceConfig) -> Result<Analyzer, EngineError> {
        let stopwords = Stopwords::for_language(&config.language).expect("validated language");
        let mut classifier = Classifier::new(config.threshold)
            .expect("validated threshold")
            .with_rigid_check(config.rigid_check);
        if let Some(path) = &config.translation {
            classifier = classifier.with_translation(load_translation(path)?);
        }
        Ok(Analyzer {
            pipeline: TextPipeline::new(stopwords, lemmatizer(config)),
            classifier,
            bounds: config.bounds,
            include_basics: config.include_basics,
        })
    }

    pub fn analyze_item(
        &self,
        item: &ItemRecord,
        prototypes: &[EmotionPrototype],
    ) -> Result<(ItemProfile, Vec<EmotionAssignment>), TextError> {
        let profile = self.pipeline.profile(item)?;
        let assignments = self.classifier.classify_item(&profile, prototypes);
        Ok((profile, assignments))
    }

    pub fn analyze_story(
        &self,
        story: &Story,
        item_assignments: &BTreeMap<String, Vec<EmotionAssignment>>,
    ) -> Result<StoryEmotionProfile, StoryError> {
        story.validate(self.bounds)?;
        classify_story(story, item_assignments)
    }
}
