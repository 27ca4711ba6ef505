use std::collections::BTreeMap;
use std::sync::Arc;

use crate::registry::{Named, Registry};

pub const DEFAULT_LEMMATIZER: &str = "suffix";

/// Maps a lowercase token to its lemma.
pub trait Lemmatizer: Named + Send + Sync {
    fn lemmatize(&self, token: &str) -> String;
}

/// Leaves tokens untouched.
#[derive(Debug, Default)]
pub struct IdentityLemmatizer;

impl Named for IdentityLemmatizer {
    fn name(&self) -> &'static str {
        "identity"
    }
}

impl Lemmatizer for IdentityLemmatizer {
    fn lemmatize(&self, token: &str) -> String {
        token.to_string()
    }
}

/// Rule-based stripping of English plural and verbal endings.
///
/// | ending | rewrite | example |
/// |---|---|---|
/// | `sses` | `ss` | glasses → glass |
/// | `ies`, `ied` | `y` | stories → story, worried → worry |
/// | `xes`, `ches`, `shes`, `zes` | drop `es` | boxes → box |
/// | `ss`, `us`, `is`, `ous` | keep | glass, virtus, iris, joyous |
/// | `s` | drop | seas → sea |
/// | `eed` | keep | feed |
/// | `ing`, `ed` | drop, undouble final consonant | running → run, feared → fear |
///
/// A rewrite is applied only if at least three characters of stem remain;
/// `ing`/`ed` also require a vowel in the stem. Only the first matching row
/// applies.
#[derive(Debug, Default)]
pub struct SuffixLemmatizer;

impl Named for SuffixLemmatizer {
    fn name(&self) -> &'static str {
        "suffix"
    }
}

const MIN_STEM: usize = 3;

fn stem_ok(stem: &str) -> bool {
    stem.chars().count() >= MIN_STEM
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn undouble(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    match chars.as_slice() {
        [.., a, b] if a == b && !is_vowel(*a) && !matches!(a, 'l' | 's' | 'z') => {
            chars[..chars.len() - 1].iter().collect()
        }
        _ => stem.to_string(),
    }
}

impl Lemmatizer for SuffixLemmatizer {
    fn lemmatize(&self, token: &str) -> String {
        let replace = |suffix: &str, with: &str| -> Option<String> {
            let stem = token.strip_suffix(suffix)?;
            stem_ok(stem).then(|| format!("{stem}{with}"))
        };
        if token.ends_with("sses") {
            return replace("sses", "ss").unwrap_or_else(|| token.to_string());
        }
        for suffix in ["ies", "ied"] {
            if token.ends_with(suffix) {
                return replace(suffix, "y").unwrap_or_else(|| token.to_string());
            }
        }
        for suffix in ["xes", "ches", "shes", "zes"] {
            if token.ends_with(suffix) {
                return replace("es", "").unwrap_or_else(|| token.to_string());
            }
        }
        if ["ss", "us", "is", "ous"].iter().any(|s| token.ends_with(s)) {
            return token.to_string();
        }
        if token.ends_with('s') {
            return replace("s", "").unwrap_or_else(|| token.to_string());
        }
        if token.ends_with("eed") {
            return token.to_string();
        }
        for suffix in ["ing", "ed"] {
            if let Some(stem) = token.strip_suffix(suffix) {
                if stem_ok(stem) && stem.chars().any(is_vowel) {
                    return undouble(stem);
                }
                return token.to_string();
            }
        }
        token.to_string()
    }
}

/// Dictionary lookup with a fallback lemmatizer for unknown tokens, for
/// plugging in the output of an external tagger.
pub struct DictionaryLemmatizer {
    table: BTreeMap<String, String>,
    fallback: Arc<dyn Lemmatizer>,
}

impl DictionaryLemmatizer {
    pub fn new(table: BTreeMap<String, String>, fallback: Arc<dyn Lemmatizer>) -> Self {
        DictionaryLemmatizer { table, fallback }
    }
}

impl Named for DictionaryLemmatizer {
    fn name(&self) -> &'static str {
        "dictionary"
    }
}

impl Lemmatizer for DictionaryLemmatizer {
    fn lemmatize(&self, token: &str) -> String {
        match self.table.get(token) {
            Some(lemma) => lemma.clone(),
            None => self.fallback.lemmatize(token),
        }
    }
}

pub fn lemmatizer_registry() -> Registry<dyn Lemmatizer> {
    let mut registry: Registry<dyn Lemmatizer> = Registry::new("lemmatizer");
    registry
        .register(Arc::new(SuffixLemmatizer))
        .expect("fresh registry");
    registry
        .register(Arc::new(IdentityLemmatizer))
        .expect("fresh registry");
    registry
}
