use std::collections::HashSet;

const ENGLISH: &str = "a about above after again against all am an and any are as at be because been \
before being below between both but by can could did do does doing down during each few for from \
further had has have having he her here hers herself him himself his how i if in into is it its \
itself just me more most my myself no nor not now of off on once only or other our ours ourselves \
out over own same she should so some such than that the their theirs them themselves then there \
these they this those through to too under until up very was we were what when where which while \
who whom why will with would you your yours yourself yourselves also its one two upon";

const ITALIAN: &str = "a ad al alla alle allo agli ai anche ancora avere aveva c che chi ci coi col come \
con contro cui da dal dalla dalle dallo dai dagli degli dei del della delle dello di dove e ed era \
essere fra gli ha hanno ho i il in io la le lei li lo loro lui ma mi mia mie miei mio ne negli nei \
nel nella nelle nello noi non nostra nostro o per perché più quale quando quella quelle quelli \
quello questa queste questi questo se sei si sia sono su sua sue sui sul sulla sulle suo suoi \
tra tu tua tue tuo tuoi un una uno vi voi è sé";

/// Stopword list for a catalog language.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn none() -> Self {
        Stopwords::default()
    }

    pub fn english() -> Self {
        Self::from_words(ENGLISH.split_whitespace())
    }

    pub fn italian() -> Self {
        Self::from_words(ITALIAN.split_whitespace())
    }

    /// `en`, `it`, `en+it` or `none`.
    pub fn for_language(code: &str) -> Option<Self> {
        let mut words = Stopwords::none();
        for part in code.split('+') {
            match part {
                "en" | "english" => words.0.extend(Stopwords::english().0),
                "it" | "italian" => words.0.extend(Stopwords::italian().0),
                "none" => {}
                _ => return None,
            }
        }
        Some(words)
    }

    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        Stopwords(words.into_iter().map(str::to_lowercase).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
