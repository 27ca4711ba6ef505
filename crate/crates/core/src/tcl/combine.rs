//! HEAD/MODIFIER concept combination and compound-emotion prototypes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::registry::Registry;
use crate::wheel::{EmotionId, WheelCatalog};

use super::kb::{Degree, KnowledgeBase, Polarity, PropertyLiteral};
use super::scenario::{CombinationSpace, TrivialityRule, DEFAULT_CAP};
use super::search::{search_registry, ScenarioSearch, DEFAULT_SEARCH};
use super::TclError;

/// A typical property of a prototype with its degree of belief.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalProperty {
    pub literal: PropertyLiteral,
    pub degree: Degree,
}

/// Prototype of `C = C_H ⊓ C_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedPrototype {
    pub concept: String,
    pub head: String,
    pub modifier: String,
    pub rigid: Vec<PropertyLiteral>,
    /// Sorted by degree descending, then literal.
    pub typical: Vec<TypicalProperty>,
}

impl CombinedPrototype {
    pub fn typical_terms(&self) -> impl Iterator<Item = &str> {
        self.typical.iter().map(|p| p.literal.term())
    }

    pub fn to_document(&self) -> PrototypeDocument {
        PrototypeDocument::new(
            &self.concept,
            Some(&self.head),
            Some(&self.modifier),
            &self.rigid,
            &self.typical,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiteralDoc {
    pub term: String,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalDoc {
    pub term: String,
    pub polarity: Polarity,
    pub degree: Degree,
}

/// `prototype/1` JSON document, shared by basic and combined prototypes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrototypeDocument {
    pub schema: String,
    pub concept: String,
    pub head: Option<String>,
    pub modifier: Option<String>,
    pub rigid: Vec<LiteralDoc>,
    pub typical: Vec<TypicalDoc>,
}

pub const PROTOTYPE_SCHEMA: &str = "prototype/1";

impl PrototypeDocument {
    pub fn new(
        concept: &str,
        head: Option<&str>,
        modifier: Option<&str>,
        rigid: &[PropertyLiteral],
        typical: &[TypicalProperty],
    ) -> PrototypeDocument {
        PrototypeDocument {
            schema: PROTOTYPE_SCHEMA.to_string(),
            concept: concept.to_string(),
            head: head.map(str::to_string),
            modifier: modifier.map(str::to_string),
            rigid: rigid
                .iter()
                .map(|l| LiteralDoc {
                    term: l.term().to_string(),
                    polarity: l.polarity(),
                })
                .collect(),
            typical: typical
                .iter()
                .map(|p| TypicalDoc {
                    term: p.literal.term().to_string(),
                    polarity: p.literal.polarity(),
                    degree: p.degree,
                })
                .collect(),
        }
    }

    pub fn check_schema(&self) -> Result<(), TclError> {
        if self.schema == PROTOTYPE_SCHEMA {
            Ok(())
        } else {
            Err(TclError::Schema(format!(
                "expected schema `{PROTOTYPE_SCHEMA}`, found `{}`",
                self.schema
            )))
        }
    }

    pub fn rigid_literals(&self) -> Result<Vec<PropertyLiteral>, TclError> {
        self.rigid
            .iter()
            .map(|l| PropertyLiteral::new(l.term.clone(), l.polarity))
            .collect()
    }

    pub fn typical_properties(&self) -> Result<Vec<TypicalProperty>, TclError> {
        self.typical
            .iter()
            .map(|t| {
                Ok(TypicalProperty {
                    literal: PropertyLiteral::new(t.term.clone(), t.polarity)?,
                    degree: t.degree,
                })
            })
            .collect()
    }

    pub fn into_combined(self) -> Result<CombinedPrototype, TclError> {
        self.check_schema()?;
        let missing = |field: &str| TclError::Schema(format!("combined prototype lacks `{field}`"));
        Ok(CombinedPrototype {
            rigid: self.rigid_literals()?,
            typical: self.typical_properties()?,
            head: self.head.clone().ok_or_else(|| missing("head"))?,
            modifier: self.modifier.clone().ok_or_else(|| missing("modifier"))?,
            concept: self.concept,
        })
    }
}

/// Runs the combination procedure with a chosen search strategy.
#[derive(Clone)]
pub struct Combiner {
    search: Arc<dyn ScenarioSearch>,
    cap: usize,
    triviality: TrivialityRule,
}

impl Default for Combiner {
    fn default() -> Self {
        Combiner::new(
            search_registry()
                .get(DEFAULT_SEARCH)
                .expect("default search is registered"),
        )
    }
}

impl std::fmt::Debug for Combiner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Combiner")
            .field("search", &self.search.name())
            .field("cap", &self.cap)
            .field("triviality", &self.triviality)
            .finish()
    }
}

impl Combiner {
    pub fn new(search: Arc<dyn ScenarioSearch>) -> Self {
        Combiner {
            search,
            cap: DEFAULT_CAP,
            triviality: TrivialityRule::HeadOnly,
        }
    }

    pub fn from_registry(
        registry: &Registry<dyn ScenarioSearch>,
        name: &str,
    ) -> Result<Self, TclError> {
        Ok(Combiner::new(registry.get(name)?))
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_triviality(mut self, rule: TrivialityRule) -> Self {
        self.triviality = rule;
        self
    }

    pub fn search_name(&self) -> &'static str {
        self.search.name()
    }

    pub fn combine(
        &self,
        kb: &KnowledgeBase,
        head: &str,
        modifier: &str,
    ) -> Result<CombinedPrototype, TclError> {
        let concept = format!("{head}+{modifier}");
        self.combine_named(kb, head, modifier, &concept)
    }

    pub fn combine_named(
        &self,
        kb: &KnowledgeBase,
        head: &str,
        modifier: &str,
        concept: &str,
    ) -> Result<CombinedPrototype, TclError> {
        let lookup = |name: &str| {
            let c = kb
                .concept(name)
                .ok_or_else(|| TclError::UnknownConcept(name.to_string()))?;
            if c.typical.is_empty() {
                return Err(TclError::EmptyTypicality(name.to_string()));
            }
            Ok(c)
        };
        let h = lookup(head)?;
        let m = lookup(modifier)?;

        let rigid: Vec<PropertyLiteral> = h
            .rigid
            .iter()
            .chain(&m.rigid)
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let space = CombinationSpace::new(&h.typical, &m.typical, &rigid, self.triviality, self.cap)?;
        let block = self.search.first_admissible_block(&space);

        let mut selected: BTreeMap<PropertyLiteral, Degree> = BTreeMap::new();
        for scenario in &block {
            for (i, literal) in space.literals().iter().enumerate() {
                if scenario.is_selected(i) {
                    selected
                        .entry(literal.clone())
                        .or_insert_with(|| source_degree(&space, literal));
                }
            }
        }
        let mut typical: Vec<TypicalProperty> = selected
            .into_iter()
            .map(|(literal, degree)| TypicalProperty { literal, degree })
            .collect();
        sort_typical(&mut typical);

        Ok(CombinedPrototype {
            concept: concept.to_string(),
            head: head.to_string(),
            modifier: modifier.to_string(),
            rigid,
            typical,
        })
    }
}

/// HEAD degree wins for a literal present on both sides.
fn source_degree(space: &CombinationSpace, literal: &PropertyLiteral) -> Degree {
    let position = space
        .literals()
        .iter()
        .position(|l| l == literal)
        .expect("literal comes from the space");
    space.degrees()[position]
}

fn sort_typical(typical: &mut [TypicalProperty]) {
    typical.sort_by(|a, b| {
        b.degree
            .value()
            .total_cmp(&a.degree.value())
            .then_with(|| a.literal.cmp(&b.literal))
    });
}

/// Combines `head` and `modifier` with the default search strategy.
pub fn combine(
    kb: &KnowledgeBase,
    head: &str,
    modifier: &str,
) -> Result<CombinedPrototype, TclError> {
    Combiner::default().combine(kb, head, modifier)
}

/// Chooses which component of a dyad acts as HEAD.
#[derive(Debug, Clone, Default)]
pub struct HeadRule {
    overrides: BTreeMap<EmotionId, EmotionId>,
}

impl HeadRule {
    /// Makes `head` the HEAD of `dyad`; `head` must be one of its components.
    pub fn with_override(mut self, dyad: EmotionId, head: EmotionId) -> Result<Self, TclError> {
        match dyad.components() {
            Some((a, b)) if head == a || head == b => {
                self.overrides.insert(dyad, head);
                Ok(self)
            }
            _ => Err(TclError::InvalidHead {
                dyad: dyad.name().to_string(),
                head: head.name().to_string(),
            }),
        }
    }

    /// `(head, modifier)`; by default the component in the lower sector leads.
    pub fn split(&self, dyad: EmotionId) -> Option<(EmotionId, EmotionId)> {
        let (a, b) = dyad.components()?;
        let (lo, hi) = if a.sector() <= b.sector() { (a, b) } else { (b, a) };
        match self.overrides.get(&dyad) {
            Some(&head) if head == hi => Some((hi, lo)),
            _ => Some((lo, hi)),
        }
    }
}

/// One combined prototype per dyad of the wheel. The KB must hold a non-empty
/// typicality set for each basic emotion, keyed by emotion name.
pub fn generate_compound_prototypes(
    wheel: &WheelCatalog,
    kb: &KnowledgeBase,
    head_rule: &HeadRule,
    combiner: &Combiner,
) -> Result<BTreeMap<EmotionId, CombinedPrototype>, TclError> {
    for basic in EmotionId::basics() {
        match kb.concept(basic.name()) {
            Some(c) if !c.typical.is_empty() => {}
            _ => return Err(TclError::MissingBasicPrototype(basic.name().to_string())),
        }
    }
    let dyads: Vec<EmotionId> = EmotionId::dyads().collect();
    debug_assert_eq!(dyads.len(), wheel.dyads().len());
    let results: Vec<Result<(EmotionId, CombinedPrototype), TclError>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = dyads
                .iter()
                .map(|&dyad| {
                    scope.spawn(move || {
                        let (head, modifier) = head_rule.split(dyad).expect("dyad");
                        combiner
                            .combine_named(kb, head.name(), modifier.name(), dyad.name())
                            .map(|p| (dyad, p))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("combination thread panicked"))
                .collect()
        });
    results.into_iter().collect()
}
