//! Knowledge bases of rigid and degree-labelled typicality inclusions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TclError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// A (possibly negated) property `D` of a concept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PropertyLiteral {
    term: String,
    polarity: Polarity,
}

impl PropertyLiteral {
    pub fn new(term: impl Into<String>, polarity: Polarity) -> Result<Self, TclError> {
        let term = term.into();
        if term.is_empty()
            || term.chars().any(char::is_whitespace)
            || term.chars().any(char::is_uppercase)
            || term.starts_with('!')
        {
            return Err(TclError::InvalidTerm(term));
        }
        Ok(PropertyLiteral { term, polarity })
    }

    pub fn positive(term: impl Into<String>) -> Result<Self, TclError> {
        Self::new(term, Polarity::Positive)
    }

    pub fn negative(term: impl Into<String>) -> Result<Self, TclError> {
        Self::new(term, Polarity::Negative)
    }

    pub fn term(&self) -> &str {
        &self.term
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn negated(&self) -> PropertyLiteral {
        PropertyLiteral {
            term: self.term.clone(),
            polarity: self.polarity.flip(),
        }
    }

    pub fn conflicts_with(&self, other: &PropertyLiteral) -> bool {
        self.term == other.term && self.polarity != other.polarity
    }
}

impl fmt::Display for PropertyLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => f.write_str(&self.term),
            Polarity::Negative => write!(f, "!{}", self.term),
        }
    }
}

impl FromStr for PropertyLiteral {
    type Err = TclError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix('!') {
            Some(rest) => PropertyLiteral::negative(rest),
            None => PropertyLiteral::positive(s),
        }
    }
}

/// Degree of belief of a typicality inclusion, in `(0.5, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Degree(f64);

impl Degree {
    pub fn new(value: f64) -> Result<Degree, TclError> {
        if value > 0.5 && value <= 1.0 {
            Ok(Degree(value))
        } else {
            Err(TclError::InvalidDegree(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(deserializer)?;
        Degree::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidInclusion {
    pub subject: String,
    pub property: PropertyLiteral,
}

/// `degree :: T(subject) ⊑ property`
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityInclusion {
    pub subject: String,
    pub property: PropertyLiteral,
    pub degree: Degree,
}

impl TypicalityInclusion {
    pub fn new(
        subject: impl Into<String>,
        property: PropertyLiteral,
        degree: f64,
    ) -> Result<Self, TclError> {
        Ok(TypicalityInclusion {
            subject: subject.into(),
            property,
            degree: Degree::new(degree)?,
        })
    }
}

/// Concept membership asserted downstream by the classifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConceptAssertion {
    pub individual: String,
    pub concept: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Concept {
    pub rigid: Vec<PropertyLiteral>,
    pub typical: Vec<(PropertyLiteral, Degree)>,
}

/// `K = ⟨R, T, A⟩` restricted to propositional literals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    concepts: BTreeMap<String, Concept>,
    assertions: Vec<ConceptAssertion>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_rigid(&mut self, inclusion: RigidInclusion) -> Result<(), TclError> {
        let concept = self.concepts.entry(inclusion.subject.clone()).or_default();
        if concept
            .rigid
            .iter()
            .any(|l| l.conflicts_with(&inclusion.property))
        {
            return Err(TclError::RigidConflict {
                subject: inclusion.subject,
                term: inclusion.property.term().to_string(),
            });
        }
        if !concept.rigid.contains(&inclusion.property) {
            concept.rigid.push(inclusion.property);
        }
        Ok(())
    }

    /// At most one typicality inclusion per (subject, term).
    pub fn add_typical(&mut self, inclusion: TypicalityInclusion) -> Result<(), TclError> {
        let concept = self.concepts.entry(inclusion.subject.clone()).or_default();
        if concept
            .typical
            .iter()
            .any(|(l, _)| l.term() == inclusion.property.term())
        {
            return Err(TclError::DuplicateInclusion {
                subject: inclusion.subject,
                term: inclusion.property.term().to_string(),
            });
        }
        concept.typical.push((inclusion.property, inclusion.degree));
        Ok(())
    }

    pub fn assert(&mut self, individual: impl Into<String>, concept: impl Into<String>) {
        self.assertions.push(ConceptAssertion {
            individual: individual.into(),
            concept: concept.into(),
        });
    }

    pub fn assertions(&self) -> &[ConceptAssertion] {
        &self.assertions
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.get(name)
    }

    pub fn concepts(&self) -> impl Iterator<Item = (&str, &Concept)> {
        self.concepts.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses the line-oriented KB format:
    ///
    /// ```text
    /// # comment
    /// rigid Athlete human
    /// typ Athlete fit 0.9
    /// typ Sumo !fit 0.8
    /// ```
    pub fn parse(text: &str) -> Result<KnowledgeBase, TclError> {
        let mut kb = KnowledgeBase::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TclError::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["rigid", subject, literal] => {
                    let property = literal.parse().map_err(|e: TclError| err(e.to_string()))?;
                    kb.add_rigid(RigidInclusion {
                        subject: subject.to_string(),
                        property,
                    })
                    .map_err(|e| err(e.to_string()))?;
                }
                ["typ", subject, literal, degree] => {
                    let property = literal.parse().map_err(|e: TclError| err(e.to_string()))?;
                    let degree: f64 = degree
                        .parse()
                        .map_err(|_| err(format!("degree `{degree}` is not a decimal number")))?;
                    let inclusion = TypicalityInclusion::new(*subject, property, degree)
                        .map_err(|e| err(e.to_string()))?;
                    kb.add_typical(inclusion).map_err(|e| err(e.to_string()))?;
                }
                _ => {
                    return Err(err(format!(
                        "expected `rigid <subject> <literal>` or `typ <subject> <literal> <degree>`, got `{line}`"
                    )))
                }
            }
        }
        Ok(kb)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, concept) in &self.concepts {
            for literal in &concept.rigid {
                out.push_str(&format!("rigid {name} {literal}\n"));
            }
            for (literal, degree) in &concept.typical {
                out.push_str(&format!("typ {name} {literal} {}\n", degree.value()));
            }
        }
        out
    }
}
