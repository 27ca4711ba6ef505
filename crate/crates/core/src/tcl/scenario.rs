//! Scenarios over the typicality inclusions of a HEAD/MODIFIER pair and the
//! discard rules applied to them.

use super::kb::{Degree, PropertyLiteral};
use super::TclError;

/// Hard upper bound imposed by the `u64` selection mask.
pub const MAX_INCLUSIONS: usize = 63;
/// Default cap on `|head| + |modifier|`.
pub const DEFAULT_CAP: usize = 24;

/// One true/false choice per inclusion, HEAD inclusions first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    mask: u64,
    len: usize,
    probability: f64,
}

impl Scenario {
    pub(crate) fn from_mask(mask: u64, len: usize, probability: f64) -> Scenario {
        Scenario {
            mask,
            len,
            probability,
        }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn is_selected(&self, index: usize) -> bool {
        index < self.len && self.mask & (1 << index) != 0
    }

    pub fn selection(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.is_selected(i)).collect()
    }
}

/// Product of `degree` for selected and `1 - degree` for unselected inclusions.
pub fn scenario_probability(selection: &[bool], degrees: &[Degree]) -> Result<f64, TclError> {
    if selection.len() != degrees.len() {
        return Err(TclError::LengthMismatch {
            selection: selection.len(),
            inclusions: degrees.len(),
        });
    }
    Ok(selection
        .iter()
        .zip(degrees)
        .map(|(&on, d)| if on { d.value() } else { 1.0 - d.value() })
        .product())
}

pub(crate) fn mask_probability(mask: u64, degrees: &[Degree]) -> f64 {
    degrees
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if mask & (1 << i) != 0 {
                d.value()
            } else {
                1.0 - d.value()
            }
        })
        .product()
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<(), TclError> {
    let cap = cap.min(MAX_INCLUSIONS);
    if n > cap {
        Err(TclError::TooLarge { size: n, cap })
    } else {
        Ok(())
    }
}

/// All `2^n` scenarios over `head ++ modifier`, in mask order.
pub fn enumerate_scenarios(
    head: &[Degree],
    modifier: &[Degree],
    cap: usize,
) -> Result<Vec<Scenario>, TclError> {
    let degrees: Vec<Degree> = head.iter().chain(modifier).copied().collect();
    let n = degrees.len();
    check_cap(n, cap)?;
    Ok((0..1u64 << n)
        .map(|mask| Scenario::from_mask(mask, n, mask_probability(mask, &degrees)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioClass {
    Inconsistent,
    Trivial,
    ModifierPreferring,
    Admissible,
}

/// Which inclusions must all be selected for a scenario to count as trivial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TrivialityRule {
    /// Every consistently inheritable HEAD inclusion is selected.
    #[default]
    HeadOnly,
    /// Every inclusion of either concept not blocked by a rigid literal is selected.
    HeadAndModifier,
}

impl std::str::FromStr for TrivialityRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "head" | "head-only" => Ok(TrivialityRule::HeadOnly),
            "both" | "head-and-modifier" => Ok(TrivialityRule::HeadAndModifier),
            other => Err(format!("unknown triviality rule `{other}`")),
        }
    }
}

/// The inclusions of one HEAD/MODIFIER combination with conflict structure
/// precomputed as bit masks.
#[derive(Debug, Clone)]
pub struct CombinationSpace {
    literals: Vec<PropertyLiteral>,
    degrees: Vec<Degree>,
    head_len: usize,
    rigid: Vec<PropertyLiteral>,
    rigid_inconsistent: bool,
    conflicts: Vec<u64>,
    blocked: u64,
    inheritable_head: u64,
    preferring: u64,
    trivial_required: u64,
}

impl CombinationSpace {
    pub fn new(
        head: &[(PropertyLiteral, Degree)],
        modifier: &[(PropertyLiteral, Degree)],
        rigid: &[PropertyLiteral],
        rule: TrivialityRule,
        cap: usize,
    ) -> Result<CombinationSpace, TclError> {
        let n = head.len() + modifier.len();
        check_cap(n, cap)?;
        let (literals, degrees): (Vec<_>, Vec<_>) = head.iter().chain(modifier).cloned().unzip();
        let head_len = head.len();
        let head_bits = low_bits(head_len);
        let all_bits = low_bits(n);

        let rigid_inconsistent = rigid
            .iter()
            .enumerate()
            .any(|(i, a)| rigid[i + 1..].iter().any(|b| a.conflicts_with(b)));

        let mut conflicts = vec![0u64; n];
        let mut blocked = 0u64;
        for (i, a) in literals.iter().enumerate() {
            for (j, b) in literals.iter().enumerate() {
                if a.conflicts_with(b) {
                    conflicts[i] |= 1 << j;
                }
            }
            if rigid.iter().any(|r| r.conflicts_with(a)) {
                blocked |= 1 << i;
            }
        }
        let inheritable_head = head_bits & !blocked;
        let mut preferring = 0u64;
        for (j, mask) in conflicts.iter().enumerate().skip(head_len) {
            if mask & inheritable_head != 0 {
                preferring |= 1 << j;
            }
        }
        let trivial_required = match rule {
            TrivialityRule::HeadOnly => inheritable_head,
            TrivialityRule::HeadAndModifier => all_bits & !blocked,
        };
        Ok(CombinationSpace {
            literals,
            degrees,
            head_len,
            rigid: rigid.to_vec(),
            rigid_inconsistent,
            conflicts,
            blocked,
            inheritable_head,
            preferring,
            trivial_required,
        })
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn head_len(&self) -> usize {
        self.head_len
    }

    pub fn literals(&self) -> &[PropertyLiteral] {
        &self.literals
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn rigid(&self) -> &[PropertyLiteral] {
        &self.rigid
    }

    pub fn is_head(&self, index: usize) -> bool {
        index < self.head_len
    }

    pub fn probability(&self, mask: u64) -> f64 {
        mask_probability(mask, &self.degrees)
    }

    /// Applies the discard rules in precedence order: inconsistent, trivial,
    /// modifier-preferring, admissible.
    pub fn classify(&self, mask: u64) -> ScenarioClass {
        if self.is_inconsistent(mask) {
            ScenarioClass::Inconsistent
        } else if mask & self.trivial_required == self.trivial_required {
            ScenarioClass::Trivial
        } else if mask & self.preferring != 0 {
            ScenarioClass::ModifierPreferring
        } else {
            ScenarioClass::Admissible
        }
    }

    fn is_inconsistent(&self, mask: u64) -> bool {
        if self.rigid_inconsistent || mask & self.blocked != 0 {
            return true;
        }
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            if self.conflicts[i] & mask != 0 {
                return true;
            }
            rest &= rest - 1;
        }
        false
    }

    /// HEAD inclusions that do not conflict with any rigid literal.
    pub fn inheritable_head(&self) -> u64 {
        self.inheritable_head
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Classifies a scenario built over the given head/modifier/rigid literals.
pub fn classify_scenario(
    scenario: &Scenario,
    head: &[(PropertyLiteral, Degree)],
    modifier: &[(PropertyLiteral, Degree)],
    rigid: &[PropertyLiteral],
    rule: TrivialityRule,
) -> Result<ScenarioClass, TclError> {
    let n = head.len() + modifier.len();
    if scenario.len() != n {
        return Err(TclError::LengthMismatch {
            selection: scenario.len(),
            inclusions: n,
        });
    }
    let space = CombinationSpace::new(head, modifier, rigid, rule, MAX_INCLUSIONS)?;
    Ok(space.classify(scenario.mask()))
}
