//! Strategies for locating the highest-probability block of scenarios that
//! survives the discard rules.
//!
//! Blocks are runs of scenarios whose probabilities lie within
//! [`BLOCK_TOLERANCE`] of the block's leading (largest) probability.
//! Zero-probability scenarios never form a block.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::registry::{Named, Registry};

use super::scenario::{CombinationSpace, Scenario, ScenarioClass};

pub const BLOCK_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SEARCH: &str = "best-first";

pub trait ScenarioSearch: Named + Send + Sync {
    /// Admissible scenarios of the first block (in decreasing probability)
    /// that contains any. Empty when every block is discarded.
    fn first_admissible_block(&self, space: &CombinationSpace) -> Vec<Scenario>;
}

/// Materializes all `2^n` scenarios and sorts them.
#[derive(Debug, Default)]
pub struct Exhaustive;

impl Named for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }
}

impl ScenarioSearch for Exhaustive {
    fn first_admissible_block(&self, space: &CombinationSpace) -> Vec<Scenario> {
        let n = space.len();
        let mut all: Vec<(u64, f64)> = (0..1u64 << n)
            .map(|mask| (mask, space.probability(mask)))
            .collect();
        all.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scan_blocks(space, all.into_iter())
    }
}

/// Lazily walks scenarios in non-increasing probability order.
///
/// Starting from the all-selected scenario (every degree exceeds 0.5), each
/// deselection multiplies the probability by `(1 - d) / d`. Positions are
/// sorted by that ratio, and subsets are generated with the standard
/// "extend or shift the last element" successor pair so that every subset is
/// reached exactly once and no child outranks its parent.
#[derive(Debug, Default)]
pub struct BestFirst;

impl Named for BestFirst {
    fn name(&self) -> &'static str {
        "best-first"
    }
}

struct Node {
    probability: f64,
    mask: u64,
    /// Index into the ratio-sorted positions of the last deselection.
    last: Option<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.probability
            .total_cmp(&other.probability)
            .then_with(|| other.mask.cmp(&self.mask))
    }
}

struct BestFirstIter<'a> {
    space: &'a CombinationSpace,
    order: Vec<usize>,
    heap: BinaryHeap<Node>,
}

impl<'a> BestFirstIter<'a> {
    fn new(space: &'a CombinationSpace) -> Self {
        let degrees = space.degrees();
        let mut order: Vec<usize> = (0..degrees.len()).collect();
        // Ascending degree is descending (1 - d) / d.
        order.sort_by(|&a, &b| {
            degrees[a]
                .value()
                .total_cmp(&degrees[b].value())
                .then(a.cmp(&b))
        });
        let full = if degrees.is_empty() {
            0
        } else {
            u64::MAX >> (64 - degrees.len())
        };
        let mut heap = BinaryHeap::new();
        heap.push(Node {
            probability: space.probability(full),
            mask: full,
            last: None,
        });
        BestFirstIter { space, order, heap }
    }

    fn push(&mut self, mask: u64, last: usize) {
        self.heap.push(Node {
            probability: self.space.probability(mask),
            mask,
            last: Some(last),
        });
    }
}

impl Iterator for BestFirstIter<'_> {
    type Item = (u64, f64);

    fn next(&mut self) -> Option<(u64, f64)> {
        let node = self.heap.pop()?;
        let next = node.last.map_or(0, |j| j + 1);
        if next < self.order.len() {
            let bit = 1u64 << self.order[next];
            self.push(node.mask & !bit, next);
            if let Some(j) = node.last {
                let restored = node.mask | (1u64 << self.order[j]);
                self.push(restored & !bit, next);
            }
        }
        Some((node.mask, node.probability))
    }
}

impl ScenarioSearch for BestFirst {
    fn first_admissible_block(&self, space: &CombinationSpace) -> Vec<Scenario> {
        scan_blocks(space, BestFirstIter::new(space))
    }
}

/// Consumes `(mask, probability)` pairs in non-increasing probability order.
fn scan_blocks(
    space: &CombinationSpace,
    mut scenarios: impl Iterator<Item = (u64, f64)>,
) -> Vec<Scenario> {
    let n = space.len();
    let mut pending = scenarios.next();
    while let Some((mask, anchor)) = pending {
        if anchor <= 0.0 {
            break;
        }
        let mut admissible = Vec::new();
        let mut current = Some((mask, anchor));
        while let Some((mask, p)) = current {
            if anchor - p > BLOCK_TOLERANCE {
                break;
            }
            if space.classify(mask) == ScenarioClass::Admissible {
                admissible.push(Scenario::from_mask(mask, n, p));
            }
            current = scenarios.next();
        }
        if !admissible.is_empty() {
            admissible.sort_by_key(Scenario::mask);
            return admissible;
        }
        pending = current;
    }
    Vec::new()
}

pub fn search_registry() -> Registry<dyn ScenarioSearch> {
    let mut registry: Registry<dyn ScenarioSearch> = Registry::new("scenario search");
    registry
        .register(Arc::new(BestFirst))
        .expect("fresh registry");
    registry
        .register(Arc::new(Exhaustive))
        .expect("fresh registry");
    registry
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tcl::kb::{Degree, PropertyLiteral};
    use crate::tcl::scenario::TrivialityRule;

    fn inc(lit: &str, d: f64) -> (PropertyLiteral, Degree) {
        (lit.parse().unwrap(), Degree::new(d).unwrap())
    }

    #[test]
    fn best_first_visits_every_subset_in_order() {
        let head = [inc("a", 0.9), inc("b", 0.75), inc("c", 0.75)];
        let modifier = [inc("d", 0.6), inc("e", 1.0)];
        let space =
            CombinationSpace::new(&head, &modifier, &[], TrivialityRule::HeadOnly, 24).unwrap();
        let visited: Vec<(u64, f64)> = BestFirstIter::new(&space).collect();
        assert_eq!(visited.len(), 32);
        let mut masks: Vec<u64> = visited.iter().map(|v| v.0).collect();
        masks.sort_unstable();
        masks.dedup();
        assert_eq!(masks.len(), 32);
        for pair in visited.windows(2) {
            assert!(pair[0].1 + 1e-15 >= pair[1].1, "{:?}", pair);
        }
    }

    #[test]
    fn strategies_agree_on_small_space() {
        let head = [inc("fit", 0.9), inc("young", 0.75)];
        let modifier = [inc("!fit", 0.8)];
        let space =
            CombinationSpace::new(&head, &modifier, &[], TrivialityRule::HeadOnly, 24).unwrap();
        let a = Exhaustive.first_admissible_block(&space);
        let b = BestFirst.first_admissible_block(&space);
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].mask(), 0b001);
        assert!((a[0].probability() - 0.045).abs() < 1e-12);
        assert_eq!(
            a.iter().map(Scenario::mask).collect::<Vec<_>>(),
            b.iter().map(Scenario::mask).collect::<Vec<_>>()
        );
    }

    #[test]
    fn certain_head_leaves_nothing() {
        // With the HEAD inclusion at degree 1, every non-trivial scenario has
        // probability zero.
        let space = CombinationSpace::new(
            &[inc("a", 1.0)],
            &[inc("b", 0.8)],
            &[],
            TrivialityRule::HeadOnly,
            24,
        )
        .unwrap();
        assert!(BestFirst.first_admissible_block(&space).is_empty());
        assert!(Exhaustive.first_admissible_block(&space).is_empty());
    }

    #[test]
    fn registry_lookup() {
        let registry = search_registry();
        assert_eq!(registry.names().collect::<Vec<_>>(), ["best-first", "exhaustive"]);
        assert_eq!(registry.get(DEFAULT_SEARCH).unwrap().name(), "best-first");
        assert!(registry.get("greedy").is_err());
    }
}
