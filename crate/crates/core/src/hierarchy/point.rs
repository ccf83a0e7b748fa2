use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use crate::game::{Belief, FiniteMeasure, Player};

/// A point of `X_i^n`: an opponent strategy together with the opponent's
/// first `n` belief levels. With `n = 0` it is a bare strategy.
#[derive(Debug, Clone)]
pub struct OrderPoint {
    pub strategy: usize,
    pub beliefs: Vec<Arc<Level>>,
}

/// One belief level: a measure over points of a fixed order.
pub type Level = FiniteMeasure<OrderPoint>;

impl OrderPoint {
    pub fn bare(strategy: usize) -> Self {
        Self {
            strategy,
            beliefs: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.beliefs.len()
    }

    /// The image under the projection `X^n → X^m`, for `m <= n`.
    pub fn truncated(&self, m: usize) -> Self {
        Self {
            strategy: self.strategy,
            beliefs: self.beliefs[..m.min(self.beliefs.len())].to_vec(),
        }
    }
}

impl PartialEq for OrderPoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OrderPoint {}

impl PartialOrd for OrderPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Strategy first, then the belief levels as normal forms. Shared levels
/// compare equal without descending into them.
impl Ord for OrderPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.strategy.cmp(&other.strategy).then_with(|| {
            for (a, b) in self.beliefs.iter().zip(&other.beliefs) {
                if Arc::ptr_eq(a, b) {
                    continue;
                }
                match a.as_ref().cmp(b.as_ref()) {
                    Ordering::Equal => {}
                    unequal => return unequal,
                }
            }
            self.beliefs.len().cmp(&other.beliefs.len())
        })
    }
}

/// A truncated type `δ^1, …, δ^d` of `player`; `levels[k]` is `δ^{k+1}`,
/// a measure over points of order `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    pub player: Player,
    pub levels: Vec<Arc<Level>>,
}

impl Hierarchy {
    pub fn new(player: Player, levels: Vec<Arc<Level>>) -> Self {
        Self { player, levels }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &Level {
        &self.levels[k - 1]
    }

    /// `δ^1` read as a belief over opponent strategies.
    pub fn first_order(&self) -> Option<Belief> {
        self.levels.first().map(|l| l.pushforward(|p| p.strategy))
    }

    pub fn prefix(&self, d: usize) -> Hierarchy {
        Hierarchy::new(self.player, self.levels[..d.min(self.levels.len())].to_vec())
    }

    /// Structural equality that remembers pairs of shared levels already
    /// found equal, so that comparing two independently built hierarchies
    /// stays linear in their shared size.
    pub fn same_as(&self, other: &Hierarchy) -> bool {
        let mut seen = HashSet::new();
        self.player == other.player
            && self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| levels_equal(a, b, &mut seen))
    }
}

fn levels_equal(a: &Arc<Level>, b: &Arc<Level>, seen: &mut HashSet<(usize, usize)>) -> bool {
    if Arc::ptr_eq(a, b) {
        return true;
    }
    let key = (Arc::as_ptr(a) as usize, Arc::as_ptr(b) as usize);
    if seen.contains(&key) {
        return true;
    }
    let equal = a.len() == b.len()
        && a.weights() == b.weights()
        && a.support().iter().zip(b.support()).all(|(p, q)| {
            p.strategy == q.strategy
                && p.beliefs.len() == q.beliefs.len()
                && p.beliefs.iter().zip(&q.beliefs).all(|(x, y)| levels_equal(x, y, seen))
        });
    if equal {
        seen.insert(key);
    }
    equal
}

/// Lifts a belief over opponent strategies to a first level.
pub fn first_level(belief: &Belief) -> Level {
    belief.pushforward(|&t| OrderPoint::bare(t))
}

/// Identity of a shared level, usable as a memo key while the level lives.
pub(crate) fn level_key(level: &Arc<Level>) -> usize {
    Arc::as_ptr(level) as usize
}
