//! Coherence, hereditary coherence and local RCBR membership.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::point::{level_key, Hierarchy, Level};
use crate::elimination::BeliefRelation;
use crate::game::Player;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("{path}: point of order {found} where order {expected} is required")]
    Shape { path: String, found: usize, expected: usize },
    #[error("{path}: player {player} has no strategy with index {index}")]
    Strategy { path: String, player: Player, index: usize },
    #[error("level {n} requested from a hierarchy of depth {depth}")]
    TooDeep { n: usize, depth: usize },
    #[error("the fixpoint is empty, so there is nothing to witness")]
    EmptyFixpoint,
    #[error("player {player} strategy `{strategy}` has no justifying belief on the fixpoint")]
    Unjustified { player: Player, strategy: String },
    #[error("belief of player {player} strategy {strategy} puts weight on opponent strategy {opponent}, which has no entry")]
    OpenSupport { player: Player, strategy: usize, opponent: usize },
}

/// Checks orders of all embedded points, and strategy ranges when counts
/// are given.
pub fn validate(h: &Hierarchy, counts: Option<[usize; 2]>) -> Result<(), HierarchyError> {
    let mut seen = HashSet::new();
    for (k, level) in h.levels.iter().enumerate() {
        let path = format!("player {} level {}", h.player, k + 1);
        validate_level(level, h.player, k, counts, &path, &mut seen)?;
    }
    Ok(())
}

fn validate_level(
    level: &Arc<Level>,
    owner: Player,
    order: usize,
    counts: Option<[usize; 2]>,
    path: &str,
    seen: &mut HashSet<(usize, Player, usize)>,
) -> Result<(), HierarchyError> {
    if !seen.insert((level_key(level), owner, order)) {
        return Ok(());
    }
    let opponent = owner.other();
    for (n, point) in level.support().iter().enumerate() {
        let here = format!("{path} > point {}", n + 1);
        if point.order() != order {
            return Err(HierarchyError::Shape {
                path: here,
                found: point.order(),
                expected: order,
            });
        }
        if let Some(counts) = counts {
            if point.strategy >= counts[opponent.index()] {
                return Err(HierarchyError::Strategy {
                    path: here,
                    player: opponent,
                    index: point.strategy,
                });
            }
        }
        for (m, inner) in point.beliefs.iter().enumerate() {
            let inner_path = format!("{here} > level {}", m + 1);
            validate_level(inner, opponent, m, counts, &inner_path, seen)?;
        }
    }
    Ok(())
}

fn levels_coherent(levels: &[Arc<Level>]) -> bool {
    levels.windows(2).enumerate().all(|(k, pair)| {
        // δ^{k+2} projected to order k points must equal δ^{k+1}
        pair[1].pushforward(|p| p.truncated(k)) == *pair[0]
    })
}

/// The marginal chain `marg δ^{k+1} = δ^k` of the top-level sequence.
pub fn check_coherent(h: &Hierarchy) -> Result<bool, HierarchyError> {
    validate(h, None)?;
    Ok(levels_coherent(&h.levels))
}

/// Coherence of the sequence and, recursively, of every sequence embedded
/// in a support point.
pub fn check_hereditarily_coherent(h: &Hierarchy) -> Result<bool, HierarchyError> {
    validate(h, None)?;
    let mut memo = HashMap::new();
    Ok(hereditary(&h.levels, &mut memo))
}

fn key(levels: &[Arc<Level>]) -> Vec<usize> {
    levels.iter().map(level_key).collect()
}

fn hereditary(levels: &[Arc<Level>], memo: &mut HashMap<Vec<usize>, bool>) -> bool {
    let k = key(levels);
    if let Some(&known) = memo.get(&k) {
        return known;
    }
    let ok = levels_coherent(levels)
        && levels
            .iter()
            .all(|level| level.support().iter().all(|p| hereditary(&p.beliefs, memo)));
    memo.insert(k, ok);
    ok
}

/// Local RCBR at level `n`: level 1 asks that `(s, δ^1)` be in the
/// relation; level `n` additionally asks that `δ^n` concentrate on opponent
/// points passing level `n - 1`.
pub fn check_rcbr_star<R: BeliefRelation + ?Sized>(
    relation: &R,
    player: Player,
    s: usize,
    h: &Hierarchy,
    n: usize,
) -> Result<bool, HierarchyError> {
    if n > h.depth() {
        return Err(HierarchyError::TooDeep { n, depth: h.depth() });
    }
    let counts = [relation.num_strategies(Player::One), relation.num_strategies(Player::Two)];
    validate(h, Some(counts))?;
    if s >= counts[player.index()] {
        return Err(HierarchyError::Strategy {
            path: format!("player {player} root"),
            player,
            index: s,
        });
    }
    let mut memo = HashMap::new();
    Ok(rcbr(relation, player, s, &h.levels[..n], &mut memo))
}

/// Largest `n <= depth` at which `check_rcbr_star` holds, 0 if none.
pub fn rcbr_level<R: BeliefRelation + ?Sized>(
    relation: &R,
    player: Player,
    s: usize,
    h: &Hierarchy,
) -> Result<usize, HierarchyError> {
    let mut best = 0;
    for n in 1..=h.depth() {
        if !check_rcbr_star(relation, player, s, h, n)? {
            break;
        }
        best = n;
    }
    Ok(best)
}

type RcbrMemo = HashMap<(Player, usize, Vec<usize>), bool>;

fn rcbr<R: BeliefRelation + ?Sized>(
    relation: &R,
    player: Player,
    s: usize,
    levels: &[Arc<Level>],
    memo: &mut RcbrMemo,
) -> bool {
    let n = levels.len();
    if n == 0 {
        return true;
    }
    let k = (player, s, key(levels));
    if let Some(&known) = memo.get(&k) {
        return known;
    }
    let ok = if n == 1 {
        relation.relates(player, s, &levels[0].pushforward(|p| p.strategy))
    } else {
        rcbr(relation, player, s, &levels[..n - 1], memo)
            && levels[n - 1]
                .support()
                .iter()
                .all(|p| rcbr(relation, player.other(), p.strategy, &p.beliefs, memo))
    };
    memo.insert(k, ok);
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{examples, Belief, FiniteMeasure};
    use crate::hierarchy::point::{first_level, OrderPoint};

    /// `δ^1 = δ_t`, `δ^{k+1}` = Dirac at `(t, δ^1..δ^k)` with the same chain
    /// standing in for the opponent's levels: valid for symmetric fixpoints.
    fn dirac_hierarchy(player: Player, t: usize, depth: usize) -> Hierarchy {
        let mut levels: Vec<Arc<Level>> = vec![Arc::new(first_level(&Belief::dirac(t)))];
        while levels.len() < depth {
            let point = OrderPoint {
                strategy: t,
                beliefs: levels.clone(),
            };
            levels.push(Arc::new(FiniteMeasure::dirac(point)));
        }
        Hierarchy::new(player, levels)
    }

    #[test]
    fn all_dirac_pd() {
        let g = examples::prisoners_dilemma();
        let h = dirac_hierarchy(Player::One, 1, 3);
        assert!(check_coherent(&h).unwrap());
        assert!(check_hereditarily_coherent(&h).unwrap());
        for n in 1..=3 {
            assert!(check_rcbr_star(&g, Player::One, 1, &h, n).unwrap());
            assert!(!check_rcbr_star(&g, Player::One, 0, &h, n).unwrap());
        }
        assert!(matches!(
            check_rcbr_star(&g, Player::One, 1, &h, 4),
            Err(HierarchyError::TooDeep { .. })
        ));
    }

    #[test]
    fn broken_chain() {
        let mut h = dirac_hierarchy(Player::One, 1, 3);
        let d1 = Arc::new(first_level(&Belief::dirac(1)));
        h.levels[1] = Arc::new(FiniteMeasure::dirac(OrderPoint {
            strategy: 0,
            beliefs: vec![d1],
        }));
        assert!(!check_coherent(&h).unwrap());
    }

    #[test]
    fn cascade_level_two_fails_through_y() {
        let g = examples::cascade();
        // δ^1 = δ_y; δ^2 = Dirac at (y, δ^1_y) for some belief of y's owner
        let d1 = Arc::new(first_level(&Belief::dirac(1)));
        let y_belief = Arc::new(first_level(&Belief::dirac(1)));
        let d2 = Arc::new(FiniteMeasure::dirac(OrderPoint {
            strategy: 1,
            beliefs: vec![y_belief],
        }));
        let h = Hierarchy::new(Player::One, vec![d1, d2]);
        assert!(check_hereditarily_coherent(&h).unwrap());
        assert!(check_rcbr_star(&g, Player::One, 1, &h, 1).unwrap());
        assert!(!check_rcbr_star(&g, Player::One, 1, &h, 2).unwrap());
    }

    #[test]
    fn shape_errors_have_paths() {
        let d1 = Arc::new(first_level(&Belief::dirac(0)));
        let bad = Hierarchy::new(Player::One, vec![Arc::new(FiniteMeasure::dirac(OrderPoint {
            strategy: 0,
            beliefs: vec![d1],
        }))]);
        let err = check_coherent(&bad).unwrap_err();
        assert_eq!(err.to_string(), "player 1 level 1 > point 1: point of order 1 where order 0 is required");
        let g = examples::prisoners_dilemma();
        let out_of_range = Hierarchy::new(Player::One, vec![Arc::new(first_level(&Belief::dirac(5)))]);
        assert!(matches!(
            check_rcbr_star(&g, Player::One, 1, &out_of_range, 1),
            Err(HierarchyError::Strategy { index: 5, .. })
        ));
    }
}
