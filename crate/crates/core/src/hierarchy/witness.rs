//! Witness hierarchies for the survivors of elimination.
//!
//! Given a belief map `μ^i` on the survivors whose beliefs stay inside the
//! opponent's survivors, the levels are `δ^1(s) = μ^i(s)` and
//! `δ^{k+1}(s)` = pushforward of `μ^i(s)` under
//! `t ↦ (t, δ_j^1(t), …, δ_j^k(t))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::check::{check_hereditarily_coherent, check_rcbr_star, HierarchyError};
use super::point::{first_level, Hierarchy, Level, OrderPoint};
use crate::elimination::{BeliefRelation, EliminationTrace};
use crate::game::{Belief, Player};

pub const DEFAULT_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub belief: Belief,
    pub hierarchy: Hierarchy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMap {
    pub depth: usize,
    pub entries: [BTreeMap<usize, WitnessEntry>; 2],
}

/// Builds the hierarchies induced by a belief map. Every belief must put
/// its weight on opponent strategies that have an entry.
pub fn lift_belief_map(beliefs: [BTreeMap<usize, Belief>; 2], depth: usize) -> Result<WitnessMap, HierarchyError> {
    for player in Player::BOTH {
        let opponent = &beliefs[player.other().index()];
        for (&s, mu) in &beliefs[player.index()] {
            if let Some(&t) = mu.support().iter().find(|t| !opponent.contains_key(t)) {
                return Err(HierarchyError::OpenSupport {
                    player,
                    strategy: s,
                    opponent: t,
                });
            }
        }
    }
    let mut levels: [BTreeMap<usize, Vec<Arc<Level>>>; 2] = [0, 1].map(|i| {
        beliefs[i]
            .iter()
            .map(|(&s, mu)| (s, vec![Arc::new(first_level(mu))]))
            .collect()
    });
    for k in 1..depth {
        let next: [Vec<(usize, Arc<Level>)>; 2] = [0, 1].map(|i| {
            let opponent = &levels[1 - i];
            beliefs[i]
                .iter()
                .map(|(&s, mu)| {
                    let level = mu.pushforward(|&t| OrderPoint {
                        strategy: t,
                        beliefs: opponent[&t][..k].to_vec(),
                    });
                    (s, Arc::new(level))
                })
                .collect()
        });
        for (i, built) in next.into_iter().enumerate() {
            for (s, level) in built {
                levels[i].get_mut(&s).expect("entry exists").push(level);
            }
        }
    }
    let entries = [Player::One, Player::Two].map(|player| {
        let i = player.index();
        beliefs[i]
            .iter()
            .map(|(&s, mu)| {
                let hierarchy = Hierarchy::new(player, levels[i][&s].clone());
                (
                    s,
                    WitnessEntry {
                        belief: mu.clone(),
                        hierarchy,
                    },
                )
            })
            .collect()
    });
    Ok(WitnessMap {
        depth: if beliefs.iter().all(BTreeMap::is_empty) { 0 } else { depth },
        entries,
    })
}

/// The canonical belief of every survivor against the fixpoint of `trace`.
pub fn canonical_beliefs<R: BeliefRelation + ?Sized>(
    relation: &R,
    trace: &EliminationTrace,
) -> Result<[BTreeMap<usize, Belief>; 2], HierarchyError> {
    let fixpoint = trace.final_rectangle();
    if fixpoint.is_empty() {
        return Err(HierarchyError::EmptyFixpoint);
    }
    let mut out: [BTreeMap<usize, Belief>; 2] = Default::default();
    for player in Player::BOTH {
        for &s in fixpoint.side(player) {
            let mu = relation
                .justify(player, s, fixpoint.side(player.other()))
                .ok_or_else(|| HierarchyError::Unjustified {
                    player,
                    strategy: relation.strategy_id(player, s).to_string(),
                })?;
            out[player.index()].insert(s, mu);
        }
    }
    Ok(out)
}

/// Witness hierarchies of depth `depth` for every survivor of `trace`.
pub fn build_witness<R: BeliefRelation + ?Sized>(
    relation: &R,
    trace: &EliminationTrace,
    depth: usize,
) -> Result<WitnessMap, HierarchyError> {
    lift_belief_map(canonical_beliefs(relation, trace)?, depth)
}

impl WitnessMap {
    pub fn get(&self, player: Player, s: usize) -> Option<&WitnessEntry> {
        self.entries[player.index()].get(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Player, usize, &WitnessEntry)> {
        Player::BOTH
            .into_iter()
            .flat_map(move |p| self.entries[p.index()].iter().map(move |(&s, e)| (p, s, e)))
    }

    /// Every support point of `δ^{k+1}(s)` is `(t, δ_j^1(t), …, δ_j^k(t))`
    /// for the opponent's own entry at `t`.
    pub fn check_graph_concentration(&self) -> bool {
        self.iter().all(|(player, _, entry)| {
            let opponent = &self.entries[player.other().index()];
            entry.hierarchy.levels.iter().enumerate().all(|(k, level)| {
                level.support().iter().all(|p| {
                    opponent
                        .get(&p.strategy)
                        .is_some_and(|e| p.beliefs[..] == e.hierarchy.levels[..k])
                })
            })
        })
    }

    /// Re-checks every entry: hereditary coherence, local RCBR at each
    /// level, first level equal to the recorded belief, and graph
    /// concentration.
    pub fn verify<R: BeliefRelation + ?Sized>(&self, relation: &R) -> Result<(), String> {
        if !self.check_graph_concentration() {
            return Err("a level leaves the graph of the opponent's witness map".into());
        }
        let entries: Vec<(Player, usize, &WitnessEntry)> = self.iter().collect();
        entries.par_iter().try_for_each(|&(player, s, entry)| {
            let id = relation.strategy_id(player, s);
            let h = &entry.hierarchy;
            if h.depth() != self.depth || h.player != player {
                return Err(format!("player {player} `{id}`: hierarchy has the wrong shape"));
            }
            if h.first_order().as_ref() != Some(&entry.belief) {
                return Err(format!("player {player} `{id}`: first level differs from the recorded belief"));
            }
            if !check_hereditarily_coherent(h).map_err(|e| e.to_string())? {
                return Err(format!("player {player} `{id}`: not hereditarily coherent"));
            }
            for n in 1..=self.depth {
                if !check_rcbr_star(relation, player, s, h, n).map_err(|e| e.to_string())? {
                    return Err(format!("player {player} `{id}`: fails local RCBR at level {n}"));
                }
            }
            Ok(())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::{eliminate, Concept, PolyhedralRelation};
    use crate::exact::rational::rat;
    use crate::game::{examples, FiniteMeasure};
    use crate::hierarchy::check::check_coherent;

    #[test]
    fn pd_all_dirac() {
        let g = examples::prisoners_dilemma();
        let trace = eliminate(&g, Concept::Rat).unwrap();
        let w = build_witness(&g, &trace, 4).unwrap();
        let h = &w.get(Player::One, 1).unwrap().hierarchy;
        assert_eq!(h.first_order(), Some(Belief::dirac(1)));
        for level in &h.levels {
            assert_eq!(level.len(), 1);
            assert_eq!(level.support()[0].strategy, 1);
        }
        let d1 = h.levels[0].clone();
        assert_eq!(*h.levels[1], FiniteMeasure::dirac(OrderPoint { strategy: 1, beliefs: vec![d1] }));
        w.verify(&g).unwrap();
        assert!(w.get(Player::One, 0).is_none());
    }

    #[test]
    fn cascade_witness() {
        let g = examples::cascade();
        let trace = eliminate(&g, Concept::Rat).unwrap();
        let w = build_witness(&g, &trace, 4).unwrap();
        assert_eq!(w.get(Player::One, 0).unwrap().belief, Belief::dirac(0));
        assert_eq!(w.get(Player::Two, 0).unwrap().belief, Belief::dirac(0));
        w.verify(&g).unwrap();
    }

    #[test]
    fn pennies_deterministic() {
        let g = examples::matching_pennies();
        let trace = eliminate(&g, Concept::Rat).unwrap();
        let a = build_witness(&g, &trace, 6).unwrap();
        let b = build_witness(&g, &trace, 6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries[0].len(), 2);
        assert_eq!(a.entries[1].len(), 2);
        a.verify(&g).unwrap();
        assert!(a.check_graph_concentration());
        // the relation form of the game gives the same beliefs
        let e = PolyhedralRelation::from_game(&g);
        let c = build_witness(&e, &trace, 6).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn every_example_verifies_at_depth_eight() {
        for g in examples::all() {
            for concept in Concept::GAME_CONCEPTS {
                let trace = eliminate(&g, concept).unwrap();
                let w = build_witness(&g, &trace, DEFAULT_DEPTH).unwrap();
                w.verify(&g).unwrap();
                for (_, _, e) in w.iter() {
                    assert!(check_coherent(&e.hierarchy).unwrap());
                }
            }
        }
    }

    #[test]
    fn open_support_rejected() {
        let mut beliefs: [BTreeMap<usize, Belief>; 2] = Default::default();
        beliefs[0].insert(0, Belief::from_pairs([(0, rat(1, 2)), (1, rat(1, 2))]).unwrap());
        beliefs[1].insert(0, Belief::dirac(0));
        assert!(matches!(
            lift_belief_map(beliefs, 3),
            Err(HierarchyError::OpenSupport { opponent: 1, .. })
        ));
    }
}
