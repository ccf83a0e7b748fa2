//! Strategy-belief relations with polyhedral slices.

use std::borrow::Cow;
use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::exact::lp::{infeasibility_certificate, lp_feasible, Constraint, LinearSystem, Relation};
use crate::exact::Rational;
use crate::game::{Belief, Game, Player};
use crate::response::{belief_from_point, restrict_support, simplex_system, BeliefPolyhedron};

/// A relation `E_i ⊆ X_i × Δ(X_j)` for both players, given slice by slice:
/// for each strategy `s`, the set `{μ : (s, μ) ∈ E_i}` as a linear system
/// over one variable per opponent strategy.
pub trait BeliefRelation: Sync {
    fn num_strategies(&self, player: Player) -> usize;

    fn strategy_id(&self, player: Player, s: usize) -> &str;

    fn system(&self, player: Player, s: usize) -> Cow<'_, LinearSystem>;

    fn all_strategies(&self, player: Player) -> BTreeSet<usize> {
        (0..self.num_strategies(player)).collect()
    }

    fn index_of(&self, player: Player, id: &str) -> Option<usize> {
        (0..self.num_strategies(player)).find(|&s| self.strategy_id(player, s) == id)
    }

    fn relates(&self, player: Player, s: usize, belief: &Belief) -> bool {
        let n = self.num_strategies(player.other());
        if s >= self.num_strategies(player) || belief.support().iter().any(|&t| t >= n) {
            return false;
        }
        let mut point = vec![Rational::zero(); n];
        for (&t, w) in belief.iter() {
            point[t] = w.clone();
        }
        self.system(player, s).is_satisfied_by(&point)
    }

    /// The slice of `s` with the support restricted to `restriction`.
    fn restricted_system(&self, player: Player, s: usize, restriction: &BTreeSet<usize>) -> LinearSystem {
        let mut system = self.system(player, s).into_owned();
        restrict_support(&mut system, restriction);
        system
    }

    /// The canonical related belief concentrated on `restriction`, if any.
    fn justify(&self, player: Player, s: usize, restriction: &BTreeSet<usize>) -> Option<Belief> {
        if restriction.is_empty() {
            return None;
        }
        let system = self.restricted_system(player, s, restriction);
        lp_feasible(&system)
            .expect("relation slices are well formed")
            .map(|p| belief_from_point(&p))
    }

    /// Farkas multipliers proving that no related belief concentrates on
    /// `restriction`.
    fn refute(&self, player: Player, s: usize, restriction: &BTreeSet<usize>) -> Option<Vec<Rational>> {
        let system = self.restricted_system(player, s, restriction);
        infeasibility_certificate(&system).expect("relation slices are well formed")
    }

    fn label(&self, player: Player, set: &BTreeSet<usize>) -> String {
        let ids: Vec<&str> = set.iter().map(|&s| self.strategy_id(player, s)).collect();
        format!("{{{}}}", ids.join(", "))
    }
}

/// The best-response relation of a game, with alternatives ranging over the
/// whole own strategy list.
impl BeliefRelation for Game {
    fn num_strategies(&self, player: Player) -> usize {
        Game::num_strategies(self, player)
    }

    fn strategy_id(&self, player: Player, s: usize) -> &str {
        Game::strategy_id(self, player, s)
    }

    fn system(&self, player: Player, s: usize) -> Cow<'_, LinearSystem> {
        let all = self.all_strategies(player);
        Cow::Owned(BeliefPolyhedron::new(self, player, s, &all, None).system)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("player {player} has {ids} strategies but {systems} slices")]
    SliceCount { player: Player, ids: usize, systems: usize },
    #[error("slice of player {player} strategy `{id}` has {found} variables, expected {expected}")]
    Dimension { player: Player, id: String, found: usize, expected: usize },
    #[error("slice of player {player} strategy `{id}` does not start with the simplex rows")]
    MissingSimplex { player: Player, id: String },
    #[error("duplicate strategy `{id}` for player {player}")]
    Duplicate { player: Player, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralRelation {
    strategies: [Vec<String>; 2],
    systems: [Vec<LinearSystem>; 2],
}

impl PolyhedralRelation {
    /// Every slice must begin with the rows of [`simplex_system`].
    pub fn new(
        strategies_1: Vec<String>,
        strategies_2: Vec<String>,
        systems_1: Vec<LinearSystem>,
        systems_2: Vec<LinearSystem>,
    ) -> Result<Self, RelationError> {
        let strategies = [strategies_1, strategies_2];
        let systems = [systems_1, systems_2];
        for player in Player::BOTH {
            let ids = &strategies[player.index()];
            let slices = &systems[player.index()];
            for (k, id) in ids.iter().enumerate() {
                if ids[..k].contains(id) {
                    return Err(RelationError::Duplicate { player, id: id.clone() });
                }
            }
            if ids.len() != slices.len() {
                return Err(RelationError::SliceCount {
                    player,
                    ids: ids.len(),
                    systems: slices.len(),
                });
            }
            let n = strategies[player.other().index()].len();
            let simplex = simplex_system(n);
            for (id, system) in ids.iter().zip(slices) {
                if system.num_vars != n || system.constraints.iter().any(|c| c.coeffs.len() != n) {
                    return Err(RelationError::Dimension {
                        player,
                        id: id.clone(),
                        found: system.num_vars,
                        expected: n,
                    });
                }
                if !system.constraints.starts_with(&simplex.constraints) || system.objective.is_some() {
                    return Err(RelationError::MissingSimplex { player, id: id.clone() });
                }
            }
        }
        Ok(Self { strategies, systems })
    }

    /// Builds each slice as the simplex rows followed by `extra` rows.
    pub fn from_rows(
        strategies_1: Vec<String>,
        strategies_2: Vec<String>,
        rows_1: Vec<Vec<Constraint>>,
        rows_2: Vec<Vec<Constraint>>,
    ) -> Result<Self, RelationError> {
        let build = |n: usize, rows: Vec<Vec<Constraint>>| -> Vec<LinearSystem> {
            rows.into_iter()
                .map(|extra| {
                    let mut system = simplex_system(n);
                    system.constraints.extend(extra);
                    system
                })
                .collect()
        };
        let (n1, n2) = (strategies_1.len(), strategies_2.len());
        Self::new(strategies_1, strategies_2, build(n2, rows_1), build(n1, rows_2))
    }

    /// The best-response relation of `game`, slice for slice identical to
    /// the game's own systems.
    pub fn from_game(game: &Game) -> Self {
        let slices = |player: Player| {
            (0..game.num_strategies(player))
                .map(|s| BeliefRelation::system(game, player, s).into_owned())
                .collect()
        };
        Self::new(
            game.strategies(Player::One).to_vec(),
            game.strategies(Player::Two).to_vec(),
            slices(Player::One),
            slices(Player::Two),
        )
        .expect("best-response slices are well formed")
    }

    pub fn strategies(&self, player: Player) -> &[String] {
        &self.strategies[player.index()]
    }
}

impl BeliefRelation for PolyhedralRelation {
    fn num_strategies(&self, player: Player) -> usize {
        self.strategies[player.index()].len()
    }

    fn strategy_id(&self, player: Player, s: usize) -> &str {
        &self.strategies[player.index()][s]
    }

    fn system(&self, player: Player, s: usize) -> Cow<'_, LinearSystem> {
        Cow::Borrowed(&self.systems[player.index()][s])
    }
}

/// `μ_t = 1` over `n` opponent strategies.
pub fn point_mass_row(n: usize, t: usize) -> Constraint {
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[t] = Rational::one();
    Constraint {
        coeffs,
        relation: Relation::Eq,
        rhs: Rational::one(),
    }
}

/// The contradictory row `0 = 1`, making a slice empty.
pub fn empty_row(n: usize) -> Constraint {
    Constraint {
        coeffs: vec![Rational::zero(); n],
        relation: Relation::Eq,
        rhs: Rational::one(),
    }
}
