//! Best responses, strict dominance and the auxiliary zero-sum game.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::exact::lp::{lp_feasible, lp_optimize, LinearSystem, LpSolution};
use crate::exact::Rational;
use crate::game::{Belief, Game, GameError, Player};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResponseError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("empty {0} set")]
    EmptySet(&'static str),
}

/// The set of beliefs to which `strategy` is a best response, written over
/// one variable per opponent strategy.
///
/// Row order is fixed: the simplex equality, one sign row per variable, one
/// row per alternative in increasing index order (skipping `strategy`), and
/// finally one `μ_t = 0` row per opponent strategy outside the restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefPolyhedron {
    pub owner: Player,
    pub strategy: usize,
    pub system: LinearSystem,
}

impl BeliefPolyhedron {
    pub fn new(
        game: &Game,
        owner: Player,
        strategy: usize,
        alternatives: &BTreeSet<usize>,
        restriction: Option<&BTreeSet<usize>>,
    ) -> Self {
        let n = game.num_strategies(owner.other());
        let mut system = simplex_system(n);
        for &t in alternatives.iter().filter(|&&t| t != strategy) {
            // Σ_y μ_y (π(t,y) − π(s,y)) <= 0
            let row = (0..n)
                .map(|y| game.payoff(owner, t, y) - game.payoff(owner, strategy, y))
                .collect();
            system = system.le(row, Rational::zero());
        }
        if let Some(restriction) = restriction {
            restrict_support(&mut system, restriction);
        }
        Self {
            owner,
            strategy,
            system,
        }
    }
}

/// Σμ = 1 and μ >= 0 over `n` variables.
pub fn simplex_system(n: usize) -> LinearSystem {
    let mut system = LinearSystem::new(n).eq(vec![Rational::one(); n], Rational::one());
    for k in 0..n {
        let unit = system.unit(k);
        system = system.ge(unit, Rational::zero());
    }
    system
}

/// Appends `μ_t = 0` for every variable outside `allowed`.
pub fn restrict_support(system: &mut LinearSystem, allowed: &BTreeSet<usize>) {
    for t in (0..system.num_vars).filter(|t| !allowed.contains(t)) {
        let unit = system.unit(t);
        system.push(unit, crate::exact::Relation::Eq, Rational::zero());
    }
}

/// Reads an LP point over the simplex as a belief, dropping zero weights.
pub fn belief_from_point(point: &[Rational]) -> Belief {
    Belief::from_pairs(
        point
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(k, w)| (k, w.clone())),
    )
    .expect("simplex point is a probability vector")
}

fn check_set(game: &Game, player: Player, set: &BTreeSet<usize>, what: &'static str) -> Result<(), ResponseError> {
    match set.last() {
        None => Err(ResponseError::EmptySet(what)),
        Some(&max) => Ok(game.check_index(player, max)?),
    }
}

pub fn is_best_response(
    game: &Game,
    player: Player,
    s: usize,
    belief: &Belief,
    alternatives: &BTreeSet<usize>,
) -> Result<bool, ResponseError> {
    game.check_index(player, s)?;
    game.check_belief(player.other(), belief)?;
    if let Some(&max) = alternatives.last() {
        game.check_index(player, max)?;
    }
    let own = game.payoff_against(player, s, belief);
    Ok(alternatives
        .iter()
        .all(|&t| game.payoff_against(player, t, belief) <= own))
}

/// The alternatives attaining the maximal payoff against `belief`.
pub fn best_responses(game: &Game, player: Player, belief: &Belief, alternatives: &BTreeSet<usize>) -> BTreeSet<usize> {
    let values: Vec<(usize, Rational)> = alternatives
        .iter()
        .map(|&t| (t, game.payoff_against(player, t, belief)))
        .collect();
    let Some(best) = values.iter().map(|(_, v)| v).max().cloned() else {
        return BTreeSet::new();
    };
    values.into_iter().filter(|(_, v)| *v == best).map(|(t, _)| t).collect()
}

/// The canonical justifying belief: the deterministic LP witness of the
/// belief polyhedron with support inside `restriction`.
pub fn find_justifying_belief(
    game: &Game,
    player: Player,
    s: usize,
    restriction: &BTreeSet<usize>,
    alternatives: &BTreeSet<usize>,
) -> Result<Option<Belief>, ResponseError> {
    game.check_index(player, s)?;
    check_set(game, player.other(), restriction, "support restriction")?;
    if let Some(&max) = alternatives.last() {
        game.check_index(player, max)?;
    }
    let polyhedron = BeliefPolyhedron::new(game, player, s, alternatives, Some(restriction));
    let point = lp_feasible(&polyhedron.system).expect("well-formed belief polyhedron");
    Ok(point.map(|p| belief_from_point(&p)))
}

/// A strict-dominance certificate: the dominating mixture and its margin
/// over the dominated strategy in every listed opponent column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dominance {
    pub mixture: Belief,
    pub margins: Vec<(usize, Rational)>,
}

impl Dominance {
    pub fn min_margin(&self) -> Option<&Rational> {
        self.margins.iter().map(|(_, m)| m).min()
    }

    /// Recomputes every margin and checks that all are strictly positive.
    pub fn verify(&self, game: &Game, player: Player, s: usize, opponent_set: &BTreeSet<usize>) -> bool {
        if game.check_belief(player, &self.mixture).is_err() || game.check_index(player, s).is_err() {
            return false;
        }
        let columns: Vec<usize> = self.margins.iter().map(|(t, _)| *t).collect();
        columns.iter().copied().eq(opponent_set.iter().copied())
            && self.margins.iter().all(|(t, m)| {
                let actual = self.mixture.expect(|&k| game.payoff(player, k, *t).clone())
                    - game.payoff(player, s, *t);
                actual == *m && m.is_positive()
            })
    }
}

/// Maximizes the minimum margin of a mixture over `mix_support` against `s`
/// across `opponent_set`; `s` is strictly dominated iff that optimum is
/// positive.
pub fn is_strictly_dominated(
    game: &Game,
    player: Player,
    s: usize,
    mix_support: &BTreeSet<usize>,
    opponent_set: &BTreeSet<usize>,
) -> Result<Option<Dominance>, ResponseError> {
    game.check_index(player, s)?;
    check_set(game, player, mix_support, "mixture support")?;
    check_set(game, player.other(), opponent_set, "opponent")?;
    let rows: Vec<usize> = mix_support.iter().copied().collect();
    let k = rows.len();
    // variables: σ over `rows`, then the free margin m
    let mut system = LinearSystem::new(k + 1);
    let mut total = vec![Rational::one(); k];
    total.push(Rational::zero());
    system = system.eq(total, Rational::one());
    for j in 0..k {
        let unit = system.unit(j);
        system = system.ge(unit, Rational::zero());
    }
    for &t in opponent_set {
        let mut row: Vec<Rational> = rows.iter().map(|&r| game.payoff(player, r, t).clone()).collect();
        row.push(-Rational::one());
        system = system.ge(row, game.payoff(player, s, t).clone());
    }
    let margin = system.unit(k);
    system = system.maximize(margin);
    let LpSolution::Optimal { value, point } = lp_optimize(&system).expect("well-formed dominance LP") else {
        unreachable!("margin LP over a simplex is feasible and bounded");
    };
    if !value.is_positive() {
        return Ok(None);
    }
    let mixture = Belief::from_pairs(
        rows.iter()
            .zip(&point)
            .filter(|(_, w)| !w.is_zero())
            .map(|(&r, w)| (r, w.clone())),
    )
    .expect("simplex point");
    let margins = opponent_set
        .iter()
        .map(|&t| {
            let m = mixture.expect(|&r| game.payoff(player, r, t).clone()) - game.payoff(player, s, t);
            (t, m)
        })
        .collect();
    Ok(Some(Dominance { mixture, margins }))
}

/// Zero-sum game of margins over `s0`: the row player picks one of `player`'s
/// strategies `s` and earns `π(s, t) − π(s0, t)`; the column player earns the
/// negation.
pub fn pearce_auxiliary_game(game: &Game, player: Player, s0: usize) -> Result<Game, ResponseError> {
    pearce_subgame(game, player, s0, &game.all_strategies(player), &game.all_strategies(player.other()))
}

/// The auxiliary game restricted to the rows `mix_support` and the columns
/// `opponent_set`. Strategy ids are carried over, so index `k` of the
/// subgame is the `k`-th element of the corresponding set.
pub fn pearce_subgame(
    game: &Game,
    player: Player,
    s0: usize,
    mix_support: &BTreeSet<usize>,
    opponent_set: &BTreeSet<usize>,
) -> Result<Game, ResponseError> {
    game.check_index(player, s0)?;
    check_set(game, player, mix_support, "mixture support")?;
    check_set(game, player.other(), opponent_set, "opponent")?;
    let margins: Vec<Vec<Rational>> = mix_support
        .iter()
        .map(|&s| {
            opponent_set
                .iter()
                .map(|&t| game.payoff(player, s, t) - game.payoff(player, s0, t))
                .collect()
        })
        .collect();
    let negated = margins.iter().map(|row| row.iter().map(|v| -v).collect()).collect();
    let ids = |p: Player, set: &BTreeSet<usize>| set.iter().map(|&i| game.strategy_id(p, i).to_string()).collect();
    let name = format!("{}-margins-{}", game.name(), game.strategy_id(player, s0));
    Ok(Game::new(
        name,
        ids(player, mix_support),
        ids(player.other(), opponent_set),
        margins,
        negated,
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumSolution {
    pub row_mix: Belief,
    pub column_mix: Belief,
    pub value: Rational,
}

impl ZeroSumSolution {
    /// Checks both guarantees exactly: the row mix earns at least the value
    /// against every column and the column mix concedes at most the value to
    /// every row.
    pub fn verify(&self, game: &Game) -> bool {
        let rows = game.num_strategies(Player::One);
        let cols = game.num_strategies(Player::Two);
        let row_ok = (0..cols).all(|t| self.row_mix.expect(|&s| game.payoff(Player::One, s, t).clone()) >= self.value);
        let col_ok = (0..rows).all(|s| game.payoff_against(Player::One, s, &self.column_mix) <= self.value);
        row_ok && col_ok
    }
}

/// Value and optimal mixes of a zero-sum game, from the row LP (maximize the
/// guaranteed payoff) and the column LP (minimize the conceded payoff).
pub fn solve_zero_sum(game: &Game) -> Result<ZeroSumSolution, ResponseError> {
    game.check_zero_sum()?;
    let a = game.payoff_matrix(Player::One);
    let (rows, cols) = (a.len(), a[0].len());

    let mut row_lp = simplex_with_free_value(rows);
    for t in 0..cols {
        let mut coeffs: Vec<Rational> = a.iter().map(|row| row[t].clone()).collect();
        coeffs.push(-Rational::one());
        row_lp = row_lp.ge(coeffs, Rational::zero());
    }
    let v = row_lp.unit(rows);
    let (value, row_point) = optimal(row_lp.maximize(v));

    let mut col_lp = simplex_with_free_value(cols);
    for row in a {
        let mut coeffs = row.clone();
        coeffs.push(-Rational::one());
        col_lp = col_lp.le(coeffs, Rational::zero());
    }
    let w = col_lp.unit(cols);
    let (col_value, col_point) = optimal(col_lp.minimize(w));
    assert_eq!(value, col_value, "minimax values of the two LPs must agree");

    Ok(ZeroSumSolution {
        row_mix: belief_from_point(&row_point[..rows]),
        column_mix: belief_from_point(&col_point[..cols]),
        value,
    })
}

fn simplex_with_free_value(n: usize) -> LinearSystem {
    let mut total = vec![Rational::one(); n];
    total.push(Rational::zero());
    let mut system = LinearSystem::new(n + 1).eq(total, Rational::one());
    for k in 0..n {
        let unit = system.unit(k);
        system = system.ge(unit, Rational::zero());
    }
    system
}

fn optimal(system: LinearSystem) -> (Rational, Vec<Rational>) {
    match lp_optimize(&system).expect("well-formed value LP") {
        LpSolution::Optimal { value, point } => (value, point),
        other => unreachable!("matrix game LP is feasible and bounded, got {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::game::examples;
    use proptest::prelude::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn pennies_mixed_belief() {
        let g = examples::matching_pennies();
        let half = Belief::uniform([0, 1]).unwrap();
        assert!(is_best_response(&g, Player::One, 0, &half, &set(&[0, 1])).unwrap());
    }

    #[test]
    fn pd_cooperation_never_best() {
        let g = examples::prisoners_dilemma();
        let all = set(&[0, 1]);
        for mu in [Belief::dirac(0), Belief::dirac(1), Belief::uniform([0, 1]).unwrap()] {
            assert!(!is_best_response(&g, Player::One, 0, &mu, &all).unwrap());
        }
        assert_eq!(find_justifying_belief(&g, Player::One, 0, &all, &all).unwrap(), None);
    }

    #[test]
    fn cascade_justification() {
        let g = examples::cascade();
        let all = set(&[0, 1]);
        let mu = find_justifying_belief(&g, Player::One, 1, &all, &all).unwrap().unwrap();
        assert!(is_best_response(&g, Player::One, 1, &mu, &all).unwrap());
        assert!(int(2) * mu.weight_of(&1) >= mu.weight_of(&0));
        assert_eq!(find_justifying_belief(&g, Player::One, 1, &set(&[0]), &all).unwrap(), None);
        assert!(matches!(
            find_justifying_belief(&g, Player::One, 1, &BTreeSet::new(), &all),
            Err(ResponseError::EmptySet(_))
        ));
    }

    #[test]
    fn pd_dominance_certificate() {
        let g = examples::prisoners_dilemma();
        let all = set(&[0, 1]);
        let d = is_strictly_dominated(&g, Player::One, 0, &all, &all).unwrap().unwrap();
        assert_eq!(d.mixture, Belief::dirac(1));
        assert_eq!(d.margins, vec![(0, int(1)), (1, int(1))]);
        assert!(d.verify(&g, Player::One, 0, &all));
    }

    #[test]
    fn mixdom_needs_a_mixture() {
        let g = examples::mix_dom();
        let d = is_strictly_dominated(&g, Player::One, 2, &set(&[0, 1, 2]), &set(&[0, 1]))
            .unwrap()
            .unwrap();
        assert_eq!(d.mixture, Belief::uniform([0, 1]).unwrap());
        assert_eq!(d.margins, vec![(0, rat(1, 2)), (1, rat(1, 2))]);
        // neither pure row dominates c alone
        assert_eq!(is_strictly_dominated(&g, Player::One, 2, &set(&[0, 2]), &set(&[0, 1])).unwrap(), None);
    }

    #[test]
    fn pennies_undominated() {
        let g = examples::matching_pennies();
        let all = set(&[0, 1]);
        assert_eq!(is_strictly_dominated(&g, Player::One, 0, &all, &all).unwrap(), None);
    }

    #[test]
    fn auxiliary_matrices() {
        let g = examples::mix_dom();
        let aux = pearce_auxiliary_game(&g, Player::One, 2).unwrap();
        let expected = [vec![int(2), int(-1)], vec![int(-1), int(2)], vec![int(0), int(0)]];
        assert_eq!(aux.payoff_matrix(Player::One), &expected[..]);
        aux.check_zero_sum().unwrap();
        let pd = pearce_auxiliary_game(&examples::prisoners_dilemma(), Player::One, 0).unwrap();
        assert_eq!(pd.payoff_matrix(Player::One), &[vec![int(0), int(0)], vec![int(1), int(1)]]);
        let flat = Game::from_integers("flat", &["a", "b"], &["x"], &[&[4], &[4]], &[&[0], &[0]]).unwrap();
        let zero = pearce_auxiliary_game(&flat, Player::One, 1).unwrap();
        assert!(zero.payoff_matrix(Player::One).iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn auxiliary_game_for_player_two() {
        // column player's margins use player 2's strategies as rows
        let g = examples::cascade();
        let aux = pearce_auxiliary_game(&g, Player::Two, 1).unwrap();
        assert_eq!(aux.strategies(Player::One), &["x", "y"]);
        assert_eq!(aux.payoff_matrix(Player::One), &[vec![int(1), int(1)], vec![int(0), int(0)]]);
    }

    #[test]
    fn zero_sum_values() {
        let aux = pearce_auxiliary_game(&examples::mix_dom(), Player::One, 2).unwrap();
        let sol = solve_zero_sum(&aux).unwrap();
        assert_eq!(sol.value, rat(1, 2));
        assert_eq!(sol.row_mix, Belief::uniform([0, 1]).unwrap());
        assert!(sol.verify(&aux));

        let pennies = solve_zero_sum(&examples::matching_pennies()).unwrap();
        assert_eq!(pennies.value, int(0));
        assert_eq!(pennies.row_mix, Belief::uniform([0, 1]).unwrap());
        assert_eq!(pennies.column_mix, Belief::uniform([0, 1]).unwrap());

        let zero = Game::from_integers("z", &["a", "b"], &["x", "y"], &[&[0, 0], &[0, 0]], &[&[0, 0], &[0, 0]]).unwrap();
        let sol = solve_zero_sum(&zero).unwrap();
        assert_eq!(sol.value, int(0));
        assert!(sol.verify(&zero));

        assert!(matches!(
            solve_zero_sum(&examples::prisoners_dilemma()),
            Err(ResponseError::Game(GameError::NotZeroSum))
        ));
    }

    #[test]
    fn pure_reply_to_dirac() {
        for g in examples::all() {
            for player in Player::BOTH {
                let all = g.all_strategies(player);
                for t in 0..g.num_strategies(player.other()) {
                    let mu = Belief::dirac(t);
                    let best = (0..g.num_strategies(player))
                        .max_by(|&a, &b| g.payoff(player, a, t).cmp(g.payoff(player, b, t)))
                        .unwrap();
                    assert!(is_best_response(&g, player, best, &mu, &all).unwrap());
                }
            }
        }
    }

    fn arb_game() -> impl Strategy<Value = Game> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, 2 * r * c).prop_map(move |v| {
                let m = |off: usize| (0..r).map(|i| (0..c).map(|j| int(v[off + i * c + j])).collect()).collect();
                Game::new(
                    "random",
                    (0..r).map(|i| format!("s{i}")).collect(),
                    (0..c).map(|j| format!("t{j}")).collect(),
                    m(0),
                    m(r * c),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn never_best_iff_dominated(g in arb_game()) {
            for player in Player::BOTH {
                let own = g.all_strategies(player);
                let other = g.all_strategies(player.other());
                for s in 0..g.num_strategies(player) {
                    let belief = find_justifying_belief(&g, player, s, &other, &own).unwrap();
                    let dom = is_strictly_dominated(&g, player, s, &own, &other).unwrap();
                    prop_assert_eq!(belief.is_none(), dom.is_some());
                    if let Some(mu) = &belief {
                        prop_assert!(is_best_response(&g, player, s, mu, &own).unwrap());
                    }
                    if let Some(d) = &dom {
                        prop_assert!(d.verify(&g, player, s, &other));
                    }
                    let aux = pearce_auxiliary_game(&g, player, s).unwrap();
                    let sol = solve_zero_sum(&aux).unwrap();
                    prop_assert!(sol.verify(&aux));
                    prop_assert_eq!(sol.value.is_positive(), dom.is_some());
                    if sol.value.is_positive() {
                        let dominator = Dominance {
                            mixture: sol.row_mix.clone(),
                            margins: other.iter().map(|&t| {
                                (t, sol.row_mix.expect(|&r| g.payoff(player, r, t).clone()) - g.payoff(player, s, t))
                            }).collect(),
                        };
                        prop_assert!(dominator.verify(&g, player, s, &other));
                    }
                }
            }
        }
    }
}
