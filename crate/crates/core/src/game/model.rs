use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use super::measure::FiniteMeasure;
use crate::exact::Rational;

/// A belief or mixed strategy: a finite measure over strategy indices.
pub type Belief = FiniteMeasure<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("player {player} has no strategy `{id}`")]
    UnknownStrategy { player: Player, id: String },
    #[error("player {player} has no strategy with index {index}")]
    StrategyOutOfRange { player: Player, index: usize },
    #[error("duplicate strategy `{id}` for player {player}")]
    DuplicateStrategy { player: Player, id: String },
    #[error("payoff matrix for player {player} is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        player: Player,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("player {0} has no strategies")]
    NoStrategies(Player),
    #[error("game is not zero-sum")]
    NotZeroSum,
}

/// Two-player strategic-form game with exact payoffs. Both matrices are
/// indexed `[strategy of player 1][strategy of player 2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    name: String,
    strategies: [Vec<String>; 2],
    payoffs: [Vec<Vec<Rational>>; 2],
}

impl Game {
    pub fn new(
        name: impl Into<String>,
        strategies_1: Vec<String>,
        strategies_2: Vec<String>,
        payoff_1: Vec<Vec<Rational>>,
        payoff_2: Vec<Vec<Rational>>,
    ) -> Result<Self, GameError> {
        let strategies = [strategies_1, strategies_2];
        for player in Player::BOTH {
            let ids = &strategies[player.index()];
            if ids.is_empty() {
                return Err(GameError::NoStrategies(player));
            }
            let mut seen = BTreeSet::new();
            for id in ids {
                if !seen.insert(id) {
                    return Err(GameError::DuplicateStrategy {
                        player,
                        id: id.clone(),
                    });
                }
            }
        }
        let (rows, cols) = (strategies[0].len(), strategies[1].len());
        let payoffs = [payoff_1, payoff_2];
        for player in Player::BOTH {
            let m = &payoffs[player.index()];
            let bad_cols = m.iter().map(Vec::len).find(|&c| c != cols);
            if m.len() != rows || bad_cols.is_some() {
                return Err(GameError::ShapeMismatch {
                    player,
                    rows: m.len(),
                    cols: bad_cols.unwrap_or(cols),
                    expected_rows: rows,
                    expected_cols: cols,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            strategies,
            payoffs,
        })
    }

    /// Convenience constructor from integer matrices, used heavily in tests
    /// and corpora.
    pub fn from_integers(
        name: &str,
        strategies_1: &[&str],
        strategies_2: &[&str],
        payoff_1: &[&[i64]],
        payoff_2: &[&[i64]],
    ) -> Result<Self, GameError> {
        let ids = |s: &[&str]| s.iter().map(|x| x.to_string()).collect();
        let matrix = |m: &[&[i64]]| {
            m.iter()
                .map(|row| row.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect()
        };
        Self::new(name, ids(strategies_1), ids(strategies_2), matrix(payoff_1), matrix(payoff_2))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn strategies(&self, player: Player) -> &[String] {
        &self.strategies[player.index()]
    }

    pub fn num_strategies(&self, player: Player) -> usize {
        self.strategies[player.index()].len()
    }

    pub fn all_strategies(&self, player: Player) -> BTreeSet<usize> {
        (0..self.num_strategies(player)).collect()
    }

    pub fn payoff_matrix(&self, player: Player) -> &[Vec<Rational>] {
        &self.payoffs[player.index()]
    }

    pub fn strategy_id(&self, player: Player, index: usize) -> &str {
        &self.strategies[player.index()][index]
    }

    pub fn index_of(&self, player: Player, id: &str) -> Result<usize, GameError> {
        self.strategies(player)
            .iter()
            .position(|s| s == id)
            .ok_or_else(|| GameError::UnknownStrategy {
                player,
                id: id.to_string(),
            })
    }

    pub fn check_index(&self, player: Player, index: usize) -> Result<(), GameError> {
        if index < self.num_strategies(player) {
            Ok(())
        } else {
            Err(GameError::StrategyOutOfRange { player, index })
        }
    }

    pub fn check_belief(&self, over: Player, belief: &Belief) -> Result<(), GameError> {
        match belief.support().last() {
            Some(&max) => self.check_index(over, max),
            None => Ok(()),
        }
    }

    /// `π_player(own, other)` with `own` a strategy of `player`.
    pub fn payoff(&self, player: Player, own: usize, other: usize) -> &Rational {
        match player {
            Player::One => &self.payoffs[0][own][other],
            Player::Two => &self.payoffs[1][other][own],
        }
    }

    /// `π_player(own, μ)` for a pure own strategy against a belief over the
    /// opponent's strategies.
    pub fn payoff_against(&self, player: Player, own: usize, belief: &Belief) -> Rational {
        belief.expect(|&t| self.payoff(player, own, t).clone())
    }

    /// Double expectation `Σ_s Σ_t w(s)·v(t)·π_player(s, t)`.
    pub fn expected_payoff(&self, player: Player, own: &Belief, other: &Belief) -> Result<Rational, GameError> {
        self.check_belief(player, own)?;
        self.check_belief(player.other(), other)?;
        Ok(own.expect(|&s| self.payoff_against(player, s, other)))
    }

    /// Validates that `payoff_2 = -payoff_1` entrywise.
    pub fn check_zero_sum(&self) -> Result<(), GameError> {
        let zero_sum = self.payoffs[0]
            .iter()
            .zip(&self.payoffs[1])
            .all(|(r1, r2)| r1.iter().zip(r2).all(|(a, b)| (a + b).is_zero()));
        if zero_sum {
            Ok(())
        } else {
            Err(GameError::NotZeroSum)
        }
    }

    pub fn label(&self, player: Player, set: &BTreeSet<usize>) -> String {
        let ids: Vec<&str> = set.iter().map(|&i| self.strategy_id(player, i)).collect();
        format!("{{{}}}", ids.join(", "))
    }

    pub fn format_belief(&self, over: Player, belief: &Belief) -> String {
        let parts: Vec<String> = belief
            .iter()
            .map(|(&i, w)| format!("{}: {}", self.strategy_id(over, i), crate::exact::rational::short_string(w)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Strategy rectangle `B_1 × B_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rectangle {
    pub sides: [BTreeSet<usize>; 2],
}

impl Rectangle {
    pub fn new(side_1: BTreeSet<usize>, side_2: BTreeSet<usize>) -> Self {
        Self {
            sides: [side_1, side_2],
        }
    }

    pub fn full(game: &Game) -> Self {
        Self::new(game.all_strategies(Player::One), game.all_strategies(Player::Two))
    }

    pub fn side(&self, player: Player) -> &BTreeSet<usize> {
        &self.sides[player.index()]
    }

    pub fn side_mut(&mut self, player: Player) -> &mut BTreeSet<usize> {
        &mut self.sides[player.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.sides.iter().all(BTreeSet::is_empty)
    }

    pub fn is_subset(&self, other: &Rectangle) -> bool {
        self.sides[0].is_subset(&other.sides[0]) && self.sides[1].is_subset(&other.sides[1])
    }

    pub fn describe(&self, game: &Game) -> String {
        format!(
            "{} x {}",
            game.label(Player::One, self.side(Player::One)),
            game.label(Player::Two, self.side(Player::Two))
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::game::examples;
    use proptest::prelude::*;

    #[test]
    fn dirac_reduces_to_matrix_entry() {
        let pd = examples::prisoners_dilemma();
        let d = pd.index_of(Player::One, "D").unwrap();
        let c = pd.index_of(Player::Two, "C").unwrap();
        let v = pd
            .expected_payoff(Player::One, &Belief::dirac(d), &Belief::dirac(c))
            .unwrap();
        assert_eq!(v, int(3));
    }

    #[test]
    fn cascade_expectation() {
        let g = examples::cascade();
        let mu = Belief::from_pairs([(0, rat(1, 3)), (1, rat(2, 3))]).unwrap();
        assert_eq!(g.payoff_against(Player::One, 1, &mu), rat(4, 3));
    }

    #[test]
    fn player_two_orientation() {
        let g = examples::cascade();
        // payoff_2 = [[1,0],[1,0]]: x earns 1 against both a and b
        assert_eq!(g.payoff(Player::Two, 0, 1), &int(1));
        assert_eq!(g.payoff(Player::Two, 1, 0), &int(0));
    }

    #[test]
    fn constructor_validation() {
        let err = Game::from_integers("g", &["a", "a"], &["x"], &[&[1], &[2]], &[&[1], &[2]]).unwrap_err();
        assert!(matches!(err, GameError::DuplicateStrategy { .. }));
        let err = Game::from_integers("g", &["a", "b"], &["x", "y"], &[&[1, 2, 3], &[1, 2, 3]], &[&[1, 2], &[1, 2]])
            .unwrap_err();
        assert!(matches!(err, GameError::ShapeMismatch { player: Player::One, cols: 3, .. }));
        let pd = examples::prisoners_dilemma();
        assert!(pd.index_of(Player::One, "Z").is_err());
        let outside = Belief::dirac(7);
        assert!(pd.expected_payoff(Player::One, &outside, &Belief::dirac(0)).is_err());
    }

    fn arb_game() -> impl Strategy<Value = Game> {
        (1usize..4, 1usize..4)
            .prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec((-9i64..10, 1i64..4), c), r * 2)
            })
            .prop_map(|rows| {
                let r = rows.len() / 2;
                let c = rows[0].len();
                let to_matrix = |rows: &[Vec<(i64, i64)>]| {
                    rows.iter().map(|row| row.iter().map(|&(n, d)| rat(n, d)).collect()).collect()
                };
                Game::new(
                    "random",
                    (0..r).map(|i| format!("s{i}")).collect(),
                    (0..c).map(|i| format!("t{i}")).collect(),
                    to_matrix(&rows[..r]),
                    to_matrix(&rows[r..]),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn uniform_expectation_is_matrix_mean(g in arb_game()) {
            for player in Player::BOTH {
                let own = Belief::uniform(0..g.num_strategies(player)).unwrap();
                let other = Belief::uniform(0..g.num_strategies(player.other())).unwrap();
                let entries: Vec<&Rational> = g.payoff_matrix(player).iter().flatten().collect();
                let mean = entries.iter().fold(int(0), |a, v| a + *v) / int(entries.len() as i64);
                prop_assert_eq!(g.expected_payoff(player, &own, &other).unwrap(), mean);
            }
        }

        #[test]
        fn expected_payoff_is_bilinear(g in arb_game(), a in 0i64..=7, seed in 0usize..50) {
            let alpha = rat(a, 7);
            let n = g.num_strategies(Player::Two);
            let mu = Belief::dirac(seed % n);
            let nu = Belief::uniform(0..n).unwrap();
            let mixed = mu.mix(&alpha, &nu);
            for s in 0..g.num_strategies(Player::One) {
                let lhs = g.payoff_against(Player::One, s, &mixed);
                let rhs = &alpha * g.payoff_against(Player::One, s, &mu)
                    + (int(1) - &alpha) * g.payoff_against(Player::One, s, &nu);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
