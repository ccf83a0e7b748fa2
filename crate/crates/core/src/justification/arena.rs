//! Positions, moves and legality of the justification game.
//!
//! Player I defends the current strategy with a belief `μ` in the relation
//! and a finite set `b` containing the support of `μ`; player II answers
//! with a strategy from `b`, which becomes the next current strategy (owned
//! by the other game player). The first side unable or unwilling to make a
//! legal move loses; I wins by surviving the ply budget.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::elimination::{eliminate, rat_of_relation, BeliefRelation, Concept, EliminationTrace, RankedEngine};
use crate::exact::lp::{lp_optimize, LinearSystem, LpSolution, Relation};
use crate::exact::rational::short_string;
use crate::exact::{Ordinal, Rational};
use crate::game::{Belief, Game, Player};
use crate::response::belief_from_point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    I,
    II,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::I => "I",
            Side::II => "II",
        })
    }
}

/// I's move: a belief and a finite set carrying all of its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JMoveI {
    pub belief: Belief,
    pub support_set: BTreeSet<usize>,
}

impl JMoveI {
    /// The move `(μ, supp μ)`.
    pub fn tight(belief: Belief) -> Self {
        let support_set = belief.support().iter().copied().collect();
        Self { belief, support_set }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    I(JMoveI),
    II(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPosition {
    pub root_player: Player,
    pub root: usize,
    pub history: Vec<Move>,
}

impl JPosition {
    pub fn start(root_player: Player, root: usize) -> Self {
        Self {
            root_player,
            root,
            history: Vec::new(),
        }
    }

    pub fn ply(&self) -> usize {
        self.history.len()
    }

    pub fn side_to_move(&self) -> Side {
        if self.ply().is_multiple_of(2) {
            Side::I
        } else {
            Side::II
        }
    }

    /// The strategy I currently defends and the game player owning it.
    pub fn current(&self) -> (Player, usize) {
        let rounds = self.ply() / 2;
        let owner = if rounds.is_multiple_of(2) { self.root_player } else { self.root_player.other() };
        let strategy = self
            .history
            .iter()
            .rev()
            .find_map(|m| match m {
                Move::II(t) => Some(*t),
                Move::I(_) => None,
            })
            .unwrap_or(self.root);
        (owner, strategy)
    }

    pub fn last_i_move(&self) -> Option<&JMoveI> {
        self.history.iter().rev().find_map(|m| match m {
            Move::I(mv) => Some(mv),
            Move::II(_) => None,
        })
    }

    pub fn child(&self, mv: Move) -> Self {
        let mut next = self.clone();
        next.history.push(mv);
        next
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameStateError {
    #[error("it is {0}'s turn")]
    WrongSide(Side),
    #[error("player {player} has no strategy `{id}`")]
    UnknownStrategy { player: Player, id: String },
    #[error("strategy `{id}` of player {player} survives elimination, so player II has no winning strategy")]
    Survivor { player: Player, id: String },
    #[error("strategy `{id}` of player {player} is eliminated, so player I has no winning strategy")]
    Eliminated { player: Player, id: String },
}

/// What a justification game is played over: a relation, its strategies and
/// the elimination ordinals of its strategies.
pub trait Arena: Sync {
    fn strategy_id(&self, player: Player, s: usize) -> String;

    fn parse_strategy(&self, player: Player, id: &str) -> Option<usize>;

    fn is_strategy(&self, player: Player, s: usize) -> bool;

    /// Whether `(s, μ)` is in the relation.
    fn relates(&self, player: Player, s: usize, belief: &Belief) -> bool;

    /// The γ with `s ∈ X^γ \ X^{γ+1}`; `None` for survivors of every stage.
    fn elimination_ordinal(&self, player: Player, s: usize) -> Option<Ordinal>;

    /// The canonical move for `s`: for survivors a belief concentrated on
    /// the opponent's survivors, otherwise any related belief, if one
    /// exists.
    fn canonical_move(&self, player: Player, s: usize) -> Option<JMoveI>;

    /// A pseudo-random legal move, if `s` has any.
    fn random_move(&self, player: Player, s: usize, rng: &mut ChaCha8Rng) -> Option<JMoveI>;

    /// Human-readable description of the beliefs I may use for `s`.
    fn describe_beliefs(&self, player: Player, s: usize) -> String;

    fn is_survivor(&self, player: Player, s: usize) -> bool {
        self.elimination_ordinal(player, s).is_none()
    }

    fn has_legal_move_i(&self, player: Player, s: usize) -> bool {
        self.canonical_move(player, s).is_some()
    }

    fn check_move_i(&self, pos: &JPosition, mv: &JMoveI) -> Result<(), String> {
        let (owner, s) = pos.current();
        let opponent = owner.other();
        if let Some(&t) = mv.support_set.iter().find(|&&t| !self.is_strategy(opponent, t)) {
            return Err(format!("player {opponent} has no strategy with index {t}"));
        }
        if !mv.belief.is_concentrated(|t| mv.support_set.contains(t)) {
            return Err("the belief puts weight outside the announced set".into());
        }
        if !self.relates(owner, s, &mv.belief) {
            return Err(format!(
                "`{}` is not justified by {}",
                self.strategy_id(owner, s),
                self.belief_text(opponent, &mv.belief)
            ));
        }
        Ok(())
    }

    fn check_move_ii(&self, pos: &JPosition, t: usize) -> Result<(), String> {
        let allowed = pos.last_i_move().map(|mv| &mv.support_set);
        if allowed.is_some_and(|b| b.contains(&t)) {
            Ok(())
        } else {
            let (owner, _) = pos.current();
            Err(format!("`{}` is not in the announced set", self.strategy_id(owner.other(), t)))
        }
    }

    /// II's options: exactly the set `b` of I's last move.
    fn legal_moves_ii(&self, pos: &JPosition) -> Result<BTreeSet<usize>, GameStateError> {
        if pos.side_to_move() != Side::II {
            return Err(GameStateError::WrongSide(pos.side_to_move()));
        }
        Ok(pos.last_i_move().map(|mv| mv.support_set.clone()).unwrap_or_default())
    }

    /// Description of I's options at `pos`.
    fn legal_moves_i(&self, pos: &JPosition) -> Result<String, GameStateError> {
        if pos.side_to_move() != Side::I {
            return Err(GameStateError::WrongSide(pos.side_to_move()));
        }
        let (owner, s) = pos.current();
        Ok(self.describe_beliefs(owner, s))
    }

    fn belief_text(&self, over: Player, belief: &Belief) -> String {
        let parts: Vec<String> = belief
            .iter()
            .map(|(&t, w)| format!("{}={}", self.strategy_id(over, t), short_string(w)))
            .collect();
        parts.join(" ")
    }

    fn move_text(&self, pos: &JPosition, mv: &Move) -> String {
        let (owner, _) = pos.current();
        let opponent = owner.other();
        match mv {
            Move::I(mv) => {
                let b: Vec<String> = mv.support_set.iter().map(|&t| self.strategy_id(opponent, t)).collect();
                format!("mu: {} ; b: {}", self.belief_text(opponent, &mv.belief), b.join(" "))
            }
            Move::II(t) => self.strategy_id(opponent, *t),
        }
    }

    /// Parses `mu: x=1/2 y=1/2 ; b: x y` for I or a strategy id for II.
    fn parse_move(&self, pos: &JPosition, text: &str) -> Result<Move, String> {
        let (owner, _) = pos.current();
        let opponent = owner.other();
        let lookup = |id: &str| {
            self.parse_strategy(opponent, id)
                .ok_or_else(|| format!("player {opponent} has no strategy `{id}`"))
        };
        match pos.side_to_move() {
            Side::II => lookup(text.trim()).map(Move::II),
            Side::I => {
                let (mu_part, b_part) = text
                    .split_once(';')
                    .ok_or_else(|| "expected `mu: <id>=<weight> ... ; b: <id> ...`".to_string())?;
                let mu_text = mu_part
                    .trim()
                    .strip_prefix("mu:")
                    .ok_or_else(|| "expected `mu:`".to_string())?;
                let b_text = b_part
                    .trim()
                    .strip_prefix("b:")
                    .ok_or_else(|| "expected `b:`".to_string())?;
                let mut pairs = Vec::new();
                for item in mu_text.split_whitespace() {
                    let (id, w) = item
                        .split_once('=')
                        .ok_or_else(|| format!("expected `<id>=<weight>`, found `{item}`"))?;
                    let w = crate::exact::rational::parse_rational(w).map_err(|e| e.to_string())?;
                    pairs.push((lookup(id)?, w));
                }
                let belief = Belief::from_pairs(pairs).map_err(|e| e.to_string())?;
                let support_set = b_text.split_whitespace().map(lookup).collect::<Result<_, _>>()?;
                Ok(Move::I(JMoveI { belief, support_set }))
            }
        }
    }
}

/// The justification game over a finite relation, with elimination
/// ordinals taken from its rationalizability trace.
pub struct FiniteArena<'a, R: BeliefRelation + ?Sized> {
    pub relation: &'a R,
    pub trace: EliminationTrace,
}

impl<'a> FiniteArena<'a, Game> {
    pub fn for_game(game: &'a Game) -> Self {
        let trace = eliminate(game, Concept::Rat).expect("finite games always certify");
        Self { relation: game, trace }
    }
}

impl<'a, R: BeliefRelation + ?Sized> FiniteArena<'a, R> {
    pub fn for_relation(relation: &'a R) -> Self {
        Self {
            relation,
            trace: rat_of_relation(relation),
        }
    }

    fn opponents(&self, player: Player) -> BTreeSet<usize> {
        self.relation.all_strategies(player.other())
    }
}

fn random_objective(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..n).map(|_| Rational::from_integer(rng.gen_range(-5i64..=5).into())).collect()
}

impl<R: BeliefRelation + ?Sized> Arena for FiniteArena<'_, R> {
    fn strategy_id(&self, player: Player, s: usize) -> String {
        self.relation.strategy_id(player, s).to_string()
    }

    fn parse_strategy(&self, player: Player, id: &str) -> Option<usize> {
        self.relation.index_of(player, id)
    }

    fn is_strategy(&self, player: Player, s: usize) -> bool {
        s < self.relation.num_strategies(player)
    }

    fn relates(&self, player: Player, s: usize, belief: &Belief) -> bool {
        self.relation.relates(player, s, belief)
    }

    fn elimination_ordinal(&self, player: Player, s: usize) -> Option<Ordinal> {
        self.trace.elimination_ordinal(player, s)
    }

    fn canonical_move(&self, player: Player, s: usize) -> Option<JMoveI> {
        let restriction = if self.trace.is_survivor(player, s) {
            self.trace.survivors(player.other()).clone()
        } else {
            self.opponents(player)
        };
        self.relation.justify(player, s, &restriction).map(JMoveI::tight)
    }

    fn random_move(&self, player: Player, s: usize, rng: &mut ChaCha8Rng) -> Option<JMoveI> {
        let all: Vec<usize> = self.opponents(player).into_iter().collect();
        let vertex = |restriction: &BTreeSet<usize>, rng: &mut ChaCha8Rng| -> Option<Belief> {
            let system = self.relation.restricted_system(player, s, restriction);
            let objective = random_objective(system.num_vars, rng);
            match lp_optimize(&system.maximize(objective)).expect("relation slices are well formed") {
                LpSolution::Optimal { point, .. } => Some(belief_from_point(&point)),
                _ => None,
            }
        };
        let sample: BTreeSet<usize> = all.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let full: BTreeSet<usize> = all.iter().copied().collect();
        let first = if sample.is_empty() { None } else { vertex(&sample, rng) };
        let (first, region) = match first {
            Some(mu) => (mu, sample),
            None => (vertex(&full, rng)?, full),
        };
        // average with a second vertex of the same convex slice now and then
        let belief = match rng.gen_bool(0.5).then(|| vertex(&region, rng)).flatten() {
            Some(second) => first.mix(&Rational::new(1.into(), 2.into()), &second),
            None => first,
        };
        let mut support_set: BTreeSet<usize> = belief.support().iter().copied().collect();
        for &t in &all {
            if rng.gen_bool(0.25) {
                support_set.insert(t);
            }
        }
        Some(JMoveI { belief, support_set })
    }

    fn describe_beliefs(&self, player: Player, s: usize) -> String {
        let system = self.relation.system(player, s);
        let opponent = player.other();
        let names: Vec<String> = (0..system.num_vars)
            .map(|t| format!("mu({})", self.relation.strategy_id(opponent, t)))
            .collect();
        describe_system(&system, &names)
    }
}

/// One line per row, `c·mu(x) + ... <= r`, skipping zero coefficients.
pub fn describe_system(system: &LinearSystem, names: &[String]) -> String {
    let mut out = String::new();
    for c in &system.constraints {
        let terms: Vec<String> = c
            .coeffs
            .iter()
            .zip(names)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, name)| {
                if *a == Rational::from_integer(1.into()) {
                    name.clone()
                } else if *a == Rational::from_integer((-1).into()) {
                    format!("-{name}")
                } else {
                    format!("{}*{name}", short_string(a))
                }
            })
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Lt => "<",
        };
        out.push_str(&format!("{lhs} {rel} {}\n", short_string(&c.rhs)));
    }
    out
}

/// The justification game of a ranked integer game. A belief justifies `x`
/// iff all its weight sits on strictly smaller ranks.
pub struct RankedArena {
    pub engine: RankedEngine,
}

impl RankedArena {
    pub fn new(engine: RankedEngine) -> Self {
        Self { engine }
    }

    /// The largest-rank strategy below the horizon whose rank is below
    /// that of `x`, least index among ties.
    pub fn predecessor(&self, x: usize) -> Option<usize> {
        let game = &self.engine.game;
        let rank = game.rank(x as u64);
        (0..game.horizon)
            .filter(|&y| game.rank(y) < rank)
            .max_by(|&a, &b| game.rank(a).cmp(&game.rank(b)).then(b.cmp(&a)))
            .map(|y| y as usize)
    }
}

impl Arena for RankedArena {
    fn strategy_id(&self, _player: Player, s: usize) -> String {
        s.to_string()
    }

    fn parse_strategy(&self, _player: Player, id: &str) -> Option<usize> {
        id.parse().ok()
    }

    fn is_strategy(&self, _player: Player, _s: usize) -> bool {
        true
    }

    fn relates(&self, _player: Player, s: usize, belief: &Belief) -> bool {
        let game = &self.engine.game;
        let rank = game.rank(s as u64);
        belief.is_concentrated(|&t| game.rank(t as u64) < rank)
    }

    fn elimination_ordinal(&self, player: Player, s: usize) -> Option<Ordinal> {
        self.engine.elimination_ordinal(player, s as u64)
    }

    fn canonical_move(&self, _player: Player, s: usize) -> Option<JMoveI> {
        self.predecessor(s).map(|y| JMoveI::tight(Belief::dirac(y)))
    }

    fn random_move(&self, _player: Player, s: usize, rng: &mut ChaCha8Rng) -> Option<JMoveI> {
        let game = &self.engine.game;
        let rank = game.rank(s as u64);
        let below: Vec<usize> = (0..game.horizon)
            .filter(|&y| game.rank(y) < rank)
            .map(|y| y as usize)
            .collect();
        if below.is_empty() {
            return None;
        }
        let k = rng.gen_range(1..=below.len().min(3));
        let chosen: Vec<usize> = below.choose_multiple(rng, k).copied().collect();
        let weights: Vec<(usize, Rational)> = chosen
            .iter()
            .map(|&y| (y, Rational::from_integer(rng.gen_range(1i64..=4).into())))
            .collect();
        let belief = Belief::normalized(weights).expect("positive weights");
        let mut support_set: BTreeSet<usize> = chosen.into_iter().collect();
        if rng.gen_bool(0.3) {
            support_set.insert(rng.gen_range(0..game.horizon) as usize);
        }
        Some(JMoveI { belief, support_set })
    }

    fn describe_beliefs(&self, _player: Player, s: usize) -> String {
        let game = &self.engine.game;
        format!("all weight on strategies of rank below {}\n", game.rank(s as u64))
    }
}

/// Rejects negative weights that slipped past parsing, used by audits.
pub(crate) fn weights_valid(belief: &Belief) -> bool {
    belief.weights().iter().all(|w| w.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::examples;
    use rand::SeedableRng;

    #[test]
    fn pd_legality() {
        let g = examples::prisoners_dilemma();
        let arena = FiniteArena::for_game(&g);
        assert!(!arena.has_legal_move_i(Player::One, 0));
        let pos = JPosition::start(Player::One, 1);
        let mv = JMoveI::tight(Belief::dirac(1));
        arena.check_move_i(&pos, &mv).unwrap();
        let next = pos.child(Move::I(mv));
        assert_eq!(arena.legal_moves_ii(&next).unwrap(), BTreeSet::from([1]));
        assert!(matches!(arena.legal_moves_i(&next), Err(GameStateError::WrongSide(Side::II))));
        let bad = JPosition::start(Player::One, 0);
        assert!(arena.check_move_i(&bad, &JMoveI::tight(Belief::dirac(1))).is_err());
    }

    #[test]
    fn owners_alternate() {
        let mut pos = JPosition::start(Player::Two, 4);
        assert_eq!(pos.current(), (Player::Two, 4));
        pos = pos.child(Move::I(JMoveI::tight(Belief::dirac(1)))).child(Move::II(1));
        assert_eq!(pos.current(), (Player::One, 1));
        assert_eq!(pos.side_to_move(), Side::I);
    }

    #[test]
    fn move_text_round_trip() {
        let g = examples::cascade();
        let arena = FiniteArena::for_game(&g);
        let pos = JPosition::start(Player::One, 1);
        let parsed = arena.parse_move(&pos, "mu: x=1/3 y=2/3 ; b: x y").unwrap();
        let text = arena.move_text(&pos, &parsed);
        assert_eq!(text, "mu: x=1/3 y=2/3 ; b: x y");
        assert_eq!(arena.parse_move(&pos, &text).unwrap(), parsed);
        let next = pos.child(parsed);
        assert_eq!(arena.parse_move(&next, "y").unwrap(), Move::II(1));
        assert!(arena.parse_move(&next, "q").is_err());
    }

    #[test]
    fn random_moves_are_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in examples::all() {
            let arena = FiniteArena::for_game(&g);
            for player in Player::BOTH {
                for s in 0..g.num_strategies(player) {
                    for _ in 0..20 {
                        match arena.random_move(player, s, &mut rng) {
                            Some(mv) => arena.check_move_i(&JPosition::start(player, s), &mv).unwrap(),
                            None => assert!(!arena.has_legal_move_i(player, s)),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn constraint_description() {
        let g = examples::cascade();
        let arena = FiniteArena::for_game(&g);
        let text = arena.describe_beliefs(Player::One, 1);
        assert_eq!(text, "mu(x) + mu(y) = 1\n-mu(x) <= 0\n-mu(y) <= 0\nmu(x) - 2*mu(y) <= 0\n");
    }
}
