//! Strategies for both sides of the justification game.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::arena::{Arena, GameStateError, JMoveI, JPosition};
use crate::exact::Ordinal;
use crate::game::Player;

pub trait StrategyI {
    /// I's move at `pos`, or `None` to give up.
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<JMoveI>;

    /// A key identifying positions where the move depends only on the
    /// current strategy; `None` when the history matters.
    fn positional_key(&self, pos: &JPosition) -> Option<(Player, usize)> {
        let _ = pos;
        None
    }
}

pub trait StrategyII {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<usize>;
}

/// Plays the arena's canonical move for the current strategy. Moves are
/// cached, so one value should only be used with one arena.
#[derive(Debug, Clone, Default)]
pub struct CanonicalI {
    cache: HashMap<(Player, usize), Option<JMoveI>>,
}

impl CanonicalI {
    pub fn new() -> Self {
        Self::default()
    }
}

impl StrategyI for CanonicalI {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<JMoveI> {
        let (owner, s) = pos.current();
        self.cache
            .entry((owner, s))
            .or_insert_with(|| arena.canonical_move(owner, s))
            .clone()
    }

    fn positional_key(&self, pos: &JPosition) -> Option<(Player, usize)> {
        Some(pos.current())
    }
}

/// Plays a fixed move at ply 0 and then follows another strategy.
pub struct OpeningI<S> {
    pub opening: JMoveI,
    pub rest: S,
}

impl<S: StrategyI> StrategyI for OpeningI<S> {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<JMoveI> {
        if pos.ply() == 0 {
            Some(self.opening.clone())
        } else {
            self.rest.choose(arena, pos)
        }
    }

    fn positional_key(&self, pos: &JPosition) -> Option<(Player, usize)> {
        if pos.ply() == 0 {
            None
        } else {
            self.rest.positional_key(pos)
        }
    }
}

pub struct RandomLegalI {
    rng: ChaCha8Rng,
}

impl RandomLegalI {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl StrategyI for RandomLegalI {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<JMoveI> {
        let (owner, s) = pos.current();
        arena.random_move(owner, s, &mut self.rng)
    }
}

/// Picks the element of `b` eliminated earliest, least index among ties.
/// Survivors rank above every ordinal.
#[derive(Debug, Clone, Copy, Default)]
pub struct RankDescentII;

fn ordinal_order(a: &Option<Ordinal>, b: &Option<Ordinal>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

impl StrategyII for RankDescentII {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<usize> {
        let (owner, _) = pos.current();
        let opponent = owner.other();
        let b = arena.legal_moves_ii(pos).ok()?;
        b.into_iter()
            .map(|t| (arena.elimination_ordinal(opponent, t), t))
            .min_by(|(oa, ta), (ob, tb)| ordinal_order(oa, ob).then(ta.cmp(tb)))
            .map(|(_, t)| t)
    }
}

pub struct RandomLegalII {
    rng: ChaCha8Rng,
}

impl RandomLegalII {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl StrategyII for RandomLegalII {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<usize> {
        arena.legal_moves_ii(pos).ok()?.into_iter().choose(&mut self.rng)
    }
}

/// I's winning strategy from `s`, defined only for survivors.
pub fn synthesize_i(arena: &dyn Arena, player: Player, s: usize) -> Result<CanonicalI, GameStateError> {
    check_strategy(arena, player, s)?;
    if arena.is_survivor(player, s) {
        Ok(CanonicalI::new())
    } else {
        Err(GameStateError::Eliminated {
            player,
            id: arena.strategy_id(player, s),
        })
    }
}

/// II's winning strategy from `s`, defined only for eliminated strategies.
pub fn synthesize_ii(arena: &dyn Arena, player: Player, s: usize) -> Result<RankDescentII, GameStateError> {
    check_strategy(arena, player, s)?;
    if arena.is_survivor(player, s) {
        Err(GameStateError::Survivor {
            player,
            id: arena.strategy_id(player, s),
        })
    } else {
        Ok(RankDescentII)
    }
}

fn check_strategy(arena: &dyn Arena, player: Player, s: usize) -> Result<(), GameStateError> {
    if arena.is_strategy(player, s) {
        Ok(())
    } else {
        Err(GameStateError::UnknownStrategy {
            player,
            id: s.to_string(),
        })
    }
}
