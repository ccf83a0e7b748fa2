//! The belief hierarchy generated by a strategy of player I.
//!
//! At a position defending `s`, I's belief `μ` gives `δ^1`; `δ^{k+1}` is
//! the pushforward of `μ` under `t ↦ (t, levels 1..k generated from the
//! position after II answers t)`.

use std::collections::HashMap;
use std::sync::Arc;

use super::arena::{Arena, JPosition, Move};
use super::strategy::StrategyI;
use crate::game::Player;
use crate::hierarchy::{first_level, Hierarchy, Level, OrderPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("the strategy fails at ply {ply}: {message}")]
pub struct StuckLine {
    pub ply: usize,
    pub message: String,
}

type Memo = HashMap<(Player, usize, usize), Vec<Arc<Level>>>;

/// Depth-`depth` hierarchy for `s`, checking that the strategy moves
/// legally on every line it reaches.
pub fn hierarchy_from_strategy(
    arena: &dyn Arena,
    player: Player,
    s: usize,
    strategy: &mut dyn StrategyI,
    depth: usize,
) -> Result<Hierarchy, StuckLine> {
    let mut memo = Memo::new();
    let levels = levels_at(arena, &JPosition::start(player, s), strategy, depth, &mut memo)?;
    Ok(Hierarchy::new(player, levels))
}

fn levels_at(
    arena: &dyn Arena,
    pos: &JPosition,
    strategy: &mut dyn StrategyI,
    depth: usize,
    memo: &mut Memo,
) -> Result<Vec<Arc<Level>>, StuckLine> {
    if depth == 0 {
        return Ok(Vec::new());
    }
    let key = strategy.positional_key(pos).map(|(p, s)| (p, s, depth));
    if let Some(levels) = key.and_then(|k| memo.get(&k)) {
        return Ok(levels.clone());
    }
    let stuck = |message: String| StuckLine { ply: pos.ply(), message };
    let mv = strategy
        .choose(arena, pos)
        .ok_or_else(|| stuck("no move".into()))?;
    arena.check_move_i(pos, &mv).map_err(stuck)?;
    let after = pos.child(Move::I(mv.clone()));
    let mut children = HashMap::new();
    for &t in mv.belief.support() {
        let child = after.child(Move::II(t));
        children.insert(t, levels_at(arena, &child, strategy, depth - 1, memo)?);
    }
    let mut levels = vec![Arc::new(first_level(&mv.belief))];
    for k in 1..depth {
        levels.push(Arc::new(mv.belief.pushforward(|t| OrderPoint {
            strategy: *t,
            beliefs: children[t][..k].to_vec(),
        })));
    }
    if let Some(k) = key {
        memo.insert(k, levels.clone());
    }
    Ok(levels)
}
