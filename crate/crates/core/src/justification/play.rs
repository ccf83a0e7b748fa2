//! Running a justification game and auditing the transcript.

use std::fmt;

use super::arena::{weights_valid, Arena, JPosition, Move, Side};
use super::strategy::{StrategyI, StrategyII};
use crate::exact::Ordinal;
use crate::game::Player;

pub const DEFAULT_PLY_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndReason {
    /// The side to move produced no move.
    NoMove,
    /// The side to move produced an illegal move, described.
    Illegal(String),
    /// I survived the whole budget.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub winner: Side,
    pub ply: usize,
    pub reason: EndReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayRecord {
    pub root_player: Player,
    pub root: usize,
    /// Legal moves only; an illegal move ends play and is kept in the
    /// outcome.
    pub moves: Vec<Move>,
    pub outcome: Outcome,
}

impl PlayRecord {
    pub fn final_position(&self) -> JPosition {
        JPosition {
            root_player: self.root_player,
            root: self.root,
            history: self.moves.clone(),
        }
    }

    pub fn ii_moves(&self) -> Vec<usize> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                Move::II(t) => Some(*t),
                Move::I(_) => None,
            })
            .collect()
    }
}

/// Plays from `root` until a side fails to move legally or `budget` plies
/// have been made.
pub fn play(
    arena: &dyn Arena,
    root_player: Player,
    root: usize,
    first: &mut dyn StrategyI,
    second: &mut dyn StrategyII,
    budget: usize,
) -> PlayRecord {
    let mut pos = JPosition::start(root_player, root);
    let outcome = loop {
        let ply = pos.ply();
        if ply >= budget {
            break Outcome {
                winner: Side::I,
                ply,
                reason: EndReason::Budget,
            };
        }
        let step = match pos.side_to_move() {
            Side::I => first
                .choose(arena, &pos)
                .map(|mv| arena.check_move_i(&pos, &mv).map(|()| Move::I(mv))),
            Side::II => second
                .choose(arena, &pos)
                .map(|t| arena.check_move_ii(&pos, t).map(|()| Move::II(t))),
        };
        let loser = pos.side_to_move();
        let winner = match loser {
            Side::I => Side::II,
            Side::II => Side::I,
        };
        match step {
            None => {
                break Outcome {
                    winner,
                    ply,
                    reason: EndReason::NoMove,
                }
            }
            Some(Err(detail)) => {
                break Outcome {
                    winner,
                    ply,
                    reason: EndReason::Illegal(detail),
                }
            }
            Some(Ok(mv)) => pos.history.push(mv),
        }
    };
    PlayRecord {
        root_player,
        root,
        moves: pos.history,
        outcome,
    }
}

/// Text form of a record: a header, one line per ply and the outcome.
pub fn emit_record(arena: &dyn Arena, record: &PlayRecord) -> String {
    let mut out = format!(
        "play player={} root={}\n",
        record.root_player,
        arena.strategy_id(record.root_player, record.root)
    );
    let mut pos = JPosition::start(record.root_player, record.root);
    for mv in &record.moves {
        let side = pos.side_to_move();
        out.push_str(&format!("ply {} {side}: {}\n", pos.ply(), arena.move_text(&pos, mv)));
        pos = pos.child(mv.clone());
    }
    let o = &record.outcome;
    let why = match &o.reason {
        EndReason::NoMove => format!("{} has no move", loser(o.winner)),
        EndReason::Illegal(detail) => format!("{} moved illegally: {detail}", loser(o.winner)),
        EndReason::Budget => "budget exhausted".to_string(),
    };
    out.push_str(&format!("winner {} at ply {}: {why}\n", o.winner, o.ply));
    out
}

fn loser(winner: Side) -> Side {
    match winner {
        Side::I => Side::II,
        Side::II => Side::I,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

pub fn parse_record(arena: &dyn Arena, text: &str) -> Result<PlayRecord, RecordError> {
    let err = |line: usize, message: String| RecordError { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| err(1, "empty record".into()))?;
    let rest = header
        .strip_prefix("play player=")
        .ok_or_else(|| err(n, "expected `play player=<1|2> root=<id>`".into()))?;
    let (p, root) = rest
        .split_once(" root=")
        .ok_or_else(|| err(n, "expected `root=<id>`".into()))?;
    let root_player = p
        .parse::<u8>()
        .ok()
        .and_then(Player::from_number)
        .ok_or_else(|| err(n, format!("bad player `{p}`")))?;
    let root = arena
        .parse_strategy(root_player, root)
        .ok_or_else(|| err(n, format!("player {root_player} has no strategy `{root}`")))?;
    let mut pos = JPosition::start(root_player, root);
    for (n, line) in lines {
        if let Some(rest) = line.strip_prefix("winner ") {
            let (head, why) = rest
                .split_once(": ")
                .ok_or_else(|| err(n, "expected `winner <side> at ply <n>: <reason>`".into()))?;
            let (side, ply) = head
                .split_once(" at ply ")
                .ok_or_else(|| err(n, "expected `at ply`".into()))?;
            let winner = match side {
                "I" => Side::I,
                "II" => Side::II,
                _ => return Err(err(n, format!("unknown side `{side}`"))),
            };
            let ply = ply.parse().map_err(|_| err(n, format!("bad ply `{ply}`")))?;
            let reason = if why == "budget exhausted" {
                EndReason::Budget
            } else if why.ends_with("has no move") {
                EndReason::NoMove
            } else if let Some((_, detail)) = why.split_once("moved illegally: ") {
                EndReason::Illegal(detail.to_string())
            } else {
                return Err(err(n, format!("unknown reason `{why}`")));
            };
            return Ok(PlayRecord {
                root_player,
                root,
                moves: pos.history,
                outcome: Outcome { winner, ply, reason },
            });
        }
        let (head, body) = line
            .split_once(": ")
            .ok_or_else(|| err(n, "expected `ply <n> <side>: <move>`".into()))?;
        let expected = format!("ply {} {}", pos.ply(), pos.side_to_move());
        if head != expected {
            return Err(err(n, format!("expected `{expected}`, found `{head}`")));
        }
        let mv = arena.parse_move(&pos, body).map_err(|m| err(n, m))?;
        pos = pos.child(mv);
    }
    Err(err(text.lines().count().max(1), "missing `winner` line".into()))
}

/// Re-checks every move of a record and that the outcome follows from it.
pub fn audit(arena: &dyn Arena, record: &PlayRecord) -> Result<(), String> {
    let mut pos = JPosition::start(record.root_player, record.root);
    if !arena.is_strategy(record.root_player, record.root) {
        return Err("the root is not a strategy".into());
    }
    for mv in &record.moves {
        let ply = pos.ply();
        let check = match mv {
            Move::I(m) if pos.side_to_move() == Side::I => {
                if !weights_valid(&m.belief) {
                    Err("non-positive weight".to_string())
                } else {
                    arena.check_move_i(&pos, m)
                }
            }
            Move::II(t) if pos.side_to_move() == Side::II => arena.check_move_ii(&pos, *t),
            _ => Err("move by the wrong side".to_string()),
        };
        check.map_err(|e| format!("ply {ply}: {e}"))?;
        pos = pos.child(mv.clone());
    }
    let o = &record.outcome;
    if o.ply != pos.ply() {
        return Err(format!("outcome at ply {} but the record has {} plies", o.ply, pos.ply()));
    }
    let to_move = pos.side_to_move();
    match &o.reason {
        EndReason::Budget if o.winner != Side::I => Err("only I wins on budget".into()),
        EndReason::NoMove | EndReason::Illegal(_) if o.winner == to_move => {
            Err(format!("{to_move} was to move and cannot win by failing to"))
        }
        _ => Ok(()),
    }
}

/// The elimination ordinals of the root and of II's successive picks, if
/// they strictly decrease.
pub fn descent_certificate(arena: &dyn Arena, record: &PlayRecord) -> Option<Vec<Ordinal>> {
    let mut pos = JPosition::start(record.root_player, record.root);
    let mut chain = vec![arena.elimination_ordinal(record.root_player, record.root)?];
    for mv in &record.moves {
        if let Move::II(t) = mv {
            let (owner, _) = pos.current();
            let gamma = arena.elimination_ordinal(owner.other(), *t)?;
            if &gamma >= chain.last().expect("nonempty") {
                return None;
            }
            chain.push(gamma);
        }
        pos = pos.child(mv.clone());
    }
    Some(chain)
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} wins at ply {}", self.winner, self.ply)
    }
}
