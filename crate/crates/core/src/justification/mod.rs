//! The justification game.

mod arena;
mod convert;
mod play;
mod strategy;

pub use arena::{
    describe_system, Arena, FiniteArena, GameStateError, JMoveI, JPosition, Move, RankedArena, Side,
};
pub use convert::{hierarchy_from_strategy, StuckLine};
pub use play::{
    audit, descent_certificate, emit_record, parse_record, play, EndReason, Outcome, PlayRecord, RecordError,
    DEFAULT_PLY_BUDGET,
};
pub use strategy::{
    synthesize_i, synthesize_ii, CanonicalI, OpeningI, RandomLegalI, RandomLegalII, RankDescentII, StrategyI,
    StrategyII,
};

#[cfg(test)]
mod tests;
