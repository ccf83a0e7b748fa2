//! Strategic-form games, finite-support measures and the game file format.

pub mod examples;
pub mod format;
pub mod measure;
pub mod model;

pub use format::{emit_game, parse_game, FormatError};
pub use measure::{FiniteMeasure, MeasureError};
pub use model::{Belief, Game, GameError, Player, Rectangle};
