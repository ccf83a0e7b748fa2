//! Exact tools for rationalizability on finite two-player games.
//!
//! Iterated elimination (RAT, MRAT, IU, MIU, and rationalizability for
//! abstract strategy-belief relations) runs on exact rationals. Survivors
//! get finite-depth belief hierarchies witnessing rationality and common
//! belief in rationality; the justification game, in which one side defends
//! a strategy with beliefs while the other challenges it, lives in
//! [`justification`].

pub mod corpus;
pub mod elimination;
pub mod exact;
pub mod game;
pub mod hierarchy;
pub mod justification;
pub mod response;
pub mod sweep;

pub use exact::{Ordinal, Rational};
