//! Exact arithmetic: rationals, small ordinals, and the simplex core.

pub mod lp;
pub mod ordinal;
pub mod rational;

pub use lp::{lp_feasible, lp_optimize, LinearSystem, LpError, LpSolution, Relation};
pub use ordinal::Ordinal;
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("malformed ordinal `{0}`")]
    Ordinal(String),
}
