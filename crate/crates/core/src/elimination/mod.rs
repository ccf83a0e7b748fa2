//! Iterated elimination: the four game concepts, rationalizability for
//! abstract relations, and the ranked integer games.

pub mod finite;
pub mod ranked;
pub mod relation;

pub use finite::{
    check_e_justified, eliminate, rat_of_relation, Concept, EliminationCertificate, EliminationError,
    EliminationTrace, JustificationReport, Stage, TraceError,
};
pub use ranked::{
    emit_ranked_game, parse_ranked_game, ranked_justifiable, ranked_stages, RankedEngine, RankedError, RankedGame,
    RankedSurvivors,
};
pub use relation::{BeliefRelation, PolyhedralRelation, RelationError};
