//! Finite-depth belief hierarchies: coherence checks, local RCBR, the
//! witness builder, the least-selection lift and the witness file format.

pub mod check;
pub mod format;
pub mod lift;
pub mod point;
pub mod witness;

pub use check::{
    check_coherent, check_hereditarily_coherent, check_rcbr_star, rcbr_level, validate, HierarchyError,
};
pub use format::{emit_witness, parse_witness, parse_witnesses, Witness, WitnessFormatError};
pub use lift::{least_uniformizer, lubin_lift, EmptyFiber};
pub use point::{first_level, Hierarchy, Level, OrderPoint};
pub use witness::{build_witness, canonical_beliefs, lift_belief_map, WitnessEntry, WitnessMap, DEFAULT_DEPTH};
