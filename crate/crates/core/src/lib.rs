//! Feasibility conditions and a round simulator for iterative approximate
//! Byzantine consensus where messages may be relayed over at most `l` hops.
//!
//! Node ids are 0-based internally. Every file format and report uses
//! 1-based labels.

pub mod analysis;
pub mod conditions;
pub mod consensus;
pub mod graph;
pub mod messaging;

/// Version stamped into every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;
