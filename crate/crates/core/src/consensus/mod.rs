//! Synchronous round engine for the trimmed-mean update with relayed
//! messages, driven by pluggable Byzantine adversaries.
//!
//! Each round every node sends its state along every path of at most `l`
//! hops, the adversary rewrites values on paths that touch a faulty node, and
//! every fault-free node trims and averages what it received.

mod adversary;
pub mod config;
mod engine;
pub mod trace;

use thiserror::Error;

use crate::graph::NodeSet;
use crate::messaging::TrimError;

pub use adversary::{build_adversary, Adversary, AdversaryStrategy, RoundContext, SplitLabels};
pub use config::{ConfigError, SessionConfig};
pub use engine::{
    apply_adversary, generate_outbound, run, run_with, update_state, RoundRecord, RoutingTable, RunOutcome, SimulationTrace, Tamper, Update,
};

/// What a receiver assumes for a message that never arrived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefaultValuePolicy {
    /// The receiver's own state from the previous round.
    ReceiverPrevious,
    Fixed(f64),
    /// The smallest fault-free initial state.
    InitialMin,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid session: {0}")]
    InvalidConfig(String),
    #[error("round {round}: adversary changed message along {path}, which avoids every faulty node")]
    ContractViolation { round: usize, path: String },
    #[error("round {round}: {source}")]
    NotWellDefined {
        round: usize,
        #[source]
        source: TrimError,
    },
    #[error("round {round}: node {} kept no messages", node + 1)]
    EmptyKept { round: usize, node: usize },
    #[error("round {round}: node {} received no self-loop message", node + 1)]
    MissingSelfLoop { round: usize, node: usize },
}

impl EngineError {
    /// Offending node and round, when the error is tied to one receiver.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            EngineError::NotWellDefined { round, source: TrimError::NotWellDefined { receiver, .. } } => Some((*receiver, *round)),
            EngineError::EmptyKept { round, node } | EngineError::MissingSelfLoop { round, node } => Some((*node, *round)),
            _ => None,
        }
    }
}

pub(crate) fn fault_free(order: usize, faulty: NodeSet) -> NodeSet {
    NodeSet::full(order) - faulty
}
