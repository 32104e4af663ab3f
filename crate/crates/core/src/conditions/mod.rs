//! Topological feasibility conditions for iterative approximate Byzantine
//! consensus with relay depth `l`, and the checkers for their known
//! equivalents.
//!
//! Every checker is exhaustive. Partition enumeration costs roughly
//! `sum_{k<=f} C(n,k) 3^(n-k)` predicate evaluations, so these are desk-scale
//! tools (a dozen nodes, `f <= 2`).

pub mod equivalence;
pub mod families;
mod nc;
mod partition;
pub mod reduced;
pub mod report;
pub mod sampling;
mod unbounded;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, NodeSet};

pub use nc::{check_condition_nc, evaluate_partition, find_l0, influences, L0};
pub use partition::{partition_count, Partition};
pub use reduced::{enumerate_reduced_graphs, unique_source_condition, ChoiceMode, ReducedError, ReducedGraph, ReducedOptions};
pub use unbounded::{check_condition_1, check_propagate, check_undirected_equivalence, unrestricted_depth, UndirectedReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// Relay-depth condition on `(L, C, R, F)` partitions.
    Nc,
    /// Every reduced graph of the power graph has exactly one source component.
    UniqueSource,
    /// Aggregate incoming-neighbor condition on `(L, C, R, F)` partitions.
    Condition1,
    /// Disjoint-path propagation on `(A, B, F)` splits.
    Propagate,
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConditionKind::Nc => "condition-nc",
            ConditionKind::UniqueSource => "unique-source",
            ConditionKind::Condition1 => "condition-1",
            ConditionKind::Propagate => "propagate",
        };
        f.write_str(name)
    }
}

/// Outcome of an exhaustive condition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub condition: ConditionKind,
    pub n: usize,
    pub f: usize,
    /// Relay depth, for the conditions that have one.
    pub l: Option<usize>,
    pub holds: bool,
    /// First counterexample in enumeration order; present iff `!holds`.
    pub witness: Option<Partition>,
    /// For the unique-source condition: the per-node removal sets `C_i`
    /// (indexed by node id) of the failing reduced graph.
    pub reduced_choices: Option<Vec<NodeSet>>,
    /// Partitions (or reduced graphs) examined, up to and including the
    /// witness when there is one.
    pub checked_count: u64,
}

impl Verdict {
    fn new(condition: ConditionKind, g: &DirectedGraph, f: usize, l: Option<usize>) -> Self {
        Verdict { condition, n: g.n(), f, l, holds: true, witness: None, reduced_choices: None, checked_count: 0 }
    }
}

/// Size and in-degree bounds implied by Condition NC for `f >= 1`:
/// `n >= 3f + 1` and every node has at least `2f + 1` in-neighbors besides
/// itself.
pub fn check_degree_bounds(g: &DirectedGraph, f: usize) -> bool {
    g.n() > 3 * f && g.nodes().iter().all(|v| g.in_neighbors(v).without(v).len() > 2 * f)
}
