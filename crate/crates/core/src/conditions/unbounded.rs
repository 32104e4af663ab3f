//! Conditions without a relay-depth bound, and the undirected
//! connectivity criterion.

use super::partition::{search, Labels};
use super::{check_condition_nc, ConditionKind, Partition, Verdict};
use crate::graph::{kappa_at_least, longest_path_length, vertex_connectivity_undirected, DirectedGraph, GraphError, NodeSet};

/// Relay depth at which bounded relaying is unrestricted: the longest path
/// length, but at least 1.
pub fn unrestricted_depth(g: &DirectedGraph) -> usize {
    longest_path_length(g).max(1)
}

/// `A -> B`: more than `f` distinct nodes of `A` have an edge into `B`.
fn reaches_enough(g: &DirectedGraph, a: NodeSet, b: NodeSet, f: usize) -> bool {
    let mut sources = NodeSet::EMPTY;
    for j in b {
        sources |= g.in_neighbors(j);
    }
    (sources & a).len() > f
}

/// For every `(L, C, R, F)`: `L u C -> R` or `R u C -> L`. Self-loops never
/// cross the partition, so they do not count.
pub fn check_condition_1(g: &DirectedGraph, f: usize) -> Verdict {
    let mut verdict = Verdict::new(ConditionKind::Condition1, g, f, None);
    let s = search(g.nodes(), f, Labels::Three, |_| {
        move |p: &Partition| reaches_enough(g, p.l | p.c, p.r, f) || reaches_enough(g, p.r | p.c, p.l, f)
    });
    verdict.holds = s.witness.is_none();
    verdict.witness = s.witness;
    verdict.checked_count = s.checked;
    verdict
}

/// For every split `(A, B, F)`: every node of `B` has `f + 1` internally
/// disjoint paths from `A` in `G - F`, or the same with `A` and `B`
/// exchanged. The witness reports `A` as `L` and `B` as `R`.
pub fn check_propagate(g: &DirectedGraph, f: usize) -> Verdict {
    let mut verdict = Verdict::new(ConditionKind::Propagate, g, f, None);
    let depth = g.n();
    let s = search(g.nodes(), f, Labels::Two, |faulty| {
        let gf = g.without(faulty);
        move |p: &Partition| {
            let spreads = |from: NodeSet, to: NodeSet| to.iter().all(|b| kappa_at_least(&gf, from, b, depth, f + 1));
            spreads(p.l, p.r) || spreads(p.r, p.l)
        }
    });
    verdict.holds = s.witness.is_none();
    verdict.witness = s.witness;
    verdict.checked_count = s.checked;
    verdict
}

/// Both sides of the undirected criterion: size and connectivity against the
/// relay-depth condition at unrestricted depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedReport {
    pub n: usize,
    pub f: usize,
    pub connectivity: usize,
    pub l_star: usize,
    /// `n >= 3f + 1` and connectivity at least `2f + 1`.
    pub lhs: bool,
    pub rhs: Verdict,
    pub agree: bool,
}

pub fn check_undirected_equivalence(g: &DirectedGraph, f: usize) -> Result<UndirectedReport, GraphError> {
    let connectivity = vertex_connectivity_undirected(g)?;
    let n = g.n();
    let lhs = n > 3 * f && connectivity > 2 * f;
    let l_star = unrestricted_depth(g);
    let rhs = check_condition_nc(g, f, l_star);
    let agree = lhs == rhs.holds;
    Ok(UndirectedReport { n, f, connectivity, l_star, lhs, rhs, agree })
}
