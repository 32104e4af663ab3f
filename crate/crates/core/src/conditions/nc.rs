use std::fmt;

use super::partition::{search, Labels};
use super::{ConditionKind, Partition, Verdict};
use crate::graph::{kappa_at_least, DirectedGraph, NodeSet};

/// `A =>_l B`: some `i` in `B` has `kappa_l(A, i) >= f + 1`.
pub fn influences(g: &DirectedGraph, a: NodeSet, b: NodeSet, l: usize, f: usize) -> bool {
    b.iter().any(|i| kappa_at_least(g, a, i, l, f + 1))
}

/// Both directions of the condition for one partition, evaluated in `G - F`:
/// `(R u C =>_l L, L u C =>_l R)`.
pub fn evaluate_partition(g: &DirectedGraph, p: &Partition, l: usize, f: usize) -> (bool, bool) {
    let gf = g.without(p.f);
    (influences(&gf, p.r | p.c, p.l, l, f), influences(&gf, p.l | p.c, p.r, l, f))
}

/// Exhaustive check of the relay-depth condition.
///
/// Cost is `partition_count(n, f)` evaluations of two `influences` calls;
/// fine up to about a dozen nodes.
pub fn check_condition_nc(g: &DirectedGraph, f: usize, l: usize) -> Verdict {
    assert!(l >= 1, "relay depth must be at least 1");
    let mut verdict = Verdict::new(ConditionKind::Nc, g, f, Some(l));
    let s = search(g.nodes(), f, Labels::Three, |faulty| {
        let gf = g.without(faulty);
        move |p: &Partition| influences(&gf, p.r | p.c, p.l, l, f) || influences(&gf, p.l | p.c, p.r, l, f)
    });
    verdict.holds = s.witness.is_none();
    verdict.witness = s.witness;
    verdict.checked_count = s.checked;
    verdict
}

/// Smallest relay depth at which the condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L0 {
    Depth(usize),
    NotSatisfiable,
}

impl fmt::Display for L0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L0::Depth(l) => write!(f, "{l}"),
            L0::NotSatisfiable => f.write_str("not-satisfiable"),
        }
    }
}

/// Ascending scan over `l = 1..n-1`; the condition is monotone in `l`.
pub fn find_l0(g: &DirectedGraph, f: usize) -> L0 {
    (1..g.n()).find(|&l| check_condition_nc(g, f, l).holds).map_or(L0::NotSatisfiable, L0::Depth)
}
