//! Small graph families with known verdicts.
//!
//! Node `p_k` is id `k - 1`.

use thiserror::Error;

use crate::graph::DirectedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("family `{family}` needs n >= {min}, got {got}")]
pub struct FamilyError {
    pub family: &'static str,
    pub min: usize,
    pub got: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Fig1,
    Fig2,
    Complete,
    Density,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Fig1, Family::Fig2, Family::Complete, Family::Density];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fig1 => "fig1",
            Family::Fig2 => "fig2",
            Family::Complete => "complete",
            Family::Density => "density",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Builds the family member; `n` is ignored for `Fig1`.
    pub fn build(self, n: usize) -> Result<DirectedGraph, FamilyError> {
        match self {
            Family::Fig1 => Ok(build_fig1()),
            Family::Fig2 => build_fig2(n),
            Family::Complete => build_complete(n),
            Family::Density => build_density_family(n),
        }
    }
}

/// Four-cycle `p1 p2 p3 p4` plus hub `p5` adjacent to all four, undirected.
pub fn build_fig1() -> DirectedGraph {
    let pairs = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)];
    DirectedGraph::undirected(5, pairs).expect("fixed five-node graph")
}

/// Cycle `p2 .. pn` of length `n - 1` plus hub `p1` adjacent to every cycle
/// node, undirected.
pub fn build_fig2(n: usize) -> Result<DirectedGraph, FamilyError> {
    check_min("fig2", 5, n)?;
    let cycle = (1..n).map(|v| (v, if v + 1 < n { v + 1 } else { 1 }));
    let spokes = (1..n).map(|v| (0, v));
    Ok(DirectedGraph::undirected(n, cycle.chain(spokes)).expect("n checked"))
}

pub fn build_complete(n: usize) -> Result<DirectedGraph, FamilyError> {
    check_min("complete", 2, n)?;
    Ok(DirectedGraph::complete(n).expect("n checked"))
}

/// Sparse family satisfying the relay-depth-1 condition with `f = 1`:
/// complete on `p1..p4`, then each further node gets edges from `p1`, `p2`
/// and `p3` only. Every node has exactly four in-neighbors counting itself.
pub fn build_density_family(n: usize) -> Result<DirectedGraph, FamilyError> {
    check_min("density", 4, n)?;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for u in 0..4 {
        for v in 0..4 {
            if u != v {
                edges.push((u, v));
            }
        }
    }
    for x in 4..n {
        edges.extend([(0, x), (1, x), (2, x)]);
    }
    Ok(DirectedGraph::new(n, edges).expect("n checked"))
}

fn check_min(family: &'static str, min: usize, got: usize) -> Result<(), FamilyError> {
    if got < min || got > crate::graph::MAX_NODES {
        return Err(FamilyError { family, min, got });
    }
    Ok(())
}
