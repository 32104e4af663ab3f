use super::{DirectedGraph, GraphError, NodeSet};

/// Whether some node of `from - blocked` reaches `to` in at most `l` hops
/// while avoiding `blocked`.
pub fn reaches_within(g: &DirectedGraph, from: NodeSet, to: usize, l: usize, blocked: NodeSet) -> bool {
    let alive = g.nodes() - blocked;
    if !alive.contains(to) {
        return false;
    }
    let mut seen = from & alive;
    if seen.contains(to) {
        return true;
    }
    let mut frontier = seen;
    for _ in 0..l {
        let mut next = NodeSet::EMPTY;
        for v in frontier {
            next |= g.out_neighbors(v);
        }
        next = (next & alive) - seen;
        if next.contains(to) {
            return true;
        }
        if next.is_empty() {
            return false;
        }
        seen |= next;
        frontier = next;
    }
    false
}

// Layer k holds the nodes at exact distance k from `start` (following `step`).
fn distance_layers(g: &DirectedGraph, start: NodeSet, l: usize, step: impl Fn(usize) -> NodeSet) -> Vec<NodeSet> {
    let mut layers = vec![start & g.nodes()];
    let mut seen = layers[0];
    for _ in 0..l {
        let mut next = NodeSet::EMPTY;
        for v in *layers.last().expect("nonempty") {
            next |= step(v);
        }
        next -= seen;
        seen |= next;
        layers.push(next);
    }
    layers
}

/// Nodes other than `x` lying on some `W -> x` path of at most `l` hops.
/// Only these can belong to a minimal restricted cut.
fn cut_candidates(g: &DirectedGraph, w: NodeSet, x: usize, l: usize) -> NodeSet {
    let from_w = distance_layers(g, w, l, |v| g.out_neighbors(v));
    let to_x = distance_layers(g, NodeSet::singleton(x), l, |v| g.in_neighbors(v));
    let mut candidates = NodeSet::EMPTY;
    for (a, layer_a) in from_w.iter().enumerate() {
        for layer_b in to_x.iter().take(l + 1 - a) {
            candidates |= *layer_a & *layer_b;
        }
    }
    candidates.without(x)
}

/// `kappa_l(W, x)`: the minimum number of nodes (never `x`, possibly members
/// of `W`) whose deletion destroys every `W -> x` path of at most `l` hops.
/// Zero when no such path exists in the first place.
///
/// Exact, by enumerating candidate cuts in increasing size.
pub fn kappa_l(g: &DirectedGraph, w: NodeSet, x: usize, l: usize) -> usize {
    assert!(!w.contains(x), "x must not belong to W");
    let candidates = cut_candidates(g, w, x, l);
    for size in 0..=candidates.len() {
        if candidates.subsets_of_size(size).any(|cut| !reaches_within(g, w, x, l, cut)) {
            return size;
        }
    }
    unreachable!("deleting every candidate separates W from x")
}

/// `kappa_l(W, x) >= k`, checking only cuts smaller than `k`.
pub fn kappa_at_least(g: &DirectedGraph, w: NodeSet, x: usize, l: usize, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if (w & g.nodes()).len() < k {
        return false;
    }
    let candidates = cut_candidates(g, w, x, l);
    if candidates.len() < k {
        return false;
    }
    !candidates.subsets_up_to(k - 1).any(|cut| !reaches_within(g, w, x, l, cut))
}

fn is_connected(g: &DirectedGraph) -> bool {
    let Some(start) = g.nodes().first() else {
        return true;
    };
    let mut seen = NodeSet::singleton(start);
    let mut frontier = seen;
    while !frontier.is_empty() {
        let mut next = NodeSet::EMPTY;
        for v in frontier {
            next |= g.out_neighbors(v);
        }
        frontier = next - seen;
        seen |= next;
    }
    seen == g.nodes()
}

/// Node connectivity of an undirected graph (symmetric edge set): the size of
/// a smallest node set whose removal disconnects the rest. A complete graph
/// has connectivity `n - 1` by convention.
pub fn vertex_connectivity_undirected(g: &DirectedGraph) -> Result<usize, GraphError> {
    g.require_symmetric()?;
    let n = g.n();
    if g.is_complete() {
        return Ok(n - 1);
    }
    for size in 0..n.saturating_sub(1) {
        if g.nodes().subsets_of_size(size).any(|cut| !is_connected(&g.without(cut))) {
            return Ok(size);
        }
    }
    unreachable!("a non-complete graph has two non-adjacent nodes to isolate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::families::build_fig1;

    fn set(labels: &[usize]) -> NodeSet {
        labels.iter().map(|l| l - 1).collect()
    }

    #[test]
    fn kappa_on_fig1_without_hub() {
        let g = build_fig1().without(set(&[5]));
        assert_eq!(kappa_l(&g, set(&[2, 3]), 0, 1), 1);
        assert_eq!(kappa_l(&g, set(&[2, 3]), 0, 2), 2);
        assert!(kappa_at_least(&g, set(&[2, 3]), 0, 2, 2));
        assert!(!kappa_at_least(&g, set(&[2, 3]), 0, 1, 2));
    }

    #[test]
    fn kappa_of_empty_source_is_zero() {
        let g = build_fig1();
        for l in 1..4 {
            assert_eq!(kappa_l(&g, NodeSet::EMPTY, 2, l), 0);
        }
    }

    #[test]
    fn kappa_zero_when_unreachable_within_depth() {
        let g = DirectedGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(kappa_l(&g, set(&[1]), 3, 2), 0);
        assert_eq!(kappa_l(&g, set(&[1]), 3, 3), 1);
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(vertex_connectivity_undirected(&DirectedGraph::complete(4).unwrap()), Ok(3));
        assert_eq!(vertex_connectivity_undirected(&build_fig1()), Ok(3));
        let path = DirectedGraph::undirected(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(vertex_connectivity_undirected(&path), Ok(1));
        let split = DirectedGraph::undirected(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(vertex_connectivity_undirected(&split), Ok(0));
        let directed = DirectedGraph::new(3, [(0, 1)]).unwrap();
        assert!(vertex_connectivity_undirected(&directed).is_err());
    }
}
