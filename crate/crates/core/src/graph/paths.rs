use super::{DirectedGraph, NodeSet, Path};

/// Every simple `src -> dst` path of 1 to `l` hops, in lexicographic order of
/// node sequences. For `src == dst` the only path is the self-loop.
pub fn enumerate_paths(g: &DirectedGraph, src: usize, dst: usize, l: usize) -> Vec<Path> {
    assert!(l >= 1, "relay depth must be at least 1");
    if !g.contains(src) || !g.contains(dst) {
        return Vec::new();
    }
    if src == dst {
        return vec![Path::self_loop(src)];
    }
    let mut found = Vec::new();
    let mut stack = vec![src];
    extend(g, dst, l, &mut stack, NodeSet::singleton(src), &mut found);
    found
}

// Neighbors are visited in ascending order and no path is a prefix of
// another (all end at `dst`, which is never revisited), so DFS emits them in
// lexicographic order.
fn extend(g: &DirectedGraph, dst: usize, budget: usize, stack: &mut Vec<usize>, visited: NodeSet, found: &mut Vec<Path>) {
    let tail = *stack.last().expect("stack holds the source");
    for next in g.out_neighbors(tail) - visited {
        if next == dst {
            let mut nodes = stack.clone();
            nodes.push(dst);
            found.push(Path::from_nodes(nodes));
        } else if budget > 1 {
            stack.push(next);
            extend(g, dst, budget - 1, stack, visited.with(next), found);
            stack.pop();
        }
    }
}

/// Number of simple `src -> dst` paths with at most `l` hops (the self-loop
/// counts once when `src == dst`).
pub fn count_paths(g: &DirectedGraph, src: usize, dst: usize, l: usize) -> usize {
    enumerate_paths(g, src, dst, l).len()
}

/// The `l`-hop in- and out-neighborhoods of a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub center: usize,
    pub depth: usize,
    /// `N^{l-}`: nodes that reach `center` within `depth` hops.
    pub inbound: NodeSet,
    /// `N^{l+}`: nodes reachable from `center` within `depth` hops.
    pub outbound: NodeSet,
}

pub fn neighborhood(g: &DirectedGraph, i: usize, l: usize) -> Neighborhood {
    Neighborhood {
        center: i,
        depth: l,
        inbound: bounded_closure(g, i, l, |v| g.in_neighbors(v)),
        outbound: bounded_closure(g, i, l, |v| g.out_neighbors(v)),
    }
}

// A shortest walk is a simple path, so layered BFS is exact here.
fn bounded_closure(g: &DirectedGraph, start: usize, l: usize, step: impl Fn(usize) -> NodeSet) -> NodeSet {
    let mut seen = NodeSet::singleton(start) & g.nodes();
    let mut frontier = seen;
    for _ in 0..l {
        let mut next = NodeSet::EMPTY;
        for v in frontier {
            next |= step(v);
        }
        next -= seen;
        if next.is_empty() {
            break;
        }
        seen |= next;
        frontier = next;
    }
    seen
}

/// Length of a longest simple path, self-loops excluded. Exhaustive; meant
/// for graphs of a dozen nodes or so. Returns 0 when the graph has no edges
/// other than self-loops.
pub fn longest_path_length(g: &DirectedGraph) -> usize {
    let target = g.n().saturating_sub(1);
    let mut best = 0;
    for start in g.nodes() {
        best = best.max(deepest(g, start, NodeSet::singleton(start), target));
        if best == target {
            break;
        }
    }
    best
}

fn deepest(g: &DirectedGraph, v: usize, visited: NodeSet, cap: usize) -> usize {
    let mut best = 0;
    for next in g.out_neighbors(v) - visited {
        best = best.max(1 + deepest(g, next, visited.with(next), cap));
        if best == cap {
            break;
        }
    }
    best
}
