//! Unit-capacity vertex cuts via max-flow with node splitting.

use std::collections::VecDeque;

const INF: u32 = u32::MAX / 2;

/// Size of a minimum `source -> sink` vertex cut in the digraph on
/// `0..node_count` with the given edges. Every node other than the two
/// endpoints has capacity one; by Menger this equals the maximum number of
/// internally vertex-disjoint `source -> sink` paths.
///
/// Returns `None` when `source -> sink` is an edge, since no vertex cut
/// exists then.
pub fn min_vertex_cut(node_count: usize, edges: &[(usize, usize)], source: usize, sink: usize) -> Option<usize> {
    if edges.iter().any(|&(u, v)| u == source && v == sink) {
        return None;
    }
    // Node v splits into v_in = 2v and v_out = 2v + 1.
    let size = 2 * node_count;
    let mut cap = vec![vec![0u32; size]; size];
    for v in 0..node_count {
        let inner = if v == source || v == sink { INF } else { 1 };
        cap[2 * v][2 * v + 1] = inner;
    }
    for &(u, v) in edges {
        if u != v {
            cap[2 * u + 1][2 * v] = INF;
        }
    }
    Some(max_flow(&mut cap, 2 * source + 1, 2 * sink) as usize)
}

// Edmonds-Karp on a dense residual matrix. Graphs here have a few dozen nodes.
fn max_flow(cap: &mut [Vec<u32>], s: usize, t: usize) -> u32 {
    let size = cap.len();
    let mut total = 0;
    loop {
        let mut parent = vec![usize::MAX; size];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..size {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return total;
        }
        let mut push = INF;
        let mut v = t;
        while v != s {
            let u = parent[v];
            push = push.min(cap[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            cap[u][v] -= push;
            cap[v][u] += push;
            v = u;
        }
        total += push;
    }
}
