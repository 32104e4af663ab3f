//! Random and exhaustive graph sources for the equivalence checks.
//!
//! Each sample is built from its own seed, so any single graph can be
//! regenerated from the seed printed next to it.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::DirectedGraph;

/// Edge probabilities; each sample draws one.
pub const EDGE_PROBABILITIES: [f64; 3] = [0.3, 0.5, 0.7];

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub seed: u64,
    pub p: f64,
    pub graph: DirectedGraph,
}

/// Seed of the `index`-th sample of a batch.
pub fn sample_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

/// Erdos-Renyi digraph: each ordered pair `(u, v)`, `u != v`, independently
/// with probability `p`. Self-loops are always present.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::new(n, edges).expect("n in range")
}

/// As [`random_digraph`] but over unordered pairs, mirrored.
pub fn random_undirected<R: Rng>(rng: &mut R, n: usize, p: f64) -> DirectedGraph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    DirectedGraph::undirected(n, pairs).expect("n in range")
}

/// One sample: `n` uniform in `n_min..=n_max`, then `p` from
/// [`EDGE_PROBABILITIES`], then the edges.
pub fn sample_graph(seed: u64, n_min: usize, n_max: usize, undirected: bool) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(n_min..=n_max);
    let p = *EDGE_PROBABILITIES.choose(&mut rng).expect("nonempty");
    let graph = if undirected { random_undirected(&mut rng, n, p) } else { random_digraph(&mut rng, n, p) };
    Sample { seed, p, graph }
}

/// Every self-looped digraph on `n` nodes, `2^(n(n-1))` of them.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = DirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    from_masks(n, pairs, false)
}

/// Every self-looped undirected graph on `n` nodes, `2^(n(n-1)/2)` of them.
pub fn all_undirected(n: usize) -> impl Iterator<Item = DirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    from_masks(n, pairs, true)
}

fn from_masks(n: usize, pairs: Vec<(usize, usize)>, undirected: bool) -> impl Iterator<Item = DirectedGraph> {
    assert!(pairs.len() < 32, "exhaustive enumeration is for tiny graphs");
    (0u32..1 << pairs.len()).map(move |mask| {
        let chosen = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
        if undirected {
            DirectedGraph::undirected(n, chosen).expect("n in range")
        } else {
            DirectedGraph::new(n, chosen).expect("n in range")
        }
    })
}
