//! Library results against brute-force oracles written straight from the
//! definitions, on exhaustive or seeded-random small instances.

use std::collections::BTreeSet;

use iabc::analysis::{delta_coefficient, lambda_coefficient, WeightMatrix};
use iabc::conditions::sampling::{all_digraphs, random_digraph, sample_graph};
use iabc::conditions::{check_condition_nc, enumerate_reduced_graphs, partition_count, unique_source_condition, ReducedOptions};
use iabc::graph::{
    enumerate_paths, kappa_at_least, kappa_l, longest_path_length, vertex_connectivity_undirected, DirectedGraph, NodeSet, Path,
};
use iabc::messaging::{compute_trim, min_message_cover, Message, MessageSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All simple paths of 1..=l hops, by trying every ordered selection of
/// distinct intermediate nodes.
fn oracle_paths(g: &DirectedGraph, src: usize, dst: usize, l: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if src == dst {
        out.insert(vec![src, src]);
        return out;
    }
    let others: Vec<usize> = g.nodes().iter().filter(|&v| v != src && v != dst).collect();
    fn sequences(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut all = Vec::new();
        for (i, &v) in pool.iter().enumerate() {
            let rest: Vec<usize> = pool.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).collect();
            for mut s in sequences(&rest, k - 1) {
                s.insert(0, v);
                all.push(s);
            }
        }
        all
    }
    for mid in 0..l.min(others.len() + 1) {
        for seq in sequences(&others, mid) {
            let nodes: Vec<usize> = std::iter::once(src).chain(seq).chain(std::iter::once(dst)).collect();
            if nodes.windows(2).all(|w| g.has_edge(w[0], w[1])) {
                out.insert(nodes);
            }
        }
    }
    out
}

fn all_subsets(pool: NodeSet) -> Vec<NodeSet> {
    let items = pool.to_vec();
    (0u64..1 << items.len()).map(|mask| items.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect()).collect()
}

/// Smallest set of nodes other than `x` meeting every `W -> x` path.
fn oracle_kappa(g: &DirectedGraph, w: NodeSet, x: usize, l: usize) -> usize {
    let paths: Vec<NodeSet> =
        w.iter().filter(|&s| g.contains(s)).flat_map(|s| oracle_paths(g, s, x, l)).map(|p| p.into_iter().collect::<NodeSet>()).collect();
    all_subsets(g.nodes().without(x)).into_iter().filter(|cut| paths.iter().all(|p| p.intersects(*cut))).map(|c| c.len()).min().unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn paths_match_oracle() {
    let mut r = rng(1);
    for _ in 0..60 {
        let n = r.random_range(2..=6);
        let g = random_digraph(&mut r, n, 0.5);
        for l in 1..=4 {
            for s in 0..n {
                for d in 0..n {
                    let got: BTreeSet<Vec<usize>> = enumerate_paths(&g, s, d, l).iter().map(|p| p.nodes().to_vec()).collect();
                    assert_eq!(got, oracle_paths(&g, s, d, l), "{s}->{d} l={l}");
                }
            }
        }
    }
}

#[test]
fn longest_path_matches_oracle() {
    let mut r = rng(2);
    for _ in 0..60 {
        let n = r.random_range(2..=6);
        let g = random_digraph(&mut r, n, 0.4);
        let want = (0..n)
            .flat_map(|s| (0..n).filter(move |&d| d != s).map(move |d| (s, d)))
            .flat_map(|(s, d)| oracle_paths(&g, s, d, n - 1))
            .map(|p| p.len() - 1)
            .max()
            .unwrap_or(0);
        assert_eq!(longest_path_length(&g), want);
    }
}

#[test]
fn kappa_matches_oracle() {
    let mut r = rng(3);
    for _ in 0..80 {
        let n = r.random_range(2..=6);
        let g = random_digraph(&mut r, n, 0.5);
        let x = r.random_range(0..n);
        let w: NodeSet = (0..n).filter(|&v| v != x && r.random_bool(0.5)).collect();
        for l in 1..n {
            let want = oracle_kappa(&g, w, x, l);
            assert_eq!(kappa_l(&g, w, x, l), want, "W={w} x={x} l={l}");
            for k in 0..=n {
                assert_eq!(kappa_at_least(&g, w, x, l, k), want >= k);
            }
        }
    }
}

#[test]
fn undirected_connectivity_matches_oracle() {
    let mut r = rng(4);
    for _ in 0..60 {
        let g = sample_graph(r.random(), 2, 6, true).graph;
        let n = g.n();
        let connected_without = |cut: NodeSet| {
            let alive = g.nodes() - cut;
            let Some(start) = alive.first() else { return true };
            let mut seen = NodeSet::singleton(start);
            loop {
                let next = seen.iter().fold(seen, |acc, v| acc | (g.out_neighbors(v) & alive));
                if next == seen {
                    return seen == alive;
                }
                seen = next;
            }
        };
        let want = all_subsets(g.nodes())
            .into_iter()
            .filter(|c| c.len() < n - 1 && !connected_without(*c))
            .map(|c| c.len())
            .min()
            .unwrap_or(n - 1);
        assert_eq!(vertex_connectivity_undirected(&g).unwrap(), want);
    }
}

#[test]
fn partition_count_matches_enumeration() {
    for n in 2..=7 {
        for f in 0..=2 {
            let mut count = 0u64;
            for code in 0..4u64.pow(n as u32) {
                let labels: Vec<u64> = (0..n).map(|i| code / 4u64.pow(i as u32) % 4).collect();
                let size = |k| labels.iter().filter(|&&x| x == k).count();
                if size(3) <= f && size(0) > 0 && size(2) > 0 {
                    count += 1;
                }
            }
            assert_eq!(partition_count(n, f), count, "n={n} f={f}");
        }
    }
}

/// The condition from its definition, with the oracle connectivity.
fn oracle_nc(g: &DirectedGraph, f: usize, l: usize) -> bool {
    let n = g.n();
    let influences = |gf: &DirectedGraph, a: NodeSet, b: NodeSet| b.iter().any(|i| oracle_kappa(gf, a, i, l) > f);
    for code in 0..4u64.pow(n as u32) {
        let part = |k: u64| (0..n).filter(|&i| code / 4u64.pow(i as u32) % 4 == k).collect::<NodeSet>();
        let (lp, cp, rp, fp) = (part(0), part(1), part(2), part(3));
        if fp.len() > f || lp.is_empty() || rp.is_empty() {
            continue;
        }
        let gf = g.without(fp);
        if !influences(&gf, rp | cp, lp) && !influences(&gf, lp | cp, rp) {
            return false;
        }
    }
    true
}

#[test]
fn condition_matches_oracle() {
    let mut r = rng(5);
    for _ in 0..40 {
        let g = sample_graph(r.random(), 3, 5, false).graph;
        for l in 1..=2 {
            assert_eq!(check_condition_nc(&g, 1, l).holds, oracle_nc(&g, 1, l), "l={l}");
        }
    }
    for g in all_digraphs(3) {
        assert_eq!(check_condition_nc(&g, 0, 1).holds, oracle_nc(&g, 0, 1));
    }
}

/// Distinct reduced graphs for one fault set, from every raw choice vector.
fn oracle_reduced(g: &DirectedGraph, faulty: NodeSet, l: usize, f: usize) -> BTreeSet<Vec<(usize, Vec<usize>)>> {
    let gf = g.without(faulty);
    let nodes = gf.nodes().to_vec();
    let into: Vec<Vec<Vec<usize>>> = nodes.iter().map(|&i| nodes.iter().flat_map(|&j| oracle_paths(&gf, j, i, l)).collect()).collect();
    let menus: Vec<Vec<NodeSet>> = nodes
        .iter()
        .zip(&into)
        .map(|(&i, paths)| {
            let pool: NodeSet = paths.iter().map(|p| p[0]).collect::<NodeSet>().without(i);
            all_subsets(pool).into_iter().filter(|c| c.len() <= f).collect()
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut picks = vec![0usize; nodes.len()];
    loop {
        let mut edges = Vec::new();
        for (k, paths) in into.iter().enumerate() {
            for p in paths {
                if !p.iter().any(|v| menus[k][picks[k]].contains(*v)) {
                    edges.push((nodes[k], p.clone()));
                }
            }
        }
        edges.sort();
        out.insert(edges);
        let mut pos = 0;
        loop {
            if pos == picks.len() {
                return out;
            }
            picks[pos] += 1;
            if picks[pos] < menus[pos].len() {
                break;
            }
            picks[pos] = 0;
            pos += 1;
        }
    }
}

fn sources_oracle(nodes: NodeSet, edges: &[(usize, usize)]) -> usize {
    // A node is in a source component iff everything reaching it is reached by it.
    let reach = |from: usize| {
        let mut seen = NodeSet::singleton(from);
        loop {
            let next = edges.iter().filter(|(t, _)| seen.contains(*t)).fold(seen, |acc, &(_, h)| acc.with(h));
            if next == seen {
                return seen;
            }
            seen = next;
        }
    };
    let reaches: Vec<NodeSet> = (0..64).map(|v| if nodes.contains(v) { reach(v) } else { NodeSet::EMPTY }).collect();
    let mut comps: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in nodes {
        let preds: Vec<usize> = nodes.iter().filter(|&u| reaches[u].contains(v)).collect();
        if preds.iter().all(|&u| reaches[v].contains(u)) {
            comps.insert(preds);
        }
    }
    comps.len()
}

#[test]
fn reduced_graphs_match_oracle() {
    let mut r = rng(6);
    for _ in 0..25 {
        let g = sample_graph(r.random(), 3, 5, false).graph;
        let n = g.n();
        for l in 1..=2 {
            let mut every_unique = true;
            for faulty in std::iter::once(NodeSet::EMPTY).chain((0..n).map(NodeSet::singleton)) {
                let want = oracle_reduced(&g, faulty, l, 1);
                let got: BTreeSet<Vec<(usize, Vec<usize>)>> = enumerate_reduced_graphs(&g, faulty, l, 1, ReducedOptions::default())
                    .unwrap()
                    .map(|rg| {
                        let mut e: Vec<(usize, Vec<usize>)> = rg.edges.iter().map(|e| (e.head, e.path.nodes().to_vec())).collect();
                        e.sort();
                        e
                    })
                    .collect();
                assert_eq!(got, want);
                for edges in &want {
                    let pairs: Vec<(usize, usize)> = edges.iter().map(|(h, p)| (p[0], *h)).collect();
                    every_unique &= sources_oracle(g.nodes() - faulty, &pairs) == 1;
                }
            }
            assert_eq!(unique_source_condition(&g, 1, l, ReducedOptions::default()).unwrap().holds, every_unique);
        }
    }
}

fn random_messages(r: &mut ChaCha8Rng, n: usize, receiver: usize) -> MessageSet {
    let g = DirectedGraph::complete(n).unwrap();
    let mut pool: Vec<Path> = (0..n).filter(|&s| s != receiver).flat_map(|s| enumerate_paths(&g, s, receiver, 3)).collect();
    let take = r.random_range(1..=8.min(pool.len()));
    let mut msgs = Vec::new();
    for _ in 0..take {
        let p = pool.swap_remove(r.random_range(0..pool.len()));
        msgs.push(Message::new(r.random_range(0..4) as f64, p));
    }
    MessageSet::from_vec(msgs)
}

fn oracle_cover(m: &[Message], receiver: usize, n: usize) -> NodeSet {
    let mut best: Option<NodeSet> = None;
    for c in all_subsets(NodeSet::full(n).without(receiver)) {
        if m.iter().all(|msg| msg.touches(c)) {
            let better = match best {
                None => true,
                Some(b) => c.len() < b.len() || (c.len() == b.len() && c.to_vec() < b.to_vec()),
            };
            if better {
                best = Some(c);
            }
        }
    }
    best.expect("everything but the receiver covers")
}

#[test]
fn min_cover_matches_oracle() {
    let mut r = rng(7);
    for _ in 0..300 {
        let n = r.random_range(3..=6);
        let receiver = r.random_range(0..n);
        let m = random_messages(&mut r, n, receiver);
        assert_eq!(min_message_cover(&m, receiver).unwrap(), oracle_cover(m.as_slice(), receiver, n));
    }
}

#[test]
fn trim_matches_oracle() {
    let mut r = rng(8);
    for _ in 0..300 {
        let n = r.random_range(3..=6);
        let receiver = r.random_range(0..n);
        let f = r.random_range(0..=2);
        let m = random_messages(&mut r, n, receiver);
        let all = m.as_slice();
        let cover = |s: &[Message]| if s.is_empty() { 0 } else { oracle_cover(s, receiver, n).len() };
        // Longest low prefix coverable by f nodes, then the longest high
        // suffix of the rest.
        let low_len = (0..=all.len()).rev().find(|&k| cover(&all[..k]) <= f).unwrap();
        let rest = &all[low_len..];
        let high_len = (0..=rest.len()).rev().find(|&k| cover(&rest[rest.len() - k..]) <= f).unwrap();
        let well_defined = f == 0 || (low_len < all.len() && high_len < rest.len());
        match compute_trim(&m, f, receiver) {
            Ok(t) => {
                assert!(well_defined);
                if f > 0 {
                    assert_eq!(t.low.as_slice(), &all[..low_len]);
                    assert_eq!(t.high.as_slice(), &rest[rest.len() - high_len..]);
                } else {
                    assert_eq!(t.kept.as_slice(), all);
                }
            }
            Err(_) => assert!(!well_defined),
        }
    }
}

#[test]
fn coefficients_match_oracle() {
    let mut r = rng(9);
    for _ in 0..200 {
        let k = r.random_range(1..=5);
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let raw: Vec<f64> = (0..k).map(|_| if r.random_bool(0.3) { 0.0 } else { r.random::<f64>() + 0.01 }).collect();
                let s: f64 = raw.iter().sum();
                if s == 0.0 {
                    (0..k).map(|c| if c == 0 { 1.0 } else { 0.0 }).collect()
                } else {
                    raw.iter().map(|x| x / s).collect()
                }
            })
            .collect();
        let m = WeightMatrix::new(1, (0..k).collect(), rows.clone()).unwrap();
        let mut delta: f64 = 0.0;
        let mut lambda: f64 = 0.0;
        for a in &rows {
            for b in &rows {
                for c in 0..k {
                    delta = delta.max((a[c] - b[c]).abs());
                }
                // Half the L1 distance between two stochastic rows.
                lambda = lambda.max(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0);
            }
        }
        assert!((delta_coefficient(&m).unwrap() - delta).abs() < 1e-12);
        assert!((lambda_coefficient(&m).unwrap() - lambda).abs() < 1e-12);
    }
}
