use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::graph::NodeSet;

/// Disjoint labeling `L, C, R, F` of the node set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    pub l: NodeSet,
    pub c: NodeSet,
    pub r: NodeSet,
    pub f: NodeSet,
}

impl Partition {
    pub fn new(l: NodeSet, c: NodeSet, r: NodeSet, f: NodeSet) -> Self {
        Partition { l, c, r, f }
    }

    /// The same partition with `L` and `R` exchanged.
    pub fn swapped(&self) -> Self {
        Partition { l: self.r, c: self.c, r: self.l, f: self.f }
    }

    pub fn union(&self) -> NodeSet {
        self.l | self.c | self.r | self.f
    }

    /// Pairwise disjoint, covering `nodes`, `L` and `R` nonempty, `|F| <= f`.
    pub fn is_valid_for(&self, nodes: NodeSet, f: usize) -> bool {
        let parts = [self.l, self.c, self.r, self.f];
        let total: usize = parts.iter().map(|p| p.len()).sum();
        total == self.union().len() && self.union() == nodes && !self.l.is_empty() && !self.r.is_empty() && self.f.len() <= f
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "L={} C={} R={} F={}", self.l, self.c, self.r, self.f)
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Number of `(L, C, R, F)` partitions of `n` nodes with `|F| <= f`.
pub fn partition_count(n: usize, f: usize) -> u64 {
    (0..=f.min(n))
        .map(|k| {
            let m = (n - k) as u32;
            binomial(n, k) * (3u64.pow(m) + 1 - 2 * 2u64.pow(m))
        })
        .sum()
}

/// How many labels the non-faulty nodes take. With `Two`, `C` stays empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Labels {
    Three,
    Two,
}

impl Labels {
    fn base(self) -> u8 {
        match self {
            Labels::Three => 3,
            Labels::Two => 2,
        }
    }
}

pub(crate) struct Search {
    pub witness: Option<Partition>,
    pub checked: u64,
}

enum Outcome {
    Holds(u64),
    Fails(Partition, u64),
    Aborted,
}

/// Runs `pred` over every partition until one returns `false`.
///
/// Fault sets are visited by size, then lexicographically; within a fault
/// set, labelings of the remaining nodes count upward with the smallest node
/// as the most significant digit and label order `L < C < R`. Fault sets are
/// searched in parallel, but the reported witness is always the first one in
/// this order. `setup` runs once per fault set and returns the predicate.
pub(crate) fn search<S, P>(nodes: NodeSet, f: usize, labels: Labels, setup: S) -> Search
where
    S: Fn(NodeSet) -> P + Sync,
    P: FnMut(&Partition) -> bool,
{
    let fault_sets: Vec<NodeSet> = nodes.subsets_up_to(f).collect();
    let first_failure = AtomicUsize::new(usize::MAX);

    let outcomes: Vec<Outcome> = fault_sets
        .par_iter()
        .enumerate()
        .map(|(idx, &faulty)| {
            if first_failure.load(Ordering::Relaxed) < idx {
                return Outcome::Aborted;
            }
            let pred = setup(faulty);
            let outcome = search_fault_set(nodes - faulty, faulty, labels, pred, || first_failure.load(Ordering::Relaxed) < idx);
            if matches!(outcome, Outcome::Fails(..)) {
                first_failure.fetch_min(idx, Ordering::Relaxed);
            }
            outcome
        })
        .collect();

    let mut checked = 0;
    for outcome in outcomes {
        match outcome {
            Outcome::Holds(count) => checked += count,
            Outcome::Fails(p, count) => {
                return Search { witness: Some(p), checked: checked + count };
            }
            Outcome::Aborted => unreachable!("aborts only follow an earlier failure"),
        }
    }
    Search { witness: None, checked }
}

fn search_fault_set<P: FnMut(&Partition) -> bool>(
    rest: NodeSet,
    faulty: NodeSet,
    labels: Labels,
    mut pred: P,
    should_abort: impl Fn() -> bool,
) -> Outcome {
    let order = rest.to_vec();
    let base = labels.base();
    let mut digits = vec![0u8; order.len()];
    let mut checked = 0u64;
    let mut steps = 0u32;
    loop {
        let mut p = Partition::new(NodeSet::EMPTY, NodeSet::EMPTY, NodeSet::EMPTY, faulty);
        for (&v, &d) in order.iter().zip(&digits) {
            match (labels, d) {
                (_, 0) => p.l.insert(v),
                (Labels::Three, 1) => p.c.insert(v),
                _ => p.r.insert(v),
            }
        }
        if !p.l.is_empty() && !p.r.is_empty() {
            checked += 1;
            if !pred(&p) {
                return Outcome::Fails(p, checked);
            }
        }
        steps = steps.wrapping_add(1);
        if steps.is_multiple_of(1024) && should_abort() {
            return Outcome::Aborted;
        }
        // Odometer increment, least significant digit last.
        let mut pos = order.len();
        loop {
            if pos == 0 {
                return Outcome::Holds(checked);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
        }
    }
}
