//! Reduced graphs of the relay-depth power multigraph and the
//! unique-source-component condition.
//!
//! The power multigraph `G^l` has one edge per path of at most `l` hops. A
//! reduced graph drops every edge whose path touches the fault set `F`, and
//! then, for each surviving node `i`, the incoming edges whose path touches a
//! chosen `C_i` (at most `f` nodes of `i`'s `l`-hop in-neighborhood in
//! `G - F`, excluding `i`).
//!
//! Edges are removed per head node, so two reduced graphs differ iff some
//! node keeps a different set of incoming paths. Choices that keep the same
//! set are merged, and the smallest `C_i` in (size, lexicographic) order
//! represents them.

use thiserror::Error;

use super::{ConditionKind, Partition, Verdict};
use crate::graph::scc::condense;
use crate::graph::{enumerate_paths, DirectedGraph, NodeSet, Path};

/// Default ceiling on the number of reduced graphs one call may examine.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceMode {
    /// Every `C_i` with `|C_i| <= f`.
    Exhaustive,
    /// Only `C_i` of the largest possible size. Heuristic: not known to
    /// preserve the source-component count.
    MaximalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedOptions {
    pub mode: ChoiceMode,
    pub budget: u64,
}

impl Default for ReducedOptions {
    fn default() -> Self {
        ReducedOptions { mode: ChoiceMode::Exhaustive, budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReducedError {
    #[error("{count} reduced graphs exceed the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("fault set {faulty} is larger than f = {f}")]
    FaultSetTooLarge { faulty: NodeSet, f: usize },
}

/// An edge of the power multigraph together with the path it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerEdge {
    pub tail: usize,
    pub head: usize,
    pub path: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    pub faulty: NodeSet,
    /// `V - F`.
    pub nodes: NodeSet,
    /// `C_i` indexed by node id; empty for faulty nodes.
    pub choices: Vec<NodeSet>,
    /// Multiedges sorted by head, then path.
    pub edges: Vec<PowerEdge>,
}

impl ReducedGraph {
    /// Tails of the surviving edges into `head`, self included.
    pub fn in_neighbors(&self, head: usize) -> NodeSet {
        self.edges.iter().filter(|e| e.head == head).map(|e| e.tail).collect()
    }

    pub fn source_components(&self) -> Vec<NodeSet> {
        let mut out = vec![NodeSet::EMPTY; self.choices.len()];
        for e in &self.edges {
            out[e.tail].insert(e.head);
        }
        let c = condense(self.nodes, |v| out[v]);
        crate::graph::source_components(&c)
    }
}

struct NodeOption {
    removal: NodeSet,
    surviving: Vec<bool>,
    tails: NodeSet,
}

/// Per-node choice menus for one fault set.
struct Menus {
    faulty: NodeSet,
    nodes: NodeSet,
    order: usize,
    heads: Vec<usize>,
    paths: Vec<Vec<Path>>,
    options: Vec<Vec<NodeOption>>,
}

impl Menus {
    fn build(g: &DirectedGraph, faulty: NodeSet, l: usize, f: usize, mode: ChoiceMode) -> Menus {
        let gf = g.without(faulty);
        let nodes = gf.nodes();
        let heads = nodes.to_vec();
        let mut paths = Vec::with_capacity(heads.len());
        let mut options = Vec::with_capacity(heads.len());
        for &i in &heads {
            let into: Vec<Path> = nodes.iter().flat_map(|j| enumerate_paths(&gf, j, i, l)).collect();
            let candidates: NodeSet = into.iter().map(Path::source).collect::<NodeSet>().without(i);
            let sizes = match mode {
                ChoiceMode::Exhaustive => 0..=f.min(candidates.len()),
                ChoiceMode::MaximalOnly => {
                    let top = f.min(candidates.len());
                    top..=top
                }
            };
            let mut menu: Vec<NodeOption> = Vec::new();
            for size in sizes {
                for removal in candidates.subsets_of_size(size) {
                    let surviving: Vec<bool> = into.iter().map(|p| !p.touches(removal)).collect();
                    if menu.iter().any(|o| o.surviving == surviving) {
                        continue;
                    }
                    let tails = into.iter().zip(&surviving).filter(|(_, &s)| s).map(|(p, _)| p.source()).collect();
                    menu.push(NodeOption { removal, surviving, tails });
                }
            }
            paths.push(into);
            options.push(menu);
        }
        Menus { faulty, nodes, order: g.order(), heads, paths, options }
    }

    fn count(&self) -> u128 {
        self.options.iter().map(|o| o.len() as u128).product()
    }

    fn materialize(&self, picks: &[usize]) -> ReducedGraph {
        let mut choices = vec![NodeSet::EMPTY; self.order];
        let mut edges = Vec::new();
        for (k, &i) in self.heads.iter().enumerate() {
            let opt = &self.options[k][picks[k]];
            choices[i] = opt.removal;
            for (p, _) in self.paths[k].iter().zip(&opt.surviving).filter(|(_, &s)| s) {
                edges.push(PowerEdge { tail: p.source(), head: i, path: p.clone() });
            }
        }
        ReducedGraph { faulty: self.faulty, nodes: self.nodes, choices, edges }
    }
}

// Mixed-radix counter over the option menus; the last node varies fastest.
fn advance(picks: &mut [usize], radices: &[usize]) -> bool {
    for pos in (0..picks.len()).rev() {
        picks[pos] += 1;
        if picks[pos] < radices[pos] {
            return true;
        }
        picks[pos] = 0;
    }
    false
}

/// Iterator over the distinct reduced graphs for one fault set.
pub struct ReducedGraphs {
    menus: Menus,
    radices: Vec<usize>,
    picks: Option<Vec<usize>>,
}

impl ReducedGraphs {
    /// Number of distinct `C_i` effects available to each surviving node,
    /// as `(node, count)` pairs.
    pub fn choice_counts(&self) -> Vec<(usize, usize)> {
        self.menus.heads.iter().copied().zip(self.radices.iter().copied()).collect()
    }

    /// Total number of reduced graphs this iterator yields.
    pub fn total(&self) -> u128 {
        self.menus.count()
    }
}

impl Iterator for ReducedGraphs {
    type Item = ReducedGraph;

    fn next(&mut self) -> Option<ReducedGraph> {
        let picks = self.picks.as_mut()?;
        let graph = self.menus.materialize(picks);
        if !advance(picks, &self.radices) {
            self.picks = None;
        }
        Some(graph)
    }
}

/// All distinct reduced graphs of `G^l` for the fault set `faulty`.
pub fn enumerate_reduced_graphs(
    g: &DirectedGraph,
    faulty: NodeSet,
    l: usize,
    f: usize,
    opts: ReducedOptions,
) -> Result<ReducedGraphs, ReducedError> {
    if faulty.len() > f {
        return Err(ReducedError::FaultSetTooLarge { faulty, f });
    }
    let menus = Menus::build(g, faulty, l, f, opts.mode);
    let count = menus.count();
    if count > u128::from(opts.budget) {
        return Err(ReducedError::BudgetExceeded { count, budget: opts.budget });
    }
    let radices: Vec<usize> = menus.options.iter().map(Vec::len).collect();
    let picks = Some(vec![0; radices.len()]);
    Ok(ReducedGraphs { menus, radices, picks })
}

/// Source components of the graph on `nodes` where `v`'s in-neighbors are
/// `in_masks[v]`. A node lies in a source component iff every node that
/// reaches it is also reached by it.
pub(crate) fn source_components_from_in(nodes: NodeSet, in_masks: &[NodeSet]) -> Vec<NodeSet> {
    let mut anc: Vec<NodeSet> = in_masks.to_vec();
    for v in nodes {
        anc[v] = (anc[v] & nodes).with(v);
    }
    loop {
        let mut changed = false;
        for v in nodes {
            let mut grown = anc[v];
            for u in anc[v] {
                grown |= anc[u];
            }
            if grown != anc[v] {
                anc[v] = grown;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut sources: Vec<NodeSet> = Vec::new();
    for v in nodes {
        let k = anc[v];
        if k.first() == Some(v) && k.iter().all(|u| anc[u] == k) {
            sources.push(k);
        }
    }
    sources
}

/// Every reduced graph, for every `|F| <= f`, has exactly one source
/// component.
///
/// On failure the witness partition puts the first two source components in
/// `L` and `R` and the remaining fault-free nodes in `C`;
/// `reduced_choices` holds the offending `C_i` vector.
pub fn unique_source_condition(g: &DirectedGraph, f: usize, l: usize, opts: ReducedOptions) -> Result<Verdict, ReducedError> {
    let mut verdict = Verdict::new(ConditionKind::UniqueSource, g, f, Some(l));
    let all_menus: Vec<Menus> = g.nodes().subsets_up_to(f).map(|faulty| Menus::build(g, faulty, l, f, opts.mode)).collect();
    let count: u128 = all_menus.iter().map(Menus::count).sum();
    if count > u128::from(opts.budget) {
        return Err(ReducedError::BudgetExceeded { count, budget: opts.budget });
    }

    for menus in &all_menus {
        let radices: Vec<usize> = menus.options.iter().map(Vec::len).collect();
        let mut picks = vec![0; radices.len()];
        let mut in_masks = vec![NodeSet::EMPTY; menus.order];
        loop {
            for (k, &i) in menus.heads.iter().enumerate() {
                in_masks[i] = menus.options[k][picks[k]].tails;
            }
            verdict.checked_count += 1;
            let sources = source_components_from_in(menus.nodes, &in_masks);
            if sources.len() != 1 {
                let rg = menus.materialize(&picks);
                let (l_side, r_side) = (sources[0], sources[1]);
                let c_side = menus.nodes - l_side - r_side;
                verdict.holds = false;
                verdict.witness = Some(Partition::new(l_side, c_side, r_side, menus.faulty));
                verdict.reduced_choices = Some(rg.choices);
                return Ok(verdict);
            }
            if !advance(&mut picks, &radices) {
                break;
            }
        }
    }
    Ok(verdict)
}
