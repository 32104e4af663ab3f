//! Directed communication graphs and the connectivity primitives the
//! feasibility conditions are built from.
//!
//! Nodes are 0-based indices internally. Every external surface (the text
//! format, reports, traces) uses 1-based labels, so node `0` prints as `1`.
//!
//! All graphs carry a self-loop at every node. Induced subgraphs keep the
//! original node ids and only shrink the node set, so a node set computed on
//! `G_F` can be compared directly against one computed on `G`.

mod connectivity;
pub mod flow;
mod format;
mod nodeset;
mod paths;
pub(crate) mod scc;

use std::fmt;

use thiserror::Error;

pub use connectivity::{kappa_at_least, kappa_l, reaches_within, vertex_connectivity_undirected};
pub use format::{parse_graph, write_graph, ParseError, ParseErrorKind};
pub use nodeset::{NodeSet, NodeSetIter, MAX_NODES};
pub use paths::{count_paths, enumerate_paths, longest_path_length, neighborhood, Neighborhood};
pub use scc::{scc_condensation, source_components, Condensation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("a graph may have at most {MAX_NODES} nodes, got {0}")]
    TooManyNodes(usize),
    #[error("node {node} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("edge set is not symmetric: ({0}, {1}) has no reverse edge")]
    NotSymmetric(usize, usize),
}

/// A simple directed graph with a self-loop at every node.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    order: usize,
    nodes: NodeSet,
    out: Vec<NodeSet>,
    inc: Vec<NodeSet>,
}

impl DirectedGraph {
    /// Builds a graph on nodes `0..n`. Self-loops are inserted for every node;
    /// repeated edges collapse.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < 2 {
            return Err(GraphError::TooFewNodes(n));
        }
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        let mut out = vec![NodeSet::EMPTY; n];
        let mut inc = vec![NodeSet::EMPTY; n];
        for v in 0..n {
            out[v].insert(v);
            inc[v].insert(v);
        }
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            out[u].insert(v);
            inc[v].insert(u);
        }
        Ok(DirectedGraph { order: n, nodes: NodeSet::full(n), out, inc })
    }

    /// Builds a graph from unordered pairs, inserting both directions.
    pub fn undirected<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let both: Vec<_> = edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
        Self::new(n, both)
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (0..n).flat_map(|u| (0..n).map(move |v| (u, v))))
    }

    /// Size of the id space. Node ids of this graph and of every induced
    /// subgraph lie in `0..order()`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Present nodes.
    pub fn nodes(&self) -> NodeSet {
        self.nodes
    }

    /// Number of present nodes.
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.contains(v)
    }

    /// Out-neighbors of `v`, including `v` itself.
    pub fn out_neighbors(&self, v: usize) -> NodeSet {
        self.out[v]
    }

    /// In-neighbors of `v`, including `v` itself (this is `N_v^-`).
    pub fn in_neighbors(&self, v: usize) -> NodeSet {
        self.inc[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.contains(u) && self.out[u].contains(v)
    }

    /// Edge count including self-loops.
    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|v| self.out[v].len()).sum()
    }

    /// Edges `(u, v)` in lexicographic order, self-loops included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    /// The induced subgraph on `nodes() - removed`.
    pub fn without(&self, removed: NodeSet) -> DirectedGraph {
        let nodes = self.nodes - removed;
        let mut out = vec![NodeSet::EMPTY; self.order];
        let mut inc = vec![NodeSet::EMPTY; self.order];
        for v in nodes {
            out[v] = self.out[v] & nodes;
            inc[v] = self.inc[v] & nodes;
        }
        DirectedGraph { order: self.order, nodes, out, inc }
    }

    /// True when every edge has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.asymmetric_edge().is_none()
    }

    fn asymmetric_edge(&self) -> Option<(usize, usize)> {
        self.edges().find(|&(u, v)| !self.out[v].contains(u))
    }

    pub fn require_symmetric(&self) -> Result<(), GraphError> {
        match self.asymmetric_edge() {
            Some((u, v)) => Err(GraphError::NotSymmetric(u + 1, v + 1)),
            None => Ok(()),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.nodes.iter().all(|v| self.out[v] == self.nodes)
    }
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().filter(|(u, v)| u != v).map(|(u, v)| (u + 1, v + 1)).collect();
        f.debug_struct("DirectedGraph").field("nodes", &self.nodes.labels()).field("edges", &edges).finish()
    }
}

/// A path `v0 -> v1 -> ... -> vk` with `k >= 1` hops. Either all nodes are
/// distinct or the path is the self-loop `(i, i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn self_loop(v: usize) -> Path {
        Path(vec![v, v])
    }

    /// Wraps a node sequence without validating it against any graph.
    pub fn from_nodes(nodes: Vec<usize>) -> Path {
        assert!(nodes.len() >= 2, "a path needs at least one hop");
        Path(nodes)
    }

    /// Builds a path from 1-based labels, checking the shape (at least one
    /// hop, distinct nodes or a self-loop) but not any graph.
    pub fn from_labels(labels: &[usize]) -> Option<Path> {
        if labels.len() < 2 || labels.iter().any(|&x| x == 0 || x > MAX_NODES) {
            return None;
        }
        let path = Path(labels.iter().map(|x| x - 1).collect());
        let simple = path.node_set().len() == path.0.len();
        (simple || path.is_self_loop()).then_some(path)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn source(&self) -> usize {
        self.0[0]
    }

    pub fn destination(&self) -> usize {
        *self.0.last().expect("nonempty path")
    }

    /// Hop count.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_self_loop(&self) -> bool {
        self.0.len() == 2 && self.0[0] == self.0[1]
    }

    /// `V(path)` as a node set.
    pub fn node_set(&self) -> NodeSet {
        self.0.iter().copied().collect()
    }

    pub fn touches(&self, set: NodeSet) -> bool {
        self.0.iter().any(|&v| set.contains(v))
    }

    /// Checks the path shape and that every hop is an edge of `g`.
    pub fn is_valid_in(&self, g: &DirectedGraph) -> bool {
        if self.is_self_loop() {
            return g.contains(self.0[0]);
        }
        let distinct = self.node_set().len() == self.0.len();
        distinct && self.0.iter().all(|&v| g.contains(v)) && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    /// 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(ToString::to_string).collect();
        write!(f, "{}", labels.join("->"))
    }
}
