use super::{DirectedGraph, NodeSet};

/// Strongly connected components and the acyclic meta-graph between them.
///
/// Components are ordered by their smallest node; `edges` holds index pairs
/// `(from, to)` into `components`, sorted and without self-pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<NodeSet>,
    pub edges: Vec<(usize, usize)>,
}

impl Condensation {
    /// Indices of components with no incoming meta-edge.
    pub fn source_indices(&self) -> Vec<usize> {
        let mut has_incoming = vec![false; self.components.len()];
        for &(_, to) in &self.edges {
            has_incoming[to] = true;
        }
        (0..self.components.len()).filter(|&c| !has_incoming[c]).collect()
    }
}

pub fn scc_condensation(g: &DirectedGraph) -> Condensation {
    condense(g.nodes(), |v| g.out_neighbors(v))
}

/// Components of the condensation that no other component reaches.
pub fn source_components(c: &Condensation) -> Vec<NodeSet> {
    c.source_indices().into_iter().map(|i| c.components[i]).collect()
}

/// Tarjan's algorithm over the nodes in `nodes`, with successors given by
/// `succ` (restricted to `nodes`).
pub(crate) fn condense(nodes: NodeSet, succ: impl Fn(usize) -> NodeSet) -> Condensation {
    let size = nodes.iter().last().map_or(0, |v| v + 1);
    let mut state = Tarjan {
        next_index: 0,
        index: vec![None; size],
        low: vec![0; size],
        stack: Vec::new(),
        on_stack: NodeSet::EMPTY,
        components: Vec::new(),
    };
    for v in nodes {
        if state.index[v].is_none() {
            state.visit(v, nodes, &succ);
        }
    }

    let mut components = state.components;
    components.sort_by_key(|c| c.first());
    let mut owner = vec![usize::MAX; size];
    for (ci, comp) in components.iter().enumerate() {
        for v in *comp {
            owner[v] = ci;
        }
    }
    let mut edges = Vec::new();
    for v in nodes {
        for w in succ(v) & nodes {
            let (a, b) = (owner[v], owner[w]);
            if a != b {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Condensation { components, edges }
}

struct Tarjan {
    next_index: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    stack: Vec<usize>,
    on_stack: NodeSet,
    components: Vec<NodeSet>,
}

impl Tarjan {
    fn visit(&mut self, v: usize, nodes: NodeSet, succ: &impl Fn(usize) -> NodeSet) {
        self.index[v] = Some(self.next_index);
        self.low[v] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack.insert(v);

        for w in succ(v) & nodes {
            match self.index[w] {
                None => {
                    self.visit(w, nodes, succ);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack.contains(w) => {
                    self.low[v] = self.low[v].min(iw);
                }
                Some(_) => {}
            }
        }

        if Some(self.low[v]) == self.index[v] {
            let mut comp = NodeSet::EMPTY;
            loop {
                let w = self.stack.pop().expect("v is on the stack");
                self.on_stack.remove(w);
                comp.insert(w);
                if w == v {
                    break;
                }
            }
            self.components.push(comp);
        }
    }
}
