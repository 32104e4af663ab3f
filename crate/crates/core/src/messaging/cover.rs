use thiserror::Error;

use super::{Message, MessageSet};
use crate::graph::flow::min_vertex_cut;
use crate::graph::{DirectedGraph, NodeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    /// A path made only of the receiver cannot be hit by an admissible cover.
    #[error("message along {0} has no node other than the receiver")]
    Uncoverable(String),
}

/// Path node sets with the receiver removed.
pub(crate) fn hit_masks(messages: &[Message], receiver: usize) -> Result<Vec<NodeSet>, CoverError> {
    messages
        .iter()
        .map(|m| {
            let mask = m.path.node_set().without(receiver);
            if mask.is_empty() {
                Err(CoverError::Uncoverable(m.path.to_string()))
            } else {
                Ok(mask)
            }
        })
        .collect()
}

fn hits_all(cover: NodeSet, masks: &[NodeSet]) -> bool {
    masks.iter().all(|m| m.intersects(cover))
}

/// Smallest node set of size at most `k` meeting every mask, preferring the
/// lexicographically smallest among those of minimum size.
pub(crate) fn smallest_hitting_set(masks: &[NodeSet], k: usize) -> Option<NodeSet> {
    let candidates = masks.iter().fold(NodeSet::EMPTY, |acc, &m| acc | m);
    (0..=k.min(candidates.len())).find_map(|size| candidates.subsets_of_size(size).find(|&c| hits_all(c, masks)))
}

/// Minimum set of nodes, never `receiver`, meeting every message path.
/// Ties go to the lexicographically smallest sorted node list. Exact, by
/// subset enumeration in increasing size.
pub fn min_message_cover(m: &MessageSet, receiver: usize) -> Result<NodeSet, CoverError> {
    let masks = hit_masks(m.as_slice(), receiver)?;
    Ok(smallest_hitting_set(&masks, usize::MAX).expect("the union of all masks is a cover"))
}

/// The messages of `m0` whose path meets `t`; the largest subset `t` covers.
pub fn max_covered_subset(m0: &MessageSet, t: NodeSet) -> MessageSet {
    m0.filter(|m| m.touches(t))
}

/// Vertex cut between an auxiliary node feeding every path's first node and
/// `receiver`, in the union of the message paths.
///
/// This can exceed the true minimum cover, because the union graph also
/// contains routes that splice segments of different paths.
pub fn mincut_cover_size(m: &MessageSet, receiver: usize, g: &DirectedGraph) -> usize {
    if m.is_empty() {
        return 0;
    }
    let aux = g.order();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for msg in m {
        let nodes = msg.path.nodes();
        edges.push((aux, nodes[0]));
        for w in nodes.windows(2) {
            if w[0] != w[1] {
                edges.push((w[0], w[1]));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    min_vertex_cut(aux + 1, &edges, aux, receiver).expect("the auxiliary node never links to the receiver")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::families::build_fig1;
    use crate::graph::Path;

    fn msg(value: f64, labels: &[usize]) -> Message {
        Message::new(value, Path::from_labels(labels).unwrap())
    }

    fn fig1_set() -> MessageSet {
        MessageSet::from_vec(vec![msg(0.0, &[2, 1]), msg(0.0, &[3, 2, 1]), msg(0.0, &[5, 1])])
    }

    #[test]
    fn common_node_covers_all() {
        let m = MessageSet::from_vec(vec![msg(1.0, &[2, 4, 1]), msg(2.0, &[3, 4, 1]), msg(3.0, &[4, 1])]);
        assert_eq!(min_message_cover(&m, 0).unwrap().labels(), vec![4]);
    }

    #[test]
    fn fig1_cover_needs_two() {
        assert_eq!(min_message_cover(&fig1_set(), 0).unwrap().labels(), vec![2, 5]);
        assert_eq!(min_message_cover(&MessageSet::new(), 0).unwrap(), NodeSet::EMPTY);
    }

    #[test]
    fn self_loop_is_uncoverable() {
        let m = MessageSet::from_vec(vec![msg(0.0, &[1, 1])]);
        assert!(min_message_cover(&m, 0).is_err());
    }

    #[test]
    fn covered_subset() {
        let m = fig1_set();
        assert!(max_covered_subset(&m, NodeSet::EMPTY).is_empty());
        let through_2 = max_covered_subset(&m, NodeSet::singleton(1));
        assert_eq!(through_2.len(), 2);
        assert_eq!(max_covered_subset(&m, [1, 2, 4].into_iter().collect()).len(), 3);
    }

    #[test]
    fn mincut_examples() {
        let g = build_fig1();
        assert_eq!(mincut_cover_size(&fig1_set(), 0, &g), 2);
        assert_eq!(mincut_cover_size(&MessageSet::from_vec(vec![msg(1.0, &[2, 1])]), 0, &g), 1);
        let disjoint = MessageSet::from_vec(vec![msg(0.0, &[2, 1]), msg(0.0, &[4, 1]), msg(0.0, &[5, 1])]);
        assert_eq!(mincut_cover_size(&disjoint, 0, &g), 3);
    }
}
