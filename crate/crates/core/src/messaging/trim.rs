use std::fmt;

use thiserror::Error;

use super::cover::{hit_masks, smallest_hitting_set, CoverError};
use super::MessageSet;
use crate::graph::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Low => "low",
            Side::High => "high",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrimError {
    /// Every remaining message can be covered by `f` nodes, so the `side`
    /// pass never stops. Happens only when the topology violates the
    /// relay-depth condition.
    #[error("{side} trim set is not well defined at node {}", receiver + 1)]
    NotWellDefined { side: Side, receiver: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Partition of the received messages (self-loop excluded) into the trimmed
/// low and high ends and the kept middle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimResult {
    pub low: MessageSet,
    pub high: MessageSet,
    pub kept: MessageSet,
    pub low_cover: NodeSet,
    pub high_cover: NodeSet,
}

/// Greedy trim. The low pass takes messages in ascending order until their
/// minimum cover needs `f + 1` nodes and drops the last one taken; the high
/// pass does the same from the top over what the low pass left.
pub fn compute_trim(mprime: &MessageSet, f: usize, receiver: usize) -> Result<TrimResult, TrimError> {
    let all = mprime.as_slice();
    let masks = hit_masks(all, receiver)?;
    if f == 0 {
        return Ok(TrimResult {
            low: MessageSet::new(),
            high: MessageSet::new(),
            kept: mprime.clone(),
            low_cover: NodeSet::EMPTY,
            high_cover: NodeSet::EMPTY,
        });
    }
    let exceeds = |range: &[NodeSet]| smallest_hitting_set(range, f).is_none();

    // Both passes take contiguous runs of the sorted list.
    let low_end = (0..all.len()).find(|&k| exceeds(&masks[..=k])).ok_or(TrimError::NotWellDefined { side: Side::Low, receiver })?;
    let high_start = (low_end..all.len())
        .rev()
        .find(|&k| exceeds(&masks[k..]))
        .map(|k| k + 1)
        .ok_or(TrimError::NotWellDefined { side: Side::High, receiver })?;

    let cover = |range: &[NodeSet]| smallest_hitting_set(range, f).expect("at most f by construction");
    Ok(TrimResult {
        low: MessageSet(all[..low_end].to_vec()),
        high: MessageSet(all[high_start..].to_vec()),
        kept: MessageSet(all[low_end..high_start].to_vec()),
        low_cover: cover(&masks[..low_end]),
        high_cover: cover(&masks[high_start..]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Path;
    use crate::messaging::Message;

    fn msg(value: f64, labels: &[usize]) -> Message {
        Message::new(value, Path::from_labels(labels).unwrap())
    }

    fn sources(m: &MessageSet) -> Vec<usize> {
        m.iter().map(|x| x.source() + 1).collect()
    }

    #[test]
    fn star_receiver() {
        let m = MessageSet::from_vec(vec![msg(1.0, &[2, 1]), msg(2.0, &[3, 1]), msg(3.0, &[4, 1])]);
        let t = compute_trim(&m, 1, 0).unwrap();
        assert_eq!((sources(&t.low), sources(&t.kept), sources(&t.high)), (vec![2], vec![3], vec![4]));
        assert_eq!(t.low_cover.labels(), vec![2]);
        assert_eq!(t.high_cover.labels(), vec![4]);
    }

    #[test]
    fn split_attack_round_at_p1() {
        let m = MessageSet::from_vec(vec![msg(1.0, &[2, 1]), msg(0.0, &[4, 1]), msg(-5.0, &[5, 1])]);
        let t = compute_trim(&m, 1, 0).unwrap();
        assert_eq!((sources(&t.low), sources(&t.kept), sources(&t.high)), (vec![5], vec![4], vec![2]));
    }

    #[test]
    fn single_bottleneck_is_not_well_defined() {
        let m = MessageSet::from_vec(vec![msg(1.0, &[2, 4, 1]), msg(2.0, &[3, 4, 1]), msg(3.0, &[4, 1])]);
        assert_eq!(compute_trim(&m, 1, 0), Err(TrimError::NotWellDefined { side: Side::Low, receiver: 0 }));
    }

    #[test]
    fn high_pass_can_fail_alone() {
        // Low takes {2}; the rest all pass through 4.
        let m = MessageSet::from_vec(vec![msg(0.0, &[2, 1]), msg(1.0, &[3, 4, 1]), msg(2.0, &[4, 1]), msg(3.0, &[2, 4, 1])]);
        assert_eq!(compute_trim(&m, 1, 0), Err(TrimError::NotWellDefined { side: Side::High, receiver: 0 }));
    }

    #[test]
    fn no_faults_keeps_everything() {
        let m = MessageSet::from_vec(vec![msg(1.0, &[2, 1]), msg(3.0, &[3, 1])]);
        let t = compute_trim(&m, 0, 0).unwrap();
        assert_eq!(t.kept, m);
        assert!(t.low.is_empty() && t.high.is_empty());
    }
}
