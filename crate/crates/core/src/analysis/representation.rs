use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::WeightMatrix;
use super::{beta, AnalysisError};
use crate::consensus::RoundRecord;
use crate::graph::NodeSet;
use crate::messaging::Message;

/// Which of the six representation cases a receiver fell into, by whether
/// the untampered low side, the untampered high side and the tampered kept
/// messages are empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    /// Both sides nonempty, some kept message tampered.
    I,
    /// Both sides nonempty, no kept message tampered.
    II,
    /// One side empty, some kept message tampered.
    III,
    /// One side empty, no kept message tampered.
    IV,
    /// Both sides empty, some kept message tampered.
    V,
    /// Both sides empty, no kept message tampered.
    VI,
}

impl CaseId {
    pub fn classify(small: bool, large: bool, tampered: bool) -> CaseId {
        match (small as u8 + large as u8, tampered) {
            (2, true) => CaseId::I,
            (2, false) => CaseId::II,
            (1, true) => CaseId::III,
            (1, false) => CaseId::IV,
            (_, true) => CaseId::V,
            (_, false) => CaseId::VI,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// How one fault-free receiver's update was rewritten over untampered
/// messages.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationCase {
    pub node: usize,
    pub case: CaseId,
    /// Weight of the previous state and of each kept message.
    pub a: f64,
    /// Removed low messages whose path avoids the fault set, with the
    /// weight each carries in the representation.
    pub small: Vec<(Message, f64)>,
    /// Same for the removed high messages.
    pub large: Vec<(Message, f64)>,
    pub tampered_kept: bool,
    /// Kept message whose weight is split in case II.
    pub anchor: Option<Message>,
    /// Smallest untampered kept message, standing in for an empty low side.
    pub small_substitute: Option<Message>,
    /// Largest untampered kept message, standing in for an empty high side.
    pub large_substitute: Option<Message>,
    /// Convex coefficient of each rewritten message.
    pub gammas: Vec<(Message, f64)>,
    /// Nodes whose incoming edges the dominated reduced graph drops.
    pub choice: NodeSet,
}

impl RepresentationCase {
    /// Whether one side has every message weight at least `beta`.
    pub fn one_side_heavy(&self, beta: f64) -> bool {
        let heavy = |side: &[(Message, f64)]| side.iter().all(|(_, w)| *w >= beta);
        heavy(&self.small) || heavy(&self.large)
    }
}

fn mean(messages: &[&Message]) -> f64 {
    messages.iter().map(|m| m.value).sum::<f64>() / messages.len() as f64
}

/// Rebuilds the round's update as a row-stochastic matrix over the
/// fault-free nodes, using only messages whose path avoids `faulty`.
///
/// Each kept message that touches a faulty node is written as a convex
/// combination of the mean removed low and high values, falling back to
/// the extreme untampered kept message when a side is empty.
pub fn build_weight_matrix(
    round: &RoundRecord,
    faulty: NodeSet,
    f: usize,
    l: usize,
    order: usize,
) -> Result<(WeightMatrix, Vec<RepresentationCase>), AnalysisError> {
    let honest = NodeSet::full(order) - faulty;
    let nodes = honest.to_vec();
    let index = |node: usize| nodes.iter().position(|&v| v == node);
    let beta = beta(order, l);
    let t = round.t;
    let mut rows = Vec::with_capacity(nodes.len());
    let mut cases = Vec::with_capacity(nodes.len());
    for &i in &nodes {
        let incomplete = || AnalysisError::TraceIncomplete { round: t, node: i };
        let trim = round.trims.get(i).and_then(Option::as_ref).ok_or_else(incomplete)?;
        let a = round.a.get(i).copied().flatten().ok_or_else(incomplete)?;
        let failure = |detail: String| AnalysisError::RepresentationFailure { round: t, node: i, detail };

        let untampered = |m: &&Message| !m.touches(faulty);
        let small: Vec<&Message> = trim.low.iter().filter(untampered).collect();
        let large: Vec<&Message> = trim.high.iter().filter(untampered).collect();
        let clean: Vec<&Message> = trim.kept.iter().filter(untampered).collect();
        let tampered: Vec<&Message> = trim.kept.iter().filter(|m| m.touches(faulty)).collect();
        let case = CaseId::classify(!small.is_empty(), !large.is_empty(), !tampered.is_empty());

        let mut row = vec![0.0; nodes.len()];
        row[index(i).expect("receiver is fault-free")] = a;
        let mut add = |m: &Message, w: f64| -> Result<(), AnalysisError> {
            let col = index(m.source()).ok_or_else(|| failure(format!("untampered message along {} has a faulty source", m.path)))?;
            row[col] += w;
            Ok(())
        };

        let mut anchor = None;
        let mut gammas = Vec::new();
        let (mut small_sub, mut large_sub) = (None, None);
        let mut small_weight = 0.0;
        let mut large_weight = 0.0;

        // Sides to interpolate between, with substitutes for empty ones.
        let needs_sides = matches!(case, CaseId::I | CaseId::II | CaseId::III | CaseId::V);
        let (lo_side, hi_side) = if needs_sides {
            let lo = if small.is_empty() {
                let m = *clean.first().ok_or_else(|| failure("no untampered kept message".into()))?;
                small_sub = Some(m.clone());
                vec![m]
            } else {
                small.clone()
            };
            let hi = if large.is_empty() {
                let m = *clean.last().ok_or_else(|| failure("no untampered kept message".into()))?;
                large_sub = Some(m.clone());
                vec![m]
            } else {
                large.clone()
            };
            (lo, hi)
        } else {
            (Vec::new(), Vec::new())
        };
        let gamma_of = |m: &Message| -> Result<f64, AnalysisError> {
            let (ws, wl) = (mean(&lo_side), mean(&hi_side));
            let slack = 1e-12 * ws.abs().max(wl.abs()).max(1.0);
            if m.value < ws - slack || m.value > wl + slack {
                return Err(failure(format!("value {} along {} lies outside [{ws}, {wl}]", m.value, m.path)));
            }
            Ok(if ws == wl { 0.5 } else { ((wl - m.value) / (wl - ws)).clamp(0.0, 1.0) })
        };

        match case {
            CaseId::I | CaseId::III | CaseId::V => {
                for m in &clean {
                    add(m, a)?;
                }
                for m in &tampered {
                    let g = gamma_of(m)?;
                    gammas.push(((*m).clone(), g));
                    small_weight += a * g / lo_side.len() as f64;
                    large_weight += a * (1.0 - g) / hi_side.len() as f64;
                }
            }
            CaseId::II => {
                let m0 = clean[0];
                let g = gamma_of(m0)?;
                gammas.push((m0.clone(), g));
                anchor = Some(m0.clone());
                add(m0, a / 2.0)?;
                for m in &clean[1..] {
                    add(m, a)?;
                }
                small_weight = a * g / (2.0 * lo_side.len() as f64);
                large_weight = a * (1.0 - g) / (2.0 * hi_side.len() as f64);
            }
            CaseId::IV | CaseId::VI => {
                for m in &clean {
                    add(m, a)?;
                }
            }
        }
        for m in &lo_side {
            add(m, small_weight)?;
        }
        for m in &hi_side {
            add(m, large_weight)?;
        }

        let small_w: Vec<(Message, f64)> = small.iter().map(|m| ((*m).clone(), small_weight)).collect();
        let large_w: Vec<(Message, f64)> = large.iter().map(|m| ((*m).clone(), large_weight)).collect();
        let choice = match (small.is_empty(), large.is_empty()) {
            (true, true) => NodeSet::EMPTY,
            (true, false) => trim.high_cover,
            (false, true) => trim.low_cover,
            (false, false) if small_w.iter().all(|(_, w)| *w >= beta) => trim.high_cover,
            (false, false) => trim.low_cover,
        };
        debug_assert!(f == 0 || choice.len() <= f);
        rows.push(row);
        cases.push(RepresentationCase {
            node: i,
            case,
            a,
            small: small_w,
            large: large_w,
            tampered_kept: !tampered.is_empty(),
            anchor,
            small_substitute: small_sub,
            large_substitute: large_sub,
            gammas,
            choice,
        });
    }
    let m = WeightMatrix::new(t, nodes, rows).expect("square by construction");
    Ok((m, cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::families::build_fig1;
    use crate::consensus::{run, AdversaryStrategy, SessionConfig, SplitLabels};

    fn set(v: &[usize]) -> NodeSet {
        v.iter().map(|x| x - 1).collect()
    }

    fn split_run(l: usize, rounds: usize) -> crate::consensus::SimulationTrace {
        let labels = SplitLabels { left: set(&[1, 4]), right: set(&[2, 3]), mu_minus: Some(-1.0), u_plus: Some(2.0) };
        let mut cfg = SessionConfig::new(build_fig1(), l, 1, set(&[5]), AdversaryStrategy::Split(labels), vec![0.0, 1.0, 1.0, 0.0, 0.5]);
        cfg.record_rounds = true;
        cfg.max_rounds = rounds;
        cfg.stop_when_frozen = true;
        run(&cfg).unwrap()
    }

    #[test]
    fn classification_table() {
        assert_eq!(CaseId::classify(true, true, true), CaseId::I);
        assert_eq!(CaseId::classify(true, true, false), CaseId::II);
        assert_eq!(CaseId::classify(false, true, true), CaseId::III);
        assert_eq!(CaseId::classify(true, false, false), CaseId::IV);
        assert_eq!(CaseId::classify(false, false, true), CaseId::V);
        assert_eq!(CaseId::classify(false, false, false), CaseId::VI);
    }

    #[test]
    fn split_round_at_first_node() {
        let trace = split_run(1, 3);
        let (m, cases) = build_weight_matrix(&trace.rounds[0], set(&[5]), 1, 1, 5).unwrap();
        assert_eq!(cases[0].case, CaseId::IV);
        assert!(cases[0].small.is_empty());
        assert_eq!(cases[0].large.len(), 1);
        assert_eq!(m.rows()[0], vec![0.5, 0.0, 0.0, 0.5]);
        assert_eq!(cases[0].choice, set(&[2]));
    }

    #[test]
    fn reconstructs_converging_run() {
        let trace = split_run(2, 40);
        for r in &trace.rounds {
            let (m, _) = build_weight_matrix(r, set(&[5]), 1, 2, 5).unwrap();
            m.check_stochastic().unwrap();
            let before: Vec<f64> = m.nodes.iter().map(|&v| r.states_before[v]).collect();
            for (k, got) in m.apply(&before).into_iter().enumerate() {
                assert!((got - r.states_after[m.nodes[k]]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn missing_round_data_is_reported() {
        let mut r = split_run(2, 2).rounds[0].clone();
        r.trims[2] = None;
        assert_eq!(build_weight_matrix(&r, set(&[5]), 1, 2, 5).unwrap_err(), AnalysisError::TraceIncomplete { round: 1, node: 2 });
    }
}
