use serde::{Deserialize, Serialize};

use super::checks::{Check, ReducedSource};
use super::{Analysis, CaseId};
use crate::SCHEMA_VERSION;

fn real(v: f64) -> String {
    v.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCase {
    pub node: usize,
    pub case: CaseId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundReport {
    pub t: usize,
    pub cases: Vec<NodeCase>,
    pub stochastic: Check,
    pub diagonal: Check,
    pub support: Check,
    pub dominated: Check,
    pub reduced: ReducedSource,
    pub reconstruction: Check,
    pub one_side_heavy: Check,
    pub positive_column: Option<bool>,
    pub alpha: String,
    pub delta: String,
    pub lambda: String,
    pub cumulative_delta: String,
    pub lambda_product: String,
    pub margin: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayReport {
    pub round: usize,
    pub cumulative_delta: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub start: usize,
    pub end: usize,
    pub positive_column: bool,
    pub lambda: String,
}

/// Serializable summary of an [`Analysis`]; reals are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub order: usize,
    pub l: usize,
    pub f: usize,
    pub faulty: Vec<usize>,
    pub beta: String,
    pub a_floor: String,
    pub passed: bool,
    pub rounds: Vec<RoundReport>,
    pub product_bound: Check,
    pub decay: Option<DecayReport>,
    pub window: usize,
    pub windows: Vec<WindowReport>,
    pub scrambling: Check,
}

impl From<&Analysis> for AnalysisReport {
    fn from(a: &Analysis) -> Self {
        let s = a.setting;
        let rounds = a
            .rounds
            .iter()
            .zip(&a.ergodic.prefixes)
            .map(|(r, p)| {
                let c = &r.checks;
                RoundReport {
                    t: r.matrix.t,
                    cases: r.cases.iter().map(|k| NodeCase { node: k.node + 1, case: k.case }).collect(),
                    stochastic: c.stochastic.clone(),
                    diagonal: c.diagonal.clone(),
                    support: c.support.clone(),
                    dominated: c.dominated.clone(),
                    reduced: c.reduced,
                    reconstruction: c.reconstruction.clone(),
                    one_side_heavy: c.one_side_heavy.clone(),
                    positive_column: c.positive_column,
                    alpha: real(c.alpha),
                    delta: real(p.delta),
                    lambda: real(p.lambda),
                    cumulative_delta: real(p.cumulative_delta),
                    lambda_product: real(p.lambda_product),
                    margin: real(p.margin),
                }
            })
            .collect();
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            order: s.order,
            l: s.l,
            f: s.f,
            faulty: s.faulty.labels(),
            beta: real(super::beta(s.order, s.l)),
            a_floor: real(super::a_floor(s.order, s.l)),
            passed: a.passed(),
            rounds,
            product_bound: a.ergodic.product_bound.clone(),
            decay: a.ergodic.decay.as_ref().map(|d| DecayReport {
                round: d.round,
                cumulative_delta: real(d.cumulative_delta),
                pass: d.pass,
            }),
            window: a.ergodic.window,
            windows: a
                .ergodic
                .windows
                .iter()
                .map(|w| WindowReport { start: w.start, end: w.end, positive_column: w.positive_column, lambda: real(w.lambda) })
                .collect(),
            scrambling: a.ergodic.scrambling.clone(),
        }
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
