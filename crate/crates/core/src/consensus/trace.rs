//! Trace files: a `round,node,state` CSV and a JSON sidecar with every
//! round's messages and trims. Reals in the JSON are decimal strings that
//! parse back to the identical `f64`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::engine::{RoundRecord, RunOutcome, SimulationTrace, Tamper};
use crate::graph::{NodeSet, Path, MAX_NODES};
use crate::messaging::record::{decode_set, encode_set, MessageRecord, RecordError, TrimRecord};
use crate::SCHEMA_VERSION;

/// One row per fault-free node per round, round 0 included.
pub fn write_csv(trace: &SimulationTrace) -> String {
    let honest = trace.fault_free();
    let mut out = String::from("round,node,state\n");
    for (t, states) in trace.states.iter().enumerate() {
        for i in honest {
            let _ = writeln!(out, "{t},{},{}", i + 1, states[i]);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("json: {0}")]
    Json(String),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error("bad real `{0}`")]
    BadReal(String),
    #[error("inconsistent trace: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamperRecord {
    pub path: Vec<usize>,
    pub original: String,
    /// Absent when the message was withheld.
    pub delivered: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRound {
    pub node: usize,
    pub state_before: String,
    pub state_after: String,
    pub a: String,
    pub delivered: Vec<MessageRecord>,
    pub trim: TrimRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundJson {
    pub t: usize,
    pub u: String,
    pub mu: String,
    /// States of every node after the round, faulty ones included.
    pub states_after: Vec<String>,
    pub nodes: Vec<NodeRound>,
    pub tampered: Vec<TamperRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub kind: String,
    pub round: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeepTrace {
    pub schema_version: u32,
    pub order: usize,
    pub l: usize,
    pub f: usize,
    pub faulty: Vec<usize>,
    pub initial_states: Vec<String>,
    pub outcome: OutcomeRecord,
    pub rounds: Vec<RoundJson>,
}

fn real(v: f64) -> String {
    v.to_string()
}

fn parse_real(s: &str) -> Result<f64, TraceError> {
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| TraceError::BadReal(s.to_string()))
}

fn reals(values: &[f64]) -> Vec<String> {
    values.iter().copied().map(real).collect()
}

fn parse_reals(values: &[String]) -> Result<Vec<f64>, TraceError> {
    values.iter().map(|s| parse_real(s)).collect()
}

fn inconsistent(msg: impl Into<String>) -> TraceError {
    TraceError::Inconsistent(msg.into())
}

impl DeepTrace {
    /// Needs a trace recorded with `record_rounds`.
    pub fn from_trace(trace: &SimulationTrace) -> DeepTrace {
        let honest = trace.fault_free();
        let rounds = trace
            .rounds
            .iter()
            .map(|r| RoundJson {
                t: r.t,
                u: real(r.u),
                mu: real(r.mu),
                states_after: reals(&r.states_after),
                nodes: honest
                    .iter()
                    .map(|i| NodeRound {
                        node: i + 1,
                        state_before: real(r.states_before[i]),
                        state_after: real(r.states_after[i]),
                        a: real(r.a[i].expect("fault-free weight")),
                        delivered: encode_set(r.delivered[i].as_ref().expect("fault-free delivery")),
                        trim: TrimRecord::from(r.trims[i].as_ref().expect("fault-free trim")),
                    })
                    .collect(),
                tampered: r
                    .tampered
                    .iter()
                    .map(|t| TamperRecord { path: t.path.labels(), original: real(t.original), delivered: t.delivered.map(real) })
                    .collect(),
            })
            .collect();
        let (kind, round) = (trace.outcome.name().to_string(), trace.outcome.last_round());
        DeepTrace {
            schema_version: SCHEMA_VERSION,
            order: trace.order,
            l: trace.l,
            f: trace.f,
            faulty: trace.faulty.labels(),
            initial_states: reals(&trace.states[0]),
            outcome: OutcomeRecord { kind, round },
            rounds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<DeepTrace, TraceError> {
        let deep: DeepTrace = serde_json::from_str(text).map_err(|e| TraceError::Json(e.to_string()))?;
        if deep.schema_version != SCHEMA_VERSION {
            return Err(TraceError::Schema(deep.schema_version));
        }
        Ok(deep)
    }

    /// Rebuilds the in-memory trace, checking that it hangs together.
    pub fn to_trace(&self) -> Result<SimulationTrace, TraceError> {
        let order = self.order;
        if !(2..=MAX_NODES).contains(&order) {
            return Err(inconsistent(format!("order {order} out of range")));
        }
        let mut faulty = NodeSet::EMPTY;
        for &x in &self.faulty {
            if x == 0 || x > order {
                return Err(RecordError::BadNode(x).into());
            }
            faulty.insert(x - 1);
        }
        let honest = NodeSet::full(order) - faulty;
        if honest.is_empty() {
            return Err(inconsistent("no fault-free node"));
        }
        let initial = parse_reals(&self.initial_states)?;
        if initial.len() != order {
            return Err(inconsistent("initial state count differs from order"));
        }
        let extremes = |s: &[f64]| honest.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| (lo.min(s[i]), hi.max(s[i])));
        let (mu0, u0) = extremes(&initial);

        let mut states = vec![initial];
        let (mut us, mut mus, mut valid) = (vec![u0], vec![mu0], vec![true]);
        let mut rounds = Vec::with_capacity(self.rounds.len());
        for (k, r) in self.rounds.iter().enumerate() {
            if r.t != k + 1 {
                return Err(inconsistent(format!("round {} out of sequence", r.t)));
            }
            let before = states.last().expect("round 0 present").clone();
            let after = parse_reals(&r.states_after)?;
            if after.len() != order {
                return Err(inconsistent(format!("round {}: state count differs from order", r.t)));
            }
            let listed: Vec<usize> = r.nodes.iter().map(|nr| nr.node).collect();
            if listed != honest.labels() {
                return Err(inconsistent(format!("round {}: node list differs from the fault-free set", r.t)));
            }
            let mut delivered = vec![None; order];
            let mut trims = vec![None; order];
            let mut a = vec![None; order];
            for nr in &r.nodes {
                let i = nr.node - 1;
                if parse_real(&nr.state_before)?.to_bits() != before[i].to_bits()
                    || parse_real(&nr.state_after)?.to_bits() != after[i].to_bits()
                {
                    return Err(inconsistent(format!("round {}: node {} states disagree", r.t, nr.node)));
                }
                let set = decode_set(&nr.delivered)?;
                if set.iter().any(|m| m.destination() != i || m.path.nodes().iter().any(|&v| v >= order)) {
                    return Err(inconsistent(format!("round {}: node {} holds a message for another node", r.t, nr.node)));
                }
                let trim = nr.trim.decode()?;
                if [&trim.low, &trim.high, &trim.kept].iter().any(|s| s.iter().any(|m| !set.iter().any(|d| d == m))) {
                    return Err(inconsistent(format!("round {}: node {} trims an undelivered message", r.t, nr.node)));
                }
                delivered[i] = Some(set);
                trims[i] = Some(trim);
                a[i] = Some(parse_real(&nr.a)?);
            }
            let tampered = r
                .tampered
                .iter()
                .map(|t| {
                    let path = Path::from_labels(&t.path).ok_or_else(|| RecordError::BadPath(t.path.clone()))?;
                    let delivered = t.delivered.as_deref().map(parse_real).transpose()?;
                    Ok(Tamper { path, original: parse_real(&t.original)?, delivered })
                })
                .collect::<Result<Vec<_>, TraceError>>()?;
            let (mu, u) = extremes(&after);
            us.push(u);
            mus.push(mu);
            valid.push(mu >= mu0 && u <= u0);
            rounds.push(RoundRecord { t: r.t, delivered, trims, a, tampered, states_before: before, states_after: after.clone(), u, mu });
            states.push(after);
        }
        let last = self.rounds.len();
        let outcome = match self.outcome.kind.as_str() {
            "converged" => RunOutcome::Converged { round: self.outcome.round },
            "frozen" => RunOutcome::Frozen { round: self.outcome.round },
            "exhausted" => RunOutcome::Exhausted { rounds: self.outcome.round },
            other => return Err(inconsistent(format!("unknown outcome `{other}`"))),
        };
        if outcome.last_round() != last {
            return Err(inconsistent("outcome round differs from the number of rounds"));
        }
        Ok(SimulationTrace { order, l: self.l, f: self.f, faulty, states, u: us, mu: mus, valid, rounds, outcome })
    }
}
