use thiserror::Error;

use super::adversary::{build_adversary, Adversary, RoundContext};
use super::{fault_free, DefaultValuePolicy, EngineError, SessionConfig};
use crate::conditions::check_condition_nc;
use crate::graph::{enumerate_paths, DirectedGraph, NodeSet, Path};
use crate::messaging::{compute_trim, Message, MessageSet, TrimError, TrimResult};

/// Every path of at most `l` hops, grouped by destination.
#[derive(Debug, Clone)]
pub struct RoutingTable {
    into: Vec<Vec<Path>>,
}

impl RoutingTable {
    pub fn new(g: &DirectedGraph, l: usize) -> Self {
        let into = (0..g.order())
            .map(|i| {
                let mut paths: Vec<Path> =
                    if g.contains(i) { g.nodes().iter().flat_map(|j| enumerate_paths(g, j, i, l)).collect() } else { Vec::new() };
                paths.sort();
                paths
            })
            .collect();
        RoutingTable { into }
    }

    pub fn paths_into(&self, i: usize) -> &[Path] {
        &self.into[i]
    }

    /// Untampered messages bound for each node, each carrying its source's
    /// state.
    pub fn outbound(&self, states: &[f64]) -> Vec<MessageSet> {
        self.into.iter().map(|paths| paths.iter().map(|p| Message::new(states[p.source()], p.clone())).collect()).collect()
    }
}

/// One message per path of at most `l` hops (self-loops included), grouped
/// by destination.
pub fn generate_outbound(g: &DirectedGraph, l: usize, states: &[f64]) -> Vec<MessageSet> {
    RoutingTable::new(g, l).outbound(states)
}

/// A message the adversary changed or withheld.
#[derive(Debug, Clone, PartialEq)]
pub struct Tamper {
    pub path: Path,
    pub original: f64,
    /// `None` when withheld (the receiver then used its default value).
    pub delivered: Option<f64>,
}

/// Runs the adversary over every message bound for a fault-free node.
/// Returns the delivered sets (`None` for faulty receivers) and the tamper
/// log. Withheld messages are replaced per `policy`.
pub fn apply_adversary(
    adversary: &mut dyn Adversary,
    outbound: &[MessageSet],
    ctx: &RoundContext<'_>,
    policy: DefaultValuePolicy,
) -> Result<(Vec<Option<MessageSet>>, Vec<Tamper>), EngineError> {
    let mut delivered = Vec::with_capacity(outbound.len());
    let mut log = Vec::new();
    for (i, msgs) in outbound.iter().enumerate() {
        if ctx.faulty.contains(i) || msgs.is_empty() {
            delivered.push(None);
            continue;
        }
        let mut out = Vec::with_capacity(msgs.len());
        for m in msgs {
            let got = adversary.deliver(m, ctx);
            let untouched = got.is_some_and(|v| v.to_bits() == m.value.to_bits());
            if untouched {
                out.push(m.clone());
                continue;
            }
            if !m.touches(ctx.faulty) {
                return Err(EngineError::ContractViolation { round: ctx.round, path: m.path.to_string() });
            }
            let value = got.unwrap_or(match policy {
                DefaultValuePolicy::ReceiverPrevious => ctx.states[i],
                DefaultValuePolicy::Fixed(v) => v,
                DefaultValuePolicy::InitialMin => ctx.mu0,
            });
            log.push(Tamper { path: m.path.clone(), original: m.value, delivered: got });
            out.push(Message::new(value, m.path.clone()));
        }
        delivered.push(Some(MessageSet::from_vec(out)));
    }
    Ok((delivered, log))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UpdateError {
    #[error("no self-loop message")]
    MissingSelfLoop,
    #[error(transparent)]
    Trim(#[from] TrimError),
    #[error("kept set is empty")]
    EmptyKept,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Update {
    pub state: f64,
    pub trim: TrimResult,
    /// Weight of the previous state and of each kept message.
    pub a: f64,
}

// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Trims `delivered` (minus the self-loop message) and averages the previous
/// state with the kept values, each weighted `1 / (|kept| + 1)`.
///
/// The mean is computed with a compensated sum and clamped to the range of
/// its inputs, so rounding can never move a state outside the convex hull.
pub fn update_state(i: usize, delivered: &MessageSet, previous: f64, f: usize) -> Result<Update, UpdateError> {
    let self_loop = Path::self_loop(i);
    if !delivered.iter().any(|m| m.path == self_loop) {
        return Err(UpdateError::MissingSelfLoop);
    }
    let mprime = delivered.filter(|m| m.path != self_loop);
    let trim = compute_trim(&mprime, f, i)?;
    if trim.kept.is_empty() {
        return Err(UpdateError::EmptyKept);
    }
    let count = trim.kept.len() + 1;
    let a = 1.0 / count as f64;
    let inputs = || std::iter::once(previous).chain(trim.kept.values());
    let lo = inputs().fold(f64::INFINITY, f64::min);
    let hi = inputs().fold(f64::NEG_INFINITY, f64::max);
    let state = (compensated_sum(inputs()) / count as f64).clamp(lo, hi);
    Ok(Update { state, trim, a })
}

/// Everything that happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: usize,
    /// Indexed by node id; `None` for faulty nodes.
    pub delivered: Vec<Option<MessageSet>>,
    pub trims: Vec<Option<TrimResult>>,
    pub a: Vec<Option<f64>>,
    pub tampered: Vec<Tamper>,
    pub states_before: Vec<f64>,
    pub states_after: Vec<f64>,
    pub u: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    /// Spread fell to `epsilon` or below at this round.
    Converged {
        round: usize,
    },
    /// No fault-free state changed over the trailing window ending here.
    Frozen {
        round: usize,
    },
    Exhausted {
        rounds: usize,
    },
}

impl RunOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            RunOutcome::Converged { .. } => "converged",
            RunOutcome::Frozen { .. } => "frozen",
            RunOutcome::Exhausted { .. } => "exhausted",
        }
    }

    pub fn last_round(&self) -> usize {
        match *self {
            RunOutcome::Converged { round } | RunOutcome::Frozen { round } => round,
            RunOutcome::Exhausted { rounds } => rounds,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub order: usize,
    pub l: usize,
    pub f: usize,
    pub faulty: NodeSet,
    /// States of every node for rounds `0..=T`.
    pub states: Vec<Vec<f64>>,
    /// Largest and smallest fault-free state per round, round 0 included.
    pub u: Vec<f64>,
    pub mu: Vec<f64>,
    /// `mu[t] >= mu[0]` and `u[t] <= u[0]`.
    pub valid: Vec<bool>,
    /// Full records for rounds `1..=T` when the session asked for them.
    pub rounds: Vec<RoundRecord>,
    pub outcome: RunOutcome,
}

impl SimulationTrace {
    pub fn fault_free(&self) -> NodeSet {
        fault_free(self.order, self.faulty)
    }

    pub fn spread(&self, t: usize) -> f64 {
        self.u[t] - self.mu[t]
    }

    pub fn always_valid(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }
}

fn extremes(states: &[f64], honest: NodeSet) -> (f64, f64) {
    honest.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| (lo.min(states[i]), hi.max(states[i])))
}

/// Runs a session with the adversary its config names.
pub fn run(config: &SessionConfig) -> Result<SimulationTrace, EngineError> {
    let mut adversary = build_adversary(&config.adversary, config.seed);
    run_with(config, adversary.as_mut())
}

/// Runs a session against a caller-supplied adversary.
pub fn run_with(config: &SessionConfig, adversary: &mut dyn Adversary) -> Result<SimulationTrace, EngineError> {
    config.validate().map_err(EngineError::InvalidConfig)?;
    if config.require_condition {
        let v = check_condition_nc(&config.graph, config.f, config.l);
        if let Some(w) = v.witness {
            return Err(EngineError::InvalidConfig(format!("relay-depth condition fails: {w}")));
        }
    }
    let order = config.graph.order();
    let honest = fault_free(order, config.faulty) & config.graph.nodes();
    let table = RoutingTable::new(&config.graph, config.l);

    let mut states = config.initial_states.clone();
    let (mu0, u0) = extremes(&states, honest);
    let mut trace = SimulationTrace {
        order,
        l: config.l,
        f: config.f,
        faulty: config.faulty,
        states: vec![states.clone()],
        u: vec![u0],
        mu: vec![mu0],
        valid: vec![true],
        rounds: Vec::new(),
        outcome: RunOutcome::Exhausted { rounds: config.max_rounds },
    };

    let mut unchanged = 0usize;
    for t in 1..=config.max_rounds {
        let outbound = table.outbound(&states);
        let ctx = RoundContext { round: t, faulty: config.faulty, states: &states, mu0, u0 };
        let (delivered, tampered) = apply_adversary(adversary, &outbound, &ctx, config.default_value_policy)?;

        let mut next = states.clone();
        let mut trims = vec![None; order];
        let mut weights = vec![None; order];
        for i in honest {
            let msgs = delivered[i].as_ref().expect("fault-free nodes receive their self-loop");
            let upd = update_state(i, msgs, states[i], config.f).map_err(|e| match e {
                UpdateError::MissingSelfLoop => EngineError::MissingSelfLoop { round: t, node: i },
                UpdateError::EmptyKept => EngineError::EmptyKept { round: t, node: i },
                UpdateError::Trim(source) => EngineError::NotWellDefined { round: t, source },
            })?;
            next[i] = upd.state;
            weights[i] = Some(upd.a);
            trims[i] = Some(upd.trim);
        }

        let (mu, u) = extremes(&next, honest);
        let same = honest.iter().all(|i| next[i].to_bits() == states[i].to_bits());
        unchanged = if same { unchanged + 1 } else { 0 };
        if config.record_rounds {
            trace.rounds.push(RoundRecord {
                t,
                delivered,
                trims,
                a: weights,
                tampered,
                states_before: states.clone(),
                states_after: next.clone(),
                u,
                mu,
            });
        }
        trace.states.push(next.clone());
        trace.u.push(u);
        trace.mu.push(mu);
        trace.valid.push(mu >= mu0 && u <= u0);
        states = next;

        if u - mu <= config.epsilon {
            trace.outcome = RunOutcome::Converged { round: t };
            return Ok(trace);
        }
        if unchanged >= config.frozen_window {
            trace.outcome = RunOutcome::Frozen { round: t };
            if config.stop_when_frozen {
                return Ok(trace);
            }
        }
    }
    if unchanged < config.frozen_window {
        trace.outcome = RunOutcome::Exhausted { rounds: config.max_rounds };
    }
    Ok(trace)
}
