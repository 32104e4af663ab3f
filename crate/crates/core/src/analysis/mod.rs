//! Post-hoc checks of the matrix form of a recorded run.
//!
//! Every round of a deep trace is rewritten as `v[t] = M[t] v[t-1]` over the
//! fault-free nodes using only messages whose path avoids the true fault
//! set. The matrices are then checked for stochasticity, diagonal and
//! support bounds and domination of a reduced graph, and their products for
//! ergodic contraction.

mod checks;
mod ergodic;
mod matrix;
pub mod report;
mod representation;

use thiserror::Error;

use crate::consensus::SimulationTrace;
use crate::graph::{DirectedGraph, NodeSet};

pub use checks::{
    check_round_matrix, constructive_reduced_graph, power_has_positive_column, Adjacency, Check, MatrixChecks, ReducedSource,
};
pub use ergodic::{verify_ergodic_decay, DecayCheck, ErgodicReport, PrefixCheck, WindowCheck, DECAY_THRESHOLD};
pub use matrix::{delta_coefficient, lambda_coefficient, MatrixError, WeightMatrix};
pub use report::AnalysisReport;
pub use representation::{build_weight_matrix, CaseId, RepresentationCase};

/// Absolute tolerance for row sums, reconstruction and the product
/// inequality.
pub const TOLERANCE: f64 = 1e-9;

/// Lower bound on every weight the dominated reduced graph relies on:
/// `1 / (16 n^(2l))`.
pub fn beta(n: usize, l: usize) -> f64 {
    1.0 / (16.0 * (n as f64).powf(2.0 * l as f64))
}

/// Lower bound on every `a_i`: `1 / (2 n^l)`.
pub fn a_floor(n: usize, l: usize) -> f64 {
    1.0 / (2.0 * (n as f64).powf(l as f64))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("round {round}: no delivery or trim recorded for node {}", node + 1)]
    TraceIncomplete { round: usize, node: usize },
    #[error("trace holds {recorded} of {expected} rounds; rerun with round recording")]
    MissingRounds { recorded: usize, expected: usize },
    #[error("round {round}, node {}: {detail}", node + 1)]
    RepresentationFailure { round: usize, node: usize, detail: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Parameters of the run under analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Setting {
    pub order: usize,
    pub l: usize,
    pub f: usize,
    pub faulty: NodeSet,
}

impl Setting {
    pub fn of(trace: &SimulationTrace) -> Self {
        Setting { order: trace.order, l: trace.l, f: trace.f, faulty: trace.faulty }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundAnalysis {
    pub matrix: WeightMatrix,
    pub cases: Vec<RepresentationCase>,
    pub checks: MatrixChecks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub setting: Setting,
    pub rounds: Vec<RoundAnalysis>,
    pub ergodic: ErgodicReport,
}

impl Analysis {
    pub fn passed(&self) -> bool {
        self.rounds.iter().all(|r| r.checks.passed()) && self.ergodic.passed()
    }
}

/// Builds and checks the matrix of every recorded round, then the products.
/// `graph` enables the exhaustive reduced-graph fallback.
pub fn analyze(trace: &SimulationTrace, graph: Option<&DirectedGraph>) -> Result<Analysis, AnalysisError> {
    let expected = trace.outcome.last_round();
    if trace.rounds.len() != expected {
        return Err(AnalysisError::MissingRounds { recorded: trace.rounds.len(), expected });
    }
    let setting = Setting::of(trace);
    let mut rounds = Vec::with_capacity(trace.rounds.len());
    for r in &trace.rounds {
        let (matrix, cases) = build_weight_matrix(r, setting.faulty, setting.f, setting.l, setting.order)?;
        let checks = check_round_matrix(&matrix, &cases, r, &setting, graph);
        rounds.push(RoundAnalysis { matrix, cases, checks });
    }
    let matrices: Vec<WeightMatrix> = rounds.iter().map(|r| r.matrix.clone()).collect();
    let window = setting.order - setting.faulty.len();
    let ergodic = verify_ergodic_decay(&matrices, trace, window)?;
    Ok(Analysis { setting, rounds, ergodic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::families::build_fig1;
    use crate::consensus::{run, AdversaryStrategy, SessionConfig, SplitLabels};

    fn set(v: &[usize]) -> NodeSet {
        v.iter().map(|x| x - 1).collect()
    }

    #[test]
    fn bounds() {
        assert_eq!(beta(5, 2), 1.0 / 10000.0);
        assert_eq!(a_floor(5, 2), 1.0 / 50.0);
    }

    #[test]
    fn converging_split_run_passes() {
        let labels = SplitLabels { left: set(&[1, 4]), right: set(&[2, 3]), mu_minus: Some(-1.0), u_plus: Some(2.0) };
        let mut cfg = SessionConfig::new(build_fig1(), 2, 1, set(&[5]), AdversaryStrategy::Split(labels), vec![0.0, 1.0, 1.0, 0.0, 0.5]);
        cfg.record_rounds = true;
        cfg.epsilon = 1e-6;
        let trace = run(&cfg).unwrap();
        let analysis = analyze(&trace, Some(&build_fig1())).unwrap();
        for r in &analysis.rounds {
            assert!(r.checks.passed(), "round {}: {:?}", r.matrix.t, r.checks);
            assert_eq!(r.checks.reduced, ReducedSource::Constructive);
        }
        assert!(analysis.ergodic.product_bound.pass, "{:?}", analysis.ergodic.product_bound);
        assert!(analysis.ergodic.scrambling.pass);
        let decay = analysis.ergodic.decay.as_ref().unwrap();
        assert_eq!(decay.round, trace.outcome.last_round());
        eprintln!("decay {:?}", decay);
    }

    #[test]
    fn honest_complete_graph_mixes_in_one_round() {
        let g = DirectedGraph::complete(4).unwrap();
        let mut cfg = SessionConfig::new(g, 1, 0, NodeSet::EMPTY, AdversaryStrategy::Honest, vec![0.0, 1.0, 2.0, 3.0]);
        cfg.record_rounds = true;
        let trace = run(&cfg).unwrap();
        let analysis = analyze(&trace, None).unwrap();
        let first = &analysis.rounds[0];
        assert!(first.checks.passed());
        assert_eq!(lambda_coefficient(&first.matrix).unwrap(), 0.0);
    }

    #[test]
    fn unrecorded_trace_is_rejected() {
        let cfg = SessionConfig::new(build_fig1(), 2, 1, set(&[5]), AdversaryStrategy::Honest, vec![0.0, 1.0, 1.0, 0.0, 0.5]);
        let trace = run(&cfg).unwrap();
        assert!(matches!(analyze(&trace, None), Err(AnalysisError::MissingRounds { .. })));
    }
}
