use serde::{Deserialize, Serialize};

use super::matrix::WeightMatrix;
use super::representation::RepresentationCase;
use super::{a_floor, beta, Setting, TOLERANCE};
use crate::conditions::{enumerate_reduced_graphs, ReducedError, ReducedOptions};
use crate::consensus::RoundRecord;
use crate::graph::{DirectedGraph, NodeSet};

/// Outcome of one check, with the first violation found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn ok() -> Self {
        Check { pass: true, detail: None }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Check { pass: false, detail: Some(detail.into()) }
    }

    fn first(violation: Option<String>) -> Self {
        violation.map_or_else(Check::ok, Check::fail)
    }
}

/// Where the dominated reduced graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducedSource {
    /// The per-node choices recorded with the representation.
    Constructive,
    /// A search over all reduced graphs.
    Exhaustive,
    /// Neither route found one.
    NotFound,
    /// The constructive graph failed and the search would exceed its budget.
    BudgetExceeded,
    /// The constructive graph failed and no graph was supplied to search.
    NoGraph,
}

/// Adjacency over the fault-free nodes: `h[row][col]` is an edge from the
/// column node into the row node.
pub type Adjacency = Vec<Vec<bool>>;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixChecks {
    pub t: usize,
    /// Smallest `a_i` over the fault-free nodes.
    pub alpha: f64,
    pub a_floor: f64,
    pub beta: f64,
    /// Row sums 1, entries nonnegative.
    pub stochastic: Check,
    /// `M_ii >= a_i >= alpha` and `a_i >= a_floor`.
    pub diagonal: Check,
    /// Weight only on sources that actually sent to the receiver.
    pub support: Check,
    /// Some reduced graph `H` with `beta * H <= M`.
    pub dominated: Check,
    pub reduced: ReducedSource,
    /// `M * v[t-1] = v[t]`.
    pub reconstruction: Check,
    /// Every receiver has one removed side whose weights are all `>= beta`.
    pub one_side_heavy: Check,
    /// When some node reaches all others in `H`, whether the matching
    /// power of `H` has a positive column.
    pub positive_column: Option<bool>,
    pub h: Adjacency,
}

impl MatrixChecks {
    /// The four matrix conditions plus reconstruction and the per-node
    /// weight bound.
    pub fn passed(&self) -> bool {
        [&self.stochastic, &self.diagonal, &self.support, &self.dominated, &self.reconstruction, &self.one_side_heavy]
            .iter()
            .all(|c| c.pass)
            && self.positive_column != Some(false)
    }
}

fn dominated_by(m: &WeightMatrix, h: &Adjacency, beta: f64) -> Option<String> {
    for (r, row) in h.iter().enumerate() {
        for (c, &edge) in row.iter().enumerate() {
            if edge && m.get(r, c) < beta * (1.0 - 1e-12) {
                return Some(format!("M[{}][{}] = {} is below beta", m.nodes[r] + 1, m.nodes[c] + 1, m.get(r, c)));
            }
        }
    }
    None
}

/// Edges of the reduced graph that drops, per receiver, every path through
/// a faulty node or through the receiver's recorded choice.
pub fn constructive_reduced_graph(m: &WeightMatrix, cases: &[RepresentationCase], round: &RoundRecord, setting: &Setting) -> Adjacency {
    let k = m.size();
    let mut h = vec![vec![false; k]; k];
    for (r, case) in cases.iter().enumerate() {
        let blocked = setting.faulty | case.choice.without(case.node);
        for msg in round.delivered[case.node].iter().flat_map(|s| s.iter()) {
            if !msg.touches(blocked) {
                if let Some(c) = m.index_of(msg.source()) {
                    h[r][c] = true;
                }
            }
        }
    }
    h
}

fn reaches_all(h: &Adjacency) -> bool {
    let k = h.len();
    (0..k).any(|start| {
        let mut seen = vec![false; k];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            for r in 0..k {
                if h[r][c] && !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

/// Whether `h` raised to the `k`-th power, `k` the number of fault-free
/// nodes, has a column with no zero.
pub fn power_has_positive_column(h: &Adjacency) -> bool {
    let k = h.len();
    let mut p = h.clone();
    for _ in 1..k {
        p = (0..k).map(|r| (0..k).map(|c| (0..k).any(|x| p[r][x] && h[x][c])).collect()).collect();
    }
    (0..k).any(|c| (0..k).all(|r| p[r][c]))
}

/// Checks one round's matrix against the four conditions of the matrix
/// representation, trying the recorded choices first and falling back to
/// a search over all reduced graphs of `graph` when they fail.
pub fn check_round_matrix(
    m: &WeightMatrix,
    cases: &[RepresentationCase],
    round: &RoundRecord,
    setting: &Setting,
    graph: Option<&DirectedGraph>,
) -> MatrixChecks {
    let (beta, a_floor) = (beta(setting.order, setting.l), a_floor(setting.order, setting.l));
    let alpha = cases.iter().map(|c| c.a).fold(f64::INFINITY, f64::min);

    let stochastic = match m.check_stochastic() {
        Ok(()) => Check::ok(),
        Err(e) => Check::fail(e.to_string()),
    };

    let before: Vec<f64> = m.nodes.iter().map(|&v| round.states_before[v]).collect();
    let reconstruction = Check::first(m.apply(&before).iter().zip(&m.nodes).find_map(|(got, &v)| {
        let want = round.states_after[v];
        ((got - want).abs() > TOLERANCE).then(|| format!("node {}: rebuilt {got}, recorded {want}", v + 1))
    }));

    let diagonal = Check::first(cases.iter().enumerate().find_map(|(r, c)| {
        if m.get(r, r) < c.a - TOLERANCE {
            Some(format!("node {}: M_ii = {} below a_i = {}", c.node + 1, m.get(r, r), c.a))
        } else if c.a < a_floor {
            Some(format!("node {}: a_i = {} below {a_floor}", c.node + 1, c.a))
        } else {
            None
        }
    }));

    let support = Check::first(cases.iter().enumerate().find_map(|(r, case)| {
        let sent: NodeSet = round.delivered[case.node].iter().flat_map(|s| s.iter().map(|msg| msg.source())).collect();
        (0..m.size())
            .find(|&c| m.get(r, c) != 0.0 && !sent.contains(m.nodes[c]))
            .map(|c| format!("M[{}][{}] = {} without a message", case.node + 1, m.nodes[c] + 1, m.get(r, c)))
    }));

    let one_side_heavy = Check::first(
        cases.iter().find(|c| !c.one_side_heavy(beta)).map(|c| format!("node {}: both removed sides carry weight below beta", c.node + 1)),
    );

    let mut h = constructive_reduced_graph(m, cases, round, setting);
    let (dominated, reduced) = match dominated_by(m, &h, beta) {
        None => (Check::ok(), ReducedSource::Constructive),
        Some(why) => {
            let fallback = match graph {
                None => Err(ReducedSource::NoGraph),
                Some(g) => search_reduced(m, g, setting, beta),
            };
            match fallback {
                Ok(found) => {
                    h = found;
                    (Check::ok(), ReducedSource::Exhaustive)
                }
                Err(source) => (Check::fail(why), source),
            }
        }
    };

    let positive_column = reaches_all(&h).then(|| power_has_positive_column(&h));
    MatrixChecks {
        t: m.t,
        alpha,
        a_floor,
        beta,
        stochastic,
        diagonal,
        support,
        dominated,
        reduced,
        reconstruction,
        one_side_heavy,
        positive_column,
        h,
    }
}

fn search_reduced(m: &WeightMatrix, g: &DirectedGraph, setting: &Setting, beta: f64) -> Result<Adjacency, ReducedSource> {
    let graphs = match enumerate_reduced_graphs(g, setting.faulty, setting.l, setting.f, ReducedOptions::default()) {
        Ok(it) => it,
        Err(ReducedError::BudgetExceeded { .. }) => return Err(ReducedSource::BudgetExceeded),
        Err(_) => return Err(ReducedSource::NotFound),
    };
    let k = m.size();
    for rg in graphs {
        let mut h = vec![vec![false; k]; k];
        for e in &rg.edges {
            if let (Some(r), Some(c)) = (m.index_of(e.head), m.index_of(e.tail)) {
                h[r][c] = true;
            }
        }
        if dominated_by(m, &h, beta).is_none() {
            return Ok(h);
        }
    }
    Err(ReducedSource::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_column_of_a_chain() {
        // 0 -> 1 -> 2 with self-loops: column 0 fills after two steps.
        let h = vec![vec![true, false, false], vec![true, true, false], vec![false, true, true]];
        assert!(reaches_all(&h));
        assert!(power_has_positive_column(&h));
        let split = vec![vec![true, false], vec![false, true]];
        assert!(!reaches_all(&split));
        assert!(!power_has_positive_column(&split));
    }
}
