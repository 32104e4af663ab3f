//! Batch cross-checks of the relay-depth condition against its equivalents.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reduced::{unique_source_condition, ReducedError, ReducedOptions};
use super::sampling::{all_digraphs, all_undirected, sample_graph, sample_seed};
use super::{check_condition_1, check_condition_nc, check_propagate, check_undirected_equivalence, unrestricted_depth};
use crate::graph::{write_graph, DirectedGraph};

/// Relay depths at which the reduced-graph check is compared.
pub const REDUCED_DEPTHS: [usize; 2] = [1, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivMode {
    /// Size and connectivity bound against the condition at unrestricted depth.
    Undirected,
    /// Condition at unrestricted depth against Condition 1 and propagation.
    Directed,
    /// Condition against the unique-source criterion at depths 1 and 2.
    UniqueSource,
}

impl fmt::Display for EquivMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivMode::Undirected => "undirected",
            EquivMode::Directed => "directed",
            EquivMode::UniqueSource => "unique-source",
        })
    }
}

impl FromStr for EquivMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "undirected" => Ok(EquivMode::Undirected),
            "directed" => Ok(EquivMode::Directed),
            "unique-source" => Ok(EquivMode::UniqueSource),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Verdicts of every checker evaluated on one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub agree: bool,
    /// `name=holds` pairs, in evaluation order.
    pub verdicts: Vec<(String, bool)>,
}

pub fn check_instance(mode: EquivMode, g: &DirectedGraph, f: usize) -> Result<InstanceOutcome, ReducedError> {
    let mut verdicts = Vec::new();
    match mode {
        EquivMode::Undirected => {
            let r = check_undirected_equivalence(g, f).expect("undirected mode samples symmetric graphs");
            verdicts.push((format!("size-and-connectivity(kappa={})", r.connectivity), r.lhs));
            verdicts.push((format!("nc(l={})", r.l_star), r.rhs.holds));
        }
        EquivMode::Directed => {
            let l_star = unrestricted_depth(g);
            verdicts.push((format!("nc(l={l_star})"), check_condition_nc(g, f, l_star).holds));
            verdicts.push(("condition-1".to_string(), check_condition_1(g, f).holds));
            verdicts.push(("propagate".to_string(), check_propagate(g, f).holds));
        }
        EquivMode::UniqueSource => {
            let mut agree = true;
            for l in REDUCED_DEPTHS {
                let nc = check_condition_nc(g, f, l).holds;
                let us = unique_source_condition(g, f, l, ReducedOptions::default())?.holds;
                agree &= nc == us;
                verdicts.push((format!("nc(l={l})"), nc));
                verdicts.push((format!("unique-source(l={l})"), us));
            }
            return Ok(InstanceOutcome { agree, verdicts });
        }
    }
    let agree = verdicts.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(InstanceOutcome { agree, verdicts })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivConfig {
    pub mode: EquivMode,
    pub f: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
}

impl EquivConfig {
    /// Small instances are enumerated rather than sampled.
    pub fn exhaustive(&self) -> bool {
        self.n_max <= 4
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    /// Reproducer seed; absent for enumerated graphs.
    pub seed: Option<u64>,
    pub graph: String,
    pub outcome: InstanceOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivSummary {
    pub config: EquivConfig,
    pub exhaustive: bool,
    pub instances: usize,
    /// Instances where the base condition holds (first verdict).
    pub holding: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Samples `cfg.samples` graphs (or enumerates all graphs on
/// `n_min..=n_max` nodes when `n_max <= 4`) and checks each.
pub fn run_equivalence(cfg: &EquivConfig) -> Result<EquivSummary, ReducedError> {
    let undirected = cfg.mode == EquivMode::Undirected;
    let instances: Vec<(Option<u64>, DirectedGraph)> = if cfg.exhaustive() {
        (cfg.n_min..=cfg.n_max)
            .flat_map(|n| -> Box<dyn Iterator<Item = DirectedGraph>> {
                if undirected {
                    Box::new(all_undirected(n))
                } else {
                    Box::new(all_digraphs(n))
                }
            })
            .map(|g| (None, g))
            .collect()
    } else {
        (0..cfg.samples as u64)
            .map(|k| {
                let seed = sample_seed(cfg.seed, k);
                (Some(seed), sample_graph(seed, cfg.n_min, cfg.n_max, undirected).graph)
            })
            .collect()
    };

    let outcomes: Vec<InstanceOutcome> = instances.par_iter().map(|(_, g)| check_instance(cfg.mode, g, cfg.f)).collect::<Result<_, _>>()?;

    let mut summary = EquivSummary {
        config: cfg.clone(),
        exhaustive: cfg.exhaustive(),
        instances: instances.len(),
        holding: 0,
        agreements: 0,
        disagreements: Vec::new(),
    };
    for ((seed, g), outcome) in instances.into_iter().zip(outcomes) {
        if outcome.verdicts[0].1 {
            summary.holding += 1;
        }
        if outcome.agree {
            summary.agreements += 1;
        } else {
            summary.disagreements.push(Disagreement { seed, graph: write_graph(&g, None), outcome });
        }
    }
    Ok(summary)
}
