//! Session configuration and its TOML file form.
//!
//! ```toml
//! graph = "fig1.g"            # relative to the config file
//! l = 2
//! f = 1
//! faulty = [5]
//! initial_states = "split:0,1" # or an explicit list, one value per node
//! max_rounds = 500
//! epsilon = 1e-6
//! seed = 7
//! default_value = "receiver_previous"  # or "initial_min", "fixed:<x>"
//!
//! [adversary]
//! kind = "split"               # honest | split | constant | random | silent
//! left = [1, 4]
//! right = [2, 3]
//! mu_minus = -1.0
//! u_plus = 2.0
//! ```

use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AdversaryStrategy, DefaultValuePolicy, SplitLabels};
use crate::graph::{parse_graph, DirectedGraph, NodeSet, MAX_NODES};

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub graph: DirectedGraph,
    pub l: usize,
    pub f: usize,
    pub faulty: NodeSet,
    pub adversary: AdversaryStrategy,
    /// One entry per node id; faulty entries are bookkeeping only.
    pub initial_states: Vec<f64>,
    pub max_rounds: usize,
    /// Convergence threshold on the fault-free spread.
    pub epsilon: f64,
    pub default_value_policy: DefaultValuePolicy,
    /// Consecutive unchanged rounds that make a run count as frozen.
    pub frozen_window: usize,
    /// End the run as soon as the frozen window is reached.
    pub stop_when_frozen: bool,
    pub seed: u64,
    /// Keep every round's messages and trims (needed for analysis).
    pub record_rounds: bool,
    /// Refuse to run unless the relay-depth condition holds.
    pub require_condition: bool,
}

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_ROUNDS: usize = 500;
pub const DEFAULT_FROZEN_WINDOW: usize = 5;

impl SessionConfig {
    pub fn new(graph: DirectedGraph, l: usize, f: usize, faulty: NodeSet, adversary: AdversaryStrategy, initial_states: Vec<f64>) -> Self {
        SessionConfig {
            graph,
            l,
            f,
            faulty,
            adversary,
            initial_states,
            max_rounds: DEFAULT_MAX_ROUNDS,
            epsilon: DEFAULT_EPSILON,
            default_value_policy: DefaultValuePolicy::ReceiverPrevious,
            frozen_window: DEFAULT_FROZEN_WINDOW,
            stop_when_frozen: false,
            seed: 0,
            record_rounds: false,
            require_condition: false,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let order = self.graph.order();
        if self.l == 0 {
            return Err("l must be at least 1".into());
        }
        if self.faulty.len() > self.f {
            return Err(format!("{} faulty nodes exceed f = {}", self.faulty.len(), self.f));
        }
        if !self.faulty.is_subset(self.graph.nodes()) {
            return Err(format!("faulty set {} is not inside the graph", self.faulty));
        }
        if self.faulty == self.graph.nodes() {
            return Err("at least one node must be fault-free".into());
        }
        if self.initial_states.len() != order {
            return Err(format!("expected {order} initial states, got {}", self.initial_states.len()));
        }
        if self.initial_states.iter().any(|v| !v.is_finite()) {
            return Err("initial states must be finite".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err("epsilon must be positive".into());
        }
        if self.max_rounds == 0 {
            return Err("max_rounds must be at least 1".into());
        }
        if let DefaultValuePolicy::Fixed(v) = self.default_value_policy {
            if !v.is_finite() {
                return Err("default value must be finite".into());
            }
        }
        match self.adversary {
            AdversaryStrategy::Split(s) => {
                if s.left.intersects(s.right) || (s.left | s.right).intersects(self.faulty) {
                    return Err("split labels must be disjoint from each other and from the faulty set".into());
                }
                if !(s.left | s.right).is_subset(self.graph.nodes()) {
                    return Err("split labels name nodes outside the graph".into());
                }
                if s.mu_minus.into_iter().chain(s.u_plus).any(|v| !v.is_finite()) {
                    return Err("split values must be finite".into());
                }
            }
            AdversaryStrategy::Constant { value } if !value.is_finite() => return Err("constant value must be finite".into()),
            AdversaryStrategy::Random { low, high } if !(low.is_finite() && high.is_finite() && low <= high) => {
                return Err("random interval must be finite with low <= high".into())
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("graph file {path}: {source}")]
    Graph {
        path: PathBuf,
        #[source]
        source: crate::graph::ParseError,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversaryFile {
    Honest,
    Split { left: Vec<usize>, right: Vec<usize>, mu_minus: Option<f64>, u_plus: Option<f64> },
    Constant { value: f64 },
    Random { low: f64, high: f64 },
    Silent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialStates {
    List(Vec<f64>),
    Shorthand(String),
}

/// The config file as written, before the graph is loaded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub graph: String,
    pub l: usize,
    pub f: usize,
    #[serde(default)]
    pub faulty: Vec<usize>,
    pub adversary: AdversaryFile,
    pub initial_states: InitialStates,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub default_value: Option<String>,
    #[serde(default = "default_frozen_window")]
    pub frozen_window: usize,
    #[serde(default)]
    pub stop_when_frozen: bool,
    #[serde(default)]
    pub require_condition: bool,
}

fn default_max_rounds() -> usize {
    DEFAULT_MAX_ROUNDS
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_frozen_window() -> usize {
    DEFAULT_FROZEN_WINDOW
}

fn node_set(labels: &[usize], n: usize, what: &str) -> Result<NodeSet, ConfigError> {
    let mut set = NodeSet::EMPTY;
    for &x in labels {
        if x == 0 || x > n.min(MAX_NODES) {
            return Err(ConfigError::Invalid(format!("{what}: node {x} out of range 1..={n}")));
        }
        if set.contains(x - 1) {
            return Err(ConfigError::Invalid(format!("{what}: node {x} listed twice")));
        }
        set.insert(x - 1);
    }
    Ok(set)
}

fn parse_policy(text: &str) -> Result<DefaultValuePolicy, ConfigError> {
    match text {
        "receiver_previous" => Ok(DefaultValuePolicy::ReceiverPrevious),
        "initial_min" => Ok(DefaultValuePolicy::InitialMin),
        other => other
            .strip_prefix("fixed:")
            .and_then(|v| v.trim().parse::<f64>().ok())
            .map(DefaultValuePolicy::Fixed)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown default_value `{other}`"))),
    }
}

// "split:mu,U": left nodes start at mu, right nodes at U, the rest midway.
fn split_states(spec: &str, n: usize, adversary: &AdversaryStrategy) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError::Invalid(format!("initial_states `{spec}` is neither a list nor `split:<mu>,<U>`"));
    let body = spec.strip_prefix("split:").ok_or_else(bad)?;
    let (mu, u) = body.split_once(',').ok_or_else(bad)?;
    let mu: f64 = mu.trim().parse().map_err(|_| bad())?;
    let u: f64 = u.trim().parse().map_err(|_| bad())?;
    let AdversaryStrategy::Split(labels) = adversary else {
        return Err(ConfigError::Invalid("`split:` initial states need a split adversary for the labels".into()));
    };
    Ok((0..n)
        .map(|v| {
            if labels.left.contains(v) {
                mu
            } else if labels.right.contains(v) {
                u
            } else {
                (mu + u) / 2.0
            }
        })
        .collect())
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))
    }

    /// Combines the file with its already loaded graph and validates.
    pub fn resolve(&self, graph: DirectedGraph) -> Result<SessionConfig, ConfigError> {
        let n = graph.order();
        let faulty = node_set(&self.faulty, n, "faulty")?;
        let adversary = match &self.adversary {
            AdversaryFile::Honest => AdversaryStrategy::Honest,
            AdversaryFile::Split { left, right, mu_minus, u_plus } => AdversaryStrategy::Split(SplitLabels {
                left: node_set(left, n, "adversary.left")?,
                right: node_set(right, n, "adversary.right")?,
                mu_minus: *mu_minus,
                u_plus: *u_plus,
            }),
            AdversaryFile::Constant { value } => AdversaryStrategy::Constant { value: *value },
            AdversaryFile::Random { low, high } => AdversaryStrategy::Random { low: *low, high: *high },
            AdversaryFile::Silent => AdversaryStrategy::Silent,
        };
        let initial_states = match &self.initial_states {
            InitialStates::List(values) => values.clone(),
            InitialStates::Shorthand(spec) => split_states(spec, n, &adversary)?,
        };
        let mut cfg = SessionConfig::new(graph, self.l, self.f, faulty, adversary, initial_states);
        cfg.max_rounds = self.max_rounds;
        cfg.epsilon = self.epsilon;
        cfg.seed = self.seed;
        cfg.frozen_window = self.frozen_window;
        cfg.stop_when_frozen = self.stop_when_frozen;
        cfg.require_condition = self.require_condition;
        if let Some(p) = &self.default_value {
            cfg.default_value_policy = parse_policy(p)?;
        }
        cfg.validate().map_err(ConfigError::Invalid)?;
        Ok(cfg)
    }

    /// Graph path resolved against the directory holding the config.
    pub fn graph_path(&self, config_path: &FsPath) -> PathBuf {
        let rel = FsPath::new(&self.graph);
        if rel.is_absolute() {
            return rel.to_path_buf();
        }
        config_path.parent().unwrap_or_else(|| FsPath::new(".")).join(rel)
    }
}

fn read(path: &FsPath) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })
}

impl SessionConfig {
    /// Reads a config file and the graph it names.
    pub fn load(path: &FsPath) -> Result<(SessionConfig, ConfigFile), ConfigError> {
        let file = ConfigFile::parse(&read(path)?)?;
        let graph_path = file.graph_path(path);
        let graph = parse_graph(&read(&graph_path)?).map_err(|source| ConfigError::Graph { path: graph_path, source })?;
        Ok((file.resolve(graph)?, file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::families::build_fig1;

    const SPLIT: &str = r#"
graph = "fig1.g"
l = 1
f = 1
faulty = [5]
initial_states = "split:0,1"
max_rounds = 50

[adversary]
kind = "split"
left = [1, 4]
right = [2, 3]
mu_minus = -1.0
u_plus = 2.0
"#;

    #[test]
    fn split_shorthand() {
        let cfg = ConfigFile::parse(SPLIT).unwrap().resolve(build_fig1()).unwrap();
        assert_eq!(cfg.initial_states, vec![0.0, 1.0, 1.0, 0.0, 0.5]);
        assert_eq!(cfg.faulty, NodeSet::singleton(4));
        assert_eq!(cfg.max_rounds, 50);
        assert_eq!(cfg.epsilon, DEFAULT_EPSILON);
        assert_eq!(cfg.default_value_policy, DefaultValuePolicy::ReceiverPrevious);
    }

    #[test]
    fn explicit_states_and_policy() {
        let text = r#"
graph = "g"
l = 2
f = 1
initial_states = [0.0, 0.25, 0.5, 0.75, 1.0]
default_value = "fixed:0.5"
adversary = { kind = "silent" }
"#;
        let cfg = ConfigFile::parse(text).unwrap().resolve(build_fig1()).unwrap();
        assert_eq!(cfg.default_value_policy, DefaultValuePolicy::Fixed(0.5));
        assert_eq!(cfg.adversary, AdversaryStrategy::Silent);
    }

    #[test]
    fn rejects_bad_configs() {
        let resolve = |text: &str| ConfigFile::parse(text).and_then(|c| c.resolve(build_fig1()));
        assert!(matches!(resolve("l = 1"), Err(ConfigError::Syntax(_))));
        assert!(matches!(resolve(&SPLIT.replace("faulty = [5]", "faulty = [6]")), Err(ConfigError::Invalid(_))));
        assert!(matches!(resolve(&SPLIT.replace("faulty = [5]", "faulty = [4, 5]")), Err(ConfigError::Invalid(_))));
        assert!(matches!(resolve(&SPLIT.replace("right = [2, 3]", "right = [2, 5]")), Err(ConfigError::Invalid(_))));
        assert!(matches!(resolve(&SPLIT.replace("split:0,1", "split:0")), Err(ConfigError::Invalid(_))));
        assert!(matches!(resolve(&SPLIT.replace("max_rounds = 50", "max_rounds = 50\nbogus = 1")), Err(ConfigError::Syntax(_))));
        assert!(matches!(resolve(&SPLIT.replace("l = 1", "l = 0")), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn graph_path_is_relative_to_config() {
        let file = ConfigFile::parse(SPLIT).unwrap();
        assert_eq!(file.graph_path(FsPath::new("runs/a.toml")), PathBuf::from("runs/fig1.g"));
        assert_eq!(file.graph_path(FsPath::new("a.toml")), PathBuf::from("fig1.g"));
    }
}
