//! Machine-readable verdict reports. Node ids are 1-based.

use serde::{Deserialize, Serialize};

use super::{ConditionKind, Partition, UndirectedReport, Verdict, L0};
use crate::graph::NodeSet;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRecord {
    #[serde(rename = "L")]
    pub l: Vec<usize>,
    #[serde(rename = "C")]
    pub c: Vec<usize>,
    #[serde(rename = "R")]
    pub r: Vec<usize>,
    #[serde(rename = "F")]
    pub f: Vec<usize>,
}

impl From<&Partition> for PartitionRecord {
    fn from(p: &Partition) -> Self {
        PartitionRecord { l: p.l.labels(), c: p.c.labels(), r: p.r.labels(), f: p.f.labels() }
    }
}

impl PartitionRecord {
    pub fn to_partition(&self) -> Option<Partition> {
        let set = |labels: &[usize]| -> Option<NodeSet> {
            labels.iter().try_fold(NodeSet::EMPTY, |acc, &x| (1..=crate::graph::MAX_NODES).contains(&x).then(|| acc.with(x - 1)))
        };
        Some(Partition::new(set(&self.l)?, set(&self.c)?, set(&self.r)?, set(&self.f)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub f: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    pub condition: ConditionKind,
    pub params: Params,
    pub holds: bool,
    pub witness: Option<PartitionRecord>,
    /// `C_i` per fault-free node as `(node, members)` pairs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reduced_choices: Option<Vec<(usize, Vec<usize>)>>,
    pub checked_count: u64,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        let reduced_choices = v.reduced_choices.as_ref().map(|choices| {
            let faulty = v.witness.map_or(NodeSet::EMPTY, |w| w.f);
            choices.iter().enumerate().filter(|(i, _)| !faulty.contains(*i)).map(|(i, c)| (i + 1, c.labels())).collect()
        });
        VerdictReport {
            schema_version: SCHEMA_VERSION,
            condition: v.condition,
            params: Params { n: v.n, f: v.f, l: v.l },
            holds: v.holds,
            witness: v.witness.as_ref().map(PartitionRecord::from),
            reduced_choices,
            checked_count: v.checked_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct L0Report {
    pub schema_version: u32,
    pub n: usize,
    pub f: usize,
    /// `None` when no depth below `n` works.
    pub l0: Option<usize>,
    pub result: String,
}

impl L0Report {
    pub fn new(n: usize, f: usize, l0: L0) -> Self {
        let depth = match l0 {
            L0::Depth(l) => Some(l),
            L0::NotSatisfiable => None,
        };
        L0Report { schema_version: SCHEMA_VERSION, n, f, l0: depth, result: l0.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedRecord {
    pub schema_version: u32,
    pub n: usize,
    pub f: usize,
    pub connectivity: usize,
    pub l_star: usize,
    pub lhs: bool,
    pub rhs: VerdictReport,
    pub agree: bool,
}

impl From<&UndirectedReport> for UndirectedRecord {
    fn from(r: &UndirectedReport) -> Self {
        UndirectedRecord {
            schema_version: SCHEMA_VERSION,
            n: r.n,
            f: r.f,
            connectivity: r.connectivity,
            l_star: r.l_star,
            lhs: r.lhs,
            rhs: VerdictReport::from(&r.rhs),
            agree: r.agree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{check_condition_nc, families::build_fig1};

    #[test]
    fn witness_round_trips_through_json() {
        let v = check_condition_nc(&build_fig1(), 1, 1);
        let report = VerdictReport::from(&v);
        let text = serde_json::to_string_pretty(&report).unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"condition\": \"nc\""));
        let back: VerdictReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.witness.unwrap().to_partition(), v.witness);
    }
}
