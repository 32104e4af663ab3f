//! Serialized forms: values as decimal strings (exact `f64` round trip),
//! paths as 1-based node id lists.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Message, MessageSet, TrimResult};
use crate::graph::{NodeSet, Path, MAX_NODES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("bad message value `{0}`")]
    BadValue(String),
    #[error("bad path {0:?}")]
    BadPath(Vec<usize>),
    #[error("bad node id {0}")]
    BadNode(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub value: String,
    pub path: Vec<usize>,
}

impl From<&Message> for MessageRecord {
    fn from(m: &Message) -> Self {
        MessageRecord { value: m.value.to_string(), path: m.path.labels() }
    }
}

impl MessageRecord {
    pub fn decode(&self) -> Result<Message, RecordError> {
        let value: f64 = self.value.trim().parse().map_err(|_| RecordError::BadValue(self.value.clone()))?;
        if !value.is_finite() {
            return Err(RecordError::BadValue(self.value.clone()));
        }
        let path = Path::from_labels(&self.path).ok_or_else(|| RecordError::BadPath(self.path.clone()))?;
        Ok(Message::new(value, path))
    }
}

pub fn encode_set(m: &MessageSet) -> Vec<MessageRecord> {
    m.iter().map(MessageRecord::from).collect()
}

pub fn decode_set(records: &[MessageRecord]) -> Result<MessageSet, RecordError> {
    records.iter().map(MessageRecord::decode).collect::<Result<Vec<_>, _>>().map(MessageSet::from_vec)
}

pub(crate) fn decode_nodes(labels: &[usize]) -> Result<NodeSet, RecordError> {
    labels.iter().try_fold(
        NodeSet::EMPTY,
        |acc, &x| {
            if x == 0 || x > MAX_NODES {
                Err(RecordError::BadNode(x))
            } else {
                Ok(acc.with(x - 1))
            }
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrimRecord {
    pub low: Vec<MessageRecord>,
    pub high: Vec<MessageRecord>,
    pub kept: Vec<MessageRecord>,
    pub low_cover: Vec<usize>,
    pub high_cover: Vec<usize>,
}

impl From<&TrimResult> for TrimRecord {
    fn from(t: &TrimResult) -> Self {
        TrimRecord {
            low: encode_set(&t.low),
            high: encode_set(&t.high),
            kept: encode_set(&t.kept),
            low_cover: t.low_cover.labels(),
            high_cover: t.high_cover.labels(),
        }
    }
}

impl TrimRecord {
    pub fn decode(&self) -> Result<TrimResult, RecordError> {
        Ok(TrimResult {
            low: decode_set(&self.low)?,
            high: decode_set(&self.high)?,
            kept: decode_set(&self.kept)?,
            low_cover: decode_nodes(&self.low_cover)?,
            high_cover: decode_nodes(&self.high_cover)?,
        })
    }
}
