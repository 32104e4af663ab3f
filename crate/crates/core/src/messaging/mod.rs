//! Messages with route provenance, minimum message covers, and the
//! low/high trim used by the update rule.

mod cover;
pub mod record;
mod trim;

use std::cmp::Ordering;

use crate::graph::{NodeSet, Path};

pub use cover::{max_covered_subset, min_message_cover, mincut_cover_size, CoverError};
pub use trim::{compute_trim, Side, TrimError, TrimResult};

/// A value together with the path it travelled.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub value: f64,
    pub path: Path,
}

impl Message {
    pub fn new(value: f64, path: Path) -> Self {
        Message { value, path }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn source(&self) -> usize {
        self.path.source()
    }

    pub fn destination(&self) -> usize {
        self.path.destination()
    }

    /// Whether some node of the path belongs to `set`.
    pub fn touches(&self, set: NodeSet) -> bool {
        self.path.touches(set)
    }

    /// Total order: value, then path.
    pub fn order(&self, other: &Message) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| self.path.cmp(&other.path))
    }
}

/// Messages kept sorted ascending by `(value, path)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MessageSet(Vec<Message>);

impl MessageSet {
    pub fn new() -> Self {
        MessageSet(Vec::new())
    }

    pub fn from_vec(mut messages: Vec<Message>) -> Self {
        messages.sort_by(Message::order);
        MessageSet(messages)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Message> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Message] {
        &self.0
    }

    pub fn first(&self) -> Option<&Message> {
        self.0.first()
    }

    pub fn last(&self) -> Option<&Message> {
        self.0.last()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|m| m.value)
    }

    pub fn filter(&self, keep: impl Fn(&Message) -> bool) -> MessageSet {
        MessageSet(self.0.iter().filter(|m| keep(m)).cloned().collect())
    }

    pub fn into_vec(self) -> Vec<Message> {
        self.0
    }
}

impl FromIterator<Message> for MessageSet {
    fn from_iter<I: IntoIterator<Item = Message>>(iter: I) -> Self {
        MessageSet::from_vec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a MessageSet {
    type Item = &'a Message;
    type IntoIter = std::slice::Iter<'a, Message>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_by_value_then_path() {
        let set = MessageSet::from_vec(vec![
            Message::new(1.0, Path::from_nodes(vec![2, 0])),
            Message::new(0.5, Path::from_nodes(vec![3, 0])),
            Message::new(1.0, Path::from_nodes(vec![1, 0])),
        ]);
        let sources: Vec<usize> = set.iter().map(Message::source).collect();
        assert_eq!(sources, vec![3, 1, 2]);
        assert_eq!(set.first().unwrap().destination(), 0);
    }
}
