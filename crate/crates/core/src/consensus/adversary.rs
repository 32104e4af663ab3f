use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditions::Partition;
use crate::graph::NodeSet;
use crate::messaging::Message;

/// What the adversary sees when rewriting a round's messages.
#[derive(Debug, Clone, Copy)]
pub struct RoundContext<'a> {
    pub round: usize,
    pub faulty: NodeSet,
    /// States at the start of the round, indexed by node id.
    pub states: &'a [f64],
    /// Smallest and largest fault-free initial state.
    pub mu0: f64,
    pub u0: f64,
}

/// A Byzantine strategy. The engine offers it every message bound for a
/// fault-free node, in receiver order then `(value, path)` order.
///
/// Only messages whose path meets a faulty node may be changed or withheld;
/// for any other message the original value must come back, or the run
/// aborts with a contract violation.
pub trait Adversary {
    /// Delivered value, or `None` to withhold the message.
    fn deliver(&mut self, msg: &Message, ctx: &RoundContext<'_>) -> Option<f64>;
}

/// Destination labels for the split attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitLabels {
    pub left: NodeSet,
    pub right: NodeSet,
    /// Value pushed toward `left`; defaults to `mu0 - 1`.
    pub mu_minus: Option<f64>,
    /// Value pushed toward `right`; defaults to `u0 + 1`.
    pub u_plus: Option<f64>,
}

impl SplitLabels {
    /// Labels taken from a violating partition.
    pub fn from_partition(p: &Partition) -> Self {
        SplitLabels { left: p.l, right: p.r, mu_minus: None, u_plus: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryStrategy {
    /// Faulty nodes relay and report faithfully.
    Honest,
    /// Every touchable message becomes `mu_minus` toward `left`, `u_plus`
    /// toward `right`, and the midpoint of the initial range otherwise.
    Split(SplitLabels),
    /// Every touchable message becomes `value`.
    Constant { value: f64 },
    /// Every touchable message becomes a uniform draw from `[low, high]`.
    Random { low: f64, high: f64 },
    /// Every touchable message is withheld.
    Silent,
}

impl AdversaryStrategy {
    pub fn kind(&self) -> &'static str {
        match self {
            AdversaryStrategy::Honest => "honest",
            AdversaryStrategy::Split(_) => "split",
            AdversaryStrategy::Constant { .. } => "constant",
            AdversaryStrategy::Random { .. } => "random",
            AdversaryStrategy::Silent => "silent",
        }
    }
}

struct Honest;

impl Adversary for Honest {
    fn deliver(&mut self, msg: &Message, _: &RoundContext<'_>) -> Option<f64> {
        Some(msg.value)
    }
}

struct Split(SplitLabels);

impl Adversary for Split {
    fn deliver(&mut self, msg: &Message, ctx: &RoundContext<'_>) -> Option<f64> {
        if !msg.touches(ctx.faulty) {
            return Some(msg.value);
        }
        let dst = msg.destination();
        let value = if self.0.left.contains(dst) {
            self.0.mu_minus.unwrap_or(ctx.mu0 - 1.0)
        } else if self.0.right.contains(dst) {
            self.0.u_plus.unwrap_or(ctx.u0 + 1.0)
        } else {
            (ctx.mu0 + ctx.u0) / 2.0
        };
        Some(value)
    }
}

struct Constant(f64);

impl Adversary for Constant {
    fn deliver(&mut self, msg: &Message, ctx: &RoundContext<'_>) -> Option<f64> {
        Some(if msg.touches(ctx.faulty) { self.0 } else { msg.value })
    }
}

struct Random {
    low: f64,
    high: f64,
    rng: ChaCha8Rng,
}

impl Adversary for Random {
    fn deliver(&mut self, msg: &Message, ctx: &RoundContext<'_>) -> Option<f64> {
        if !msg.touches(ctx.faulty) {
            return Some(msg.value);
        }
        if self.low == self.high {
            return Some(self.low);
        }
        Some(self.rng.random_range(self.low..=self.high))
    }
}

struct Silent;

impl Adversary for Silent {
    fn deliver(&mut self, msg: &Message, ctx: &RoundContext<'_>) -> Option<f64> {
        (!msg.touches(ctx.faulty)).then_some(msg.value)
    }
}

/// Instantiates a strategy; `seed` feeds the random one.
pub fn build_adversary(strategy: &AdversaryStrategy, seed: u64) -> Box<dyn Adversary> {
    match *strategy {
        AdversaryStrategy::Honest => Box::new(Honest),
        AdversaryStrategy::Split(labels) => Box::new(Split(labels)),
        AdversaryStrategy::Constant { value } => Box::new(Constant(value)),
        AdversaryStrategy::Random { low, high } => Box::new(Random { low, high, rng: ChaCha8Rng::seed_from_u64(seed) }),
        AdversaryStrategy::Silent => Box::new(Silent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Path;

    fn msg(value: f64, labels: &[usize]) -> Message {
        Message::new(value, Path::from_labels(labels).unwrap())
    }

    fn ctx(states: &[f64]) -> RoundContext<'_> {
        RoundContext { round: 1, faulty: NodeSet::singleton(4), states, mu0: 0.0, u0: 1.0 }
    }

    #[test]
    fn split_follows_destination() {
        let labels = SplitLabels {
            left: [0, 3].into_iter().collect(),
            right: [1, 2].into_iter().collect(),
            mu_minus: Some(-1.0),
            u_plus: Some(2.0),
        };
        let mut adv = build_adversary(&AdversaryStrategy::Split(labels), 0);
        let states = [0.0; 5];
        let c = ctx(&states);
        assert_eq!(adv.deliver(&msg(0.5, &[5, 1]), &c), Some(-1.0));
        assert_eq!(adv.deliver(&msg(1.0, &[3, 5, 4]), &c), Some(-1.0));
        assert_eq!(adv.deliver(&msg(0.5, &[5, 2]), &c), Some(2.0));
        assert_eq!(adv.deliver(&msg(1.0, &[2, 1]), &c), Some(1.0));
    }

    #[test]
    fn untouchable_messages_pass_through() {
        let states = [0.0; 5];
        let c = ctx(&states);
        let m = msg(0.25, &[2, 1]);
        for s in [
            AdversaryStrategy::Honest,
            AdversaryStrategy::Constant { value: 9.0 },
            AdversaryStrategy::Random { low: -3.0, high: 3.0 },
            AdversaryStrategy::Silent,
        ] {
            assert_eq!(build_adversary(&s, 1).deliver(&m, &c), Some(0.25), "{}", s.kind());
        }
        assert_eq!(build_adversary(&AdversaryStrategy::Silent, 1).deliver(&msg(0.25, &[5, 1]), &c), None);
    }

    #[test]
    fn random_is_seeded() {
        let states = [0.0; 5];
        let c = ctx(&states);
        let s = AdversaryStrategy::Random { low: -3.0, high: 3.0 };
        let draw = |seed| {
            let mut adv = build_adversary(&s, seed);
            (0..5).map(|_| adv.deliver(&msg(0.0, &[5, 1]), &c).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
        assert!(draw(3).iter().all(|v| (-3.0..=3.0).contains(v)));
    }
}
