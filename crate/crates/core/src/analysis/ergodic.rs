use super::checks::Check;
use super::matrix::{delta_coefficient, lambda_coefficient, MatrixError, WeightMatrix};
use super::TOLERANCE;
use crate::consensus::SimulationTrace;

/// Spread, and cumulative delta, that count as having contracted.
pub const DECAY_THRESHOLD: f64 = 1e-6;

/// Delta of the product of the first `t` matrices against the product of
/// their lambdas.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixCheck {
    pub t: usize,
    pub delta: f64,
    pub lambda: f64,
    pub cumulative_delta: f64,
    pub lambda_product: f64,
    /// `lambda_product - cumulative_delta`; negative beyond tolerance is a
    /// violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowCheck {
    pub start: usize,
    pub end: usize,
    pub positive_column: bool,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCheck {
    /// First round whose fault-free spread is at most `DECAY_THRESHOLD`.
    pub round: usize,
    pub cumulative_delta: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicReport {
    pub prefixes: Vec<PrefixCheck>,
    pub product_bound: Check,
    /// `None` when the spread never fell below the threshold.
    pub decay: Option<DecayCheck>,
    pub window: usize,
    pub windows: Vec<WindowCheck>,
    /// Every window product with a positive column is scrambling.
    pub scrambling: Check,
}

impl ErgodicReport {
    pub fn passed(&self) -> bool {
        self.product_bound.pass && self.scrambling.pass && self.decay.as_ref().is_none_or(|d| d.pass)
    }
}

/// Walks the products `M[t] ... M[1]`, checking at every prefix that their
/// delta stays below the product of the individual lambdas, and that each
/// block of `window` consecutive rounds with a positive column is
/// scrambling.
pub fn verify_ergodic_decay(matrices: &[WeightMatrix], trace: &SimulationTrace, window: usize) -> Result<ErgodicReport, MatrixError> {
    let window = window.max(1);
    let mut prefixes = Vec::with_capacity(matrices.len());
    let mut product_bound = Check::ok();
    let Some(first) = matrices.first() else {
        return Ok(ErgodicReport { prefixes, product_bound, decay: None, window, windows: Vec::new(), scrambling: Check::ok() });
    };
    let mut product = WeightMatrix::identity(0, first.nodes.clone());
    let mut lambda_product = 1.0;
    for m in matrices {
        let (delta, lambda) = (delta_coefficient(m)?, lambda_coefficient(m)?);
        product = m.product(&product);
        lambda_product *= lambda;
        let cumulative_delta = delta_coefficient(&product)?;
        let margin = lambda_product - cumulative_delta;
        if margin < -TOLERANCE && product_bound.pass {
            product_bound = Check::fail(format!("prefix {}: delta {cumulative_delta} exceeds lambda product {lambda_product}", m.t));
        }
        prefixes.push(PrefixCheck { t: m.t, delta, lambda, cumulative_delta, lambda_product, margin });
    }

    let decay = (1..trace.states.len()).find(|&t| trace.spread(t) <= DECAY_THRESHOLD).and_then(|round| {
        prefixes.iter().find(|p| p.t == round).map(|p| DecayCheck {
            round,
            cumulative_delta: p.cumulative_delta,
            pass: p.cumulative_delta <= DECAY_THRESHOLD,
        })
    });

    let mut windows = Vec::new();
    let mut scrambling = Check::ok();
    for block in matrices.chunks_exact(window) {
        let q = block.iter().skip(1).fold(block[0].clone(), |acc, m| m.product(&acc));
        let lambda = lambda_coefficient(&q)?;
        let positive_column = q.positive_column().is_some();
        let (start, end) = (block[0].t, block[block.len() - 1].t);
        if positive_column && lambda >= 1.0 && scrambling.pass {
            scrambling = Check::fail(format!("rounds {start}..={end}: positive column but lambda = {lambda}"));
        }
        windows.push(WindowCheck { start, end, positive_column, lambda });
    }
    Ok(ErgodicReport { prefixes, product_bound, decay, window, windows, scrambling })
}
