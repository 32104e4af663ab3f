use thiserror::Error;

use super::TOLERANCE;

/// Square weight matrix over the fault-free nodes, rows and columns in
/// ascending node order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    /// Round the matrix describes; for products, the latest round.
    pub t: usize,
    /// Node id of each row and column.
    pub nodes: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("row {row} sums to {sum}")]
    RowSum { row: usize, sum: f64 },
    #[error("entry ({row}, {col}) is {value}")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("matrix is not square")]
    Shape,
}

impl WeightMatrix {
    pub fn new(t: usize, nodes: Vec<usize>, rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        if rows.len() != nodes.len() || rows.iter().any(|r| r.len() != nodes.len()) {
            return Err(MatrixError::Shape);
        }
        Ok(WeightMatrix { t, nodes, rows })
    }

    pub fn identity(t: usize, nodes: Vec<usize>) -> Self {
        let k = nodes.len();
        let rows = (0..k).map(|r| (0..k).map(|c| if r == c { 1.0 } else { 0.0 }).collect()).collect();
        WeightMatrix { t, nodes, rows }
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.rows[row][col]
    }

    pub fn index_of(&self, node: usize) -> Option<usize> {
        self.nodes.iter().position(|&v| v == node)
    }

    /// Checks nonnegativity and unit row sums within `TOLERANCE`.
    pub fn check_stochastic(&self) -> Result<(), MatrixError> {
        for (row, r) in self.rows.iter().enumerate() {
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, v)| **v < 0.0 || !v.is_finite()) {
                return Err(MatrixError::Negative { row, col, value });
            }
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > TOLERANCE {
                return Err(MatrixError::RowSum { row, sum });
            }
        }
        Ok(())
    }

    /// `self * rhs`, tagged with `self.t`.
    pub fn product(&self, rhs: &WeightMatrix) -> WeightMatrix {
        let k = self.size();
        assert_eq!(k, rhs.size(), "matrix sizes differ");
        let rows = self.rows.iter().map(|r| (0..k).map(|c| r.iter().zip(&rhs.rows).map(|(a, b)| a * b[c]).sum()).collect()).collect();
        WeightMatrix { t: self.t, nodes: self.nodes.clone(), rows }
    }

    /// `self * v` for a vector indexed like the rows.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Index of a column with every entry strictly positive.
    pub fn positive_column(&self) -> Option<usize> {
        (0..self.size()).find(|&c| self.rows.iter().all(|r| r[c] > 0.0))
    }
}

/// Largest difference between two rows in any single column.
pub fn delta_coefficient(a: &WeightMatrix) -> Result<f64, MatrixError> {
    a.check_stochastic()?;
    let mut best = 0.0f64;
    for c in 0..a.size() {
        let (lo, hi) = a.rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[c]), hi.max(r[c])));
        best = best.max(hi - lo);
    }
    Ok(best.clamp(0.0, 1.0))
}

/// One minus the smallest overlap `sum_j min(a_xj, a_yj)` over row pairs.
pub fn lambda_coefficient(a: &WeightMatrix) -> Result<f64, MatrixError> {
    a.check_stochastic()?;
    let mut overlap = f64::INFINITY;
    for (x, rx) in a.rows.iter().enumerate() {
        for ry in &a.rows[x..] {
            overlap = overlap.min(rx.iter().zip(ry).map(|(p, q)| p.min(*q)).sum());
        }
    }
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<f64>>) -> WeightMatrix {
        let nodes = (0..rows.len()).collect();
        WeightMatrix::new(1, nodes, rows).unwrap()
    }

    #[test]
    fn coefficients_on_simple_matrices() {
        let id = WeightMatrix::identity(0, vec![0, 1]);
        assert_eq!((delta_coefficient(&id).unwrap(), lambda_coefficient(&id).unwrap()), (1.0, 1.0));
        let same = m(vec![vec![0.25, 0.75]; 3].into_iter().map(|r| [r, vec![0.0]].concat()).collect());
        assert_eq!((delta_coefficient(&same).unwrap(), lambda_coefficient(&same).unwrap()), (0.0, 0.0));
        let uniform = m(vec![vec![0.25; 4]; 4]);
        assert_eq!(lambda_coefficient(&uniform).unwrap(), 0.0);
        let half = m(vec![vec![0.5, 0.5], vec![0.0, 1.0]]);
        assert_eq!(delta_coefficient(&half).unwrap(), 0.5);
        assert_eq!(lambda_coefficient(&half).unwrap(), 0.5);
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(matches!(delta_coefficient(&m(vec![vec![0.5, 0.4], vec![0.0, 1.0]])), Err(MatrixError::RowSum { row: 0, .. })));
        assert!(matches!(lambda_coefficient(&m(vec![vec![1.5, -0.5], vec![0.0, 1.0]])), Err(MatrixError::Negative { row: 0, col: 1, .. })));
        assert_eq!(WeightMatrix::new(0, vec![0, 1], vec![vec![1.0]]), Err(MatrixError::Shape));
    }

    #[test]
    fn product_and_apply() {
        let a = m(vec![vec![0.5, 0.5], vec![0.0, 1.0]]);
        let p = a.product(&a);
        assert_eq!(p.rows(), &[vec![0.25, 0.75], vec![0.0, 1.0]]);
        assert_eq!(a.apply(&[0.0, 1.0]), vec![0.5, 1.0]);
        assert_eq!(p.positive_column(), Some(1));
        assert_eq!(WeightMatrix::identity(0, vec![0, 1]).positive_column(), None);
    }
}
