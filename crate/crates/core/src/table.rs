use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the row sums of a conditional table.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Row-stochastic matrix: row `r` holds a pmf over `cols` outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalTable {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ConditionalTable {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "conditional table must be non-empty, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                path: "conditional table".into(),
                expected: rows * cols,
                found: data.len(),
            });
        }
        for (r, row) in data.chunks_exact(cols).enumerate() {
            if let Some(&bad) = row.iter().find(|p| !(**p >= 0.0)) {
                return Err(Error::InvalidPmf(format!("row {r} has entry {bad}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidPmf(format!("row {r} sums to {sum}")));
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![1.0 / cols as f64; rows * cols])
    }

    /// Every row a point mass at `pick(row)`.
    pub fn deterministic(rows: usize, cols: usize, pick: impl Fn(usize) -> usize) -> Self {
        let mut data = vec![0.0; rows * cols];
        for r in 0..rows {
            data[r * cols + pick(r)] = 1.0;
        }
        Self::from_raw(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Nested row view, handy for serialization.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks_exact(self.cols).map(<[f64]>::to_vec).collect()
    }
}
