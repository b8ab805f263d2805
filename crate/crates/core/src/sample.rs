//! Dense row-major sample matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n × d` matrix of finite reals, one row per example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Sample {
    /// Builds a sample from row-major data. Rejects NaN and infinities.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::Config("sample must have at least one column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(1);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Ragged {
                    row: i,
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// A single-column sample.
    pub fn from_column(values: Vec<f64>) -> Result<Self> {
        Self::new(values.len(), 1, values)
    }

    /// Side-by-side concatenation of two single-column samples.
    pub fn from_columns(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::UnequalSizes {
                left: a.len(),
                right: b.len(),
            });
        }
        let data = a.iter().zip(b).flat_map(|(&x, &y)| [x, y]).collect();
        Self::new(a.len(), 2, data)
    }

    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn dim(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// New sample made of the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Sample {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Sample {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// The same rows with columns reordered (`order[k]` is the source column of column `k`).
    pub fn permute_columns(&self, order: &[usize]) -> Result<Sample> {
        if order.len() != self.cols || order.iter().any(|&c| c >= self.cols) {
            return Err(Error::Config("invalid column order".into()));
        }
        let data = self.rows().flat_map(|r| order.iter().map(move |&c| r[c])).collect();
        Ok(Sample {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Sample) -> Result<Sample> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Ok(Sample {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }
}
