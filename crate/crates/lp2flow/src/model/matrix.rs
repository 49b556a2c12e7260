use num_traits::{Signed, Zero};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

/// Sparse integer matrix stored as row-major sorted triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, Int)>,
    row_ptr: Vec<usize>,
}

impl SparseIntMatrix {
    /// Builds a matrix from triples in any order; duplicates, zeros and
    /// out-of-range positions are rejected.
    pub fn from_triples(rows: usize, cols: usize, mut triples: Vec<(u32, u32, Int)>) -> Result<Self> {
        triples.sort_by_key(|t| (t.0, t.1));
        for w in triples.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::format(format!(
                    "duplicate matrix entry ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        for (r, c, v) in &triples {
            if *r as usize >= rows || *c as usize >= cols {
                return Err(Error::format(format!("matrix entry ({r}, {c}) outside {rows}x{cols}")));
            }
            if v.is_zero() {
                return Err(Error::format(format!("stored zero at ({r}, {c})")));
            }
        }
        Ok(Self::from_sorted_unchecked(rows, cols, triples))
    }

    /// Builds from triples already sorted by (row, col), without zeros.
    pub(crate) fn from_sorted_unchecked(rows: usize, cols: usize, entries: Vec<(u32, u32, Int)>) -> Self {
        let mut row_ptr = vec![0usize; rows + 1];
        for (r, _, _) in &entries {
            row_ptr[*r as usize + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseIntMatrix {
            rows,
            cols,
            entries,
            row_ptr,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                if *v != 0 {
                    t.push((i as u32, j as u32, Int::from(*v)));
                }
            }
        }
        Self::from_sorted_unchecked(m, n, t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, Int)] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[(u32, u32, Int)] {
        &self.entries[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        let row = self.row(i);
        match row.binary_search_by(|e| (e.1 as usize).cmp(&j)) {
            Ok(k) => row[k].2.clone(),
            Err(_) => Int::zero(),
        }
    }

    pub fn max_abs(&self) -> Int {
        self.entries.iter().map(|e| e.2.abs()).max().unwrap_or_else(Int::zero)
    }

    pub fn row_dot(&self, i: usize, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (_, j, v) in self.row(i) {
            if !x[*j as usize].is_zero() {
                acc += &x[*j as usize] * Rat::from_integer(v.clone());
            }
        }
        acc
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        (0..self.rows).map(|i| self.row_dot(i, x)).collect()
    }

    /// Number of nonzero entries in each column.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.cols];
        for (_, j, _) in &self.entries {
            counts[*j as usize] += 1;
        }
        counts
    }

    pub fn to_dense_i64(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (i, j, v) in &self.entries {
            out[*i as usize][*j as usize] = i64::try_from(v).ok()?;
        }
        Some(out)
    }
}
