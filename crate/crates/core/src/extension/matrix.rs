use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Result, SplineError};

/// Sparse map from conventional (non-exterior) basis functions to the stable
/// extended ones: `B^e_c = Σ_r E[r, c] B_r`.
///
/// Rows and columns are labelled by global basis indices; entries are
/// addressed by position.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionMatrix {
    basis_count: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: Vec<(usize, usize, f64)>,
}

impl ExtensionMatrix {
    /// Builds from `(row, col, value)` triples in global indices. Duplicate
    /// triples are summed; rows and columns must be strictly increasing.
    pub fn from_global(
        basis_count: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        triples: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i < basis_count);
        if !increasing(&rows) || !increasing(&cols) {
            return Err(SplineError::DimensionMismatch("extension matrix labels must be increasing basis indices".into()));
        }
        let row_pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let col_pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut acc: HashMap<(usize, usize), f64> = HashMap::new();
        for (r, c, v) in triples {
            let (Some(&rp), Some(&cp)) = (row_pos.get(&r), col_pos.get(&c)) else {
                return Err(SplineError::DimensionMismatch(format!("entry ({r}, {c}) outside the extension matrix")));
            };
            *acc.entry((rp, cp)).or_insert(0.0) += v;
        }
        let mut entries: Vec<_> = acc.into_iter().map(|((r, c), v)| (r, c, v)).collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        Ok(Self { basis_count, rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            basis_count: n,
            rows: (0..n).collect(),
            cols: (0..n).collect(),
            entries: (0..n).map(|i| (i, i, 1.0)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Size of the full conventional basis the labels refer to.
    pub fn basis_count(&self) -> usize {
        self.basis_count
    }

    /// Global indices of the non-exterior functions.
    pub fn row_indices(&self) -> &[usize] {
        &self.rows
    }

    /// Global indices of the stable functions.
    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    /// Non-zero pattern as `(row position, column position, value)`.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Entry for global row `r` and global column `c` (zero if absent).
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (Ok(rp), Ok(cp)) = (self.rows.binary_search(&r), self.cols.binary_search(&c)) else {
            return 0.0;
        };
        match self.entries.binary_search_by_key(&(rp, cp), |&(a, b, _)| (a, b)) {
            Ok(k) => self.entries[k].2,
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols());
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Coordinate format, one `row col value` triple per line with 17
    /// significant digits; indices are matrix positions.
    pub fn to_coo(&self) -> String {
        let mut out = String::new();
        for &(r, c, v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {v:.16e}");
        }
        out
    }

    /// `values^T E` for a vector of all `basis_count` conventional values.
    pub fn apply_to_global(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ncols()];
        for &(r, c, v) in &self.entries {
            out[c] += values[self.rows[r]] * v;
        }
        out
    }

    /// Kronecker product for tensor-product bases; the global index of
    /// `(i, j)` is `i * other.basis_count + j`.
    pub fn kron(&self, other: &Self) -> Self {
        let m = other.basis_count;
        let label = |a: &[usize], b: &[usize]| -> Vec<usize> {
            a.iter().flat_map(|&i| b.iter().map(move |&j| i * m + j)).collect()
        };
        let (nr2, nc2) = (other.nrows(), other.ncols());
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &other.entries {
                entries.push((r1 * nr2 + r2, c1 * nc2 + c2, v1 * v2));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        Self {
            basis_count: self.basis_count * m,
            rows: label(&self.rows, &other.rows),
            cols: label(&self.cols, &other.cols),
            entries,
        }
    }
}
