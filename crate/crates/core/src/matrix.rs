//! Column-compressed `{-1, 0, +1}` matrices.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry {value} at ({row}, {col}) is not in {{-1, 0, 1}}")]
    NotASign { row: usize, col: usize, value: i64 },
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("row index {row} out of range for {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("rows of a column must be strictly increasing")]
    UnsortedColumn,
}

/// A sparse sign matrix stored column by column. Zeros are not stored and
/// row indices within a column are strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignColumns {
    rows: usize,
    col_ptr: Vec<u32>,
    row_idx: Vec<u32>,
    signs: Vec<i8>,
}

impl SignColumns {
    pub fn new(rows: usize) -> Self {
        SignColumns {
            rows,
            col_ptr: vec![0],
            row_idx: Vec::new(),
            signs: Vec::new(),
        }
    }

    pub fn with_capacity(rows: usize, cols: usize, nnz: usize) -> Self {
        let mut col_ptr = Vec::with_capacity(cols + 1);
        col_ptr.push(0);
        SignColumns {
            rows,
            col_ptr,
            row_idx: Vec::with_capacity(nnz),
            signs: Vec::with_capacity(nnz),
        }
    }

    /// Appends a column given as `(row, ±1)` pairs in increasing row order.
    pub fn push_column<I>(&mut self, entries: I) -> Result<(), MatrixError>
    where
        I: IntoIterator<Item = (usize, i8)>,
    {
        let start = self.row_idx.len();
        let mut last: Option<usize> = None;
        for (row, s) in entries {
            let fail = |this: &mut Self, e| {
                this.row_idx.truncate(start);
                this.signs.truncate(start);
                Err(e)
            };
            if row >= self.rows {
                return fail(self, MatrixError::RowOutOfRange { row, rows: self.rows });
            }
            if last.is_some_and(|l| l >= row) {
                return fail(self, MatrixError::UnsortedColumn);
            }
            if s != 1 && s != -1 {
                let col = self.cols();
                return fail(self, MatrixError::NotASign { row, col, value: s.into() });
            }
            last = Some(row);
            self.row_idx.push(row as u32);
            self.signs.push(s);
        }
        self.col_ptr.push(self.row_idx.len() as u32);
        Ok(())
    }

    /// Builds from row-major dense entries.
    pub fn from_dense(rows: usize, cols: usize, entries: &[i64]) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let mut m = SignColumns::with_capacity(rows, cols, 0);
        for c in 0..cols {
            let mut col = Vec::new();
            for r in 0..rows {
                match entries[r * cols + c] {
                    0 => {}
                    v @ (1 | -1) => col.push((r, v as i8)),
                    value => return Err(MatrixError::NotASign { row: r, col: c, value }),
                }
            }
            m.push_column(col)?;
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.col_ptr.len() - 1
    }

    /// `(rows, signs)` of column `c`.
    #[inline]
    pub fn column(&self, c: usize) -> (&[u32], &[i8]) {
        let (a, b) = (self.col_ptr[c] as usize, self.col_ptr[c + 1] as usize);
        (&self.row_idx[a..b], &self.signs[a..b])
    }

    #[inline]
    pub fn weight(&self, c: usize) -> usize {
        (self.col_ptr[c + 1] - self.col_ptr[c]) as usize
    }

    pub fn entry(&self, r: usize, c: usize) -> i8 {
        let (rows, signs) = self.column(c);
        match rows.binary_search(&(r as u32)) {
            Ok(k) => signs[k],
            Err(_) => 0,
        }
    }

    /// Dense column `c`.
    pub fn dense_column(&self, c: usize) -> Vec<i8> {
        let mut v = vec![0i8; self.rows];
        let (rows, signs) = self.column(c);
        for (&r, &s) in rows.iter().zip(signs) {
            v[r as usize] = s;
        }
        v
    }

    /// Dense row-major entries.
    #[allow(clippy::needless_range_loop)]
    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        let mut out = vec![vec![0i8; self.cols()]; self.rows];
        for c in 0..self.cols() {
            let (rows, signs) = self.column(c);
            for (&r, &s) in rows.iter().zip(signs) {
                out[r as usize][c] = s;
            }
        }
        out
    }

    /// Columns `start..end` as a new matrix.
    pub fn slice_columns(&self, start: usize, end: usize) -> SignColumns {
        let mut m = SignColumns::with_capacity(self.rows, end - start, 0);
        for c in start..end {
            let (rows, signs) = self.column(c);
            m.row_idx.extend_from_slice(rows);
            m.signs.extend_from_slice(signs);
            m.col_ptr.push(m.row_idx.len() as u32);
        }
        m
    }

    /// Appends every column of `other`.
    pub fn extend(&mut self, other: &SignColumns) {
        debug_assert_eq!(self.rows, other.rows);
        for c in 0..other.cols() {
            let (rows, signs) = other.column(c);
            self.row_idx.extend_from_slice(rows);
            self.signs.extend_from_slice(signs);
            self.col_ptr.push(self.row_idx.len() as u32);
        }
    }

    /// Flips the sign of a stored entry; returns false if it is zero.
    pub fn negate_entry(&mut self, r: usize, c: usize) -> bool {
        let (a, b) = (self.col_ptr[c] as usize, self.col_ptr[c + 1] as usize);
        match self.row_idx[a..b].binary_search(&(r as u32)) {
            Ok(k) => {
                self.signs[a + k] = -self.signs[a + k];
                true
            }
            Err(_) => false,
        }
    }

    /// `M x` for a sparse `x` given as `(column, value)` pairs.
    pub fn apply_sparse(&self, x: &[(usize, i64)]) -> Vec<i64> {
        let mut out = vec![0i64; self.rows];
        for &(c, v) in x {
            let (rows, signs) = self.column(c);
            for (&r, &s) in rows.iter().zip(signs) {
                out[r as usize] += i64::from(s) * v;
            }
        }
        out
    }
}

/// A dense copy of one column used to take many inner products against it.
pub struct Scatter {
    buf: Vec<i8>,
    touched: Vec<u32>,
}

impl Scatter {
    pub fn new(rows: usize) -> Self {
        Scatter {
            buf: vec![0; rows],
            touched: Vec::new(),
        }
    }

    pub fn load(&mut self, m: &SignColumns, c: usize) {
        for &r in &self.touched {
            self.buf[r as usize] = 0;
        }
        self.touched.clear();
        let (rows, signs) = m.column(c);
        for (&r, &s) in rows.iter().zip(signs) {
            self.buf[r as usize] = s;
            self.touched.push(r);
        }
    }

    /// Inner product of the loaded column with column `c` of `m`.
    #[inline]
    pub fn dot(&self, m: &SignColumns, c: usize) -> i64 {
        let (rows, signs) = m.column(c);
        rows.iter()
            .zip(signs)
            .map(|(&r, &s)| i32::from(self.buf[r as usize]) * i32::from(s))
            .sum::<i32>() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_round_trip_and_products() {
        let dense = [1, 0, -1, 0, 1, 1];
        let m = SignColumns::from_dense(2, 3, &dense).unwrap();
        assert_eq!(m.cols(), 3);
        assert_eq!(m.to_dense(), [[1, 0, -1], [0, 1, 1]]);
        assert_eq!(m.weight(2), 2);
        assert_eq!(m.entry(0, 2), -1);
        assert_eq!(m.apply_sparse(&[(0, 1), (2, 1)]), [0, 1]);
        let mut s = Scatter::new(2);
        s.load(&m, 2);
        assert_eq!(s.dot(&m, 0), -1);
        assert_eq!(s.dot(&m, 1), 1);
        s.load(&m, 1);
        assert_eq!(s.dot(&m, 0), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SignColumns::from_dense(1, 2, &[1, 2]),
            Err(MatrixError::NotASign { value: 2, .. })
        ));
        assert!(matches!(
            SignColumns::from_dense(1, 2, &[1]),
            Err(MatrixError::Shape { .. })
        ));
        let mut m = SignColumns::new(3);
        assert_eq!(m.push_column([(2, 1), (1, 1)]), Err(MatrixError::UnsortedColumn));
        assert_eq!(m.push_column([(3, 1)]), Err(MatrixError::RowOutOfRange { row: 3, rows: 3 }));
        assert_eq!(m.cols(), 0);
        m.push_column([(0, 1), (2, -1)]).unwrap();
        assert!(m.negate_entry(2, 0));
        assert!(!m.negate_entry(1, 0));
        assert_eq!(m.dense_column(0), [1, 0, 1]);
    }
}
