//! Exact rank of integer matrices without leaving the integers.

use alloc::vec::Vec;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum RankError {
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("vector length {got} does not match {expected}")]
    Length { expected: usize, got: usize },
}

/// Rank of a row-major `rows × cols` matrix by fraction-free (Bareiss)
/// elimination. Every division is exact, so intermediate values are minors
/// of the input.
pub fn bareiss_rank(rows: usize, cols: usize, entries: &[i64]) -> Result<usize, RankError> {
    if entries.len() != rows * cols {
        return Err(RankError::Length {
            expected: rows * cols,
            got: entries.len(),
        });
    }
    let mut a: Vec<i128> = entries.iter().map(|&x| i128::from(x)).collect();
    let at = |r: usize, c: usize| r * cols + c;
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[at(r, col)] != 0) else {
            continue;
        };
        if p != rank {
            for c in 0..cols {
                a.swap(at(p, c), at(rank, c));
            }
        }
        let pivot = a[at(rank, col)];
        for r in rank + 1..rows {
            let factor = a[at(r, col)];
            for c in col..cols {
                let v = pivot
                    .checked_mul(a[at(r, c)])
                    .and_then(|x| x.checked_sub(factor.checked_mul(a[at(rank, c)])?))
                    .ok_or(RankError::Overflow)?;
                debug_assert_eq!(v % prev, 0);
                a[at(r, c)] = v / prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Rank of the matrix whose columns are `columns` (all of equal length).
pub fn column_rank(columns: &[&[i64]]) -> Result<usize, RankError> {
    let Some(first) = columns.first() else {
        return Ok(0);
    };
    let d = first.len();
    // transpose: rank is invariant, and rows = columns keeps the loop short
    let mut entries = Vec::with_capacity(d * columns.len());
    for c in columns {
        if c.len() != d {
            return Err(RankError::Length {
                expected: d,
                got: c.len(),
            });
        }
        entries.extend_from_slice(c);
    }
    bareiss_rank(columns.len(), d, &entries)
}

/// A stack of linearly independent integer vectors in echelon form, with
/// push/pop for depth-first subset enumeration.
///
/// Each stored vector is zero at the pivots of the vectors below it, and is
/// kept primitive (entries divided by their gcd).
#[derive(Clone, Debug)]
pub struct EchelonStack {
    dim: usize,
    vectors: Vec<i64>,
    pivots: Vec<usize>,
}

impl EchelonStack {
    pub fn new(dim: usize) -> Self {
        EchelonStack {
            dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn clear(&mut self) {
        self.vectors.clear();
        self.pivots.clear();
    }

    /// Reduces `v` against the stack in place. Returns `true` when `v`
    /// becomes zero, i.e. it lies in the span of the stack.
    pub fn reduce(&self, v: &mut [i64]) -> Result<bool, RankError> {
        if v.len() != self.dim {
            return Err(RankError::Length {
                expected: self.dim,
                got: v.len(),
            });
        }
        for (k, &p) in self.pivots.iter().enumerate() {
            let x = v[p];
            if x == 0 {
                continue;
            }
            let b = &self.vectors[k * self.dim..(k + 1) * self.dim];
            let bp = b[p];
            let g = x.gcd(&bp);
            let (sv, sb) = (bp / g, x / g);
            let mut content = 0i64;
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi = sv
                    .checked_mul(*vi)
                    .and_then(|y| y.checked_sub(sb.checked_mul(bi)?))
                    .ok_or(RankError::Overflow)?;
                content = content.gcd(vi);
            }
            if content == 0 {
                return Ok(true);
            }
            if content > 1 {
                v.iter_mut().for_each(|vi| *vi /= content);
            }
        }
        Ok(v.iter().all(|&x| x == 0))
    }

    /// Pushes a vector already reduced by [`EchelonStack::reduce`] to nonzero.
    pub fn push_reduced(&mut self, v: &[i64]) {
        let p = v
            .iter()
            .position(|&x| x != 0)
            .expect("push_reduced needs a nonzero vector");
        self.vectors.extend_from_slice(v);
        self.pivots.push(p);
    }

    /// Reduces and pushes; returns `false` (leaving the stack unchanged) if
    /// `v` is dependent on the stack.
    pub fn try_push(&mut self, v: &[i64]) -> Result<bool, RankError> {
        let mut w = v.to_vec();
        if self.reduce(&mut w)? {
            return Ok(false);
        }
        self.push_reduced(&w);
        Ok(true)
    }

    pub fn pop(&mut self) {
        if self.pivots.pop().is_some() {
            self.vectors.truncate(self.pivots.len() * self.dim);
        }
    }
}
