//! Size-major, lexicographic search for the smallest linearly dependent set
//! of columns.
//!
//! Subsets of size `k` are split into chunks by their first column. Within a
//! chunk a depth-first walk keeps an [`EchelonStack`] of the current prefix,
//! so testing one more column costs one reduction. The first dependent subset
//! of the lowest chunk is the lexicographically least one of size `k`, which
//! lets a parallel driver process chunks in any order and still report the
//! same witness.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::SignColumns;
use crate::rank::{EchelonStack, RankError};

/// Default cap on the number of subsets a search may enumerate.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Dense integer columns shared read-only by every search worker.
#[derive(Clone, Debug)]
pub struct ColumnSet {
    dim: usize,
    data: Vec<i64>,
}

impl ColumnSet {
    pub fn from_sign_columns(m: &SignColumns) -> Self {
        let dim = m.rows();
        let mut data = vec![0i64; dim * m.cols()];
        for c in 0..m.cols() {
            let (rows, signs) = m.column(c);
            for (&r, &s) in rows.iter().zip(signs) {
                data[c * dim + r as usize] = i64::from(s);
            }
        }
        ColumnSet { dim, data }
    }

    pub fn from_columns(dim: usize, columns: &[Vec<i64>]) -> Self {
        let mut data = Vec::with_capacity(dim * columns.len());
        for c in columns {
            assert_eq!(c.len(), dim, "column length");
            data.extend_from_slice(c);
        }
        ColumnSet { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, c: usize) -> &[i64] {
        &self.data[c * self.dim..(c + 1) * self.dim]
    }

    /// Number of chunks (first-column choices) at subset size `k`.
    pub fn chunk_count(&self, k: usize) -> usize {
        if k == 0 || k > self.len() {
            0
        } else {
            self.len() - k + 1
        }
    }

    /// Lexicographically least dependent `k`-subset whose smallest column is
    /// `first`. `keep_going` is polled between candidates; returning `false`
    /// abandons the chunk with `Ok(None)`.
    pub fn search_chunk(
        &self,
        k: usize,
        first: usize,
        keep_going: &mut dyn FnMut() -> bool,
    ) -> Result<Option<Vec<usize>>, RankError> {
        let n = self.len();
        if k == 0 || first + k > n {
            return Ok(None);
        }
        let mut walk = Walk {
            cols: self,
            k,
            stack: EchelonStack::new(self.dim),
            chosen: Vec::with_capacity(k),
            scratch: vec![0; self.dim],
            polls: 0,
        };
        if walk.dependent(first)? {
            return Ok(Some((first..first + k).collect()));
        }
        if k == 1 {
            return Ok(None);
        }
        walk.push(first);
        walk.descend(first + 1, keep_going)
    }
}

struct Walk<'a> {
    cols: &'a ColumnSet,
    k: usize,
    stack: EchelonStack,
    chosen: Vec<usize>,
    scratch: Vec<i64>,
    polls: u32,
}

impl Walk<'_> {
    fn dependent(&mut self, c: usize) -> Result<bool, RankError> {
        self.scratch.copy_from_slice(self.cols.column(c));
        self.stack.reduce(&mut self.scratch)
    }

    /// Pushes `c`, whose reduction is still in `scratch`.
    fn push(&mut self, c: usize) {
        self.stack.push_reduced(&self.scratch);
        self.chosen.push(c);
    }

    fn pop(&mut self) {
        self.stack.pop();
        self.chosen.pop();
    }

    fn descend(
        &mut self,
        start: usize,
        keep_going: &mut dyn FnMut() -> bool,
    ) -> Result<Option<Vec<usize>>, RankError> {
        let depth = self.chosen.len();
        let remaining = self.k - depth;
        let n = self.cols.len();
        for c in start..=n - remaining {
            self.polls = self.polls.wrapping_add(1);
            if self.polls.is_multiple_of(1024) && !keep_going() {
                return Ok(None);
            }
            if self.dependent(c)? {
                let mut hit = self.chosen.clone();
                hit.extend(c..c + remaining);
                return Ok(Some(hit));
            }
            if remaining > 1 {
                self.push(c);
                let found = self.descend(c + 1, keep_going)?;
                self.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }
}

/// Result of a size-by-size search up to some `k_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceOutcome {
    /// Largest size whose subsets were all examined (or that held the hit).
    pub k_checked: usize,
    /// Smallest, lexicographically least dependent subset, if one was found.
    pub witness: Option<Vec<usize>>,
    /// `C(n, k)` for each size level that was entered.
    pub level_sizes: Vec<(usize, u128)>,
    /// A level was skipped because its subset count exceeded the remaining budget.
    pub budget_exhausted: bool,
}

impl BruteForceOutcome {
    /// The spark, when the search found a dependent set.
    pub fn spark(&self) -> Option<usize> {
        self.witness.as_ref().map(Vec::len)
    }

    /// Subsets in the levels that were searched to completion.
    pub fn exhausted_subsets(&self) -> u128 {
        let full = if self.witness.is_some() {
            self.level_sizes.len().saturating_sub(1)
        } else {
            self.level_sizes.len()
        };
        self.level_sizes[..full].iter().map(|&(_, s)| s).sum()
    }
}

/// Plans the levels `1..=k_max` against `budget`: a level is admitted only
/// if its whole subset count fits in what is left.
pub fn plan_levels(n: usize, k_max: usize, budget: u128) -> (Vec<(usize, u128)>, bool) {
    let mut used: u128 = 0;
    let mut levels = Vec::new();
    for k in 1..=k_max.min(n) {
        let size = binomial(n, k);
        if used.saturating_add(size) > budget {
            return (levels, true);
        }
        used += size;
        levels.push((k, size));
    }
    (levels, false)
}

/// Single-threaded search over sizes `1..=k_max`.
pub fn spark_bruteforce_sequential(
    cols: &ColumnSet,
    k_max: usize,
    budget: u128,
) -> Result<BruteForceOutcome, RankError> {
    let (planned, budget_exhausted) = plan_levels(cols.len(), k_max, budget);
    let mut level_sizes = Vec::new();
    for &(k, size) in &planned {
        level_sizes.push((k, size));
        for first in 0..cols.chunk_count(k) {
            if let Some(hit) = cols.search_chunk(k, first, &mut || true)? {
                return Ok(BruteForceOutcome {
                    k_checked: k,
                    witness: Some(hit),
                    level_sizes,
                    budget_exhausted: false,
                });
            }
        }
    }
    Ok(BruteForceOutcome {
        k_checked: level_sizes.last().map_or(0, |l| l.0),
        witness: None,
        level_sizes,
        budget_exhausted,
    })
}
