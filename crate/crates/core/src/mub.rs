//! Mutually unbiased bases of `R^{q^2}` obtained by embedding the columns of
//! the permuted Hadamard matrix into the blocks of the (q+1, q)-net.
//!
//! Everything is kept in scaled-integer form: a basis is `M / sqrt(q)` with
//! `M` a sign matrix carrying `q` nonzeros per column.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::designs::{build_net, IncidenceNet, NetLabel};
use crate::gf::{Field, FieldElement};
use crate::hadamard::{permuted_hadamard, HadamardError, SignMatrix};
use crate::matrix::{Scatter, SignColumns};
use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MubError {
    #[error("vector of length {got} cannot be embedded into a net of order {q}")]
    LengthMismatch { got: usize, q: usize },
    #[error("bases disagree on dimension or scale ({0})")]
    Incompatible(&'static str),
    #[error(transparent)]
    Hadamard(#[from] HadamardError),
}

/// `h ↑ m_{b,j}`: coordinate `k` of `h` is placed at the `k`-th support
/// position of the incidence vector. The result has length `q^2`.
pub fn embed(
    h: &[i8],
    net: &IncidenceNet,
    label: NetLabel,
    j: FieldElement,
) -> Result<Vec<i8>, MubError> {
    let q = net.q();
    if h.len() != q {
        return Err(MubError::LengthMismatch { got: h.len(), q });
    }
    let mut out = vec![0i8; q * q];
    for (&pos, &hk) in net.support(label, j).iter().zip(h) {
        out[pos as usize] = hk;
    }
    Ok(out)
}

/// One orthonormal basis `B_b = M / sqrt(scale_sq)` of dimension `q^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledBasis {
    pub label: NetLabel,
    pub scale_sq: u64,
    /// Columns in `(u, v)` order: `u` outer, `v` inner.
    pub columns: SignColumns,
}

impl ScaledBasis {
    pub fn dimension(&self) -> usize {
        self.columns.rows()
    }
}

/// Column `(u, v)` is `h_v ↑ m_{b,u}` where `h_v` is column `v` of `h`.
pub fn build_basis(field: &Field, net: &IncidenceNet, h: &SignMatrix, label: NetLabel) -> ScaledBasis {
    let q = field.order();
    debug_assert_eq!(net.q(), q);
    debug_assert_eq!(h.order(), q);
    let mut columns = SignColumns::with_capacity(q * q, q * q, q * q * q);
    for u in field.elements() {
        let support = net.support(label, u);
        for v in 0..q {
            columns
                .push_column(
                    support
                        .iter()
                        .enumerate()
                        .map(|(k, &pos)| (pos as usize, h.entry(k, v))),
                )
                .expect("net supports are sorted and in range");
        }
    }
    ScaledBasis {
        label,
        scale_sq: q as u64,
        columns,
    }
}

/// The full set of `q + 1` bases over `field` with its building blocks.
#[derive(Clone, Debug)]
pub struct MubFamily {
    pub net: IncidenceNet,
    pub hadamard: SignMatrix,
    pub bases: Vec<ScaledBasis>,
}

pub fn build_family(field: &Field) -> Result<MubFamily, MubError> {
    let net = build_net(field);
    let hadamard = permuted_hadamard(field.degree())?;
    let bases = net
        .labels()
        .into_iter()
        .map(|b| build_basis(field, &net, &hadamard, b))
        .collect();
    Ok(MubFamily {
        net,
        hadamard,
        bases,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MubReport {
    /// Every column has exactly `scale_sq` nonzeros (unit norm after scaling).
    pub column_weight: CheckReport,
    /// `M_b^T M_b = scale_sq · I` within each block.
    pub orthogonality: CheckReport,
    /// `|<x, y>| / scale_sq = 1 / sqrt(d)` across blocks, checked as
    /// `<x, y>^2 · d = scale_sq^2`.
    pub unbiased: CheckReport,
}

impl MubReport {
    pub fn passed(&self) -> bool {
        self.column_weight.passed() && self.orthogonality.passed() && self.unbiased.passed()
    }

    pub fn checks(&self) -> [&CheckReport; 3] {
        [&self.column_weight, &self.orthogonality, &self.unbiased]
    }
}

/// Exhaustive structural check of a matrix whose columns split into
/// consecutive square blocks of size `rows`, each meant to be an
/// orthonormal basis after dividing by `sqrt(scale_sq)`, pairwise unbiased.
///
/// Column indices in witnesses are global.
pub fn verify_blocks(columns: &SignColumns, scale_sq: u64) -> MubReport {
    let d = columns.rows();
    let n = columns.cols();
    let mut column_weight = CheckReport::new("unit_columns");
    let mut orthogonality = CheckReport::new("orthonormal_blocks");
    let mut unbiased = CheckReport::new("mutually_unbiased");

    for c in 0..n {
        let w = columns.weight(c);
        column_weight.check(w as u64 == scale_sq, || {
            format!("column {c} has {w} nonzeros, expected {scale_sq}")
        });
    }
    if d == 0 || !n.is_multiple_of(d) {
        column_weight.fail(format!("{n} columns do not split into blocks of {d}"));
        return MubReport {
            column_weight,
            orthogonality,
            unbiased,
        };
    }
    let target = (scale_sq as i128) * (scale_sq as i128);
    let mut scatter = Scatter::new(d);
    for a in 0..n {
        scatter.load(columns, a);
        let block_end = (a / d + 1) * d;
        let self_dot = scatter.dot(columns, a);
        orthogonality.check(self_dot as u64 == scale_sq, || {
            format!("column {a} has squared norm {self_dot}")
        });
        for b in a + 1..block_end {
            let dot = scatter.dot(columns, b);
            orthogonality.check(dot == 0, || format!("columns {a} and {b}: inner product {dot}"));
        }
        for b in block_end..n {
            let dot = scatter.dot(columns, b);
            let ok = (dot as i128) * (dot as i128) * (d as i128) == target;
            unbiased.check(ok, || format!("columns {a} and {b}: inner product {dot}"));
        }
    }
    MubReport {
        column_weight,
        orthogonality,
        unbiased,
    }
}

/// Checks that the given bases are orthonormal and pairwise unbiased.
pub fn verify_mub(bases: &[ScaledBasis]) -> Result<MubReport, MubError> {
    let Some(first) = bases.first() else {
        return Ok(verify_blocks(&SignColumns::new(0), 1));
    };
    let d = first.dimension();
    if bases.iter().any(|b| b.dimension() != d || b.columns.cols() != d) {
        return Err(MubError::Incompatible("dimension"));
    }
    if bases.iter().any(|b| b.scale_sq != first.scale_sq) {
        return Err(MubError::Incompatible("scale"));
    }
    let mut all = SignColumns::with_capacity(d, d * bases.len(), 0);
    for b in bases {
        all.extend(&b.columns);
    }
    Ok(verify_blocks(&all, first.scale_sq))
}
