//! Sylvester Hadamard matrices indexed by `m`-bit words, and the
//! row-permuted matrix whose sign structure makes the null vectors work.

use alloc::format;
use alloc::vec::Vec;
use thiserror::Error;

use crate::gf::{ExtensionField, Field, FieldElement};
use crate::report::CheckReport;

pub const MAX_HADAMARD_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HadamardError {
    #[error("Hadamard degree m = {0} is outside 1..=16")]
    UnsupportedDegree(u32),
    #[error("sign matrix of order {matrix} does not match a field of order {field}")]
    OrderMismatch { matrix: usize, field: usize },
}

/// A `±1` matrix of order `2^m` whose row `i` is row `labels[i]` of the
/// Sylvester matrix, i.e. `entry(i, j) = (-1)^popcount(labels[i] & j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    m: u32,
    labels: Vec<u32>,
}

/// The `m`-fold tensor power of `[[1, 1], [1, -1]]`.
pub fn sylvester(m: u32) -> Result<SignMatrix, HadamardError> {
    check_degree(m)?;
    Ok(SignMatrix {
        m,
        labels: (0..1u32 << m).collect(),
    })
}

/// Row `ω` of the result is row `σ(ω)` of the Sylvester matrix.
pub fn permuted_hadamard(m: u32) -> Result<SignMatrix, HadamardError> {
    check_degree(m)?;
    Ok(SignMatrix {
        m,
        labels: (0..1u32 << m).map(|w| sigma(w, m)).collect(),
    })
}

fn check_degree(m: u32) -> Result<(), HadamardError> {
    if m == 0 || m > MAX_HADAMARD_DEGREE {
        Err(HadamardError::UnsupportedDegree(m))
    } else {
        Ok(())
    }
}

/// The row relabelling `σ` on `m`-bit words (first coordinate most
/// significant). With `k` the last coordinate equal to one, coordinates
/// before `k` are flipped and the rest kept; `σ(0) = 0`.
///
/// In integer terms: every bit above the lowest set bit is complemented.
pub fn sigma(word: u32, m: u32) -> u32 {
    if word == 0 {
        return 0;
    }
    let mask = if m >= 32 { u32::MAX } else { (1u32 << m) - 1 };
    let low = word & word.wrapping_neg();
    let below_and_at = (low << 1).wrapping_sub(1);
    word ^ (mask & !below_and_at)
}

impl SignMatrix {
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        1 << self.m
    }

    /// The Sylvester row used for row `i`.
    pub fn row_label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        if (self.labels[i] & j as u32).count_ones() & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn row(&self, i: usize) -> Vec<i8> {
        (0..self.order()).map(|j| self.entry(i, j)).collect()
    }

    /// Column `v`, i.e. the vector `h_v` that is embedded into net blocks.
    pub fn column(&self, v: usize) -> Vec<i8> {
        (0..self.order()).map(|i| self.entry(i, v)).collect()
    }

    /// Dense row-major entries.
    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        (0..self.order()).map(|i| self.row(i)).collect()
    }
}

/// `row_i · row_j = q δ_ij` for all pairs, in exact integers.
pub fn verify_orthogonality(h: &SignMatrix) -> CheckReport {
    let mut report = CheckReport::new("hadamard_orthogonality");
    let q = h.order();
    let rows = h.to_dense();
    for i in 0..q {
        for j in i..q {
            let dot: i64 = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(&a, &b)| i64::from(a) * i64::from(b))
                .sum();
            let want = if i == j { q as i64 } else { 0 };
            report.check(dot == want, || format!("row {i} · row {j} = {dot}"));
        }
    }
    report
}

/// `σ` is a bijection on `m`-bit words fixing zero.
pub fn verify_sigma_bijection(m: u32) -> CheckReport {
    let mut report = CheckReport::new("sigma_bijection");
    let q = 1usize << m;
    let mut seen = alloc::vec![false; q];
    for w in 0..q as u32 {
        let s = sigma(w, m) as usize;
        report.check(s < q && !seen[s], || format!("sigma({w:#b}) = {s:#b} repeats"));
        if s < q {
            seen[s] = true;
        }
    }
    report.check(sigma(0, m) == 0, || "sigma(0) != 0".into());
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutedStructureReport {
    /// Row 0 and column 0 are all ones.
    pub unit_border: CheckReport,
    /// `h(i, j1) = -h(i, j2)` whenever `i ≠ 0` and `j1 + j2 = i`.
    pub sign_flip: CheckReport,
}

impl PermutedStructureReport {
    pub fn passed(&self) -> bool {
        self.unit_border.passed() && self.sign_flip.passed()
    }
}

/// Checks the border and sign-flip structure of the permuted matrix against
/// addition in `field`.
pub fn verify_permuted_structure(
    field: &Field,
    h: &SignMatrix,
) -> Result<PermutedStructureReport, HadamardError> {
    let q = field.order();
    if h.order() != q {
        return Err(HadamardError::OrderMismatch {
            matrix: h.order(),
            field: q,
        });
    }
    let mut unit_border = CheckReport::new("permuted_hadamard_unit_border");
    for t in 0..q {
        unit_border.check(h.entry(0, t) == 1, || format!("h(0,{t}) = -1"));
        unit_border.check(h.entry(t, 0) == 1, || format!("h({t},0) = -1"));
    }
    let mut sign_flip = CheckReport::new("permuted_hadamard_sign_flip");
    for i in field.elements().skip(1) {
        for j1 in field.elements() {
            let j2 = field.add(i, j1);
            if j2 < j1 {
                continue;
            }
            let (a, b) = (h.entry(i.index(), j1.index()), h.entry(i.index(), j2.index()));
            sign_flip.check(a == -b, || format!("i={i} j1={j1} j2={j2}: {a} vs {b}"));
        }
    }
    Ok(PermutedStructureReport {
        unit_border,
        sign_flip,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionStructureReport {
    /// `h(i, ι(b)) = 1` for sub-field rows `i`.
    pub subfield_rows: CheckReport,
    /// `h(i, ι(b)) + h(i, ι(b* - b)) = 0` for rows outside the sub-field.
    pub paired_columns: CheckReport,
}

impl ExtensionStructureReport {
    pub fn passed(&self) -> bool {
        self.subfield_rows.passed() && self.paired_columns.passed()
    }
}

/// Checks the permuted matrix of order `q^2` on the columns `ι(GF(q))`.
pub fn verify_extension_structure(
    ext: &ExtensionField,
    h: &SignMatrix,
) -> Result<ExtensionStructureReport, HadamardError> {
    let big = ext.field();
    if h.order() != big.order() {
        return Err(HadamardError::OrderMismatch {
            matrix: h.order(),
            field: big.order(),
        });
    }
    let base = ext.base();
    let mut subfield_rows = CheckReport::new("extension_hadamard_subfield_rows");
    let mut paired_columns = CheckReport::new("extension_hadamard_paired_columns");
    for i in big.elements() {
        if ext.in_subfield(i) {
            for b in base.elements() {
                let col = ext.iota(b).index();
                subfield_rows.check(h.entry(i.index(), col) == 1, || {
                    format!("h({i}, iota({b})) = -1")
                });
            }
        } else {
            let star = ext.coset_star(i);
            for b in base.elements() {
                let partner: FieldElement = base.add(star, b);
                let s = i16::from(h.entry(i.index(), ext.iota(b).index()))
                    + i16::from(h.entry(i.index(), ext.iota(partner).index()));
                paired_columns.check(s == 0, || {
                    format!("i={i} b={b} b*={star}: h(i,iota(b)) + h(i,iota(b*-b)) = {s}")
                });
            }
        }
    }
    Ok(ExtensionStructureReport {
        subfield_rows,
        paired_columns,
    })
}
