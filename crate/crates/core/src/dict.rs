//! The two dictionary families, their sparse null vectors, exact coherence
//! and spark certificates.
//!
//! * [`Family::Base`] (`thm1`): `q + 1` unbiased bases of `R^{q^2}` over
//!   GF(q). Coherence `1/q`, spark `q + 1`.
//! * [`Family::Extension`] (`thm2`): the `q + 1` bases of `R^{q^4}` over
//!   GF(q^2) whose labels lie in the sub-field GF(q), plus `∞`. Coherence
//!   `1/q^2`, spark `q^2 + q`.
//!
//! Column layout is block-major: block `t` (labels in order `0, …, q-1, ∞`)
//! occupies columns `t·d .. (t+1)·d`, and inside a block column `(u, v)` sits
//! at `u·r + v` where `r = sqrt(d)` is the field order used by the net.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::designs::{build_net, NetLabel};
use crate::gf::{ExtensionField, Field, FieldElement, FieldError};
use crate::hadamard::permuted_hadamard;
use crate::matrix::{Scatter, SignColumns};
use crate::mub::{build_basis, MubError};
use crate::search::BruteForceOutcome;

pub type Rational = Ratio<u64>;

/// Largest field order for the base family.
pub const MAX_BASE_Q: usize = 16;
/// Largest base-field order for the extension family.
pub const MAX_EXTENSION_Q: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DictError {
    #[error("q must be a power of two, got {0}")]
    NotPowerOfTwo(usize),
    #[error("q = {q} is not supported for family {family} (max {max})")]
    UnsupportedOrder { family: Family, q: usize, max: usize },
    #[error("vector length {got} does not match {expected} dictionary columns")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dictionary shape {rows}x{cols} does not fit family {family} with q = {q}")]
    Shape {
        family: Family,
        q: usize,
        rows: usize,
        cols: usize,
    },
    #[error("column {col} has {weight} nonzeros; unit columns need {scale_sq}")]
    NonUnitColumn { col: usize, weight: usize, scale_sq: u64 },
    #[error("vector is not in the kernel: {nonzero} nonzero residual entries")]
    NotInKernel { nonzero: usize },
    #[error("index {0} appears twice")]
    DuplicateIndex(usize),
    #[error("the zero vector certifies nothing")]
    ZeroVector,
    #[error("coherence is zero or undefined; no finite bound")]
    DegenerateCoherence,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mub(#[from] MubError),
}

/// Which construction a dictionary comes from. The string forms `thm1` and
/// `thm2` are the external names used in files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Base,
    Extension,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Base => "thm1",
            Family::Extension => "thm2",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "thm1" => Some(Family::Base),
            "thm2" => Some(Family::Extension),
            _ => None,
        }
    }

    /// Checks `q` against the supported range.
    pub fn validate_q(self, q: usize) -> Result<(), DictError> {
        if q < 2 || !q.is_power_of_two() {
            return Err(DictError::NotPowerOfTwo(q));
        }
        let max = match self {
            Family::Base => MAX_BASE_Q,
            Family::Extension => MAX_EXTENSION_Q,
        };
        if q > max {
            return Err(DictError::UnsupportedOrder { family: self, q, max });
        }
        Ok(())
    }

    /// Signal dimension `q^2` or `q^4`.
    pub fn dimension(self, q: usize) -> usize {
        match self {
            Family::Base => q * q,
            Family::Extension => q * q * q * q,
        }
    }

    /// Nonzeros per column: `q` or `q^2`.
    pub fn scale_sq(self, q: usize) -> u64 {
        match self {
            Family::Base => q as u64,
            Family::Extension => (q * q) as u64,
        }
    }

    /// Support size of the constructed null vector.
    pub fn null_support(self, q: usize) -> usize {
        match self {
            Family::Base => q + 1,
            Family::Extension => q * q + q,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `D = M / sqrt(scale_sq)` with `M` a sign matrix of `q + 1` square blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledDictionary {
    family: Family,
    q: usize,
    scale_sq: u64,
    columns: SignColumns,
}

impl ScaledDictionary {
    /// Wraps an existing matrix after checking only its shape.
    pub fn from_parts(
        family: Family,
        q: usize,
        scale_sq: u64,
        columns: SignColumns,
    ) -> Result<Self, DictError> {
        family.validate_q(q)?;
        let d = family.dimension(q);
        if columns.rows() != d || columns.cols() != d * (q + 1) {
            return Err(DictError::Shape {
                family,
                q,
                rows: columns.rows(),
                cols: columns.cols(),
            });
        }
        Ok(ScaledDictionary {
            family,
            q,
            scale_sq,
            columns,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn scale_sq(&self) -> u64 {
        self.scale_sq
    }

    pub fn dimension(&self) -> usize {
        self.columns.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.cols()
    }

    /// Number of square blocks (bases), `q + 1`.
    pub fn blocks(&self) -> usize {
        self.n_cols() / self.dimension()
    }

    pub fn columns(&self) -> &SignColumns {
        &self.columns
    }

    pub fn columns_mut(&mut self) -> &mut SignColumns {
        &mut self.columns
    }

    /// Printable block labels in column order.
    pub fn block_labels(&self) -> Vec<String> {
        (0..self.q)
            .map(|b| format!("{b}"))
            .chain([String::from("inf")])
            .collect()
    }
}

fn require_field(family: Family, field: &Field) -> Result<(), DictError> {
    if field.is_extension() {
        return Err(DictError::Field(FieldError::NotABaseField));
    }
    family.validate_q(field.order())
}

/// `D = (B_0, …, B_{q-1}, B_∞)` over GF(q), of size `q^2 × q^2 (q+1)`.
pub fn build_dictionary_thm1(field: &Field) -> Result<ScaledDictionary, DictError> {
    require_field(Family::Base, field)?;
    let q = field.order();
    let net = build_net(field);
    let h = permuted_hadamard(field.degree()).map_err(MubError::from)?;
    let mut columns = SignColumns::with_capacity(q * q, q * q * (q + 1), q * q * q * (q + 1));
    for label in net.labels() {
        columns.extend(&build_basis(field, &net, &h, label).columns);
    }
    ScaledDictionary::from_parts(Family::Base, q, q as u64, columns)
}

/// The `q + 1` bases over GF(q^2) labelled by the sub-field GF(q) and `∞`,
/// of size `q^4 × q^4 (q+1)`.
pub fn build_dictionary_thm2(base: &Field) -> Result<ScaledDictionary, DictError> {
    require_field(Family::Extension, base)?;
    let q = base.order();
    let ext = ExtensionField::new(base)?;
    let big = ext.field();
    let d = big.order() * big.order();
    let net = build_net(big);
    let h = permuted_hadamard(big.degree()).map_err(MubError::from)?;
    let labels = ext
        .subfield()
        .map(NetLabel::Finite)
        .chain([NetLabel::Infinity]);
    let mut columns = SignColumns::with_capacity(d, d * (q + 1), d * q * q * (q + 1));
    for label in labels {
        columns.extend(&build_basis(big, &net, &h, label).columns);
    }
    ScaledDictionary::from_parts(Family::Extension, q, (q * q) as u64, columns)
}

pub fn build_dictionary(family: Family, q: usize) -> Result<ScaledDictionary, DictError> {
    family.validate_q(q)?;
    let field = Field::of_order(q)?;
    match family {
        Family::Base => build_dictionary_thm1(&field),
        Family::Extension => build_dictionary_thm2(&field),
    }
}

/// A `±1` vector given by its sorted support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector {
    len: usize,
    entries: Vec<(usize, i8)>,
}

impl SparseVector {
    /// Entries are sorted; duplicate indices and zero values are rejected.
    pub fn new(len: usize, mut entries: Vec<(usize, i8)>) -> Result<Self, DictError> {
        entries.sort_unstable_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DictError::DuplicateIndex(w[0].0));
            }
        }
        if let Some(&(i, _)) = entries.iter().find(|e| e.0 >= len) {
            return Err(DictError::LengthMismatch { expected: len, got: i + 1 });
        }
        entries.retain(|e| e.1 != 0);
        Ok(SparseVector { len, entries })
    }

    pub fn zeros(len: usize) -> Self {
        SparseVector {
            len,
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn entries(&self) -> &[(usize, i8)] {
        &self.entries
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<i8> {
        let mut v = alloc::vec![0i8; self.len];
        for &(i, x) in &self.entries {
            v[i] = x;
        }
        v
    }
}

/// `x^b = e_{b^2} ⊗ e_b` in block `b`, and `x^∞ = -e_0 ⊗ e_0`; support `q + 1`.
pub fn build_null_vector_thm1(field: &Field) -> Result<SparseVector, DictError> {
    require_field(Family::Base, field)?;
    let q = field.order();
    let d = q * q;
    let mut entries: Vec<(usize, i8)> = field
        .elements()
        .map(|b| (b.index() * d + field.square(b).index() * q + b.index(), 1))
        .collect();
    entries.push((q * d, -1));
    SparseVector::new(d * (q + 1), entries)
}

/// `y^b = Σ_{[j] = ξ(b^2)} e_j ⊗ e_{ι(b)}` and `y^∞ = -Σ_{b ∈ GF(q)} e_b ⊗ e_0`;
/// support `q^2 + q`.
pub fn build_null_vector_thm2(base: &Field) -> Result<SparseVector, DictError> {
    require_field(Family::Extension, base)?;
    let q = base.order();
    let ext = ExtensionField::new(base)?;
    let r = q * q;
    let d = r * r;
    let mut entries = Vec::with_capacity(q * q + q);
    for b in base.elements() {
        let col = ext.iota(b).index();
        for j in ext.coset_members(ext.xi(base.square(b))) {
            entries.push((b.index() * d + j.index() * r + col, 1));
        }
    }
    for s in ext.subfield() {
        entries.push((q * d + s.index() * r, -1));
    }
    SparseVector::new(d * (q + 1), entries)
}

pub fn build_null_vector(family: Family, q: usize) -> Result<SparseVector, DictError> {
    family.validate_q(q)?;
    let field = Field::of_order(q)?;
    match family {
        Family::Base => build_null_vector_thm1(&field),
        Family::Extension => build_null_vector_thm2(&field),
    }
}

/// `M x` in exact integers (the dictionary scaled by `sqrt(scale_sq)`).
pub fn apply(dict: &ScaledDictionary, x: &SparseVector) -> Result<Vec<i64>, DictError> {
    if x.len() != dict.n_cols() {
        return Err(DictError::LengthMismatch {
            expected: dict.n_cols(),
            got: x.len(),
        });
    }
    let sparse: Vec<(usize, i64)> = x.entries().iter().map(|&(i, v)| (i, i64::from(v))).collect();
    Ok(dict.columns.apply_sparse(&sparse))
}

/// Exact coherence with a maximising pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coherence {
    pub value: Rational,
    /// Largest `|<M_i, M_j>|` over distinct columns.
    pub max_abs_inner: u64,
    /// First pair (in column order) attaining the maximum.
    pub pair: Option<(usize, usize)>,
    /// Every block is orthonormal after scaling.
    pub blocks_orthonormal: bool,
}

/// `μ(D) = max_{i≠j} |<M_i, M_j>| / scale_sq`. Requires unit columns, i.e.
/// exactly `scale_sq` nonzeros in every column.
pub fn coherence(dict: &ScaledDictionary) -> Result<Coherence, DictError> {
    let m = &dict.columns;
    let (d, n, s) = (m.rows(), m.cols(), dict.scale_sq);
    if let Some(col) = (0..n).find(|&c| m.weight(c) as u64 != s) {
        return Err(DictError::NonUnitColumn {
            col,
            weight: m.weight(col),
            scale_sq: s,
        });
    }
    let mut best = 0u64;
    let mut pair = None;
    let mut orthonormal = d > 0 && n.is_multiple_of(d);
    let mut scatter = Scatter::new(d);
    for a in 0..n {
        scatter.load(m, a);
        let block_end = a.checked_div(d).map_or(n, |t| (t + 1) * d);
        for b in a + 1..n {
            let dot = scatter.dot(m, b);
            if b < block_end && dot != 0 {
                orthonormal = false;
            }
            let v = dot.unsigned_abs();
            if pair.is_none() || v > best {
                best = v;
                pair = Some((a, b));
            }
        }
    }
    Ok(Coherence {
        value: Rational::new(best, s),
        max_abs_inner: best,
        pair,
        blocks_orthonormal: orthonormal,
    })
}

/// How an exact spark value was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact {
        spark: usize,
        /// The coherence lower bound rounds up to the null-vector support.
        by_bound: bool,
        /// Brute force found no smaller dependent set.
        by_search: bool,
    },
    Interval {
        lower: usize,
        upper: usize,
    },
}

/// What a brute-force run contributed to a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchEvidence {
    pub k_checked: usize,
    pub witness: Option<Vec<usize>>,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparkCertificate {
    pub coherence: Rational,
    /// Number of orthonormal blocks the dictionary is a union of.
    pub bases: usize,
    /// `1 + 1/μ`, valid for any dictionary.
    pub coherence_bound: Rational,
    /// `(1 + 1/(bases-1)) / μ`, valid for unions of orthonormal bases; `None`
    /// when the blocks are not orthonormal or there is a single block.
    pub union_bound: Option<Rational>,
    /// Support size of the kernel vector.
    pub upper_bound: usize,
    pub support: Vec<usize>,
    pub search: Option<SearchEvidence>,
    pub verdict: Verdict,
}

fn ceil_usize(r: Rational) -> usize {
    r.ceil().to_integer() as usize
}

impl SparkCertificate {
    /// Best integer lower bound available from coherence alone.
    pub fn bound_lower(&self) -> usize {
        let a = ceil_usize(self.coherence_bound);
        self.union_bound.map_or(a, |u| a.max(ceil_usize(u)))
    }

    pub fn exact_spark(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Exact { spark, .. } => Some(spark),
            Verdict::Interval { .. } => None,
        }
    }

    /// `η·μ`, using the exact spark when known and the upper bound otherwise.
    pub fn tightness_product(&self) -> Rational {
        let eta = self.exact_spark().unwrap_or(self.upper_bound) as u64;
        self.coherence * Rational::from_integer(eta)
    }

    /// How the spark (or its upper bound) compares with `1 + 1/μ`.
    pub fn coherence_bound_comparison(&self) -> Ordering {
        let eta = self.exact_spark().unwrap_or(self.upper_bound) as u64;
        Rational::from_integer(eta).cmp(&self.coherence_bound)
    }

    /// Folds in a brute-force outcome. A dependent set found by search caps
    /// the spark; an exhausted level raises the lower bound.
    pub fn with_search(mut self, outcome: &BruteForceOutcome) -> Self {
        self.search = Some(SearchEvidence {
            k_checked: outcome.k_checked,
            witness: outcome.witness.clone(),
            budget_exhausted: outcome.budget_exhausted,
        });
        let (mut lower, mut upper) = match self.verdict {
            Verdict::Exact { spark, .. } => (spark, spark),
            Verdict::Interval { lower, upper } => (lower, upper),
        };
        let by_bound = matches!(self.verdict, Verdict::Exact { by_bound: true, .. });
        match outcome.spark() {
            Some(s) => {
                upper = upper.min(s);
                lower = s;
            }
            None => lower = lower.max(outcome.k_checked + 1),
        }
        let searched_below = outcome.spark().is_some() || outcome.k_checked + 1 >= upper;
        self.verdict = if lower >= upper {
            Verdict::Exact {
                spark: upper,
                by_bound,
                by_search: searched_below,
            }
        } else {
            Verdict::Interval { lower, upper }
        };
        self
    }
}

/// Certifies the spark from a kernel vector (upper bound) and the coherence
/// bounds (lower bound).
pub fn spark_certify(dict: &ScaledDictionary, x: &SparseVector) -> Result<SparkCertificate, DictError> {
    let residual = apply(dict, x)?;
    if x.support_size() == 0 {
        return Err(DictError::ZeroVector);
    }
    let nonzero = residual.iter().filter(|&&v| v != 0).count();
    if nonzero > 0 {
        return Err(DictError::NotInKernel { nonzero });
    }
    let coh = coherence(dict)?;
    let mu = coh.value;
    if mu == Rational::from_integer(0) {
        return Err(DictError::DegenerateCoherence);
    }
    let one = Rational::from_integer(1);
    let inv_mu = mu.recip();
    let bases = dict.blocks();
    let coherence_bound = one + inv_mu;
    let union_bound = (coh.blocks_orthonormal && bases >= 2)
        .then(|| (one + Rational::new(1, (bases - 1) as u64)) * inv_mu);
    let upper = x.support_size();
    let mut cert = SparkCertificate {
        coherence: mu,
        bases,
        coherence_bound,
        union_bound,
        upper_bound: upper,
        support: x.support(),
        search: None,
        verdict: Verdict::Interval { lower: 0, upper },
    };
    let lower = cert.bound_lower();
    cert.verdict = if lower >= upper {
        Verdict::Exact {
            spark: upper,
            by_bound: true,
            by_search: false,
        }
    } else {
        Verdict::Interval { lower, upper }
    };
    Ok(cert)
}

/// Largest `t` with `t < s/2`: every representation with at most `t`
/// nonzeros is the unique sparsest one.
pub fn uniqueness_threshold(cert: &SparkCertificate) -> Option<usize> {
    cert.exact_spark().map(|s| s.saturating_sub(1) / 2)
}

/// Field element helper for callers that index blocks by label.
pub fn label_of_block(q: usize, block: usize) -> NetLabel {
    if block < q {
        NetLabel::Finite(FieldElement::new(block as u16))
    } else {
        NetLabel::Infinity
    }
}
