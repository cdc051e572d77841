//! Latin squares over a field, the column-selection matrix built from them,
//! and the (q+1, q)-net of incidence vectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::{Field, FieldElement};
use crate::report::CheckReport;

/// `l^r(i, j) = i·r + j`, with rows and columns in element index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    label: FieldElement,
    order: usize,
    entries: Vec<FieldElement>,
}

impl LatinSquare {
    pub fn label(&self) -> FieldElement {
        self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn entry(&self, i: FieldElement, j: FieldElement) -> FieldElement {
        self.entries[i.index() * self.order + j.index()]
    }

    pub fn row(&self, i: FieldElement) -> &[FieldElement] {
        let start = i.index() * self.order;
        &self.entries[start..start + self.order]
    }

    pub fn column(&self, j: FieldElement) -> Vec<FieldElement> {
        (0..self.order)
            .map(|i| self.entries[i * self.order + j.index()])
            .collect()
    }
}

pub fn latin_square(field: &Field, r: FieldElement) -> LatinSquare {
    let entries = field
        .elements()
        .flat_map(|i| field.elements().map(move |j| field.add(field.mul(i, r), j)))
        .collect();
    LatinSquare {
        label: r,
        order: field.order(),
        entries,
    }
}

/// The family `{L^r : r ∈ GF(q)}` in label order.
pub fn latin_family(field: &Field) -> Vec<LatinSquare> {
    field.elements().map(|r| latin_square(field, r)).collect()
}

fn is_permutation(values: impl Iterator<Item = FieldElement>, order: usize) -> bool {
    let mut seen = vec![false; order];
    let mut count = 0;
    for v in values {
        if v.index() >= order || seen[v.index()] {
            return false;
        }
        seen[v.index()] = true;
        count += 1;
    }
    count == order
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolsReport {
    /// For fixed `r, i`, distinct columns carry distinct symbols.
    pub row_injective: CheckReport,
    /// Distinct labels meet in exactly one row for every column pair.
    pub unique_meeting: CheckReport,
    /// Each `L^r`, `r ≠ 0`, is a Latin square.
    pub latin: CheckReport,
    /// Pairwise orthogonality among the squares with nonzero label.
    pub orthogonal: CheckReport,
}

impl MolsReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed())
    }

    pub fn checks(&self) -> [&CheckReport; 4] {
        [
            &self.row_injective,
            &self.unique_meeting,
            &self.latin,
            &self.orthogonal,
        ]
    }
}

/// Exhaustively checks row injectivity, the unique-meeting-row property and
/// mutual orthogonality across the given squares (all built from `field`).
pub fn verify_mols(field: &Field, squares: &[LatinSquare]) -> MolsReport {
    let q = field.order();
    let mut row_injective = CheckReport::new("latin_rows_injective");
    let mut unique_meeting = CheckReport::new("latin_unique_meeting_row");
    let mut latin = CheckReport::new("latin_property");
    let mut orthogonal = CheckReport::new("mols_orthogonality");

    for sq in squares {
        for i in field.elements() {
            row_injective.check(is_permutation(sq.row(i).iter().copied(), q), || {
                format!("L^{} row {} repeats a symbol", sq.label, i)
            });
        }
        if !sq.label.is_zero() {
            for j in field.elements() {
                latin.check(is_permutation(sq.column(j).into_iter(), q), || {
                    format!("L^{} column {} repeats a symbol", sq.label, j)
                });
            }
        }
    }

    for (a, sa) in squares.iter().enumerate() {
        for sb in &squares[a + 1..] {
            if sa.label == sb.label {
                continue;
            }
            for j1 in field.elements() {
                for j2 in field.elements() {
                    let meets = field
                        .elements()
                        .filter(|&i| sa.entry(i, j1) == sb.entry(i, j2))
                        .count();
                    unique_meeting.check(meets == 1, || {
                        format!(
                            "L^{} col {} and L^{} col {} meet in {} rows",
                            sa.label, j1, sb.label, j2, meets
                        )
                    });
                }
            }
            if sa.label.is_zero() || sb.label.is_zero() {
                continue;
            }
            let mut pairs = vec![false; q * q];
            let mut distinct = 0;
            for (x, y) in sa.entries.iter().zip(&sb.entries) {
                let slot = &mut pairs[x.index() * q + y.index()];
                if !*slot {
                    *slot = true;
                    distinct += 1;
                }
            }
            orthogonal.check(distinct == q * q, || {
                format!(
                    "L^{} and L^{} give only {} distinct ordered pairs",
                    sa.label, sb.label, distinct
                )
            });
        }
    }

    MolsReport {
        row_injective,
        unique_meeting,
        latin,
        orthogonal,
    }
}

/// `a(i, j) = i·j + j^2`: column `j` is column `j^2` of `L^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMatrix {
    order: usize,
    entries: Vec<FieldElement>,
}

impl AMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn entry(&self, i: FieldElement, j: FieldElement) -> FieldElement {
        self.entries[i.index() * self.order + j.index()]
    }

    pub fn row(&self, i: FieldElement) -> &[FieldElement] {
        let start = i.index() * self.order;
        &self.entries[start..start + self.order]
    }
}

pub fn a_matrix(field: &Field) -> AMatrix {
    let entries = field
        .elements()
        .flat_map(|i| {
            field
                .elements()
                .map(move |j| field.add(field.mul(i, j), field.square(j)))
        })
        .collect();
    AMatrix {
        order: field.order(),
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMatrixReport {
    pub row_zero_permutation: CheckReport,
    /// `a(i, j1) = a(i, j2)` with `j1 ≠ j2` exactly when `j1 + j2 = i`.
    pub collision_law: CheckReport,
}

impl AMatrixReport {
    pub fn passed(&self) -> bool {
        self.row_zero_permutation.passed() && self.collision_law.passed()
    }
}

pub fn verify_a_matrix(field: &Field, a: &AMatrix) -> AMatrixReport {
    let mut row_zero_permutation = CheckReport::new("a_matrix_row_zero_permutation");
    let row0 = a.row(FieldElement::ZERO);
    row_zero_permutation.check(is_permutation(row0.iter().copied(), a.order), || {
        format!("row 0 = {:?} is not a permutation", row0)
    });

    let mut collision_law = CheckReport::new("a_matrix_collision_law");
    for i in field.elements() {
        for j1 in field.elements() {
            for j2 in field.elements().filter(|&j2| j2 > j1) {
                let collide = a.entry(i, j1) == a.entry(i, j2);
                let sums = field.add(j1, j2) == i;
                collision_law.check(collide == sums, || {
                    format!("i={i} j1={j1} j2={j2}: collision={collide}, j1+j2=i is {sums}")
                });
            }
        }
    }
    AMatrixReport {
        row_zero_permutation,
        collision_law,
    }
}

/// Cross-checks the two construction paths: `a(i, j) = l^j(i, j^2)`.
pub fn verify_a_matrix_against_squares(
    field: &Field,
    a: &AMatrix,
    squares: &[LatinSquare],
) -> CheckReport {
    let mut report = CheckReport::new("a_matrix_matches_latin_columns");
    for j in field.elements() {
        let sq = &squares[j.index()];
        debug_assert_eq!(sq.label, j);
        for i in field.elements() {
            let via_square = sq.entry(i, field.square(j));
            report.check(a.entry(i, j) == via_square, || {
                format!("a({i},{j}) = {} but l^{j}({i},{j}^2) = {via_square}", a.entry(i, j))
            });
        }
    }
    report
}

/// A block label: a field element, or the point at infinity ordered last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NetLabel {
    Finite(FieldElement),
    Infinity,
}

impl NetLabel {
    /// Position in the order `0, 1, …, q-1, ∞`.
    pub fn position(self, q: usize) -> usize {
        match self {
            NetLabel::Finite(b) => b.index(),
            NetLabel::Infinity => q,
        }
    }
}

impl fmt::Display for NetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetLabel::Finite(b) => write!(f, "{b}"),
            NetLabel::Infinity => f.write_str("inf"),
        }
    }
}

/// The (q+1, q)-net. Each incidence vector of length `q^2` has exactly `q`
/// ones and is stored as its sorted support.
///
/// For a finite label `b`, entry `k` of the support of `m_{b,j}` is
/// `k·q + l^b(k, j)` (one hit per block); for `∞` it is `j·q + k`. Either way
/// entry `k` is where the `k`-th coordinate of an embedded vector lands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceNet {
    q: usize,
    supports: Vec<u32>,
}

pub fn build_net(field: &Field) -> IncidenceNet {
    let q = field.order();
    let mut supports = Vec::with_capacity((q + 1) * q * q);
    for b in field.elements() {
        let sq = latin_square(field, b);
        for j in field.elements() {
            for u in field.elements() {
                supports.push((u.index() * q + sq.entry(u, j).index()) as u32);
            }
        }
    }
    for j in 0..q {
        for k in 0..q {
            supports.push((j * q + k) as u32);
        }
    }
    IncidenceNet { q, supports }
}

impl IncidenceNet {
    pub fn q(&self) -> usize {
        self.q
    }

    /// Labels in block order `0, …, q-1, ∞`.
    pub fn labels(&self) -> Vec<NetLabel> {
        (0..self.q as u16)
            .map(|b| NetLabel::Finite(FieldElement::new(b)))
            .chain([NetLabel::Infinity])
            .collect()
    }

    /// Sorted support of `m_{b,j}`.
    pub fn support(&self, label: NetLabel, j: FieldElement) -> &[u32] {
        let start = (label.position(self.q) * self.q + j.index()) * self.q;
        &self.supports[start..start + self.q]
    }

    pub fn dense(&self, label: NetLabel, j: FieldElement) -> Vec<u8> {
        let mut v = vec![0u8; self.q * self.q];
        for &p in self.support(label, j) {
            v[p as usize] = 1;
        }
        v
    }

    fn inner(&self, a: (NetLabel, FieldElement), b: (NetLabel, FieldElement)) -> usize {
        sorted_intersection(self.support(a.0, a.1), self.support(b.0, b.1))
    }
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetReport {
    /// `⟨m_{b,i}, m_{b,j}⟩ = 0` for `i ≠ j`.
    pub within_family: CheckReport,
    /// `⟨m_{b,i}, m_{c,j}⟩ = 1` for `b ≠ c`.
    pub across_families: CheckReport,
    /// `⟨m_{b,j}, m_{b,j}⟩ = q`.
    pub self_products: CheckReport,
}

impl NetReport {
    pub fn passed(&self) -> bool {
        self.within_family.passed() && self.across_families.passed() && self.self_products.passed()
    }

    /// Unordered pairs of distinct incidence vectors examined.
    pub fn pair_checks(&self) -> u64 {
        self.within_family.checked + self.across_families.checked
    }
}

pub fn verify_net(net: &IncidenceNet) -> NetReport {
    let q = net.q;
    let mut within_family = CheckReport::new("net_within_family_disjoint");
    let mut across_families = CheckReport::new("net_across_families_meet_once");
    let mut self_products = CheckReport::new("net_vector_weight");
    let labels = net.labels();
    let elems: Vec<FieldElement> = (0..q as u16).map(FieldElement::new).collect();
    let vectors: Vec<(NetLabel, FieldElement)> = labels
        .iter()
        .flat_map(|&b| elems.iter().map(move |&j| (b, j)))
        .collect();

    for (x, &a) in vectors.iter().enumerate() {
        let w = net.inner(a, a);
        self_products.check(w == q, || format!("m_{{{},{}}} has weight {w}", a.0, a.1));
        for &b in &vectors[x + 1..] {
            let ip = net.inner(a, b);
            if a.0 == b.0 {
                within_family.check(ip == 0, || {
                    format!("<m_{{{},{}}}, m_{{{},{}}}> = {ip}", a.0, a.1, b.0, b.1)
                });
            } else {
                across_families.check(ip == 1, || {
                    format!("<m_{{{},{}}}, m_{{{},{}}}> = {ip}", a.0, a.1, b.0, b.1)
                });
            }
        }
    }
    NetReport {
        within_family,
        across_families,
        self_products,
    }
}
