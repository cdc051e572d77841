//! Arithmetic in GF(2^m) for `m <= 8`, and the quadratic extension
//! GF(q) ⊂ GF(q^2) together with its quotient `GF(q^2) / GF(q)`.
//!
//! An element is stored as its `m`-bit coefficient word. The first basis
//! coordinate is the most significant bit, so the word `ω1 ω2 … ωm` has index
//! `Σ ωi 2^(m-i)`, and element indices double as bit words.
//!
//! Extension elements are pairs `(a, b)`, meaning `a + b·y` with
//! `y^2 = y + c`. The word of `(a, b)` is `bits(a)` followed by `bits(b)`, so
//! the embedded sub-field `{(a, 0)}` consists of the words whose low `m` bits
//! are zero.

use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

/// Largest supported degree; fields have at most 256 elements.
pub const MAX_DEGREE: u32 = 8;

/// Largest base degree that can be extended (GF(16) ⊂ GF(256)).
pub const MAX_EXTENSION_BASE_DEGREE: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field degree m = {0} is outside 1..=8")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#b} is not irreducible of degree {m} over GF(2)")]
    NotIrreducible { poly: u32, m: u32 },
    #[error("element {index} does not belong to a field of order {order}")]
    ForeignElement { index: usize, order: usize },
    #[error("extension needs a base field of degree at most 4, got m = {0}")]
    ExtensionTooLarge(u32),
    #[error("only base fields can be extended")]
    NotABaseField,
    #[error("no irreducible y^2 + y + c exists over GF({0})")]
    NoIrreducibleQuadratic(usize),
}

/// An element of a binary field, as its coefficient word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub const fn new(index: u16) -> Self {
        FieldElement(index)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn bits(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How products are reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulus {
    /// Reduction modulo an irreducible polynomial over GF(2), given as an
    /// `(m+1)`-bit word (bit `k` is the coefficient of `x^k`).
    Polynomial(u32),
    /// GF(q)[y] / (y^2 + y + c) over a base field of degree `base_degree`.
    Quadratic { base_degree: u32, c: FieldElement },
}

/// The irreducible polynomial used for GF(2^m).
pub fn default_polynomial(m: u32) -> Option<u32> {
    Some(match m {
        1 => 0b10,               // x
        2 => 0b111,              // x^2 + x + 1
        3 => 0b1011,             // x^3 + x + 1
        4 => 0b1_0011,           // x^4 + x + 1
        5 => 0b10_0101,          // x^5 + x^2 + 1
        6 => 0b100_0011,         // x^6 + x + 1
        7 => 0b1000_0011,        // x^7 + x + 1
        8 => 0b1_0001_1101,      // x^8 + x^4 + x^3 + x^2 + 1
        _ => return None,
    })
}

fn degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let Some(d) = degree(poly) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for divisor in 2u32..(1 << (d / 2 + 1)) {
        if poly_rem(poly, divisor) == 0 {
            return false;
        }
    }
    true
}

/// Carry-less product of two `m`-bit words reduced modulo `poly`.
fn clmul_mod(a: u32, b: u32, poly: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..m {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    let mut d = 2 * m;
    while d > m {
        d -= 1;
        if (acc >> d) & 1 == 1 {
            acc ^= poly << (d - m);
        }
    }
    acc
}

/// A finite field of characteristic two with a full product table.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    m: u32,
    modulus: Modulus,
    one: FieldElement,
    products: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl Field {
    /// GF(2^m) with the default polynomial.
    pub fn new(m: u32) -> Result<Self, FieldError> {
        let poly = default_polynomial(m).ok_or(FieldError::UnsupportedDegree(m))?;
        Self::with_polynomial(m, poly)
    }

    /// GF(2) with `m = 1`, GF(4) with `m = 2`, …: the base field of order `q`.
    pub fn of_order(q: usize) -> Result<Self, FieldError> {
        if !q.is_power_of_two() || q < 2 {
            return Err(FieldError::UnsupportedDegree(0));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self, FieldError> {
        if m == 0 || m > MAX_DEGREE {
            return Err(FieldError::UnsupportedDegree(m));
        }
        if degree(poly) != Some(m) || !is_irreducible(poly) {
            return Err(FieldError::NotIrreducible { poly, m });
        }
        let q = 1usize << m;
        let mut products = Vec::with_capacity(q * q);
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                products.push(clmul_mod(a, b, poly, m) as u16);
            }
        }
        Ok(Field {
            m,
            modulus: Modulus::Polynomial(poly),
            one: FieldElement::ONE,
            products,
        })
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements `q = 2^m`.
    #[inline]
    pub fn order(&self) -> usize {
        1 << self.m
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The multiplicative identity. For a quadratic extension this is
    /// `(1, 0)`, whose index is `1 << base_degree`.
    #[inline]
    pub fn one(&self) -> FieldElement {
        self.one
    }

    pub fn is_extension(&self) -> bool {
        matches!(self.modulus, Modulus::Quadratic { .. })
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.order() as u16).map(FieldElement)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.index() < self.order()
    }

    pub fn element(&self, index: usize) -> Result<FieldElement, FieldError> {
        if index < self.order() {
            Ok(FieldElement(index as u16))
        } else {
            Err(FieldError::ForeignElement {
                index,
                order: self.order(),
            })
        }
    }

    fn require(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.element(a.index())
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.products[(a.index() << self.m) | b.index()])
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.add(self.require(a)?, self.require(b)?))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(self.require(a)?, self.require(b)?))
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u32) -> FieldElement {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `a^(q-2)`; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() as u32 - 2))
        }
    }

    /// The multiplication table, entry `(i, j) = i·j`, rows in index order.
    pub fn mul_table(&self) -> Vec<Vec<FieldElement>> {
        self.elements()
            .map(|i| self.elements().map(|j| self.mul(i, j)).collect())
            .collect()
    }
}

/// A coset `i + GF(q)` inside GF(q^2), stored by its representative with
/// zero sub-field part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coset {
    representative: FieldElement,
}

impl Coset {
    /// The canonical representative `(0, b)`.
    pub fn representative(self) -> FieldElement {
        self.representative
    }
}

/// GF(q^2) built over a base field GF(q), with the quotient-space maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    base: Field,
    field: Field,
}

impl ExtensionField {
    /// GF(q)[y] / (y^2 + y + c) with `c` the smallest-index element making the
    /// quadratic irreducible.
    pub fn new(base: &Field) -> Result<Self, FieldError> {
        if base.is_extension() {
            return Err(FieldError::NotABaseField);
        }
        let bm = base.degree();
        if bm > MAX_EXTENSION_BASE_DEGREE {
            return Err(FieldError::ExtensionTooLarge(bm));
        }
        let c = base
            .elements()
            .find(|&c| {
                base.elements()
                    .all(|t| base.add(base.add(base.square(t), t), c) != FieldElement::ZERO)
            })
            .ok_or(FieldError::NoIrreducibleQuadratic(base.order()))?;

        let q = base.order();
        let low = (q - 1) as u16;
        let mut products = Vec::with_capacity(q * q * q * q);
        for x in 0..(q * q) as u16 {
            let (a, b) = (FieldElement(x >> bm), FieldElement(x & low));
            for z in 0..(q * q) as u16 {
                let (a2, b2) = (FieldElement(z >> bm), FieldElement(z & low));
                // (a + b y)(a2 + b2 y) = a a2 + c b b2 + (a b2 + a2 b + b b2) y
                let bb = base.mul(b, b2);
                let re = base.add(base.mul(a, a2), base.mul(c, bb));
                let im = base.add(base.add(base.mul(a, b2), base.mul(a2, b)), bb);
                products.push((re.0 << bm) | im.0);
            }
        }
        let field = Field {
            m: 2 * bm,
            modulus: Modulus::Quadratic { base_degree: bm, c },
            one: FieldElement(1 << bm),
            products,
        };
        Ok(ExtensionField {
            base: base.clone(),
            field,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    /// GF(q^2) as a field in its own right.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The constant `c` of `y^2 = y + c`.
    pub fn quadratic_constant(&self) -> FieldElement {
        match self.field.modulus {
            Modulus::Quadratic { c, .. } => c,
            Modulus::Polynomial(_) => unreachable!("extension always has a quadratic modulus"),
        }
    }

    fn low_mask(&self) -> u16 {
        (self.base.order() - 1) as u16
    }

    /// The sub-field image `(a, 0)` of a base element.
    #[inline]
    pub fn embed(&self, a: FieldElement) -> FieldElement {
        FieldElement(a.0 << self.base.degree())
    }

    /// The base element `a` for a sub-field element `(a, 0)`.
    pub fn restrict(&self, i: FieldElement) -> Option<FieldElement> {
        self.in_subfield(i)
            .then_some(FieldElement(i.0 >> self.base.degree()))
    }

    #[inline]
    pub fn in_subfield(&self, i: FieldElement) -> bool {
        i.0 & self.low_mask() == 0
    }

    /// The embedded copy of GF(q), in base index order.
    pub fn subfield(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.base.elements().map(move |a| self.embed(a))
    }

    pub fn coset(&self, i: FieldElement) -> Coset {
        Coset {
            representative: FieldElement(i.0 & self.low_mask()),
        }
    }

    /// `ξ(b) = [b·y]`, a GF(q)-linear bijection GF(q) → GF(q^2)/GF(q).
    #[inline]
    pub fn xi(&self, b: FieldElement) -> Coset {
        Coset {
            representative: self.iota(b),
        }
    }

    /// `ι(b) = b·y = (0, b)`, the representative of `ξ(b)` with zero
    /// sub-field part.
    #[inline]
    pub fn iota(&self, b: FieldElement) -> FieldElement {
        debug_assert!(self.base.contains(b));
        b
    }

    /// The `q` elements of a coset, in index order.
    pub fn coset_members(&self, c: Coset) -> Vec<FieldElement> {
        self.subfield()
            .map(|s| self.field.add(s, c.representative))
            .collect()
    }

    /// The base element `b*` with `ξ(b*) = [i]`.
    #[inline]
    pub fn coset_star(&self, i: FieldElement) -> FieldElement {
        FieldElement(i.0 & self.low_mask())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(i: u16) -> FieldElement {
        FieldElement::new(i)
    }

    /// Bit words of the labels 0..3 used for GF(4) over GF(2): 0=00, 1=10, 2=01, 3=11.
    const EXT4_LABEL: [u16; 4] = [0b00, 0b10, 0b01, 0b11];

    #[test]
    fn small_addition_tables() {
        let f2 = Field::new(1).unwrap();
        assert_eq!(f2.add(e(1), e(1)), e(0));
        let f4 = Field::new(2).unwrap();
        assert_eq!(f4.add(e(2), e(3)), e(1));
        for m in 1..=8 {
            let f = Field::new(m).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(FieldElement::ZERO, a), a);
                assert_eq!(f.mul(FieldElement::ZERO, a), FieldElement::ZERO);
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let f4 = Field::new(2).unwrap();
        assert_eq!(f4.mul(e(2), e(2)), e(3));
        let f8 = Field::new(3).unwrap();
        // (x + 1)^2 = x^2 + 1
        assert_eq!(f8.mul(e(3), e(3)), e(0b101));
    }

    #[test]
    fn multiplication_tables_for_two_and_four() {
        let g2 = Field::new(1).unwrap().mul_table();
        assert_eq!(g2, vec![vec![e(0), e(0)], vec![e(0), e(1)]]);
        let g4 = Field::new(2).unwrap().mul_table();
        let expect = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        for (row, want) in g4.iter().zip(expect) {
            let got: Vec<u16> = row.iter().map(|x| x.bits()).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn squaring_is_a_permutation() {
        for m in 1..=8 {
            let f = Field::new(m).unwrap();
            let mut diag: Vec<u16> = f.elements().map(|a| f.square(a).bits()).collect();
            diag.sort_unstable();
            let all: Vec<u16> = (0..f.order() as u16).collect();
            assert_eq!(diag, all, "m = {m}");
        }
    }

    #[test]
    fn default_polynomials_are_irreducible() {
        for m in 1..=8 {
            let p = default_polynomial(m).unwrap();
            assert!(is_irreducible(p), "m = {m}");
            assert_eq!(degree(p), Some(m));
        }
        assert!(!is_irreducible(0b101)); // x^2 + 1 = (x + 1)^2
        assert!(!is_irreducible(0b1_0001_1011 ^ 0b1)); // x^8+x^4+x^3+x, divisible by x
        assert!(default_polynomial(9).is_none());
    }

    #[test]
    fn rejects_bad_construction() {
        assert_eq!(Field::new(0), Err(FieldError::UnsupportedDegree(0)));
        assert_eq!(Field::new(9), Err(FieldError::UnsupportedDegree(9)));
        assert_eq!(
            Field::with_polynomial(2, 0b101),
            Err(FieldError::NotIrreducible { poly: 0b101, m: 2 })
        );
        let f4 = Field::new(2).unwrap();
        assert_eq!(
            f4.try_add(e(1), e(4)),
            Err(FieldError::ForeignElement { index: 4, order: 4 })
        );
        assert!(f4.try_mul(e(3), e(2)).is_ok());
        assert_eq!(
            ExtensionField::new(&Field::new(5).unwrap()),
            Err(FieldError::ExtensionTooLarge(5))
        );
        let ext = ExtensionField::new(&Field::new(1).unwrap()).unwrap();
        assert_eq!(ExtensionField::new(ext.field()), Err(FieldError::NotABaseField));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in 1..=4 {
            let f = Field::new(m).unwrap();
            check_axioms(&f);
        }
        for bm in 1..=2 {
            let ext = ExtensionField::new(&Field::new(bm).unwrap()).unwrap();
            check_axioms(ext.field());
        }
    }

    fn check_axioms(f: &Field) {
        for a in f.elements() {
            assert_eq!(f.add(a, a), FieldElement::ZERO);
            assert_eq!(f.mul(f.one(), a), a);
            if let Some(inv) = f.inv(a) {
                assert_eq!(f.mul(a, inv), f.one());
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn extension_of_two_matches_labelled_basis() {
        let ext = ExtensionField::new(&Field::new(1).unwrap()).unwrap();
        assert_eq!(ext.quadratic_constant(), e(1));
        // 1 ↦ 10, y ↦ 01
        assert_eq!(ext.embed(FieldElement::ONE).bits(), 0b10);
        assert_eq!(ext.iota(FieldElement::ONE).bits(), 0b01);
        let sub: Vec<u16> = ext.subfield().map(|s| s.bits()).collect();
        assert_eq!(sub, vec![0b00, 0b10]);
        // the label arithmetic follows GF(2)[x]/(x^2+x+1) with x = label 2
        let label = |n: usize| e(EXT4_LABEL[n]);
        let f = ext.field();
        assert_eq!(f.mul(label(2), label(2)), label(3));
        assert_eq!(f.mul(label(2), label(3)), label(1));
        assert_eq!(f.add(label(2), label(3)), label(1));
        // ξ(1) = [2], ι(1) = 01, members([2]) = {2, 3}
        assert_eq!(ext.xi(FieldElement::ONE), ext.coset(label(2)));
        assert_eq!(ext.xi(FieldElement::ZERO), ext.coset(FieldElement::ZERO));
        let mut members: Vec<u16> = ext
            .coset_members(ext.coset(label(2)))
            .into_iter()
            .map(|x| x.bits())
            .collect();
        members.sort_unstable();
        let mut want = vec![EXT4_LABEL[2], EXT4_LABEL[3]];
        want.sort_unstable();
        assert_eq!(members, want);
        assert_eq!(ext.coset_star(label(1)), FieldElement::ZERO);
        assert_eq!(ext.coset_star(label(3)), FieldElement::ONE);
    }

    #[test]
    fn subfield_of_sixteen_is_closed_and_isomorphic() {
        let base = Field::new(2).unwrap();
        let ext = ExtensionField::new(&base).unwrap();
        let f = ext.field();
        for a in base.elements() {
            for b in base.elements() {
                let (ea, eb) = (ext.embed(a), ext.embed(b));
                assert_eq!(f.mul(ea, eb), ext.embed(base.mul(a, b)));
                assert_eq!(f.add(ea, eb), ext.embed(base.add(a, b)));
                assert_eq!(ext.restrict(f.mul(ea, eb)), Some(base.mul(a, b)));
            }
        }
        assert_eq!(ext.restrict(ext.iota(FieldElement::ONE)), None);
    }

    #[test]
    fn xi_and_iota_are_injective_and_partition() {
        for bm in 1..=4 {
            let base = Field::new(bm).unwrap();
            let ext = ExtensionField::new(&base).unwrap();
            let mut seen = vec![0u8; ext.field().order()];
            let mut cosets: Vec<Coset> = Vec::new();
            for b in base.elements() {
                let c = ext.xi(b);
                assert_eq!(ext.coset(ext.iota(b)), c);
                assert!(!cosets.contains(&c));
                cosets.push(c);
                let members = ext.coset_members(c);
                assert_eq!(members.len(), base.order());
                for &x in &members {
                    seen[x.index()] += 1;
                    assert_eq!(ext.coset_star(x), b);
                    // differences of members lie in the sub-field
                    assert!(ext.in_subfield(ext.field().add(x, members[0])));
                }
            }
            assert!(seen.iter().all(|&n| n == 1), "cosets partition GF(q^2)");
            assert_eq!(ext.iota(FieldElement::ZERO), FieldElement::ZERO);
        }
    }

    #[test]
    fn xi_is_linear_over_the_base() {
        for bm in 1..=3 {
            let base = Field::new(bm).unwrap();
            let ext = ExtensionField::new(&base).unwrap();
            let f = ext.field();
            for s in base.elements() {
                for b in base.elements() {
                    let scaled = f.mul(ext.embed(s), ext.iota(b));
                    assert_eq!(ext.coset(scaled), ext.xi(base.mul(s, b)));
                    for t in base.elements() {
                        let shifted = f.add(ext.iota(b), ext.embed(t));
                        assert_eq!(ext.coset(shifted), ext.xi(b));
                    }
                }
            }
        }
    }
}
