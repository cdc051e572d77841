//! Construction and exact certification of dictionaries that are unions of
//! `q + 1` mutually unbiased orthonormal bases of `R^{q^2}` (or `R^{q^4}`).
//!
//! The crate is `no_std` and only needs `alloc`. Every matrix is held in
//! scaled-integer form: a dictionary `D` is stored as a `{-1, 0, +1}` matrix
//! `M` together with an integer `scale_sq` so that `D = M / sqrt(scale_sq)`.
//! All checks (orthogonality, unbiasedness, kernel membership, rank) are
//! therefore exact integer computations.
//!
//! Layering, bottom up:
//!
//! * [`gf`]: GF(2^m) and the quadratic extension GF(q^2) with cosets of GF(q).
//! * [`designs`]: Latin squares, the column-selection matrix, the (q+1, q)-net.
//! * [`hadamard`]: Sylvester sign matrices and the row-permuted variant.
//! * [`mub`]: the embedding operator and the mutually unbiased bases.
//! * [`dict`]: the two dictionary families, their null vectors, coherence
//!   and spark certificates.
//! * [`audit`]: every named check for one dictionary, in a fixed order.
//! * [`rank`] / [`search`]: exact integer rank and the deterministic
//!   size-major subset search used to confirm sparks by brute force.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod designs;
pub mod dict;
pub mod gf;
pub mod hadamard;
pub mod matrix;
pub mod mub;
pub mod rank;
pub mod report;
pub mod search;

pub use dict::{Family, ScaledDictionary, SparkCertificate, SparseVector};
pub use gf::{ExtensionField, Field, FieldElement};
pub use report::CheckReport;
