//! Exact combinatorics and linear algebra for homology growth of finite
//! covers: simplicial complexes, Davis chambers, quotients of right-angled
//! buildings, normalized Betti numbers over cover families, and van Kampen
//! intersection-vector obstructions.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals, or
//! prime fields with a runtime modulus. No floating point enters any
//! assertion path.

pub mod complexes;
pub mod covers;
pub mod embedding;
pub mod growth;
pub mod homology;
pub mod io;
pub mod linalg;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = num_rational::BigRational;

pub use linalg::field::{CoeffField, Fp};

/// Convenience constructor for `Rat` from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Convenience constructor for `Int`.
pub fn int(n: i64) -> Int {
    Int::from(n)
}
