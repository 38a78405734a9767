//! Exact linear algebra kernels: sparse matrices over a generic scalar,
//! fraction-free integer rank, Smith normal form, and integer-polynomial
//! root counting via Sturm chains.

pub mod field;
pub mod poly;
pub mod snf;
pub mod sparse;

pub use field::{CoeffField, FieldScalar, Fp};
pub use poly::IntPoly;
pub use snf::{SmithForm, smith_normal_form, solve_integer};
pub use sparse::SparseMat;
