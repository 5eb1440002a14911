//! Exact arithmetic over the Gaussian rationals: scalars, polynomials in ζ and
//! (ζ, η), dense matrices, quotient-ring towers, signatures and discriminants.

pub mod bipoly;
pub mod field;
pub mod gaussian;
pub mod matrix;
pub mod poly;
pub mod resultant;
pub mod ring;
pub mod signature;

pub use bipoly::{eta_gcd_degree, BiPoly};
pub use field::{Arith, Dyn, Exact, Ext1, Ext2, Split};
pub use gaussian::GaussianRational;
pub use matrix::{Mat, MatGR};
pub use poly::PolyGR;
pub use resultant::{discriminant_eta, resultant_eta};
pub use ring::Ring;
pub use signature::hermitian_signature;

/// Exact rank of a matrix over ℚ(i).
pub fn mat_rank(m: &MatGR) -> usize {
    field::rank(m)
}

/// `f / gcd(f, f′)`, monic.
pub fn squarefree_part(f: &PolyGR) -> crate::error::Result<PolyGR> {
    f.squarefree_part()
}
