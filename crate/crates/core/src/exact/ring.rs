use super::GaussianRational;

/// Commutative ring operations shared by scalars, univariate and bivariate
/// polynomials, so that dense matrices can be written once.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(c: &GaussianRational) -> Self;
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(c: &GaussianRational) -> Self {
        c.clone()
    }
}
