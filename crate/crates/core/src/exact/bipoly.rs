//! Polynomials in (ζ, η) stored as a dense list of ζ-polynomials indexed by
//! the power of η.

use std::fmt;

use super::{GaussianRational, PolyGR, Ring};
use crate::error::{ChartError, Result};

/// `Σ_m η^m · c_m(ζ)`. Trailing zero η-coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    eta: Vec<PolyGR>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { eta: Vec::new() }
    }

    pub fn from_eta_coeffs(mut eta: Vec<PolyGR>) -> Self {
        while eta.last().is_some_and(|c| c.is_zero()) {
            eta.pop();
        }
        BiPoly { eta }
    }

    pub fn from_poly(p: PolyGR) -> Self {
        Self::from_eta_coeffs(vec![p])
    }

    /// The monomial η.
    pub fn eta() -> Self {
        Self::from_eta_coeffs(vec![PolyGR::zero(), PolyGR::one()])
    }

    /// Builds from `(m, l, c)` triples meaning `c·η^m ζ^l`.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, GaussianRational)>) -> Self {
        let mut eta: Vec<PolyGR> = Vec::new();
        for (m, l, c) in terms {
            if eta.len() <= m {
                eta.resize(m + 1, PolyGR::zero());
            }
            eta[m] = &eta[m] + &PolyGR::monomial(c, l);
        }
        Self::from_eta_coeffs(eta)
    }

    pub fn eta_coeffs(&self) -> &[PolyGR] {
        &self.eta
    }

    /// ζ-polynomial multiplying η^m.
    pub fn eta_coeff(&self, m: usize) -> PolyGR {
        self.eta.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of η^m ζ^l.
    pub fn coeff(&self, m: usize, l: usize) -> GaussianRational {
        self.eta.get(m).map(|p| p.coeff(l)).unwrap_or_default()
    }

    /// Nonzero terms `(m, l, c)` in increasing (m, l) order.
    pub fn terms(&self) -> Vec<(usize, usize, GaussianRational)> {
        let mut out = Vec::new();
        for (m, p) in self.eta.iter().enumerate() {
            for (l, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((m, l, c.clone()));
                }
            }
        }
        out
    }

    pub fn eta_degree(&self) -> Option<usize> {
        self.eta.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn is_monic_in_eta(&self) -> bool {
        self.eta.last().is_some_and(|p| p.is_constant() && p.coeff(0).is_one())
    }

    pub fn derivative_eta(&self) -> Self {
        Self::from_eta_coeffs(
            self.eta
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, p)| p.scale(&GaussianRational::from_int(m as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_eta_coeffs(self.eta.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_poly(&self, p: &PolyGR) -> Self {
        Self::from_eta_coeffs(self.eta.iter().map(|q| q * p).collect())
    }

    /// Substitutes a value for ζ, leaving a polynomial in η.
    pub fn eval_zeta(&self, z: &GaussianRational) -> PolyGR {
        PolyGR::new(self.eta.iter().map(|p| p.eval(z)).collect())
    }

    pub fn eval(&self, z: &GaussianRational, e: &GaussianRational) -> GaussianRational {
        self.eval_zeta(z).eval(e)
    }
}

impl Ring for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::from_poly(PolyGR::one())
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.eta.len().max(other.eta.len());
        Self::from_eta_coeffs((0..n).map(|m| &self.eta_coeff(m) + &other.eta_coeff(m)).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.eta.len().max(other.eta.len());
        Self::from_eta_coeffs((0..n).map(|m| &self.eta_coeff(m) - &other.eta_coeff(m)).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![PolyGR::zero(); self.eta.len() + other.eta.len() - 1];
        for (i, a) in self.eta.iter().enumerate() {
            for (j, b) in other.eta.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_eta_coeffs(out)
    }
    fn neg(&self) -> Self {
        BiPoly { eta: self.eta.iter().map(|p| -p).collect() }
    }
    fn from_scalar(c: &GaussianRational) -> Self {
        BiPoly::from_poly(PolyGR::constant(c.clone()))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in self.eta.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "[{p}]")?,
                1 => write!(f, "[{p}]w")?,
                _ => write!(f, "[{p}]w^{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[{self}]")
    }
}

/// Serialized as a list of `[m, l, "coefficient"]` triples for `c·η^m ζ^l`.
impl serde::Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<(usize, usize, GaussianRational)>::deserialize(d)?;
        Ok(BiPoly::from_terms(terms))
    }
}

/// Greatest-common-divisor degree in η of two bivariate polynomials, over the
/// rational function field ℚ(i)(ζ). Uses a primitive pseudo-remainder sequence.
pub fn eta_gcd_degree(a: &BiPoly, b: &BiPoly) -> Result<usize> {
    if a.is_zero() && b.is_zero() {
        return Err(ChartError::ZeroPolynomial);
    }
    let (mut f, mut g) = if a.eta_degree() >= b.eta_degree() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g);
        f = g;
        g = primitive_part(&r);
    }
    Ok(f.eta_degree().unwrap())
}

fn pseudo_rem(f: &BiPoly, g: &BiPoly) -> BiPoly {
    let dg = g.eta_degree().unwrap();
    let lg = g.eta_coeff(dg);
    let mut r = f.clone();
    while let Some(dr) = r.eta_degree() {
        if dr < dg {
            break;
        }
        let lr = r.eta_coeff(dr);
        let mut shifted = vec![PolyGR::zero(); dr - dg];
        shifted.push(lr);
        let t = BiPoly::from_eta_coeffs(shifted);
        r = Ring::sub(&r.mul_poly(&lg), &Ring::mul(&t, g));
    }
    r
}

fn primitive_part(f: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return BiPoly::zero();
    }
    let mut content = PolyGR::zero();
    for p in f.eta_coeffs() {
        content = content.gcd(p);
    }
    BiPoly::from_eta_coeffs(f.eta_coeffs().iter().map(|p| p.div_exact(&content).unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_degree_detects_repeated_factors() {
        // η² + ζ²  is squarefree in η; η² is not
        let p = BiPoly::from_eta_coeffs(vec![PolyGR::from_ints(&[0, 0, 1]), PolyGR::zero(), PolyGR::one()]);
        assert_eq!(eta_gcd_degree(&p, &p.derivative_eta()).unwrap(), 0);
        let q = BiPoly::from_eta_coeffs(vec![PolyGR::zero(), PolyGR::zero(), PolyGR::one()]);
        assert_eq!(eta_gcd_degree(&q, &q.derivative_eta()).unwrap(), 1);
        // (η − ζ)²(η + 1)
        let l = BiPoly::from_eta_coeffs(vec![PolyGR::from_ints(&[0, -1]), PolyGR::one()]);
        let m = BiPoly::from_eta_coeffs(vec![PolyGR::one(), PolyGR::one()]);
        let r = Ring::mul(&Ring::mul(&l, &l), &m);
        assert_eq!(eta_gcd_degree(&r, &r.derivative_eta()).unwrap(), 1);
    }
}
