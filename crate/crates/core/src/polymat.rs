//! Matrix polynomials `A(ζ) = Σ_j A_j ζ^j` with a declared degree bound:
//! evaluation at points of ℙ¹, characteristic polynomial and adjugate of
//! `ηI − A(ζ)`, powers and pointwise centralisers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ChartError, Result};
use crate::exact::field::{nullspace_in, over_base, Arith, Dyn, Ext1};
use crate::exact::{BiPoly, GaussianRational, Mat, MatGR, PolyGR, Ring};

/// A k×k matrix polynomial of declared degree bound d. Trailing coefficient
/// matrices may vanish: d is part of the data, not inferred.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixPoly {
    k: usize,
    d: usize,
    coeffs: Vec<MatGR>,
}

/// A matrix polynomial of degree bound 2.
pub type QuadraticDatum = MatrixPoly;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixPolyWire {
    k: usize,
    d: usize,
    coeffs: Vec<MatGR>,
}

impl Serialize for MatrixPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixPolyWire { k: self.k, d: self.d, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = MatrixPolyWire::deserialize(d)?;
        MatrixPoly::new(w.k, w.d, w.coeffs).map_err(serde::de::Error::custom)
    }
}

impl MatrixPoly {
    pub fn new(k: usize, d: usize, coeffs: Vec<MatGR>) -> Result<Self> {
        if coeffs.len() != d + 1 {
            return Err(ChartError::Dimension(format!("expected {} coefficient matrices, got {}", d + 1, coeffs.len())));
        }
        if let Some(j) = coeffs.iter().position(|m| m.rows() != k || m.cols() != k) {
            return Err(ChartError::Dimension(format!("coefficient {j} is not {k}x{k}")));
        }
        Ok(MatrixPoly { k, d, coeffs })
    }

    pub fn quadratic(a0: MatGR, a1: MatGR, a2: MatGR) -> Result<Self> {
        let k = a0.rows();
        Self::new(k, 2, vec![a0, a1, a2])
    }

    pub fn zero(k: usize, d: usize) -> Self {
        MatrixPoly { k, d, coeffs: vec![MatGR::zeros(k, k); d + 1] }
    }

    /// Builds from a matrix of ζ-polynomials; fails if an entry exceeds the bound.
    pub fn from_entries(entries: &Mat<PolyGR>, d: usize) -> Result<Self> {
        let k = entries.rows();
        if !entries.is_square() {
            return Err(ChartError::Dimension("entry matrix is not square".into()));
        }
        if entries.entries().iter().any(|p| p.degree().is_some_and(|deg| deg > d)) {
            return Err(ChartError::Dimension(format!("an entry has degree above the bound {d}")));
        }
        let coeffs = (0..=d).map(|j| entries.map(|p| p.coeff(j))).collect();
        Ok(MatrixPoly { k, d, coeffs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeff(&self, j: usize) -> &MatGR {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[MatGR] {
        &self.coeffs
    }

    /// The entries as polynomials in ζ.
    pub fn entries(&self) -> Mat<PolyGR> {
        Mat::from_fn(self.k, self.k, |r, c| PolyGR::new(self.coeffs.iter().map(|m| m.get(r, c).clone()).collect()))
    }

    pub fn eval(&self, z: &GaussianRational) -> MatGR {
        let mut acc = MatGR::zeros(self.k, self.k);
        for m in self.coeffs.iter().rev() {
            acc = acc.scale(z).add(m);
        }
        acc
    }

    /// The value in the chart at ∞ after the O(d) twist: the top coefficient.
    pub fn at_infinity(&self) -> MatGR {
        self.coeffs[self.d].clone()
    }

    /// Entries reduced in `ℚ(i)[ζ]/(f)`.
    pub fn eval_in(&self, ring: &Ext1) -> Vec<Vec<PolyGR>> {
        self.entries().to_rows().iter().map(|row| row.iter().map(|p| ring.reduce(p)).collect()).collect()
    }

    /// `g A g^{−1}`.
    pub fn conjugate_by(&self, g: &MatGR) -> Result<Self> {
        let gi = g.inverse().ok_or_else(|| ChartError::Dimension("conjugating matrix is singular".into()))?;
        Ok(MatrixPoly { k: self.k, d: self.d, coeffs: self.coeffs.iter().map(|m| g.mul(m).mul(&gi)).collect() })
    }

    pub fn map_coeffs(&self, f: impl Fn(&MatGR) -> MatGR) -> Self {
        MatrixPoly { k: self.k, d: self.d, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Product with degree bound `d + other.d`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let d = self.d + other.d;
        let mut coeffs = vec![MatGR::zeros(self.k, self.k); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        MatrixPoly { k: self.k, d, coeffs }
    }

    /// Sum; the bound is the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let d = self.d.max(other.d);
        let z = MatGR::zeros(self.k, self.k);
        let coeffs = (0..=d).map(|j| self.coeffs.get(j).unwrap_or(&z).add(other.coeffs.get(j).unwrap_or(&z))).collect();
        MatrixPoly { k: self.k, d, coeffs }
    }

    /// Multiplies by a scalar polynomial, raising the bound by `shift`.
    pub fn mul_poly(&self, p: &PolyGR, shift: usize) -> Result<Self> {
        let e = self.entries().map(|x| x * p);
        Self::from_entries(&e, self.d + shift)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MatGR::is_zero)
    }
}

impl fmt::Display for MatrixPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries())
    }
}

/// A point of ℙ¹: a Gaussian rational, all roots of a squarefree polynomial
/// at once, or ∞.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Value(GaussianRational),
    RootOf(PolyGR),
    Infinity,
}

impl Point {
    /// The coefficient ring of the point. ∞ and plain values live in ℚ(i).
    pub fn ring(&self) -> Result<Ext1> {
        match self {
            Point::Value(z) => Ok(Ext1::at(z)),
            Point::RootOf(f) => Ext1::new(f),
            Point::Infinity => Ok(Ext1::at(&GaussianRational::zero())),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Value(z) => write!(f, "{z}"),
            Point::RootOf(p) => {
                write!(f, "root:")?;
                for (j, c) in p.coeffs().iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// Accepts `inf`, a scalar such as `1/2-i`, or `root:c0,c1,...` for the roots
/// of `c0 + c1 ζ + ...`.
impl FromStr for Point {
    type Err = ChartError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" {
            return Ok(Point::Infinity);
        }
        if let Some(rest) = t.strip_prefix("root:") {
            let coeffs = rest.split(',').map(str::parse).collect::<Result<Vec<GaussianRational>>>()?;
            let f = PolyGR::new(coeffs);
            Ext1::new(&f)?;
            return Ok(Point::RootOf(f.monic()));
        }
        Ok(Point::Value(t.parse()?))
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Value of `A` at a point, with entries in the point's ring.
pub fn mp_eval(a: &MatrixPoly, point: &Point) -> Result<(Ext1, Mat<PolyGR>)> {
    let ring = point.ring()?;
    let m = match point {
        Point::Infinity => a.at_infinity().map(|c| PolyGR::constant(c.clone())),
        _ => Mat::from_rows(a.eval_in(&ring))?,
    };
    Ok((ring, m))
}

/// Faddeev–LeVerrier: the coefficients `a_1..a_k` of `det(ηI − A)` and the
/// matrices `M_0 = I, M_m = A M_{m−1} + a_m I` with `adj(ηI − A) = Σ η^{k−1−m} M_m`.
pub fn faddeev_leverrier(a: &MatrixPoly) -> (Vec<PolyGR>, Vec<Mat<PolyGR>>) {
    let k = a.k();
    let am = a.entries();
    let mut ms = vec![Mat::<PolyGR>::identity(k)];
    let mut coeffs = Vec::with_capacity(k);
    for m in 1..=k {
        let prod = am.mul(ms.last().unwrap());
        let c = prod.trace().scale(&-GaussianRational::from_ratios(1, m as i64, 0, 1));
        if m < k {
            ms.push(prod.add(&Mat::scalar(k, &c)));
        }
        coeffs.push(c);
    }
    (coeffs, ms)
}

/// Characteristic polynomial `det(ηI − A(ζ))`.
pub fn mp_char_poly(a: &MatrixPoly) -> BiPoly {
    let (coeffs, _) = faddeev_leverrier(a);
    let k = a.k();
    let mut eta = vec![PolyGR::zero(); k + 1];
    eta[k] = PolyGR::one();
    for (i, c) in coeffs.into_iter().enumerate() {
        eta[k - 1 - i] = c;
    }
    BiPoly::from_eta_coeffs(eta)
}

/// Adjugate of `ηI − A(ζ)`.
pub fn mp_adjugate(a: &MatrixPoly) -> Mat<BiPoly> {
    let (_, ms) = faddeev_leverrier(a);
    let k = a.k();
    Mat::from_fn(k, k, |r, c| {
        let mut eta = vec![PolyGR::zero(); k];
        for (m, mm) in ms.iter().enumerate() {
            eta[k - 1 - m] = mm.get(r, c).clone();
        }
        BiPoly::from_eta_coeffs(eta)
    })
}

/// `ηI − A(ζ)` as a matrix of bivariate polynomials.
pub fn eta_minus(a: &MatrixPoly) -> Mat<BiPoly> {
    let e = a.entries();
    Mat::from_fn(a.k(), a.k(), |r, c| {
        let x = BiPoly::from_poly(-e.get(r, c));
        if r == c {
            Ring::add(&x, &BiPoly::eta())
        } else {
            x
        }
    })
}

/// `A(ζ)^i` for `1 ≤ i ≤ k − 1`.
pub fn mp_power(a: &MatrixPoly, i: usize) -> Result<MatrixPoly> {
    if i == 0 || i >= a.k() {
        return Err(ChartError::OutOfRange(format!("power {i} outside 1..={}", a.k().saturating_sub(1))));
    }
    let mut p = a.clone();
    for _ in 1..i {
        p = p.mul(a);
    }
    Ok(p)
}

/// ζ-coefficients of `A(ζ)^i`, `d·i + 1` of them.
pub fn mp_power_coeffs(a: &MatrixPoly, i: usize) -> Result<Vec<MatGR>> {
    Ok(mp_power(a, i)?.coeffs)
}

/// Rows of the linear map `X ↦ XA − AX` on row-major `vec X`.
pub fn sylvester_rows<R: Arith>(ctx: &R, a: &[Vec<R::E>]) -> Vec<Vec<R::E>> {
    let k = a.len();
    let mut rows = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut row = vec![ctx.zero(); k * k];
            for l in 0..k {
                row[i * k + l] = ctx.add(&row[i * k + l], &a[l][j]);
                row[l * k + j] = ctx.sub(&row[l * k + j], &a[i][l]);
            }
            rows.push(row);
        }
    }
    rows
}

/// Basis of the centraliser of a matrix over an arithmetic context.
pub fn centralizer_in<R: Arith>(ctx: &R, a: &[Vec<R::E>]) -> Dyn<Vec<Vec<R::E>>> {
    let k = a.len();
    nullspace_in(ctx, &sylvester_rows(ctx, a), k * k)
}

/// Centraliser basis on the part of a point's ring where it has constant dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralizerPiece {
    /// Factor of the point's modulus (ζ − z for a value, ζ for ∞).
    pub modulus: PolyGR,
    pub basis: Vec<Mat<PolyGR>>,
}

impl CentralizerPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Exact basis of `{X : X·A(ζ₀) = A(ζ₀)·X}`. A root-of point whose roots
/// disagree is returned as several pieces.
pub fn centralizer_basis(a: &MatrixPoly, point: &Point) -> Result<Vec<CentralizerPiece>> {
    let (ring, m) = mp_eval(a, point)?;
    let k = a.k();
    let rows = m.to_rows();
    let pieces = over_base(ring.modulus(), |r| {
        let local: Vec<Vec<PolyGR>> = rows.iter().map(|row| row.iter().map(|x| r.reduce(x)).collect()).collect();
        centralizer_in(r, &local)
    })?;
    Ok(pieces
        .into_iter()
        .map(|(modulus, basis)| CentralizerPiece {
            modulus,
            basis: basis.into_iter().map(|v| Mat::from_vec(k, k, v).expect("k² entries")).collect(),
        })
        .collect())
}

/// Largest centraliser dimension over the point's roots.
pub fn centralizer_dim(a: &MatrixPoly, point: &Point) -> Result<usize> {
    Ok(centralizer_basis(a, point)?.iter().map(CentralizerPiece::dim).max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fix1() -> MatrixPoly {
        MatrixPoly::quadratic(
            MatGR::from_int_rows(&[&[0, 1], &[-2, 0]]),
            MatGR::from_int_rows(&[&[2, 0], &[0, -2]]),
            MatGR::from_int_rows(&[&[0, 2], &[-1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn eval_at_points() {
        let a = fix1();
        assert_eq!(a.eval(&GaussianRational::zero()), *a.coeff(0));
        assert_eq!(a.at_infinity(), MatGR::from_int_rows(&[&[0, 2], &[-1, 0]]));
    }

    #[test]
    fn char_poly_and_adjugate() {
        let a = fix1();
        let p = mp_char_poly(&a);
        assert_eq!(p.eta_coeff(0), PolyGR::from_ints(&[2, 0, 1, 0, 2]));
        assert!(p.eta_coeff(1).is_zero());
        let adj = mp_adjugate(&a);
        let prod = adj.mul(&eta_minus(&a));
        assert_eq!(prod, Mat::scalar(2, &p));
        assert_eq!(adj.get(0, 1), &BiPoly::from_poly(PolyGR::from_ints(&[1, 0, 2])));
    }

    #[test]
    fn centralizers() {
        let a = fix1();
        assert_eq!(centralizer_dim(&a, &Point::Value(GaussianRational::zero())).unwrap(), 2);
        let fix4 = MatrixPoly::quadratic(
            MatGR::zeros(2, 2),
            MatGR::from_int_rows(&[&[-1, 0], &[0, 1]]),
            MatGR::zeros(2, 2),
        )
        .unwrap();
        assert_eq!(centralizer_dim(&fix4, &Point::Value(GaussianRational::zero())).unwrap(), 4);
        assert_eq!(centralizer_dim(&fix4, &Point::Value(GaussianRational::one())).unwrap(), 2);
        // roots of ζ² − ζ = ζ(ζ − 1): dimension 4 at 0 and 2 at 1
        let pieces = centralizer_basis(&fix4, &Point::RootOf(PolyGR::from_ints(&[0, -1, 1]))).unwrap();
        let mut dims: Vec<usize> = pieces.iter().map(CentralizerPiece::dim).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 4]);
    }

    #[test]
    fn point_parsing() {
        assert_eq!("inf".parse::<Point>().unwrap(), Point::Infinity);
        assert_eq!("1/2-i".parse::<Point>().unwrap(), Point::Value(GaussianRational::from_ratios(1, 2, -1, 1)));
        let r: Point = "root:1,0,1".parse().unwrap();
        assert_eq!(r.to_string(), "root:1,0,1");
        assert!("root:1,2,1".parse::<Point>().is_err());
    }
}
