//! Dense univariate polynomials in ζ over ℚ(i).
//!
//! `coeffs[j]` is the coefficient of ζ^j. Trailing zeros are never stored, so
//! the zero polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::{GaussianRational, Ring};
use crate::error::{ChartError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyGR {
    coeffs: Vec<GaussianRational>,
}

impl PolyGR {
    pub fn zero() -> Self {
        PolyGR { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate ζ.
    pub fn zeta() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn monomial(c: GaussianRational, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); deg + 1];
        coeffs[deg] = c;
        PolyGR { coeffs }
    }

    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyGR { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| GaussianRational::from_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    /// Coefficient of ζ^j (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> GaussianRational {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// `None` stands for the degree −∞ of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    /// Order of vanishing at ζ = 0 (`None` for the zero polynomial).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolyGR { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.scale(r)).collect())
    }

    pub fn shift(&self, by: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); by];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyGR { coeffs }
    }

    pub fn conj(&self) -> Self {
        PolyGR { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * &GaussianRational::from_int(j as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Scales to leading coefficient 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv().unwrap()),
        }
    }

    /// Euclidean division over the field ℚ(i).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(ChartError::ZeroPolynomial)?;
        let lc_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let t = &c * d;
                    rem[i + j] -= &t;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(ChartError::InvalidRing(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f / gcd(f, f')`, monic. Its roots are those of `f`, all simple.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(ChartError::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_exact(&g)?.monic())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Reversal `ζ^n f(1/ζ)`: the same section of O(n) read in the chart at ∞.
    pub fn reverse(&self, n: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            assert!(j <= n, "degree exceeds declared weight");
            coeffs[n - j] = c.clone();
        }
        Self::new(coeffs)
    }

    /// The antipodal pullback of a section of O(w): `ζ^w · conj(f(−1/ζ̄))`.
    pub fn antipodal(&self, w: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); w + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            assert!(j <= w, "degree exceeds declared weight");
            let v = c.conj();
            coeffs[w - j] = if j % 2 == 1 { -v } else { v };
        }
        Self::new(coeffs)
    }

    pub fn is_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }
}

impl<'a, 'b> Add<&'b PolyGR> for &'a PolyGR {
    type Output = PolyGR;
    fn add(self, rhs: &'b PolyGR) -> PolyGR {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = GaussianRational::zero();
        PolyGR::new(
            (0..n)
                .map(|j| self.coeffs.get(j).unwrap_or(&zero) + rhs.coeffs.get(j).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a, 'b> Sub<&'b PolyGR> for &'a PolyGR {
    type Output = PolyGR;
    fn sub(self, rhs: &'b PolyGR) -> PolyGR {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = GaussianRational::zero();
        PolyGR::new(
            (0..n)
                .map(|j| self.coeffs.get(j).unwrap_or(&zero) - rhs.coeffs.get(j).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a, 'b> Mul<&'b PolyGR> for &'a PolyGR {
    type Output = PolyGR;
    fn mul(self, rhs: &'b PolyGR) -> PolyGR {
        if self.is_zero() || rhs.is_zero() {
            return PolyGR::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        PolyGR::new(out)
    }
}

impl Neg for &PolyGR {
    type Output = PolyGR;
    fn neg(self) -> PolyGR {
        PolyGR { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for PolyGR {
    type Output = PolyGR;
    fn add(self, rhs: PolyGR) -> PolyGR {
        &self + &rhs
    }
}

impl Sub for PolyGR {
    type Output = PolyGR;
    fn sub(self, rhs: PolyGR) -> PolyGR {
        &self - &rhs
    }
}

impl Mul for PolyGR {
    type Output = PolyGR;
    fn mul(self, rhs: PolyGR) -> PolyGR {
        &self * &rhs
    }
}

impl Ring for PolyGR {
    fn zero() -> Self {
        PolyGR::zero()
    }
    fn one() -> Self {
        PolyGR::one()
    }
    fn is_zero(&self) -> bool {
        PolyGR::is_zero(self)
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
        PolyGR::constant(c.clone())
    }
}

impl fmt::Display for PolyGR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{j}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyGR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyGR[{self}]")
    }
}

impl serde::Serialize for PolyGR {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for PolyGR {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<GaussianRational>::deserialize(d)?;
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(serde::de::Error::custom("polynomial has a trailing zero coefficient"));
        }
        Ok(PolyGR { coeffs })
    }
}
