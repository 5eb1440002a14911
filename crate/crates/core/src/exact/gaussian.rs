//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ChartError;

/// An element of ℚ(i). Both parts are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// `re_num/re_den + (im_num/im_den)·i`. Panics on a zero denominator.
    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    /// `a + b·i` with integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(a.into()),
            im: BigRational::from_integer(b.into()),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussianRational { re: r, im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|² = z·conj(z)`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// Floating-point image, for corroboration only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        fn f(r: &BigRational) -> f64 {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        }
        (f(&self.re), f(&self.im))
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                self.$m(&rhs)
            }
        }
    };
}

impl<'a, 'b> Add<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a, 'b> Sub<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational { re: &self.re * &rhs.re, im: BigRational::zero() };
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form: `"a/b+c/d*i"`, e.g. `"1/2-3*i"`, `"0"`, `"2*i"`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*i", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, ChartError> {
    let bad = || ChartError::Parse(format!("malformed scalar {whole:?}"));
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() || s.starts_with('+') {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !den.bytes().all(|b| b.is_ascii_digit()) || den.is_empty() {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for GaussianRational {
    type Err = ChartError;

    fn from_str(input: &str) -> Result<Self, ChartError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ChartError::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::from_rational(parse_rational(&s, input)?));
        };
        let (body, starred) = match body.strip_suffix('*') {
            Some(b) => (b, true),
            None => (body, false),
        };
        // split at the last sign that is not the leading character
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(p, _)| p)
            .last();
        let (re_str, im_str) = match split {
            Some(p) => (&body[..p], &body[p..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() { BigRational::zero() } else { parse_rational(re_str, input)? };
        let im = match im_str {
            "" | "+" | "-" if starred => return Err(ChartError::Parse(format!("malformed scalar {input:?}"))),
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t, input)?,
        };
        Ok(GaussianRational { re, im })
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
