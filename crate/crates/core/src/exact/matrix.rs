use std::fmt;

use super::{GaussianRational, PolyGR, Ring};
use crate::error::{ChartError, Result};

/// Dense row-major matrix over any [`Ring`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatGR = Mat<GaussianRational>;

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(ChartError::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ChartError::Dimension("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Row-major flattening.
    pub fn vec(&self) -> Vec<T> {
        self.data.clone()
    }

    /// Stacks matrices with equal column count vertically.
    pub fn vstack(parts: &[Self]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "shape mismatch in vstack");
            rows += p.rows;
            data.extend(p.data.iter().cloned());
        }
        Mat { rows, cols, data }
    }

    /// Determinant by the Leibniz expansion. Exponential; for oracles and k ≤ 4.
    pub fn det_leibniz(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = T::zero();
        loop {
            let mut term = T::one();
            for (i, &p) in perm.iter().enumerate() {
                term = term.mul(self.get(i, p));
            }
            total = if permutation_sign(&perm) > 0 { total.add(&term) } else { total.sub(&term) };
            if !next_permutation(&mut perm) {
                break;
            }
        }
        total
    }
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl MatGR {
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect()).collect())
            .expect("rectangular integer rows")
    }

    pub fn conj(&self) -> Self {
        self.map(GaussianRational::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    /// Matrix unit `e_{ij}` of size n.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, GaussianRational::one());
        m
    }

    pub fn rank(&self) -> usize {
        super::field::rank(self)
    }

    pub fn inverse(&self) -> Option<Self> {
        super::field::inverse(self)
    }
}

impl Mat<PolyGR> {
    /// Fraction-free (Bareiss) determinant over ℚ(i)[ζ].
    pub fn det_bareiss(&self) -> PolyGR {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return PolyGR::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = PolyGR::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.data.swap(k * n + c, r * n + c);
                        }
                        sign = !sign;
                    }
                    None => return PolyGR::zero(),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&pivot * a.get(i, j)) - &(a.get(i, k) * a.get(k, j));
                    let v = num.div_exact(&prev).expect("Bareiss step divides exactly");
                    a.set(i, j, v);
                }
                a.set(i, k, PolyGR::zero());
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign {
            -&d
        } else {
            d
        }
    }

    /// Value at ζ = z.
    pub fn eval(&self, z: &GaussianRational) -> MatGR {
        self.map(|p| p.eval(z))
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Ring + fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}

/// Serialized as a list of rows.
impl<T: Ring + serde::Serialize> serde::Serialize for Mat<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de, T: Ring + serde::Deserialize<'de>> serde::Deserialize<'de> for Mat<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        Mat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_leibniz() {
        let m = Mat::from_rows(vec![
            vec![PolyGR::from_ints(&[1, 2]), PolyGR::from_ints(&[0, 0, 1]), PolyGR::from_ints(&[3])],
            vec![PolyGR::from_ints(&[0]), PolyGR::from_ints(&[-1, 1]), PolyGR::from_ints(&[2, 0, 1])],
            vec![PolyGR::from_ints(&[5, 1]), PolyGR::from_ints(&[0]), PolyGR::from_ints(&[0, 1])],
        ])
        .unwrap();
        assert_eq!(m.det_bareiss(), m.det_leibniz());
        let z = Mat::from_rows(vec![
            vec![PolyGR::zero(), PolyGR::one()],
            vec![PolyGR::one(), PolyGR::zero()],
        ])
        .unwrap();
        assert_eq!(z.det_bareiss(), -&PolyGR::one());
    }

    #[test]
    fn transpose_and_adjoint() {
        let m = Mat::from_rows(vec![
            vec![GaussianRational::gaussian(1, 2), GaussianRational::from_int(3)],
            vec![GaussianRational::i(), GaussianRational::zero()],
        ])
        .unwrap();
        assert_eq!(m.adjoint().get(0, 1), &GaussianRational::gaussian(0, -1));
        assert_eq!(m.transpose().transpose(), m);
    }
}
