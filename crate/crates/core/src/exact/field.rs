//! Arithmetic in ℚ(i) and in towers of quotient rings over it, with dynamic
//! evaluation: a quotient by a squarefree modulus is a product of fields, and
//! whenever a computation needs to invert a zero divisor it reports the
//! factorisation it found instead. Drivers then rerun the computation on each
//! factor, so every result is attached to a modulus on which it is uniform.

use std::fmt::Debug;

use super::{GaussianRational, MatGR, PolyGR};
use crate::error::{ChartError, Result};

/// A nontrivial factorisation discovered while inverting a zero divisor.
#[derive(Clone, Debug)]
pub enum Split {
    /// Monic proper factor of the first-level modulus in ζ.
    Base(PolyGR),
    /// Monic proper factor (over the base ring) of the second-level modulus in η.
    Top(Vec<PolyGR>),
}

pub type Dyn<T> = std::result::Result<T, Split>;

/// Field-like arithmetic context. Elements are plain values; the context holds
/// the moduli.
pub trait Arith {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_gr(&self, c: &GaussianRational) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Inverse of a nonzero element, or the split it exposes.
    fn inv(&self, a: &Self::E) -> Dyn<Self::E>;
}

/// ℚ(i) itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Arith for Exact {
    type E = GaussianRational;
    fn zero(&self) -> Self::E {
        GaussianRational::zero()
    }
    fn one(&self) -> Self::E {
        GaussianRational::one()
    }
    fn from_gr(&self, c: &GaussianRational) -> Self::E {
        c.clone()
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a + b
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a - b
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a * b
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        -a
    }
    fn inv(&self, a: &Self::E) -> Dyn<Self::E> {
        Ok(a.inv().expect("inverse of nonzero Gaussian rational"))
    }
}

/// `ℚ(i)[ζ]/(f)` for a monic squarefree `f` of positive degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Ext1 {
    f: PolyGR,
}

impl Ext1 {
    pub fn new(f: &PolyGR) -> Result<Self> {
        match f.degree() {
            None | Some(0) => Err(ChartError::InvalidRing(format!("modulus {f} has no roots"))),
            _ if !f.is_squarefree() => Err(ChartError::InvalidRing(format!("modulus {f} is not squarefree"))),
            _ => Ok(Ext1 { f: f.monic() }),
        }
    }

    /// The ring ℚ(i) presented as `ℚ(i)[ζ]/(ζ − z)`.
    pub fn at(z: &GaussianRational) -> Self {
        Ext1 { f: PolyGR::new(vec![-z, GaussianRational::one()]) }
    }

    pub fn modulus(&self) -> &PolyGR {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    pub fn reduce(&self, p: &PolyGR) -> PolyGR {
        p.rem(&self.f).unwrap()
    }

    /// The class of ζ.
    pub fn gen(&self) -> PolyGR {
        self.reduce(&PolyGR::zeta())
    }
}

/// Extended Euclid: returns monic `g = gcd(a, f)` and `s` with `s·a ≡ g (mod f)`.
fn xgcd_mod(a: &PolyGR, f: &PolyGR) -> (PolyGR, PolyGR) {
    let (mut r0, mut r1) = (f.clone(), a.clone());
    let (mut s0, mut s1) = (PolyGR::zero(), PolyGR::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).unwrap();
        let s = &s0 - &(&q * &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let lc = r0.leading().unwrap().inv().unwrap();
    (r0.scale(&lc), s0.scale(&lc))
}

impl Arith for Ext1 {
    type E = PolyGR;
    fn zero(&self) -> Self::E {
        PolyGR::zero()
    }
    fn one(&self) -> Self::E {
        PolyGR::one()
    }
    fn from_gr(&self, c: &GaussianRational) -> Self::E {
        PolyGR::constant(c.clone())
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a + b
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a - b
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.reduce(&(a * b))
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        -a
    }
    fn inv(&self, a: &Self::E) -> Dyn<Self::E> {
        let (g, s) = xgcd_mod(a, &self.f);
        if g.is_constant() {
            Ok(self.reduce(&s))
        } else {
            Err(Split::Base(g))
        }
    }
}

/// `R1[η]/(h)` with `R1` an [`Ext1`] and `h` monic over `R1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ext2 {
    base: Ext1,
    h: Vec<PolyGR>,
}

impl Ext2 {
    /// `h` must be monic of positive degree with coefficients reduced in `base`.
    pub fn new(base: Ext1, h: Vec<PolyGR>) -> Self {
        assert!(h.len() >= 2 && h.last().unwrap().is_one_poly(), "second-level modulus must be monic");
        Ext2 { base, h }
    }

    pub fn base(&self) -> &Ext1 {
        &self.base
    }

    pub fn modulus(&self) -> &[PolyGR] {
        &self.h
    }

    pub fn degree(&self) -> usize {
        self.h.len() - 1
    }

    /// Embeds a base element.
    pub fn lift(&self, a: &PolyGR) -> Vec<PolyGR> {
        let mut v = vec![PolyGR::zero(); self.degree()];
        v[0] = a.clone();
        v
    }

    /// The class of η.
    pub fn gen(&self) -> Vec<PolyGR> {
        let mut v = vec![PolyGR::zero(); self.degree()];
        if self.degree() == 1 {
            v[0] = self.base.neg(&self.h[0]);
        } else {
            v[1] = PolyGR::one();
        }
        v
    }

    fn reduce_vec(&self, mut p: Vec<PolyGR>) -> Vec<PolyGR> {
        let n = self.degree();
        while p.len() > n {
            let c = p.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let off = p.len() - n;
            for (j, hj) in self.h.iter().take(n).enumerate() {
                p[off + j] = self.base.sub(&p[off + j], &self.base.mul(&c, hj));
            }
        }
        p.resize(n, PolyGR::zero());
        p
    }

    fn to_poly(&self, a: &[PolyGR]) -> Vec<PolyGR> {
        ptrim(&self.base, a.to_vec())
    }
}

impl PolyGR {
    fn is_one_poly(&self) -> bool {
        self.is_constant() && self.coeff(0).is_one()
    }
}

impl Arith for Ext2 {
    type E = Vec<PolyGR>;
    fn zero(&self) -> Self::E {
        vec![PolyGR::zero(); self.degree()]
    }
    fn one(&self) -> Self::E {
        self.lift(&PolyGR::one())
    }
    fn from_gr(&self, c: &GaussianRational) -> Self::E {
        self.lift(&PolyGR::constant(c.clone()))
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.iter().all(PolyGR::is_zero)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.reduce_vec(pmul(&self.base, a, b))
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        a.iter().map(|x| -x).collect()
    }
    fn inv(&self, a: &Self::E) -> Dyn<Self::E> {
        let (g, s) = pxgcd(&self.base, &self.to_poly(a), &self.h)?;
        if g.len() == 1 {
            Ok(self.reduce_vec(s))
        } else {
            Err(Split::Top(g))
        }
    }
}

// Univariate polynomials over an `Arith` context, as coefficient vectors with
// the lowest degree first and no trailing zeros.

pub fn ptrim<A: Arith>(ctx: &A, mut p: Vec<A::E>) -> Vec<A::E> {
    while p.last().is_some_and(|c| ctx.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn pmul<A: Arith>(ctx: &A, a: &[A::E], b: &[A::E]) -> Vec<A::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ctx.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ctx.add(&out[i + j], &ctx.mul(x, y));
        }
    }
    ptrim(ctx, out)
}

pub fn psub<A: Arith>(ctx: &A, a: &[A::E], b: &[A::E]) -> Vec<A::E> {
    let n = a.len().max(b.len());
    let z = ctx.zero();
    ptrim(ctx, (0..n).map(|i| ctx.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

pub fn pderiv<A: Arith>(ctx: &A, a: &[A::E]) -> Vec<A::E> {
    ptrim(
        ctx,
        a.iter().enumerate().skip(1).map(|(i, c)| ctx.mul(&ctx.from_gr(&GaussianRational::from_int(i as i64)), c)).collect(),
    )
}

/// Division with remainder; inverting the divisor's leading coefficient may split.
pub fn pdivrem<A: Arith>(ctx: &A, a: &[A::E], b: &[A::E]) -> Dyn<(Vec<A::E>, Vec<A::E>)> {
    let b = ptrim(ctx, b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lc_inv = ctx.inv(&b[db])?;
    let mut r = ptrim(ctx, a.to_vec());
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![ctx.zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = ctx.mul(&r[i + db], &lc_inv);
        if !ctx.is_zero(&c) {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = ctx.sub(&r[i + j], &ctx.mul(&c, bj));
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    Ok((ptrim(ctx, q), ptrim(ctx, r)))
}

pub fn pmonic<A: Arith>(ctx: &A, a: &[A::E]) -> Dyn<Vec<A::E>> {
    let a = ptrim(ctx, a.to_vec());
    match a.last() {
        None => Ok(a),
        Some(lc) => {
            let li = ctx.inv(lc)?;
            Ok(a.iter().map(|c| ctx.mul(c, &li)).collect())
        }
    }
}

/// Monic gcd `g` and cofactor `s` with `s·a ≡ g (mod m)`.
pub fn pxgcd<A: Arith>(ctx: &A, a: &[A::E], m: &[A::E]) -> Dyn<(Vec<A::E>, Vec<A::E>)> {
    let (mut r0, mut r1) = (ptrim(ctx, m.to_vec()), ptrim(ctx, a.to_vec()));
    let (mut s0, mut s1): (Vec<A::E>, Vec<A::E>) = (Vec::new(), vec![ctx.one()]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(ctx, &r0, &r1)?;
        let s = psub(ctx, &s0, &pmul(ctx, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let li = ctx.inv(r0.last().expect("gcd of nonzero modulus"))?;
    let scale = |p: &[A::E]| ptrim(ctx, p.iter().map(|c| ctx.mul(c, &li)).collect());
    Ok((scale(&r0), scale(&s0)))
}

pub fn pgcd<A: Arith>(ctx: &A, a: &[A::E], b: &[A::E]) -> Dyn<Vec<A::E>> {
    let (mut x, mut y) = (ptrim(ctx, a.to_vec()), ptrim(ctx, b.to_vec()));
    while !y.is_empty() {
        let (_, r) = pdivrem(ctx, &x, &y)?;
        x = std::mem::replace(&mut y, r);
    }
    pmonic(ctx, &x)
}

pub fn pdiv_exact<A: Arith>(ctx: &A, a: &[A::E], b: &[A::E]) -> Dyn<Vec<A::E>> {
    let (q, r) = pdivrem(ctx, a, b)?;
    debug_assert!(r.is_empty(), "inexact polynomial division");
    Ok(q)
}

/// Yun's squarefree decomposition of a nonzero polynomial: pairs `(m, h_m)`
/// with `h_m` monic, squarefree, pairwise coprime and `a = lc · Π h_m^m`.
pub fn yun<A: Arith>(ctx: &A, a: &[A::E]) -> Dyn<Vec<(usize, Vec<A::E>)>> {
    let f = pmonic(ctx, a)?;
    assert!(!f.is_empty(), "squarefree decomposition of zero");
    let mut out = Vec::new();
    if f.len() == 1 {
        return Ok(out);
    }
    let df = pderiv(ctx, &f);
    let g = pgcd(ctx, &f, &df)?;
    let mut b = pdiv_exact(ctx, &f, &g)?;
    let mut c = pdiv_exact(ctx, &df, &g)?;
    let mut d = psub(ctx, &c, &pderiv(ctx, &b));
    let mut m = 1;
    while b.len() > 1 {
        let h = pgcd(ctx, &b, &d)?;
        b = pdiv_exact(ctx, &b, &h)?;
        c = pdiv_exact(ctx, &d, &h)?;
        d = psub(ctx, &c, &pderiv(ctx, &b));
        if h.len() > 1 {
            out.push((m, h));
        }
        m += 1;
    }
    Ok(out)
}

// Linear algebra over an `Arith` context.

/// Rank by pivoted Gaussian elimination.
pub fn rank_in<A: Arith>(ctx: &A, rows: &[Vec<A::E>]) -> Dyn<usize> {
    Ok(rref_in(ctx, rows)?.1.len())
}

/// Reduced row echelon form and its pivot columns.
pub fn rref_in<A: Arith>(ctx: &A, rows: &[Vec<A::E>]) -> Dyn<(Vec<Vec<A::E>>, Vec<usize>)> {
    let mut m: Vec<Vec<A::E>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !ctx.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = ctx.inv(&m[r][c])?;
        for x in m[r].iter_mut() {
            *x = ctx.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || ctx.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = ctx.sub(x, &ctx.mul(&factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Ok((m, pivots))
}

/// Basis of `{x : M x = 0}` for `M` with `ncols` columns.
pub fn nullspace_in<A: Arith>(ctx: &A, rows: &[Vec<A::E>], ncols: usize) -> Dyn<Vec<Vec<A::E>>> {
    let (red, pivots) = rref_in(ctx, rows)?;
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ctx.zero(); ncols];
        v[free] = ctx.one();
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = ctx.neg(&row[free]);
        }
        basis.push(v);
    }
    Ok(basis)
}

fn infallible<T>(r: Dyn<T>) -> T {
    match r {
        Ok(v) => v,
        Err(_) => unreachable!("ℚ(i) is a field"),
    }
}

pub fn rank(m: &MatGR) -> usize {
    infallible(rank_in(&Exact, &m.to_rows()))
}

pub fn nullspace(m: &MatGR) -> Vec<Vec<GaussianRational>> {
    infallible(nullspace_in(&Exact, &m.to_rows(), m.cols()))
}

pub fn inverse(m: &MatGR) -> Option<MatGR> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug: Vec<Vec<GaussianRational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }));
            row
        })
        .collect();
    let (red, pivots) = infallible(rref_in(&Exact, &aug));
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(MatGR::from_fn(n, n, |i, j| red[i][n + j].clone()))
}

// Split drivers.

/// Runs `job` over `ℚ(i)[ζ]/(f)`, refining `f` whenever a zero divisor is
/// met. Returns the final factors of `f` with the result on each.
pub fn over_base<T>(f: &PolyGR, mut job: impl FnMut(&Ext1) -> Dyn<T>) -> Result<Vec<(PolyGR, T)>> {
    let mut todo = vec![Ext1::new(f)?];
    let mut done = Vec::new();
    while let Some(ring) = todo.pop() {
        match job(&ring) {
            Ok(v) => done.push((ring.modulus().clone(), v)),
            Err(Split::Base(g)) => {
                let cofactor = ring.modulus().div_exact(&g)?;
                todo.push(Ext1::new(&cofactor)?);
                todo.push(Ext1::new(&g)?);
            }
            Err(Split::Top(_)) => {
                return Err(ChartError::InvalidRing("second-level split escaped its driver".into()));
            }
        }
    }
    Ok(done)
}

/// Runs `job` over `base[η]/(h)`, refining `h` on second-level splits. A split
/// of the base modulus is propagated to the caller, which must restart.
pub fn over_top<T>(base: &Ext1, h: &[PolyGR], mut job: impl FnMut(&Ext2) -> Dyn<T>) -> Dyn<Vec<(Vec<PolyGR>, T)>> {
    let mut todo = vec![h.to_vec()];
    let mut done = Vec::new();
    while let Some(m) = todo.pop() {
        let ring = Ext2::new(base.clone(), m.clone());
        match job(&ring) {
            Ok(v) => done.push((m, v)),
            Err(Split::Top(g)) => {
                let cofactor = pdiv_exact(base, &m, &g)?;
                todo.push(cofactor);
                todo.push(g);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(done)
}
