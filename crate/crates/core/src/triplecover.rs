//! Degree-3 covers beyond the embedded case.
//!
//! A rank-3 algebra `O ⊕ O(−m)·u ⊕ O(−n)·v` over ℙ¹ is fixed by nine
//! structure constants
//!
//! ```text
//! u² = p + αu + βv,   uv = q + γu + δv,   v² = r + εu + φv,
//! ```
//!
//! each a section of the line bundle its weight dictates. Binary cubic forms
//! give balanced `(3, 3)` algebras, whose curves have `h⁰(O(2)) = 3` and so
//! admit no matrix-polynomial chart; 3×3 quadratic data give `(2, 4)` control
//! algebras. A module on which u and v act by commuting matrix polynomials of
//! degrees m and n replaces the single matrix `A(ζ)` of the embedded chart.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ChartError, Result};
use crate::exact::field::{rref_in, Exact};
use crate::exact::{GaussianRational, Mat, MatGR, PolyGR};
use crate::polymat::{faddeev_leverrier, MatrixPoly, QuadraticDatum};
use crate::realform::{gram_from_pairs, GramCertificate};

pub const DEFAULT_BUDGET: usize = 64;

/// The nine structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub p: PolyGR,
    pub alpha: PolyGR,
    pub beta: PolyGR,
    pub q: PolyGR,
    pub gamma: PolyGR,
    pub delta: PolyGR,
    pub r: PolyGR,
    pub epsilon: PolyGR,
    pub phi: PolyGR,
}

impl Constants {
    const NAMES: [&'static str; 9] = ["p", "alpha", "beta", "q", "gamma", "delta", "r", "epsilon", "phi"];

    fn all(&self) -> [&PolyGR; 9] {
        [&self.p, &self.alpha, &self.beta, &self.q, &self.gamma, &self.delta, &self.r, &self.epsilon, &self.phi]
    }

    fn zero() -> Self {
        let z = PolyGR::zero();
        Constants {
            p: z.clone(),
            alpha: z.clone(),
            beta: z.clone(),
            q: z.clone(),
            gamma: z.clone(),
            delta: z.clone(),
            r: z.clone(),
            epsilon: z.clone(),
            phi: z,
        }
    }
}

/// Weights of the structure constants, in the order of [`Constants`].
fn weights(m: usize, n: usize) -> [i64; 9] {
    let (m, n) = (m as i64, n as i64);
    [2 * m, m, 2 * m - n, m + n, n, m, 2 * n, 2 * n - m, n]
}

/// σ acts on the generators by `(u*, v*) = S·(u, v)`, where `x*` is the
/// antipodal conjugate `ζ^w conj(x(−1/ζ̄))` of a weight-w section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealityDatum {
    pub s: MatGR,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveAlgebra {
    splitting: (usize, usize),
    constants: Constants,
    reality: Option<RealityDatum>,
    origin: Option<QuadraticDatum>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveAlgebraWire {
    k: usize,
    splitting: (usize, usize),
    constants: Constants,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reality: Option<RealityDatum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<QuadraticDatum>,
}

impl Serialize for CurveAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveAlgebraWire {
            k: 3,
            splitting: self.splitting,
            constants: self.constants.clone(),
            reality: self.reality.clone(),
            origin: self.origin.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CurveAlgebraWire::deserialize(d)?;
        if w.k != 3 {
            return Err(serde::de::Error::custom(format!("k = {} is not supported, expected 3", w.k)));
        }
        let mut alg = CurveAlgebra::new(w.splitting, w.constants).map_err(serde::de::Error::custom)?;
        alg.reality = w.reality;
        alg.origin = w.origin;
        Ok(alg)
    }
}

/// An element `c₀ + c₁u + c₂v`.
pub type Elem = [PolyGR; 3];

fn elem_add(x: &Elem, y: &Elem) -> Elem {
    [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2]]
}

fn elem_sub(x: &Elem, y: &Elem) -> Elem {
    [&x[0] - &y[0], &x[1] - &y[1], &x[2] - &y[2]]
}

fn elem_scale(c: &PolyGR, x: &Elem) -> Elem {
    [c * &x[0], c * &x[1], c * &x[2]]
}

fn elem_is_zero(x: &Elem) -> bool {
    x.iter().all(PolyGR::is_zero)
}

fn basis(i: usize) -> Elem {
    let mut e = [PolyGR::zero(), PolyGR::zero(), PolyGR::zero()];
    e[i] = PolyGR::one();
    e
}

fn antipodal(p: &PolyGR, w: i64) -> PolyGR {
    if p.is_zero() {
        p.clone()
    } else {
        p.antipodal(w as usize)
    }
}

fn scalar_poly(c: &GaussianRational) -> PolyGR {
    PolyGR::constant(c.clone())
}

impl CurveAlgebra {
    /// Checks the splitting and the degree profile of the constants.
    pub fn new(splitting: (usize, usize), constants: Constants) -> Result<Self> {
        let (m, n) = splitting;
        if m == 0 || m > n || m + n != 6 {
            return Err(ChartError::OutOfRange(format!("splitting ({m}, {n}) needs 1 ≤ m ≤ n and m + n = 6")));
        }
        for (index, (c, w)) in constants.all().into_iter().zip(weights(m, n)).enumerate() {
            if let Some(degree) = c.degree() {
                if w < 0 || degree as i64 > w {
                    return Err(ChartError::DegreeBoundViolated { index, degree, bound: w.max(0) as usize });
                }
            }
        }
        Ok(CurveAlgebra { splitting, constants, reality: None, origin: None })
    }

    pub fn with_reality(mut self, s: MatGR) -> Self {
        self.reality = Some(RealityDatum { s });
        self
    }

    pub fn splitting(&self) -> (usize, usize) {
        self.splitting
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn reality(&self) -> Option<&RealityDatum> {
        self.reality.as_ref()
    }

    /// The quadratic datum a control algebra was derived from.
    pub fn origin(&self) -> Option<&QuadraticDatum> {
        self.origin.as_ref()
    }

    fn generator_weight(&self, g: usize) -> i64 {
        if g == 1 {
            self.splitting.0 as i64
        } else {
            self.splitting.1 as i64
        }
    }

    /// `e_i · e_j` on the basis `(1, u, v)`.
    pub fn basis_product(&self, i: usize, j: usize) -> Elem {
        let c = &self.constants;
        match (i.min(j), i.max(j)) {
            (0, t) => basis(t),
            (1, 1) => [c.p.clone(), c.alpha.clone(), c.beta.clone()],
            (1, 2) => [c.q.clone(), c.gamma.clone(), c.delta.clone()],
            _ => [c.r.clone(), c.epsilon.clone(), c.phi.clone()],
        }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = [PolyGR::zero(), PolyGR::zero(), PolyGR::zero()];
        for i in 0..3 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if y[j].is_zero() {
                    continue;
                }
                out = elem_add(&out, &elem_scale(&(&x[i] * &y[j]), &self.basis_product(i, j)));
            }
        }
        out
    }

    /// `(xy)z − x(yz)` for every triple of generators, labelled like `(uu)v`.
    pub fn associativity_residuals(&self) -> Vec<(String, Elem)> {
        let name = |g: usize| if g == 1 { 'u' } else { 'v' };
        let mut out = Vec::new();
        for x in 1..3 {
            for y in 1..3 {
                for z in 1..3 {
                    let (ex, ey, ez) = (basis(x), basis(y), basis(z));
                    let lhs = self.mul(&self.mul(&ex, &ey), &ez);
                    let rhs = self.mul(&ex, &self.mul(&ey, &ez));
                    out.push((format!("({}{}){}", name(x), name(y), name(z)), elem_sub(&lhs, &rhs)));
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_residuals().iter().all(|(_, r)| elem_is_zero(r))
    }

    fn require_associative(&self) -> Result<()> {
        if self.is_associative() {
            Ok(())
        } else {
            Err(ChartError::NotAssociative)
        }
    }

    /// `x*` for an element of total weight `w`, using `(u*, v*) = S·(u, v)`.
    fn star(&self, x: &Elem, w: i64, s: &MatGR) -> Elem {
        let gens = [
            [PolyGR::zero(), scalar_poly(s.get(0, 0)), scalar_poly(s.get(0, 1))],
            [PolyGR::zero(), scalar_poly(s.get(1, 0)), scalar_poly(s.get(1, 1))],
        ];
        let mut out = [antipodal(&x[0], w), PolyGR::zero(), PolyGR::zero()];
        for g in 1..3 {
            out = elem_add(&out, &elem_scale(&antipodal(&x[g], w - self.generator_weight(g)), &gens[g - 1]));
        }
        out
    }

    /// Checks `S·conj(S) = (−1)^w` on each weight block and that σ respects
    /// the multiplication table.
    pub fn validate_reality(&self) -> Result<()> {
        let s = &self.reality.as_ref().ok_or_else(|| ChartError::InvalidReality("no reality datum".into()))?.s;
        if s.rows() != 2 || s.cols() != 2 {
            return Err(ChartError::InvalidReality("S must be 2x2".into()));
        }
        let (m, n) = self.splitting;
        if m != n && (!s.get(0, 1).is_zero() || !s.get(1, 0).is_zero()) {
            return Err(ChartError::InvalidReality("S mixes generators of different weights".into()));
        }
        let sign = |w: usize| if w % 2 == 0 { GaussianRational::one() } else { -GaussianRational::one() };
        let expected = MatGR::from_rows(vec![
            vec![sign(m), GaussianRational::zero()],
            vec![GaussianRational::zero(), sign(n)],
        ])?;
        let residual = s.mul(&s.conj()).sub(&expected);
        if !residual.is_zero() {
            return Err(ChartError::InvalidReality(format!("S·conj(S) differs from (−1)^w by {residual}")));
        }
        for (x, y) in [(1, 1), (1, 2), (2, 2)] {
            let w = self.generator_weight(x) + self.generator_weight(y);
            let lhs = self.star(&self.basis_product(x, y), w, s);
            let rhs = self.mul(&self.star(&basis(x), self.generator_weight(x), s), &self.star(&basis(y), self.generator_weight(y), s));
            if lhs != rhs {
                return Err(ChartError::CurveNotReal);
            }
        }
        Ok(())
    }
}

/// `b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd`.
pub fn form_discriminant(a: &PolyGR, b: &PolyGR, c: &PolyGR, d: &PolyGR) -> PolyGR {
    let k = |n: i64| PolyGR::from_ints(&[n]);
    let terms = [
        &(b * b) * &(c * c),
        &k(-4) * &(a * &(c * &(c * c))),
        &k(-4) * &(&(b * &(b * b)) * d),
        &k(-27) * &(&(a * a) * &(d * d)),
        &k(18) * &(&(a * b) * &(c * d)),
    ];
    terms.iter().fold(PolyGR::zero(), |acc, t| &acc + t)
}

/// The cubic ring of `aX³ + bX²Y + cXY² + dY³` with splitting (3, 3).
pub fn algebra_from_binary_cubic(a: &PolyGR, b: &PolyGR, c: &PolyGR, d: &PolyGR) -> Result<CurveAlgebra> {
    for (index, x) in [a, b, c, d].into_iter().enumerate() {
        if let Some(degree) = x.degree().filter(|&g| g > 3) {
            return Err(ChartError::DegreeBoundViolated { index, degree, bound: 3 });
        }
    }
    if form_discriminant(a, b, c, d).is_zero() {
        return Err(ChartError::DegenerateForm);
    }
    let constants = Constants {
        p: -&(a * c),
        alpha: b.clone(),
        beta: -a,
        q: -&(a * d),
        gamma: PolyGR::zero(),
        delta: PolyGR::zero(),
        r: -&(b * d),
        epsilon: d.clone(),
        phi: -c,
    };
    CurveAlgebra::new((3, 3), constants)
}

/// The mixing matrix for [`real_binary_cubic`]: `u* = v`, `v* = −u`.
pub fn quaternionic_mixing() -> MatGR {
    MatGR::from_int_rows(&[&[0, 1], &[-1, 0]])
}

/// The form `(a, b, −b*, a*)` with its σ-structure.
pub fn real_binary_cubic(a: &PolyGR, b: &PolyGR) -> Result<CurveAlgebra> {
    let c = -&antipodal(b, 3);
    let d = antipodal(a, 3);
    Ok(algebra_from_binary_cubic(a, b, &c, &d)?.with_reality(quaternionic_mixing()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraInvariants {
    pub splitting: (usize, usize),
    pub genus: usize,
    pub h0_o2: usize,
    pub embeddable: bool,
    /// Affine degree of the trace-form discriminant; `None` when it vanishes.
    pub disc_degree: Option<usize>,
    /// Its degree as a section, `2(m + n)`.
    pub disc_weight: usize,
}

/// Multiplication by u and by v on the basis `(1, u, v)`.
pub fn regular_representation(r: &CurveAlgebra) -> Result<(MatrixPoly, MatrixPoly)> {
    r.require_associative()?;
    let (m, n) = r.splitting;
    let op = |g: usize, bound: usize| {
        let cols: Vec<Elem> = (0..3).map(|j| r.basis_product(g, j)).collect();
        MatrixPoly::from_entries(&Mat::from_fn(3, 3, |i, j| cols[j][i].clone()), bound)
    };
    let (mu, mv) = (op(1, m + n)?, op(2, 2 * n)?);
    debug_assert!(relation_residuals(r, &mu.entries(), &mv.entries()).iter().all(Mat::is_zero));
    Ok((mu, mv))
}

/// `det Tr(e_i e_j)` over the basis `(1, u, v)`.
pub fn algebra_discriminant(r: &CurveAlgebra) -> Result<PolyGR> {
    let (mu, mv) = regular_representation(r)?;
    let ops = [Mat::identity(3), mu.entries(), mv.entries()];
    let form = Mat::from_fn(3, 3, |i, j| ops[i].mul(&ops[j]).trace());
    Ok(form.det_leibniz())
}

pub fn algebra_invariants(r: &CurveAlgebra) -> Result<AlgebraInvariants> {
    r.require_associative()?;
    let (m, n) = r.splitting;
    let h0 = |d: i64| (d + 1).max(0) as usize;
    let h0_o2 = h0(2) + h0(2 - m as i64) + h0(2 - n as i64);
    Ok(AlgebraInvariants {
        splitting: (m, n),
        genus: m + n - 2,
        h0_o2,
        embeddable: h0_o2 >= 4,
        disc_degree: algebra_discriminant(r)?.degree(),
        disc_weight: 2 * (m + n),
    })
}

/// Commuting actions of u and v of degrees m and n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleModule {
    pub u: MatrixPoly,
    pub v: MatrixPoly,
}

/// An algebra together with a module over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleInstance {
    pub algebra: CurveAlgebra,
    pub module: TripleModule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleCheck {
    pub degrees_ok: bool,
    pub commutator_zero: bool,
    /// The u², uv and v² relations.
    pub relations_zero: [bool; 3],
}

impl ModuleCheck {
    pub fn valid(&self) -> bool {
        self.degrees_ok && self.commutator_zero && self.relations_zero.iter().all(|&b| b)
    }
}

fn relation_residuals(r: &CurveAlgebra, u: &Mat<PolyGR>, v: &Mat<PolyGR>) -> [Mat<PolyGR>; 3] {
    let c = &r.constants;
    let k = u.rows();
    let comb = |s: &PolyGR, a: &PolyGR, b: &PolyGR| {
        Mat::scalar(k, s).add(&u.map(|x| x * a)).add(&v.map(|x| x * b))
    };
    [
        u.mul(u).sub(&comb(&c.p, &c.alpha, &c.beta)),
        u.mul(v).sub(&comb(&c.q, &c.gamma, &c.delta)),
        v.mul(v).sub(&comb(&c.r, &c.epsilon, &c.phi)),
    ]
}

pub fn module_check(r: &CurveAlgebra, module: &TripleModule) -> ModuleCheck {
    let (m, n) = r.splitting;
    let (u, v) = (module.u.entries(), module.v.entries());
    let degrees_ok = module.u.k() == 3 && module.v.k() == 3 && module.u.d() == m && module.v.d() == n;
    if module.u.k() != module.v.k() {
        return ModuleCheck { degrees_ok, commutator_zero: false, relations_zero: [false; 3] };
    }
    let rel = relation_residuals(r, &u, &v);
    ModuleCheck {
        degrees_ok,
        commutator_zero: u.mul(&v) == v.mul(&u),
        relations_zero: [rel[0].is_zero(), rel[1].is_zero(), rel[2].is_zero()],
    }
}

fn require_module(r: &CurveAlgebra, module: &TripleModule) -> Result<()> {
    let check = module_check(r, module);
    if check.valid() {
        Ok(())
    } else {
        Err(ChartError::InvalidModule(format!("{check:?}")))
    }
}

/// The control algebra of a 3×3 quadratic datum: `u = A`, `v = A² + a₁A`.
fn control_algebra(a: &QuadraticDatum) -> Result<CurveAlgebra> {
    let (coeffs, _) = faddeev_leverrier(a);
    let (a1, a2, a3) = (&coeffs[0], &coeffs[1], &coeffs[2]);
    let constants = Constants {
        p: PolyGR::zero(),
        alpha: -a1,
        beta: PolyGR::one(),
        q: -a3,
        gamma: -a2,
        delta: PolyGR::zero(),
        r: -&(a1 * a3),
        epsilon: -a3,
        phi: -a2,
    };
    let mut alg = CurveAlgebra::new((2, 4), constants)?;
    alg.origin = Some(a.clone());
    let real = alg.clone().with_reality(MatGR::from_int_rows(&[&[-1, 0], &[0, 1]]));
    if real.validate_reality().is_ok() {
        alg = real;
    }
    Ok(alg)
}

/// The (2, 4) algebra and module of a 3×3 quadratic datum. The σ-structure
/// `u* = −u`, `v* = v` is attached when the curve is real.
pub fn derive_triple_from_quadratic(a: &QuadraticDatum) -> Result<(CurveAlgebra, TripleModule)> {
    if a.k() != 3 || a.d() != 2 {
        return Err(ChartError::Dimension(format!("expected a 3x3 quadratic datum, got k = {}, d = {}", a.k(), a.d())));
    }
    let alg = control_algebra(a)?;
    let a1 = &faddeev_leverrier(a).0[0];
    let v = a.mul(a).add(&a.mul_poly(a1, 2)?);
    let module = TripleModule { u: a.clone(), v };
    require_module(&alg, &module)?;
    Ok((alg, module))
}

/// Rank of `{I} ∪ {U_j} ∪ {V_j}` in the space of 3×3 matrices.
pub fn gen_petri_rank(r: &CurveAlgebra, module: &TripleModule) -> Result<usize> {
    require_module(r, module)?;
    let mut rows = vec![MatGR::identity(3).vec()];
    rows.extend(module.u.coeffs().iter().chain(module.v.coeffs()).map(MatGR::vec));
    Ok(MatGR::from_rows(rows)?.rank().min(9))
}

/// `X*` for a matrix polynomial read as a section of weight `d`.
fn star_matrix(x: &MatrixPoly) -> MatrixPoly {
    let w = x.d();
    let coeffs = (0..=w)
        .map(|j| {
            let c = x.coeff(w - j).conj();
            if (w - j) % 2 == 1 {
                c.neg()
            } else {
                c
            }
        })
        .collect();
    MatrixPoly::new(x.k(), w, coeffs).expect("same shape")
}

/// The σ-conjugate module `conj(S)·(U*, V*)`.
pub fn sigma_conjugate_module(r: &CurveAlgebra, module: &TripleModule) -> Result<TripleModule> {
    r.validate_reality()?;
    let s = r.reality.as_ref().map(|x| x.s.conj()).expect("validated");
    let (us, vs) = (star_matrix(&module.u), star_matrix(&module.v));
    let mix = |a: &GaussianRational, b: &GaussianRational, d: usize| -> MatrixPoly {
        let part = |c: &GaussianRational, x: &MatrixPoly, j: usize| {
            if c.is_zero() {
                MatGR::zeros(3, 3)
            } else {
                x.coeff(j).scale(c)
            }
        };
        let coeffs = (0..=d).map(|j| part(a, &us, j).add(&part(b, &vs, j))).collect();
        MatrixPoly::new(3, d, coeffs).expect("equal weights when mixed")
    };
    Ok(TripleModule { u: mix(s.get(0, 0), s.get(0, 1), us.d()), v: mix(s.get(1, 0), s.get(1, 1), vs.d()) })
}

/// Solves `H·B_j = X_jᵀ·H` for both actions and normalises H as in
/// [`crate::realform::gram_certificate`].
pub fn gen_gram(r: &CurveAlgebra, module: &TripleModule) -> Result<GramCertificate> {
    require_module(r, module)?;
    let conj = sigma_conjugate_module(r, module)?;
    let pairs: Vec<(&MatGR, &MatGR)> = conj
        .u
        .coeffs()
        .iter()
        .zip(module.u.coeffs())
        .chain(conj.v.coeffs().iter().zip(module.v.coeffs()))
        .collect();
    gram_from_pairs(&pairs)
}

/// All exact checks a search result must pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceCheck {
    pub module: ModuleCheck,
    pub petri_rank: usize,
    pub gram: Option<GramCertificate>,
    pub accepted: bool,
}

pub fn verify_instance(r: &CurveAlgebra, module: &TripleModule) -> InstanceCheck {
    let check = module_check(r, module);
    if !check.valid() {
        return InstanceCheck { module: check, petri_rank: 0, gram: None, accepted: false };
    }
    let petri_rank = gen_petri_rank(r, module).unwrap_or(0);
    let gram = gen_gram(r, module).ok();
    let accepted = petri_rank == 9 && gram.as_ref().is_some_and(|g| g.h.is_hermitian());
    InstanceCheck { module: check, petri_rank, gram, accepted }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchAttempt {
    pub seed: u64,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub splitting: (usize, usize),
    pub budget: usize,
    pub base_seed: u64,
    pub attempts: Vec<SearchAttempt>,
}

fn random_gr(rng: &mut ChaCha8Rng) -> GaussianRational {
    let re = rng.gen_range(-2i64..=2);
    let im = if rng.gen_bool(0.25) { rng.gen_range(-1i64..=1) } else { 0 };
    GaussianRational::gaussian(re, im)
}

/// A random U of degree m with the trace of the regular representation.
fn seed_u(r: &CurveAlgebra, rng: &mut ChaCha8Rng) -> MatrixPoly {
    let m = r.splitting.0;
    let trace = &r.constants.alpha + &r.constants.delta;
    let coeffs = (0..=m)
        .map(|j| {
            let mut x = Mat::from_fn(3, 3, |_, _| random_gr(rng));
            let rest = x.get(0, 0) + x.get(1, 1);
            x.set(2, 2, &trace.coeff(j) - &rest);
            x
        })
        .collect();
    MatrixPoly::new(3, m, coeffs).expect("3x3 coefficients")
}

/// Solves the uv and u² relations for V, which are linear once U is fixed.
fn solve_v(r: &CurveAlgebra, u: &MatrixPoly) -> Option<MatrixPoly> {
    let (m, n) = r.splitting;
    let c = &r.constants;
    let ue = u.entries();
    let rhs_uv = Mat::scalar(3, &c.q).add(&ue.map(|x| x * &c.gamma));
    let rhs_uu = ue.mul(&ue).sub(&Mat::scalar(3, &c.p)).sub(&ue.map(|x| x * &c.alpha));
    let nv = 9 * (n + 1);
    let top = (m + n).max(2 * m);
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for e in 0..=top {
        for i in 0..3 {
            for l in 0..3 {
                // (U − δ)V at ζ^e, entry (i, l)
                let mut row = vec![GaussianRational::zero(); nv + 1];
                for j in 0..=n.min(e) {
                    let ui = e - j;
                    for t in 0..3 {
                        if ui <= m {
                            row[j * 9 + t * 3 + l] += u.coeff(ui).get(i, t);
                        }
                    }
                    row[j * 9 + i * 3 + l] -= &c.delta.coeff(ui);
                }
                row[nv] = rhs_uv.get(i, l).coeff(e);
                rows.push(row);
                // βV at ζ^e
                let mut row = vec![GaussianRational::zero(); nv + 1];
                for j in 0..=n.min(e) {
                    row[j * 9 + i * 3 + l] += &c.beta.coeff(e - j);
                }
                row[nv] = rhs_uu.get(i, l).coeff(e);
                rows.push(row);
            }
        }
    }
    let (red, pivots) = rref_in(&Exact, &rows).expect("field arithmetic");
    if pivots.last() == Some(&nv) {
        return None;
    }
    let mut x = vec![GaussianRational::zero(); nv];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[nv].clone();
    }
    let coeffs = (0..=n).map(|j| MatGR::from_vec(3, 3, x[j * 9..j * 9 + 9].to_vec()).unwrap()).collect();
    Some(MatrixPoly::new(3, n, coeffs).expect("3x3 coefficients"))
}

fn attempt(r: &CurveAlgebra, seed: u64) -> (SearchAttempt, Option<TripleModule>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = seed_u(r, &mut rng);
    let Some(v) = solve_v(r, &u) else {
        return (SearchAttempt { seed, outcome: "uv and u² relations admit no common V".into() }, None);
    };
    let module = TripleModule { u, v };
    let check = verify_instance(r, &module);
    let outcome = if check.accepted {
        "accepted".to_string()
    } else if !check.module.commutator_zero {
        "U and V do not commute".to_string()
    } else if !check.module.valid() {
        "v² relation residual is nonzero".to_string()
    } else if check.petri_rank < 9 {
        format!("generalized Petri rank {} < 9", check.petri_rank)
    } else {
        "no hermitian intertwiner".to_string()
    };
    let found = check.accepted.then_some(module);
    (SearchAttempt { seed, outcome }, found)
}

/// Looks for a σ-real module with nondegenerate generalized Petri map.
/// Control algebras reuse their quadratic datum; otherwise `budget` random
/// seeds `seed, seed+1, …` are tried. Every returned module has passed
/// [`verify_instance`].
pub fn search_balanced_instance(r: &CurveAlgebra, budget: usize, seed: u64) -> Result<TripleModule> {
    r.require_associative()?;
    r.validate_reality()?;
    let report = |attempts| {
        ChartError::BudgetExhausted(Box::new(SearchReport { splitting: r.splitting, budget, base_seed: seed, attempts }))
    };
    if budget == 0 {
        return Err(report(Vec::new()));
    }
    if let Some(a) = &r.origin {
        let (_, module) = derive_triple_from_quadratic(a)?;
        if verify_instance(r, &module).accepted {
            return Ok(module);
        }
        let outcome = "control datum does not give an accepted module".to_string();
        return Err(report(vec![SearchAttempt { seed, outcome }]));
    }
    let results: Vec<(SearchAttempt, Option<TripleModule>)> =
        (0..budget as u64).into_par_iter().map(|i| attempt(r, seed.wrapping_add(i))).collect();
    let mut attempts = Vec::with_capacity(results.len());
    for (a, found) in results {
        if let Some(module) = found {
            return Ok(module);
        }
        attempts.push(a);
    }
    Err(report(attempts))
}

/// The all-zero algebra `u² = uv = v² = 0`.
pub fn trivial_algebra(splitting: (usize, usize)) -> Result<CurveAlgebra> {
    CurveAlgebra::new(splitting, Constants::zero())
}

pub fn constant_names() -> [&'static str; 9] {
    Constants::NAMES
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::realform::gram_certificate;
    use crate::spectral::{curve_from_datum, strongly_regular};
    use crate::exact::discriminant_eta;

    fn p(c: &[i64]) -> PolyGR {
        PolyGR::from_ints(c)
    }

    #[test]
    fn unit_form() {
        let alg = algebra_from_binary_cubic(&p(&[1]), &p(&[]), &p(&[]), &p(&[1])).unwrap();
        assert!(alg.is_associative());
        let u = basis(1);
        let v = basis(2);
        assert_eq!(alg.mul(&u, &v), [p(&[-1]), p(&[]), p(&[])]);
        assert_eq!(alg.mul(&u, &u), [p(&[]), p(&[]), p(&[-1])]);
        let (mu, mv) = regular_representation(&alg).unwrap();
        assert_eq!(mu.entries().mul(&mv.entries()), Mat::scalar(3, &p(&[-1])));
        assert_eq!(mu.entries().get(1, 0), &PolyGR::one());
    }

    #[test]
    fn dichotomy() {
        let alg = algebra_from_binary_cubic(&p(&[1, 0, 0, 1]), &p(&[0, 1]), &p(&[2, 0, 1]), &p(&[1, 1, 0, 1])).unwrap();
        let inv = algebra_invariants(&alg).unwrap();
        assert_eq!((inv.genus, inv.h0_o2, inv.embeddable), (4, 3, false));
        let (ctrl, _) = derive_triple_from_quadratic(&fix7()).unwrap();
        let inv = algebra_invariants(&ctrl).unwrap();
        assert_eq!((inv.splitting, inv.genus, inv.h0_o2, inv.embeddable), ((2, 4), 4, 4, true));
    }

    #[test]
    fn trace_form_is_form_discriminant() {
        let (a, b, c, d) = (p(&[1, 0, 0, 1]), p(&[0, 1]), p(&[2, 0, 1]), p(&[1, 1, 0, 1]));
        let alg = algebra_from_binary_cubic(&a, &b, &c, &d).unwrap();
        assert_eq!(algebra_discriminant(&alg).unwrap(), form_discriminant(&a, &b, &c, &d));
        let (ctrl, _) = derive_triple_from_quadratic(&fix7()).unwrap();
        let curve = curve_from_datum(&fix7()).unwrap().to_bipoly();
        assert_eq!(algebra_discriminant(&ctrl).unwrap(), discriminant_eta(&curve).unwrap());
    }

    #[test]
    fn degenerate_form() {
        // X³ has a triple root everywhere
        let r = algebra_from_binary_cubic(&p(&[1]), &p(&[]), &p(&[]), &p(&[]));
        assert!(matches!(r, Err(ChartError::DegenerateForm)));
    }

    #[test]
    fn control_fix7() {
        let (alg, module) = derive_triple_from_quadratic(&fix7()).unwrap();
        assert_eq!(module.u, fix7());
        assert_eq!(module.v.entries(), fix7().entries().mul(&fix7().entries()));
        assert!(module_check(&alg, &module).valid());
        assert_eq!(gen_petri_rank(&alg, &module).unwrap(), 9);
        let g = gen_gram(&alg, &module).unwrap();
        let h = gram_certificate(&fix7()).unwrap();
        assert_eq!((g.h.clone(), g.signature), (h.h, h.signature));
        assert_eq!(g.signature, (3, 0));
        assert!(search_balanced_instance(&alg, 4, 0).is_ok());
    }

    #[test]
    fn zeroed_middle_coefficient() {
        let a = MatrixPoly::new(3, 2, vec![fix7().coeff(0).clone(), MatGR::zeros(3, 3), fix7().coeff(2).clone()]).unwrap();
        let (alg, module) = derive_triple_from_quadratic(&a).unwrap();
        let rank = gen_petri_rank(&alg, &module).unwrap();
        assert!(rank < 9);
        assert!(!strongly_regular(&a).verdict);
    }

    #[test]
    fn zero_module() {
        let alg = trivial_algebra((3, 3)).unwrap();
        let z = MatrixPoly::zero(3, 3);
        assert_eq!(gen_petri_rank(&alg, &TripleModule { u: z.clone(), v: z }).unwrap(), 1);
    }

    #[test]
    fn real_cubic() {
        let alg = real_binary_cubic(&p(&[1, 1, 0, 2]), &p(&[0, 1, 1])).unwrap();
        alg.validate_reality().unwrap();
        let wrong = alg.clone().with_reality(MatGR::from_int_rows(&[&[0, -1], &[1, 0]]));
        assert!(matches!(wrong.validate_reality(), Err(ChartError::CurveNotReal)));
        let split = alg.clone().with_reality(MatGR::from_int_rows(&[&[1, 0], &[0, 1]]));
        assert!(matches!(split.validate_reality(), Err(ChartError::InvalidReality(_))));
        match search_balanced_instance(&alg, 0, 1) {
            Err(ChartError::BudgetExhausted(rep)) => assert!(rep.attempts.is_empty()),
            other => panic!("{other:?}"),
        }
        match search_balanced_instance(&alg, 3, 1) {
            Ok(m) => assert!(verify_instance(&alg, &m).accepted),
            Err(ChartError::BudgetExhausted(rep)) => assert_eq!(rep.attempts.len(), 3),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn serde_round_trip() {
        let (alg, module) = derive_triple_from_quadratic(&fix7()).unwrap();
        let s = serde_json::to_string(&alg).unwrap();
        assert_eq!(serde_json::from_str::<CurveAlgebra>(&s).unwrap(), alg);
        let s = serde_json::to_string(&module).unwrap();
        assert_eq!(serde_json::from_str::<TripleModule>(&s).unwrap(), module);
    }
}
