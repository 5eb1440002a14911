//! Spectral curves of quadratic data and the pointwise and global regularity
//! conditions on the datum.
//!
//! A quadratic datum `A(ζ) = A₀ + A₁ζ + A₂ζ²` is a section of `gl(k) ⊗ O(2)`
//! over ℙ¹. Its spectral curve `det(ηI − A(ζ)) = 0` lives in the total space
//! of `O(2)` and is a degree-k cover of ℙ¹; the coefficient `a_i` of
//! `η^{k−i}` is a section of `O(2i)`. The real structure is the lift
//! `(ζ, η) ↦ (−1/ζ̄, −η̄/ζ̄²)` of the antipodal map. Under it, a datum is real
//! when `A₁ = A₁†` and `A₂ = −A₀†`, and a curve is real when every
//! coefficient satisfies `c_{i,2i−j} = (−1)^{i+j} conj(c_{i,j})`.

use serde::{Deserialize, Serialize};

use crate::error::{ChartError, Result};
use crate::exact::field::{over_base, rank_in, Arith, Dyn, Exact};
use crate::exact::{discriminant_eta, eta_gcd_degree, BiPoly, GaussianRational, Mat, MatGR, PolyGR};
use crate::polymat::{centralizer_dim, mp_char_poly, mp_power, MatrixPoly, Point, QuadraticDatum};

/// `P(ζ, η) = η^k + Σ_{i=1}^k a_i(ζ) η^{k−i}` with `deg a_i ≤ 2i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralCurve {
    k: usize,
    a: Vec<PolyGR>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralCurveWire {
    k: usize,
    a: Vec<PolyGR>,
}

impl Serialize for SpectralCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpectralCurveWire { k: self.k, a: self.a.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectralCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SpectralCurveWire::deserialize(d)?;
        SpectralCurve::new(w.k, w.a).map_err(serde::de::Error::custom)
    }
}

impl SpectralCurve {
    pub fn new(k: usize, a: Vec<PolyGR>) -> Result<Self> {
        if a.len() != k {
            return Err(ChartError::Dimension(format!("expected {k} coefficients, got {}", a.len())));
        }
        for (idx, p) in a.iter().enumerate() {
            let i = idx + 1;
            if let Some(deg) = p.degree().filter(|&deg| deg > 2 * i) {
                return Err(ChartError::DegreeBoundViolated { index: i, degree: deg, bound: 2 * i });
            }
        }
        Ok(SpectralCurve { k, a })
    }

    /// Reads the coefficients off a polynomial monic in η.
    pub fn from_bipoly(p: &BiPoly) -> Result<Self> {
        if !p.is_monic_in_eta() {
            return Err(ChartError::NotMonic);
        }
        let k = p.eta_degree().unwrap();
        Self::new(k, (1..=k).map(|i| p.eta_coeff(k - i)).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `a_i` for `1 ≤ i ≤ k`.
    pub fn a(&self, i: usize) -> &PolyGR {
        &self.a[i - 1]
    }

    pub fn coefficients(&self) -> &[PolyGR] {
        &self.a
    }

    pub fn to_bipoly(&self) -> BiPoly {
        let k = self.k;
        let mut eta = vec![PolyGR::zero(); k + 1];
        eta[k] = PolyGR::one();
        for (idx, p) in self.a.iter().enumerate() {
            eta[k - 1 - idx] = p.clone();
        }
        BiPoly::from_eta_coeffs(eta)
    }

    /// The same curve in the chart at ∞: `ã_i(ζ) = ζ^{2i} a_i(1/ζ)`.
    pub fn at_infinity(&self) -> SpectralCurve {
        let a = self.a.iter().enumerate().map(|(idx, p)| p.reverse(2 * (idx + 1))).collect();
        SpectralCurve { k: self.k, a }
    }
}

/// Which of the coefficient equations of a real datum hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DatumReality {
    pub quadratic: bool,
    pub a1_hermitian: bool,
    pub a2_is_minus_a0_adjoint: bool,
}

impl DatumReality {
    pub fn verdict(&self) -> bool {
        self.quadratic && self.a1_hermitian && self.a2_is_minus_a0_adjoint
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.quadratic {
            out.push("degree bound is not 2");
        }
        if !self.a1_hermitian {
            out.push("A1 != A1^H");
        }
        if !self.a2_is_minus_a0_adjoint {
            out.push("A2 != -A0^H");
        }
        out
    }
}

fn check_anti_hermitian(t: &MatGR, name: &'static str) -> Result<()> {
    if !t.is_square() || t.adjoint() != t.neg() {
        return Err(ChartError::NotAntiHermitian(name));
    }
    Ok(())
}

/// `A = (T₂ + iT₃) + 2iT₁ζ + (T₂ − iT₃)ζ²` from anti-hermitian `T₁, T₂, T₃`.
pub fn datum_from_triple(t1: &MatGR, t2: &MatGR, t3: &MatGR) -> Result<QuadraticDatum> {
    check_anti_hermitian(t1, "T1")?;
    check_anti_hermitian(t2, "T2")?;
    check_anti_hermitian(t3, "T3")?;
    if t1.rows() != t2.rows() || t2.rows() != t3.rows() {
        return Err(ChartError::Dimension("T1, T2, T3 differ in size".into()));
    }
    let i = GaussianRational::i();
    let it3 = t3.scale(&i);
    MatrixPoly::quadratic(t2.add(&it3), t1.scale(&GaussianRational::gaussian(0, 2)), t2.sub(&it3))
}

/// Inverse of [`datum_from_triple`] on real data.
pub fn triple_from_datum(a: &QuadraticDatum) -> (MatGR, MatGR, MatGR) {
    let half = GaussianRational::from_ratios(1, 2, 0, 1);
    let minus_half_i = GaussianRational::from_ratios(0, 1, -1, 2);
    let t1 = a.coeff(1).scale(&minus_half_i);
    let t2 = a.coeff(0).add(a.coeff(2)).scale(&half);
    let t3 = a.coeff(0).sub(a.coeff(2)).scale(&minus_half_i);
    (t1, t2, t3)
}

pub fn datum_reality_check(a: &QuadraticDatum) -> DatumReality {
    if a.d() != 2 {
        return DatumReality { quadratic: false, a1_hermitian: false, a2_is_minus_a0_adjoint: false };
    }
    DatumReality {
        quadratic: true,
        a1_hermitian: a.coeff(1).is_hermitian(),
        a2_is_minus_a0_adjoint: *a.coeff(2) == a.coeff(0).adjoint().neg(),
    }
}

/// Characteristic polynomial of a quadratic datum as a spectral curve.
pub fn curve_from_datum(a: &QuadraticDatum) -> Result<SpectralCurve> {
    if a.d() != 2 {
        return Err(ChartError::Dimension(format!("expected a quadratic datum, got degree bound {}", a.d())));
    }
    SpectralCurve::from_bipoly(&mp_char_poly(a))
}

/// Coefficients `(i, j)` violating `c_{i,2i−j} = (−1)^{i+j} conj(c_{i,j})`.
pub fn curve_reality_violations(s: &SpectralCurve) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=s.k() {
        let a = s.a(i);
        for j in 0..=2 * i {
            let mut expect = a.coeff(j).conj();
            if (i + j) % 2 == 1 {
                expect = -expect;
            }
            if a.coeff(2 * i - j) != expect {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn curve_reality_check(s: &SpectralCurve) -> bool {
    curve_reality_violations(s).is_empty()
}

/// Genus, discriminant and branch data of a spectral curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub k: usize,
    /// `(k−1)²` for reduced curves; `None` otherwise.
    pub genus: Option<usize>,
    /// `1 − χ(O_C)` from the splitting `π_*O_C = ⊕ O(−2j)`.
    pub genus_pushforward: i64,
    /// From adjunction on the Hirzebruch surface compactifying the total space of O(2).
    pub genus_adjunction: i64,
    /// Riemann–Hurwitz count, when every branch point is simple.
    pub genus_riemann_hurwitz: Option<i64>,
    pub disc: PolyGR,
    /// Zeros of the discriminant on ℙ¹ with multiplicity, the point ∞ read in
    /// the second chart. `None` when the discriminant vanishes identically.
    pub branch_degree: Option<usize>,
    /// Vanishing order of the discriminant at ∞.
    pub branch_order_at_infinity: Option<usize>,
    /// Distinct branch points, counting ∞.
    pub distinct_branch_points: Option<usize>,
    pub reduced: bool,
}

pub fn curve_invariants(s: &SpectralCurve) -> Result<CurveInvariants> {
    let k = s.k() as i64;
    let p = s.to_bipoly();
    let disc = discriminant_eta(&p)?;
    let gcd_degree = eta_gcd_degree(&p, &p.derivative_eta())?;
    let reduced = gcd_degree == 0;
    if reduced == disc.is_zero() {
        return Err(ChartError::InvalidRing(format!(
            "discriminant {disc} disagrees with the gcd test (gcd degree {gcd_degree})"
        )));
    }
    let genus_pushforward = 1 - (0..k).map(|j| 1 - 2 * j).sum::<i64>();
    // C ~ kE₀ + 2kf with E₀² = −2, E₀·f = 1, f² = 0 and K = −2E₀ − 4f
    let (ce, cf, ke, kf) = (k, 2 * k, -2, -4);
    let dot = |a1: i64, b1: i64, a2: i64, b2: i64| -2 * a1 * a2 + a1 * b2 + b1 * a2;
    let genus_adjunction = 1 + (dot(ce, cf, ce, cf) + dot(ke, kf, ce, cf)) / 2;

    let (mut branch_degree, mut at_inf, mut distinct, mut rh) = (None, None, None, None);
    if reduced {
        let disc_inf = discriminant_eta(&s.at_infinity().to_bipoly())?;
        let ord_inf = disc_inf.valuation().expect("nonzero discriminant at infinity");
        let affine = disc.degree().unwrap();
        branch_degree = Some(affine + ord_inf);
        at_inf = Some(ord_inf);
        let sqf = disc.squarefree_part()?;
        let n_distinct = sqf.degree().unwrap() + usize::from(ord_inf > 0);
        distinct = Some(n_distinct);
        if disc.is_squarefree() && ord_inf <= 1 {
            rh = Some(1 - k + n_distinct as i64 / 2);
        }
    }
    let genus = if reduced && genus_pushforward == genus_adjunction && rh.is_none_or(|g| g == genus_pushforward) {
        Some(genus_pushforward as usize)
    } else if reduced {
        return Err(ChartError::InvalidRing("genus computations disagree".into()));
    } else {
        None
    };
    Ok(CurveInvariants {
        k: s.k(),
        genus,
        genus_pushforward,
        genus_adjunction,
        genus_riemann_hurwitz: rh,
        disc,
        branch_degree,
        branch_order_at_infinity: at_inf,
        distinct_branch_points: distinct,
        reduced,
    })
}

/// Whether `A(ζ₀)` is nonderogatory, decided by centraliser dimension. For a
/// root-of point this requires every root to pass.
pub fn regular_at(a: &MatrixPoly, point: &Point) -> Result<bool> {
    Ok(centralizer_dim(a, point)? == a.k())
}

fn mat_mul_in<R: Arith>(ctx: &R, a: &[Vec<R::E>], b: &[Vec<R::E>]) -> Vec<Vec<R::E>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(ctx.zero(), |acc, l| ctx.add(&acc, &ctx.mul(&a[i][l], &b[l][j]))))
                .collect()
        })
        .collect()
}

/// Rank of `vec I, vec A, …, vec A^{k−1}`; equals k iff A is nonderogatory.
pub fn krylov_rank_in<R: Arith>(ctx: &R, a: &[Vec<R::E>]) -> Dyn<usize> {
    let k = a.len();
    let mut power: Vec<Vec<R::E>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect()).collect();
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        rows.push(power.iter().flatten().cloned().collect::<Vec<_>>());
        power = mat_mul_in(ctx, &power, a);
    }
    rank_in(ctx, &rows)
}

/// A point checked during the global regularity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `None` stands for the generic point of ℙ¹.
    pub point: Option<Point>,
    pub regular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    Exact,
}

/// Outcome of [`regular_everywhere`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityCertificate {
    pub verdict: bool,
    pub mode: CertificateMode,
    pub witnesses: Vec<Witness>,
    /// Set when the spectral curve is not reduced.
    pub non_reduced_warning: bool,
    /// Whether the wedge of `I, A, …, A^{k−1}` has the same failure locus.
    pub wedge_agrees: bool,
}

impl RegularityCertificate {
    pub fn failures(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| !w.regular)
    }
}

/// The point for a monic modulus: a plain value when it is linear.
pub fn point_of_modulus(f: &PolyGR) -> Point {
    if f.degree() == Some(1) {
        Point::Value(-&f.monic().coeff(0))
    } else {
        Point::RootOf(f.monic())
    }
}

/// Finite points where `A(ζ)` may fail to be nonderogatory: the squarefree
/// discriminant, or the wedge content when the discriminant vanishes
/// identically. `None` means the wedge vanishes identically, so `A(ζ)` is
/// derogatory at every ζ.
pub fn regularity_suspects(a: &QuadraticDatum) -> Result<Option<PolyGR>> {
    let disc = discriminant_eta(&mp_char_poly(a))?;
    if disc.is_zero() {
        regularity_suspects_from(&disc, &wedge_content(a))
    } else {
        Ok(Some(disc.squarefree_part()?))
    }
}

fn regularity_suspects_from(disc: &PolyGR, wedge: &WedgeContent) -> Result<Option<PolyGR>> {
    Ok(if !disc.is_zero() {
        Some(disc.squarefree_part()?)
    } else if !wedge.content.is_zero() {
        Some(wedge.content.squarefree_part()?)
    } else {
        None
    })
}

/// Decides whether `A(ζ)` is nonderogatory for every ζ ∈ ℙ¹. Eigenvalues can
/// only collide over the zeros of the discriminant and at ∞; each squarefree
/// factor of the discriminant is tested in its quotient ring, refined wherever
/// the roots disagree. When the discriminant vanishes identically the zeros
/// of the wedge content are the suspects instead.
pub fn regular_everywhere(a: &QuadraticDatum) -> Result<RegularityCertificate> {
    let k = a.k();
    let p = mp_char_poly(a);
    let disc = discriminant_eta(&p)?;
    let wedge = wedge_content(a);

    let mut witnesses = Vec::new();
    let suspects = regularity_suspects_from(&disc, &wedge)?;
    let mut verdict = true;
    match suspects {
        None => {
            // the generic value is already derogatory
            verdict = false;
            witnesses.push(Witness { point: None, regular: false });
        }
        Some(f) if f.degree().is_some_and(|deg| deg > 0) => {
            let rows = a.entries().to_rows();
            let pieces = over_base(&f, |r| {
                let local: Vec<Vec<PolyGR>> = rows.iter().map(|row| row.iter().map(|x| r.reduce(x)).collect()).collect();
                krylov_rank_in(r, &local)
            })?;
            for (m, rank) in pieces {
                verdict &= rank == k;
                witnesses.push(Witness { point: Some(point_of_modulus(&m)), regular: rank == k });
            }
        }
        Some(_) => {}
    }
    let inf_rank = krylov_rank_in(&Exact, &a.at_infinity().to_rows()).unwrap_or(0);
    verdict &= inf_rank == k;
    witnesses.push(Witness { point: Some(Point::Infinity), regular: inf_rank == k });

    let wedge_regular = !wedge.content.is_zero() && wedge.content.is_constant() && wedge.order_at_infinity == 0;
    Ok(RegularityCertificate {
        verdict,
        mode: CertificateMode::Exact,
        witnesses,
        non_reduced_warning: disc.is_zero(),
        wedge_agrees: wedge_regular == verdict,
    })
}

/// Scalar content of the wedge `I ∧ A(ζ) ∧ … ∧ A(ζ)^{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeContent {
    /// Homogeneous degree of the wedge, `d·k(k−1)/2`.
    pub weight: usize,
    /// Monic gcd of the Plücker coordinates; zero if they all vanish.
    pub content: PolyGR,
    /// Largest affine degree among the coordinates.
    pub max_degree: Option<usize>,
    /// Common vanishing order at ∞.
    pub order_at_infinity: usize,
}

impl WedgeContent {
    /// Degree of the content as a section on ℙ¹.
    pub fn homogeneous_content_degree(&self) -> Option<usize> {
        self.content.degree().map(|d| d + self.order_at_infinity)
    }
}

/// k×k minors of the matrix with rows `vec A^i`, `0 ≤ i < k`.
pub fn wedge_coordinates(a: &MatrixPoly) -> Vec<PolyGR> {
    let k = a.k();
    let mut powers = vec![Mat::<PolyGR>::identity(k)];
    let entries = a.entries();
    for _ in 1..k {
        let next = powers.last().unwrap().mul(&entries);
        powers.push(next);
    }
    let rows: Vec<Vec<PolyGR>> = powers.iter().map(Mat::vec).collect();
    let mut out = Vec::new();
    for cols in combinations(k * k, k) {
        let m = Mat::from_fn(k, k, |r, c| rows[r][cols[c]].clone());
        out.push(m.det_bareiss());
    }
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn wedge_content(a: &MatrixPoly) -> WedgeContent {
    let k = a.k();
    let weight = a.d() * k * (k - 1) / 2;
    let coords = wedge_coordinates(a);
    let content = coords.iter().fold(PolyGR::zero(), |g, c| g.gcd(c));
    let max_degree = coords.iter().filter_map(PolyGR::degree).max();
    let order_at_infinity = max_degree.map_or(0, |m| weight - m);
    WedgeContent { weight, content, max_degree, order_at_infinity }
}

/// Degree of the centraliser bundle: minus the homogeneous degree of the wedge
/// after its content is removed. Equals `k − k²` on regular data.
pub fn centralizer_bundle_degree(a: &QuadraticDatum) -> Result<i64> {
    if !regular_everywhere(a)?.verdict {
        return Err(ChartError::NotRegularEverywhere);
    }
    let w = wedge_content(a);
    let c = w.homogeneous_content_degree().ok_or(ChartError::NotRegularEverywhere)?;
    if c > 0 {
        let mut content = w.content.to_string();
        if w.order_at_infinity > 0 {
            content.push_str(&format!(" (order {} at inf)", w.order_at_infinity));
        }
        return Err(ChartError::ContentNotRemovable(content));
    }
    Ok(-((w.weight - c) as i64))
}

/// Ranks behind the strong-regularity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongRegularity {
    pub verdict: bool,
    /// Rank of `{I}` together with all ζ-coefficients of `A^i`, `1 ≤ i ≤ k−1`.
    pub definition_rank: usize,
    /// The same span without `I`.
    pub remark_rank: usize,
}

/// Coefficient matrices of `A^i`, `1 ≤ i ≤ k − 1`, in order of i then ζ-degree.
pub fn power_coefficient_matrices(a: &MatrixPoly) -> Vec<MatGR> {
    let mut out = Vec::new();
    for i in 1..a.k() {
        out.extend(mp_power(a, i).expect("power within range").coeffs().iter().cloned());
    }
    out
}

pub fn strongly_regular(a: &QuadraticDatum) -> StrongRegularity {
    let k = a.k();
    let coeffs = power_coefficient_matrices(a);
    let rows: Vec<Vec<GaussianRational>> = coeffs.iter().map(Mat::vec).collect();
    let remark_rank = if rows.is_empty() { 0 } else { MatGR::from_rows(rows.clone()).unwrap().rank() };
    let mut with_id = vec![MatGR::identity(k).vec()];
    with_id.extend(rows);
    let definition_rank = MatGR::from_rows(with_id).unwrap().rank();
    StrongRegularity { verdict: definition_rank == k * k, definition_rank, remark_rank }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointCentralizer {
    pub dim: usize,
    pub connected: bool,
}

/// Dimension of `{X : [X, A(ζ)] = 0 for all ζ}`; the curve is connected iff it is 1.
pub fn joint_centralizer_dim(a: &QuadraticDatum) -> Result<JointCentralizer> {
    if !regular_everywhere(a)?.verdict {
        return Err(ChartError::NotRegularEverywhere);
    }
    let k = a.k();
    let mut rows = Vec::new();
    for c in a.coeffs() {
        rows.extend(crate::polymat::sylvester_rows(&Exact, &c.to_rows()));
    }
    let rank = MatGR::from_rows(rows).unwrap().rank();
    let dim = k * k - rank;
    Ok(JointCentralizer { dim, connected: dim == 1 })
}
