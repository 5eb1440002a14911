//! Reality of the line bundle, its hermitian form, and chart certification.
//!
//! For a quadratic datum `A` the σ-conjugate `B(ζ) = −ζ² conj(A(−1/ζ̄))`
//! presents the conjugate pullback of the module. The bundle is real when a
//! constant `H` intertwines it with the transposed (dual) module,
//! `H B(ζ) = A(ζ)ᵀ H`. For reduced connected curves such `H` is unique up to
//! scale and can be rescaled to be hermitian; the Gram matrix of the invariant
//! form is `G = conj(H)`, and its signature names the real form.

use serde::Serialize;

use crate::error::{ChartError, Result};
use crate::exact::field::nullspace;
use crate::exact::{hermitian_signature, BiPoly, GaussianRational, Mat, MatGR, Ring};
use crate::linebundle::petri_strongreg_crosscheck;
use crate::polymat::{mp_adjugate, MatrixPoly, QuadraticDatum};
use crate::spectral::{
    curve_from_datum, curve_invariants, curve_reality_check, datum_reality_check, joint_centralizer_dim,
    regular_everywhere, strongly_regular,
};

/// `B_j = (−1)^{j+1} conj(A_{2−j})`.
pub fn sigma_conjugate(a: &QuadraticDatum) -> Result<MatrixPoly> {
    if a.d() != 2 {
        return Err(ChartError::Dimension(format!("expected a quadratic datum, got degree bound {}", a.d())));
    }
    let b = (0..=2)
        .map(|j| {
            let c = a.coeff(2 - j).conj();
            if j % 2 == 0 {
                c.neg()
            } else {
                c
            }
        })
        .collect();
    MatrixPoly::new(a.k(), 2, b)
}

/// Rows of the linear system `H X − Yᵀ H = 0` in the row-major entries of H.
pub(crate) fn intertwiner_rows(x: &MatGR, y: &MatGR) -> Vec<Vec<GaussianRational>> {
    let k = x.rows();
    let mut rows = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let mut row = vec![GaussianRational::zero(); k * k];
            for l in 0..k {
                row[a * k + l] += x.get(l, b);
                row[l * k + b] -= y.get(l, a);
            }
            rows.push(row);
        }
    }
    rows
}

/// Solution space of `H X_j = Y_jᵀ H` for all j; returns its dimension and
/// one nonzero solution.
pub(crate) fn solve_pairs(pairs: &[(&MatGR, &MatGR)]) -> (usize, Option<MatGR>) {
    let k = pairs[0].0.rows();
    let rows: Vec<Vec<GaussianRational>> = pairs.iter().flat_map(|(x, y)| intertwiner_rows(x, y)).collect();
    let kernel = nullspace(&MatGR::from_rows(rows).expect("rectangular system"));
    let h = kernel.first().map(|v| MatGR::from_vec(k, k, v.clone()).unwrap());
    (kernel.len(), h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Intertwiner {
    pub h: Option<MatGR>,
    pub solution_dim: usize,
}

/// Solves `H B_j = A_jᵀ H`, `j = 0, 1, 2`, with `B` the σ-conjugate.
pub fn solve_intertwiner(a: &QuadraticDatum) -> Result<Intertwiner> {
    if !curve_reality_check(&curve_from_datum(a)?) {
        return Err(ChartError::CurveNotReal);
    }
    let b = sigma_conjugate(a)?;
    let pairs: Vec<(&MatGR, &MatGR)> = (0..=2).map(|j| (b.coeff(j), a.coeff(j))).collect();
    let (solution_dim, h) = solve_pairs(&pairs);
    Ok(Intertwiner { h, solution_dim })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramCertificate {
    /// Hermitian intertwiner.
    pub h: MatGR,
    /// Gram matrix of the invariant form, `conj(h)`.
    pub gram: MatGR,
    pub signature: (usize, usize),
    pub nullity: usize,
    /// Scalar μ with `h = μ·c·H₀` for the raw solution `H₀` and a real `c`.
    pub normalization: GaussianRational,
    /// `λ` with `H₀† = λ H₀`.
    pub lambda: GaussianRational,
    pub solution_dim: usize,
    pub definite: bool,
    pub real_form_label: String,
}

/// Rescales a solution of `H† = λH` to a hermitian matrix whose first nonzero
/// diagonal entry is 1. Returns the matrix, `λ` and the complex factor used.
pub fn hermitianize(h0: &MatGR) -> Result<(MatGR, GaussianRational, GaussianRational)> {
    let k = h0.rows();
    let (i, j) = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .find(|&(i, j)| !h0.get(i, j).is_zero())
        .ok_or_else(|| ChartError::Dimension("zero intertwiner".into()))?;
    let lambda = &h0.get(j, i).conj() / h0.get(i, j);
    let adj = h0.adjoint();
    if adj != h0.scale(&lambda) {
        let (r, c) = (0..k)
            .flat_map(|r| (0..k).map(move |c| (r, c)))
            .find(|&(r, c)| *adj.get(r, c) != h0.get(r, c) * &lambda)
            .unwrap();
        return Err(ChartError::NotHermitian { row: r, col: c });
    }
    // (1+λ)H₀ is hermitian when |λ| = 1; λ = −1 needs i instead
    let minus_one = -GaussianRational::one();
    let mu = if lambda == minus_one { GaussianRational::i() } else { &GaussianRational::one() + &lambda };
    let mut h = h0.scale(&mu);
    if let Some(d) = (0..k).map(|t| h.get(t, t).clone()).find(|d| !d.is_zero()) {
        let s = d.inv().unwrap();
        h = h.scale(&s);
        return Ok((h, lambda, &mu * &s));
    }
    Ok((h, lambda, mu))
}

fn label(p: usize, q: usize, z: usize) -> String {
    let (hi, lo) = (p.max(q), p.min(q));
    match (lo, z) {
        (0, 0) => format!("U({hi})"),
        (_, 0) => format!("U({hi},{lo})"),
        _ => format!("U({hi},{lo}) degenerate rank {}", p + q),
    }
}

fn certificate_from_solution(h0: &MatGR, solution_dim: usize) -> Result<GramCertificate> {
    let (h, lambda, normalization) = hermitianize(h0)?;
    let (p, q, z) = hermitian_signature(&h)?;
    Ok(GramCertificate {
        gram: h.conj(),
        h,
        signature: (p, q),
        nullity: z,
        normalization,
        lambda,
        solution_dim,
        definite: z == 0 && (p == 0 || q == 0),
        real_form_label: label(p, q, z),
    })
}

pub fn gram_certificate(a: &QuadraticDatum) -> Result<GramCertificate> {
    let sol = solve_intertwiner(a)?;
    match (sol.solution_dim, sol.h) {
        (1, Some(h0)) => certificate_from_solution(&h0, 1),
        (n, _) => Err(ChartError::NotUniquelyIntertwined(n)),
    }
}

/// Shared entry point for module data with several coefficient pairs.
pub(crate) fn gram_from_pairs(pairs: &[(&MatGR, &MatGR)]) -> Result<GramCertificate> {
    match solve_pairs(pairs) {
        (1, Some(h0)) => certificate_from_solution(&h0, 1),
        (n, _) => Err(ChartError::NotUniquelyIntertwined(n)),
    }
}

/// The product section `b = t†·G·adj(ηI − A)·s` with its checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSection {
    pub b: BiPoly,
    /// Coefficient of `η^{k−1}`.
    pub gamma: GaussianRational,
    /// `t†·G·s`.
    pub expected_gamma: GaussianRational,
    pub gamma_ok: bool,
    /// `σ*b_{s,t} = κ·b_{t,s}`, when b is nonzero and such a sign exists.
    pub kappa: Option<i8>,
}

/// `(−1)^{k−1} ζ^{2k−2} conj(b(−1/ζ̄, −η̄/ζ̄²))`.
pub fn sigma_pullback_section(b: &BiPoly, k: usize) -> Result<BiPoly> {
    let w = 2 * k - 2;
    let mut terms = Vec::new();
    for (m, l, c) in b.terms() {
        if 2 * m + l > w {
            return Err(ChartError::DegreeProfileViolated(m));
        }
        let mut v = c.conj();
        if (m + l + k - 1) % 2 == 1 {
            v = -v;
        }
        terms.push((m, w - 2 * m - l, v));
    }
    Ok(BiPoly::from_terms(terms))
}

fn pairing(adj: &Mat<BiPoly>, gram: &MatGR, s: &[GaussianRational], t: &[GaussianRational]) -> (BiPoly, GaussianRational) {
    let k = s.len();
    let covector: Vec<GaussianRational> =
        (0..k).map(|c| (0..k).fold(GaussianRational::zero(), |acc, r| &acc + &(&t[r].conj() * gram.get(r, c)))).collect();
    let mut b = BiPoly::zero();
    for r in 0..k {
        for c in 0..k {
            let w = &covector[r] * &s[c];
            if !w.is_zero() {
                b = Ring::add(&b, &adj.get(r, c).scale(&w));
            }
        }
    }
    let expected = covector.iter().zip(s).fold(GaussianRational::zero(), |acc, (x, y)| &acc + &(x * y));
    (b, expected)
}

pub fn product_section(a: &QuadraticDatum, gram: &MatGR, s: &[GaussianRational], t: &[GaussianRational]) -> Result<ProductSection> {
    let k = a.k();
    if s.len() != k || t.len() != k || gram.rows() != k || gram.cols() != k {
        return Err(ChartError::Dimension("vectors and Gram matrix must have size k".into()));
    }
    let adj = mp_adjugate(a);
    let (b, expected_gamma) = pairing(&adj, gram, s, t);
    for (m, l, _) in b.terms() {
        if l > 2 * (k - 1 - m) {
            return Err(ChartError::DegreeProfileViolated(m));
        }
    }
    let top = b.eta_coeff(k - 1);
    if top.degree().is_some_and(|d| d > 0) {
        return Err(ChartError::DegreeProfileViolated(k - 1));
    }
    let gamma = top.coeff(0);
    let sigma = sigma_pullback_section(&b, k)?;
    let (swapped, _) = pairing(&adj, gram, t, s);
    let kappa = if b.is_zero() {
        None
    } else if sigma == swapped {
        Some(1)
    } else if sigma == Ring::neg(&swapped) {
        Some(-1)
    } else {
        None
    };
    Ok(ProductSection { gamma_ok: gamma == expected_gamma, b, gamma, expected_gamma, kappa })
}

/// `c` with `x = c·y`, if any.
pub fn proportionality(x: &MatGR, y: &MatGR) -> Option<GaussianRational> {
    let idx = y.entries().iter().position(|e| !e.is_zero())?;
    let c = &x.entries()[idx] / &y.entries()[idx];
    (y.scale(&c) == *x).then_some(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transport {
    pub conjugated: MatrixPoly,
    /// `g^{−†} G g^{−1}`.
    pub expected_gram: MatGR,
    pub solved: GramCertificate,
    pub gram_matches: bool,
    pub signature_preserved: bool,
}

/// Conjugates the datum by g and checks the Gram matrix transports by congruence.
pub fn conjugation_transport(a: &QuadraticDatum, g: &MatGR) -> Result<Transport> {
    let before = gram_certificate(a)?;
    let conjugated = a.conjugate_by(g)?;
    let gi = g.inverse().ok_or_else(|| ChartError::Dimension("conjugating matrix is singular".into()))?;
    let expected_gram = gi.adjoint().mul(&before.gram).mul(&gi);
    let solved = gram_certificate(&conjugated)?;
    let gram_matches = proportionality(&solved.gram, &expected_gram).is_some();
    let signature_preserved = {
        let (p, q) = before.signature;
        let (p2, q2) = solved.signature;
        (p.max(q), p.min(q)) == (p2.max(q2), p2.min(q2))
    };
    Ok(Transport { conjugated, expected_gram, solved, gram_matches, signature_preserved })
}

/// One gate of the certification pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// Definite form: a point of the hypercomplex manifold attached to the curve.
    ManifoldPoint { real_form: String },
    /// All gates pass but the form is indefinite.
    RealChartPoint { real_form: String },
    Rejected { stage: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub k: usize,
    pub verdict: Verdict,
    /// Reported only; the gates use curve reality.
    pub datum_real: bool,
    pub stages: Vec<Stage>,
    pub gram: Option<GramCertificate>,
}

/// Runs every gate in order and stops at the first failure.
pub fn certify_chart(a: &QuadraticDatum) -> Certificate {
    let k = a.k();
    let datum_real = a.d() == 2 && datum_reality_check(a).verdict();
    let mut stages = Vec::new();
    let mut gram = None;
    let outcome = run_gates(a, &mut stages, &mut gram);
    let verdict = match outcome {
        Err(stage) => Verdict::Rejected { stage: stage.to_string() },
        Ok(()) => {
            let g = gram.as_ref().expect("gram computed when all gates pass");
            if g.definite {
                Verdict::ManifoldPoint { real_form: g.real_form_label.clone() }
            } else {
                Verdict::RealChartPoint { real_form: g.real_form_label.clone() }
            }
        }
    };
    Certificate { k, verdict, datum_real, stages, gram }
}

fn run_gates(a: &QuadraticDatum, stages: &mut Vec<Stage>, gram: &mut Option<GramCertificate>) -> std::result::Result<(), &'static str> {
    let k = a.k();
    let mut gate = |name: &'static str, passed: bool, detail: String| {
        stages.push(Stage { name, passed, detail });
        if passed {
            Ok(())
        } else {
            Err(name)
        }
    };
    let curve = match curve_from_datum(a) {
        Ok(c) => c,
        Err(e) => return gate("curve", false, e.to_string()),
    };
    gate("curve-real", curve_reality_check(&curve), String::new())?;
    let inv = curve_invariants(&curve).map_err(|_| "curve-invariants")?;
    gate("reduced", inv.reduced, format!("disc = {}", inv.disc))?;
    let expected_genus = (k - 1) * (k - 1);
    gate("genus", inv.genus == Some(expected_genus), format!("genus {:?}, expected {expected_genus}", inv.genus))?;
    let reg = match regular_everywhere(a) {
        Ok(r) => r,
        Err(e) => return gate("regular-everywhere", false, e.to_string()),
    };
    let failing: Vec<String> =
        reg.failures().map(|w| w.point.as_ref().map_or("generic".to_string(), ToString::to_string)).collect();
    gate("regular-everywhere", reg.verdict, failing.join(", "))?;
    let joint = joint_centralizer_dim(a).map_err(|_| "connected")?;
    gate("connected", joint.connected, format!("joint centralizer dimension {}", joint.dim))?;
    let sr = strongly_regular(a);
    gate("strongly-regular", sr.verdict, format!("rank {}", sr.definition_rank))?;
    let cross = petri_strongreg_crosscheck(a).map_err(|_| "petri")?;
    gate("petri", cross.consistent && cross.petri_is_iso, format!("rank {}", cross.petri_rank))?;
    match gram_certificate(a) {
        Ok(g) => {
            let ok = g.nullity == 0;
            let detail = format!("signature ({}, {})", g.signature.0, g.signature.1);
            *gram = Some(g);
            gate("gram", ok, detail)
        }
        Err(e) => gate("gram", false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PolyGR;
    use crate::fixtures::*;

    fn e(k: usize, i: usize) -> Vec<GaussianRational> {
        (0..k).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect()
    }

    #[test]
    fn sigma_of_fixtures() {
        let b = sigma_conjugate(&fix1()).unwrap();
        assert_eq!(b, fix1().map_coeffs(MatGR::transpose));
        let b2 = sigma_conjugate(&fix2()).unwrap();
        assert_eq!(*b2.coeff(0), MatGR::from_int_rows(&[&[0, -2], &[-1, 0]]));
        assert_eq!(*b2.coeff(1), MatGR::from_int_rows(&[&[2, 0], &[0, -2]]));
        assert_eq!(*b2.coeff(2), MatGR::from_int_rows(&[&[0, -1], &[-2, 0]]));
        assert_eq!(sigma_conjugate(&b2).unwrap(), fix2());
    }

    #[test]
    fn gram_of_fixtures() {
        let g1 = gram_certificate(&fix1()).unwrap();
        assert_eq!((g1.h.clone(), g1.signature, g1.real_form_label.as_str()), (MatGR::identity(2), (2, 0), "U(2)"));
        let g2 = gram_certificate(&fix2()).unwrap();
        assert_eq!(g2.h, MatGR::from_int_rows(&[&[1, 0], &[0, -1]]));
        assert_eq!((g2.signature, g2.definite, g2.real_form_label.as_str()), ((1, 1), false, "U(1,1)"));
        let g7 = gram_certificate(&fix7()).unwrap();
        assert_eq!((g7.h, g7.signature), (MatGR::identity(3), (3, 0)));
    }

    #[test]
    fn product_sections() {
        let a = fix1();
        let g = gram_certificate(&a).unwrap().gram;
        let ps = product_section(&a, &g, &e(2, 0), &e(2, 0)).unwrap();
        assert_eq!(ps.b, BiPoly::from_eta_coeffs(vec![PolyGR::from_ints(&[0, 2]), PolyGR::one()]));
        assert!(ps.gamma_ok);
        assert_eq!(ps.kappa, Some(1));
        let a2 = fix2();
        let g2 = gram_certificate(&a2).unwrap().gram;
        let ps2 = product_section(&a2, &g2, &e(2, 1), &e(2, 1)).unwrap();
        assert_eq!(ps2.gamma, -GaussianRational::one());
        assert_eq!(ps2.kappa, Some(1));
        let zero = vec![GaussianRational::zero(); 2];
        assert!(product_section(&a, &g, &zero, &zero).unwrap().b.is_zero());
    }

    #[test]
    fn transport() {
        let g = MatGR::from_int_rows(&[&[2, 0], &[0, 1]]);
        let t = conjugation_transport(&fix1(), &g).unwrap();
        assert!(t.gram_matches && t.signature_preserved);
        assert_eq!(
            t.expected_gram,
            MatGR::from_rows(vec![
                vec![GaussianRational::from_ratios(1, 4, 0, 1), GaussianRational::zero()],
                vec![GaussianRational::zero(), GaussianRational::one()],
            ])
            .unwrap()
        );
        let t2 = conjugation_transport(&fix2(), &g).unwrap();
        assert!(t2.gram_matches && t2.signature_preserved);
    }

    #[test]
    fn certification() {
        assert_eq!(certify_chart(&fix1()).verdict, Verdict::ManifoldPoint { real_form: "U(2)".into() });
        assert_eq!(certify_chart(&fix2()).verdict, Verdict::RealChartPoint { real_form: "U(1,1)".into() });
        assert_eq!(certify_chart(&fix3()).verdict, Verdict::Rejected { stage: "reduced".into() });
        assert_eq!(certify_chart(&fix7()).verdict, Verdict::ManifoldPoint { real_form: "U(3)".into() });
    }
}
