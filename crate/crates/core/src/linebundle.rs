//! The shifted Petri map in the matrix-polynomial chart.
//!
//! With `π_*L(1) ≅ O^k` and the dual trivialisation on `L*(1) ⊗ K_C`, the
//! product of the basis section `e_i` with the basis covector `e_jᵀ` is the
//! adjugate entry `adj(ηI − A(ζ))_{j,i}`, a section of `K_C(2)`. Those sections
//! have the shape `Σ_m η^m b_m(ζ)` with `deg b_m ≤ 2(k−1−m)`, so k² monomials
//! span the target, and the map is an isomorphism iff the k² products are
//! independent. Degree shifts by `L ↦ L(1)` are absorbed into the chart; the
//! sections of `L(1)` are exactly the constant vectors.

use serde::Serialize;

use crate::error::{ChartError, Result};
use crate::exact::{GaussianRational, MatGR};
use crate::polymat::{mp_adjugate, QuadraticDatum};
use crate::spectral::strongly_regular;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PetriReport {
    /// Row `(i, j)` (index `i·k + j`) holds the coefficients of `adj_{j,i}`.
    pub matrix: MatGR,
    pub rank: usize,
    pub is_iso: bool,
    /// Monomials `(m, l)` for `η^m ζ^l`, the column order of `matrix`.
    pub monomial_basis: Vec<(usize, usize)>,
}

/// `η^m ζ^l` with `0 ≤ l ≤ 2(k−1−m)`, by decreasing m and then increasing l.
pub fn monomial_basis(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * k);
    for m in (0..k).rev() {
        for l in 0..=2 * (k - 1 - m) {
            out.push((m, l));
        }
    }
    out
}

pub fn petri_matrix(a: &QuadraticDatum) -> Result<PetriReport> {
    if a.d() != 2 {
        return Err(ChartError::Dimension(format!("expected a quadratic datum, got degree bound {}", a.d())));
    }
    let k = a.k();
    let basis = monomial_basis(k);
    let adj = mp_adjugate(a);
    let mut rows = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let b = adj.get(j, i);
            for (m, l, _) in b.terms() {
                if l > 2 * (k - 1 - m) {
                    return Err(ChartError::DegreeProfileViolated(m));
                }
            }
            rows.push(basis.iter().map(|&(m, l)| b.coeff(m, l)).collect::<Vec<GaussianRational>>());
        }
    }
    let matrix = MatGR::from_rows(rows)?;
    let rank = matrix.rank();
    Ok(PetriReport { matrix, rank, is_iso: rank == k * k, monomial_basis: basis })
}

/// The Petri verdict against the strong-regularity verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PetriCrosscheck {
    pub petri_is_iso: bool,
    pub strongly_regular: bool,
    pub petri_rank: usize,
    pub definition_rank: usize,
    pub consistent: bool,
}

pub fn petri_strongreg_crosscheck(a: &QuadraticDatum) -> Result<PetriCrosscheck> {
    let p = petri_matrix(a)?;
    let s = strongly_regular(a);
    Ok(PetriCrosscheck {
        petri_is_iso: p.is_iso,
        strongly_regular: s.verdict,
        petri_rank: p.rank,
        definition_rank: s.definition_rank,
        consistent: p.is_iso == s.verdict,
    })
}

/// Rank of the Petri rows antisymmetrised in `(i, j)`. When `L(−1)` is a theta
/// characteristic the products are symmetric and this rank is 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewDiagnostic {
    pub skew_rank: usize,
    /// `k(k−1)/2`, the number of antisymmetrised rows.
    pub full_rank: usize,
}

pub fn theta_skew_example(a: &QuadraticDatum) -> Result<SkewDiagnostic> {
    let p = petri_matrix(a)?;
    let k = a.k();
    let mut rows = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (r1, r2) = (p.matrix.row(i * k + j), p.matrix.row(j * k + i));
            rows.push(r1.iter().zip(r2).map(|(x, y)| x - y).collect::<Vec<_>>());
        }
    }
    let skew_rank = if rows.is_empty() { 0 } else { MatGR::from_rows(rows)?.rank() };
    Ok(SkewDiagnostic { skew_rank, full_rank: k * (k - 1) / 2 })
}

/// Dimension counts for a spectral curve of degree k, from the splittings
/// `π_*O_C = ⊕_{j<k} O(−2j)` and `π_*K_C = ⊕_{j<k} O(2j−2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionCounts {
    pub h0_k_c_2: usize,
    pub h0_k_c_1: usize,
    pub h1_o_c_minus_1: usize,
    pub h0_tangent: usize,
    pub genus: usize,
    /// Codimension of the image of `H⁰(K_C(1)) ⊗ ℂ²` in `H⁰(K_C(2))`.
    pub gamma_codim: usize,
    /// Whether every count matches its closed form.
    pub consistent: bool,
}

impl SectionCounts {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize, usize, usize) {
        (self.h0_k_c_2, self.h0_k_c_1, self.h1_o_c_minus_1, self.h0_tangent, self.genus, self.gamma_codim)
    }
}

fn h0_line(n: i64) -> i64 {
    (n + 1).max(0)
}

fn h1_line(n: i64) -> i64 {
    (-n - 1).max(0)
}

pub fn section_count_validators(k: usize) -> Result<SectionCounts> {
    if k < 2 {
        return Err(ChartError::OutOfRange(format!("k = {k} < 2")));
    }
    let ki = k as i64;
    let canon = |n: i64| (0..ki).map(|j| h0_line(2 * j - 2 + n)).sum::<i64>();
    let h0_k_c_2 = canon(2);
    let h0_k_c_1 = canon(1);
    let h0_k_c = canon(0);
    let h1_o_c_minus_1 = (0..ki).map(|j| h1_line(-2 * j - 1)).sum::<i64>();
    let chi = (0..ki).map(|j| h0_line(-2 * j) - h1_line(-2 * j)).sum::<i64>();
    let genus = 1 - chi;
    let h0_tangent = ki * ki - 1 + genus;
    let gamma_codim = h0_k_c_2 - (2 * h0_k_c_1 - h0_k_c);
    let consistent = h0_k_c_2 == ki * ki
        && h0_k_c_1 == ki * ki - ki
        && h1_o_c_minus_1 == ki * ki - ki
        && h0_tangent == 2 * ki * ki - 2 * ki
        && genus == (ki - 1) * (ki - 1)
        && h0_k_c == genus
        && gamma_codim == 1;
    Ok(SectionCounts {
        h0_k_c_2: h0_k_c_2 as usize,
        h0_k_c_1: h0_k_c_1 as usize,
        h1_o_c_minus_1: h1_o_c_minus_1 as usize,
        h0_tangent: h0_tangent as usize,
        genus: genus as usize,
        gamma_codim: gamma_codim as usize,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn fixtures() {
        let p1 = petri_matrix(&fix1()).unwrap();
        assert_eq!((p1.rank, p1.is_iso), (4, true));
        assert_eq!(p1.monomial_basis, vec![(1, 0), (0, 0), (0, 1), (0, 2)]);
        let p5 = petri_matrix(&fix5()).unwrap();
        assert_eq!((p5.rank, p5.is_iso), (3, false));
        assert_eq!(p5.matrix.row(0), p5.matrix.row(3));
        assert!(petri_matrix(&fix3()).unwrap().is_iso);
    }

    #[test]
    fn skew() {
        assert_eq!(theta_skew_example(&fix1()).unwrap().skew_rank, 1);
        assert_eq!(theta_skew_example(&fix5()).unwrap().skew_rank, 1);
    }

    #[test]
    fn counts() {
        assert_eq!(section_count_validators(2).unwrap().as_tuple(), (4, 2, 2, 4, 1, 1));
        assert_eq!(section_count_validators(3).unwrap().as_tuple(), (9, 6, 6, 12, 4, 1));
        for k in 2..8 {
            assert!(section_count_validators(k).unwrap().consistent);
        }
        assert!(section_count_validators(1).is_err());
    }
}
