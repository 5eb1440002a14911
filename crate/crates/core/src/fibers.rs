//! Scheme-theoretic fibers of the spectral cover and their Jordan structure.
//!
//! Over a point ζ₀ the fiber is the fat point cut out by `P(ζ₀, η)`. Its
//! squarefree decomposition `Π h_m^m` groups the eigenvalues by algebraic
//! multiplicity without isolating them; each `h_m` becomes a second-level
//! quotient ring in which the class `t` of η is a generic eigenvalue. Ranks of
//! `(A(ζ₀) − t)^j` then give the block counts.

use serde::Serialize;

use crate::error::Result;
use crate::exact::field::{over_base, over_top, rank_in, yun, Arith, Dyn, Ext1, Ext2};
use crate::exact::{GaussianRational, PolyGR};
use crate::polymat::{mp_char_poly, MatrixPoly, Point};
use crate::spectral::{point_of_modulus, regularity_suspects};

/// Eigenvalues sharing a multiplicity and a block structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FatPoint {
    /// Monic polynomial in η over the point's ring whose roots are these eigenvalues.
    pub eigenvalues: Vec<PolyGR>,
    /// Number of eigenvalues, the degree of `eigenvalues`.
    pub count: usize,
    /// Algebraic multiplicity of each.
    pub multiplicity: usize,
    /// Jordan block sizes of each, largest first.
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub zeta: Point,
    pub points: Vec<FatPoint>,
    /// One Jordan block per eigenvalue.
    pub jordan_regular: bool,
    /// `Σ_{blocks b, b' of one eigenvalue} min(|b|, |b'|)`.
    pub stabilizer_dim: usize,
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

/// Block counts `n_j` (blocks of size ≥ j) for `j = 1..=mult` at the eigenvalue `t`.
fn block_counts(ring: &Ext2, a: &[Vec<PolyGR>], mult: usize) -> Dyn<Vec<usize>> {
    let k = a.len();
    let t = ring.gen();
    let shifted: Vec<Vec<Vec<PolyGR>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let x = ring.lift(&a[i][j]);
                    if i == j {
                        ring.sub(&x, &t)
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut power = shifted.clone();
    let mut nullities = vec![0];
    for _ in 0..mult {
        nullities.push(k - rank_in(ring, &power)?);
        power = mat_mul_in(ring, &power, &shifted);
    }
    Ok(nullities.windows(2).map(|w| w[1] - w[0]).collect())
}

fn blocks_from_counts(counts: &[usize]) -> Vec<usize> {
    let mut blocks = Vec::new();
    for (idx, &n) in counts.iter().enumerate() {
        let next = counts.get(idx + 1).copied().unwrap_or(0);
        for _ in 0..n.saturating_sub(next) {
            blocks.push(idx + 1);
        }
    }
    blocks.sort_unstable_by(|x, y| y.cmp(x));
    blocks
}

fn stabilizer_of(blocks: &[usize]) -> usize {
    blocks.iter().map(|&x| blocks.iter().map(|&y| x.min(y)).sum::<usize>()).sum()
}

fn fiber_in(ring: &Ext1, a: &[Vec<PolyGR>], p_eta: &[PolyGR]) -> Dyn<Vec<FatPoint>> {
    let p: Vec<PolyGR> = p_eta.iter().map(|c| ring.reduce(c)).collect();
    let mut out = Vec::new();
    for (mult, h) in yun(ring, &p)? {
        for (piece, counts) in over_top(ring, &h, |r2| block_counts(r2, a, mult))? {
            let blocks = blocks_from_counts(&counts);
            debug_assert_eq!(blocks.iter().sum::<usize>(), mult);
            out.push(FatPoint { count: piece.len() - 1, eigenvalues: piece, multiplicity: mult, blocks });
        }
    }
    Ok(out)
}

/// Fiber data at a point. A root-of point is split wherever its roots differ,
/// giving one report per piece.
pub fn fiber_report(a: &MatrixPoly, point: &Point) -> Result<Vec<FiberReport>> {
    let k = a.k();
    let (modulus, entries, p_eta): (PolyGR, Vec<Vec<PolyGR>>, Vec<PolyGR>) = match point {
        Point::Infinity => {
            let top = MatrixPoly::new(k, 0, vec![a.at_infinity()])?;
            let p = mp_char_poly(&top);
            (PolyGR::zeta(), top.entries().to_rows(), p.eta_coeffs().to_vec())
        }
        _ => {
            let ring = point.ring()?;
            (ring.modulus().clone(), a.entries().to_rows(), mp_char_poly(a).eta_coeffs().to_vec())
        }
    };
    let pieces = over_base(&modulus, |r| {
        let local: Vec<Vec<PolyGR>> = entries.iter().map(|row| row.iter().map(|x| r.reduce(x)).collect()).collect();
        fiber_in(r, &local, &p_eta)
    })?;
    Ok(pieces
        .into_iter()
        .map(|(m, points)| {
            let zeta = if point.is_infinity() { Point::Infinity } else { point_of_modulus(&m) };
            let jordan_regular = points.iter().all(|fp| fp.blocks.len() == 1);
            let stabilizer_dim = points.iter().map(|fp| fp.count * stabilizer_of(&fp.blocks)).sum();
            FiberReport { zeta, points, jordan_regular, stabilizer_dim }
        })
        .collect())
}

/// Whether the stabiliser has the minimal dimension k, i.e. the orbit of
/// nondegenerate morphisms from the fat point is a homogeneous space of
/// dimension `k² − k`.
pub fn lemma_z_check(report: &FiberReport, k: usize) -> bool {
    report.stabilizer_dim == k
}

/// [`lemma_z_check`] over every fiber where eigenvalues can collide, and ∞.
pub fn lemma_z_everywhere(a: &MatrixPoly) -> Result<bool> {
    let k = a.k();
    let finite = match regularity_suspects(a)? {
        // A(ζ) is derogatory at every ζ, so any fiber witnesses it
        None => vec![Point::Value(GaussianRational::zero())],
        Some(f) if f.degree().is_some_and(|d| d > 0) => vec![Point::RootOf(f)],
        Some(_) => Vec::new(),
    };
    for p in finite.iter().chain(std::iter::once(&Point::Infinity)) {
        if !fiber_report(a, p)?.iter().all(|r| lemma_z_check(r, k)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn fix1_branch_points() {
        let reps = fiber_report(&fix1(), &Point::RootOf(PolyGR::from_ints(&[2, 0, 1, 0, 2]))).unwrap();
        assert_eq!(reps.len(), 1);
        let r = &reps[0];
        assert_eq!(r.points.len(), 1);
        assert_eq!((r.points[0].multiplicity, r.points[0].blocks.clone()), (2, vec![2]));
        assert!(r.jordan_regular && lemma_z_check(r, 2));
        let r0 = &fiber_report(&fix1(), &Point::Value(GaussianRational::zero())).unwrap()[0];
        assert_eq!((r0.points[0].count, r0.points[0].multiplicity, r0.stabilizer_dim), (2, 1, 2));
    }

    #[test]
    fn fix4_origin() {
        let a = crate::fixtures::fix4();
        let r = &fiber_report(&a, &Point::Value(GaussianRational::zero())).unwrap()[0];
        assert_eq!(r.points[0].blocks, vec![1, 1]);
        assert_eq!(r.stabilizer_dim, 4);
        assert!(!r.jordan_regular);
        // the leading coefficient vanishes, so ∞ is derogatory as well
        assert_eq!(fiber_report(&a, &Point::Infinity).unwrap()[0].stabilizer_dim, 4);
        assert!(fiber_report(&fix1(), &Point::Infinity).unwrap()[0].jordan_regular);
        assert!(!lemma_z_everywhere(&a).unwrap());
    }

    #[test]
    fn aggregated() {
        for (_, a) in all() {
            let reg = crate::spectral::regular_everywhere(&a).unwrap().verdict;
            assert_eq!(lemma_z_everywhere(&a).unwrap(), reg);
        }
    }

    #[test]
    fn stabilizer_formula() {
        assert_eq!(stabilizer_of(&[2, 1]), 5);
        assert_eq!(blocks_from_counts(&[2, 1]), vec![2, 1]);
        assert_eq!(blocks_from_counts(&[1, 1, 1]), vec![3]);
    }
}
