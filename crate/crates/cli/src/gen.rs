//! Seeded random data for the sweep and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_chart::exact::{GaussianRational, MatGR};
use spectral_chart::fixtures;
use spectral_chart::polymat::{MatrixPoly, QuadraticDatum};
use spectral_chart::spectral::datum_from_triple;

/// Independent stream `stream` of the run seeded by `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    // splitmix64 step, so nearby streams do not share prefixes
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    let im = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
    GaussianRational::gaussian(rng.gen_range(-3..=3), im)
}

pub fn matrix(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    MatGR::from_fn(k, k, |_, _| gaussian(rng))
}

fn sparse(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    MatGR::from_fn(k, k, |_, _| if rng.gen_bool(0.65) { GaussianRational::zero() } else { gaussian(rng) })
}

pub fn invertible(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    loop {
        let g = matrix(rng, k);
        if g.rank() == k {
            return g;
        }
    }
}

/// Mixed generic and degenerate quadratic data: dense, sparse, vanishing
/// middle coefficient, polynomials in one matrix, and a common rank-one
/// perturbation of a scalar.
pub fn quadratic(rng: &mut ChaCha8Rng, k: usize) -> QuadraticDatum {
    let coeffs = match rng.gen_range(0..5) {
        0 | 1 => vec![matrix(rng, k), matrix(rng, k), matrix(rng, k)],
        2 => vec![sparse(rng, k), sparse(rng, k), sparse(rng, k)],
        3 => {
            let x = sparse(rng, k);
            let x2 = x.mul(&x);
            vec![x.scale(&gaussian(rng)), x2.add(&MatGR::scalar(k, &gaussian(rng))), x.scale(&gaussian(rng))]
        }
        _ => {
            let u: Vec<GaussianRational> = (0..k).map(|_| gaussian(rng)).collect();
            let v: Vec<GaussianRational> = (0..k).map(|_| gaussian(rng)).collect();
            let r = MatGR::from_fn(k, k, |i, j| &u[i] * &v[j]);
            let mut c = vec![MatGR::scalar(k, &gaussian(rng)), MatGR::scalar(k, &gaussian(rng)), MatGR::zeros(k, k)];
            let slot = rng.gen_range(0..3);
            c[slot] = c[slot].add(&r);
            if rng.gen_bool(0.5) {
                c[1] = MatGR::zeros(k, k);
            }
            c
        }
    };
    MatrixPoly::new(k, 2, coeffs).expect("k×k coefficients")
}

pub fn anti_hermitian(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    let x = matrix(rng, k);
    x.sub(&x.adjoint())
}

/// `A = (T₂ + iT₃) + 2iT₁ζ + (T₂ − iT₃)ζ²` for random anti-hermitian `T_j`.
pub fn normal_form(rng: &mut ChaCha8Rng, k: usize) -> QuadraticDatum {
    let (t1, t2, t3) = (anti_hermitian(rng, k), anti_hermitian(rng, k), anti_hermitian(rng, k));
    datum_from_triple(&t1, &t2, &t3).expect("anti-hermitian by construction")
}

/// A fixture of size k conjugated by a random invertible matrix.
pub fn conjugated_fixture(rng: &mut ChaCha8Rng, k: usize) -> Option<(&'static str, QuadraticDatum)> {
    let pool: Vec<_> = fixtures::all().into_iter().filter(|(_, a)| a.k() == k).collect();
    if pool.is_empty() {
        return None;
    }
    let (name, a) = pool[rng.gen_range(0..pool.len())].clone();
    let g = invertible(rng, k);
    Some((name, a.conjugate_by(&g).expect("invertible")))
}
