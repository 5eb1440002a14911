#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_chart::exact::{GaussianRational, MatGR, PolyGR};
use spectral_chart::polymat::{MatrixPoly, QuadraticDatum};
use spectral_chart::spectral::datum_from_triple;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gr(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::gaussian(rng.gen_range(-3..=3), if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 })
}

pub fn mat(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    MatGR::from_fn(k, k, |_, _| gr(rng))
}

pub fn sparse_mat(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    MatGR::from_fn(k, k, |_, _| if rng.gen_bool(0.6) { GaussianRational::zero() } else { gr(rng) })
}

pub fn invertible(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    loop {
        let g = mat(rng, k);
        if g.rank() == k {
            return g;
        }
    }
}

pub fn poly(rng: &mut ChaCha8Rng, deg: usize) -> PolyGR {
    PolyGR::new((0..=deg).map(|_| gr(rng)).collect())
}

/// Generic data, sparse data, data with vanishing middle coefficient and
/// data built from powers of one matrix.
pub fn quadratic(rng: &mut ChaCha8Rng, k: usize) -> QuadraticDatum {
    let coeffs = match rng.gen_range(0..4) {
        0 => vec![mat(rng, k), mat(rng, k), mat(rng, k)],
        1 => vec![sparse_mat(rng, k), sparse_mat(rng, k), sparse_mat(rng, k)],
        2 => vec![mat(rng, k), MatGR::zeros(k, k), mat(rng, k)],
        _ => {
            let x = sparse_mat(rng, k);
            let y = x.mul(&x).add(&MatGR::scalar(k, &gr(rng)));
            vec![x.clone(), y, x.scale(&gr(rng))]
        }
    };
    MatrixPoly::new(k, 2, coeffs).unwrap()
}

pub fn anti_hermitian(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    let x = mat(rng, k);
    x.sub(&x.adjoint())
}

pub fn normal_form(rng: &mut ChaCha8Rng, k: usize) -> QuadraticDatum {
    let (t1, t2, t3) = (anti_hermitian(rng, k), anti_hermitian(rng, k), anti_hermitian(rng, k));
    datum_from_triple(&t1, &t2, &t3).unwrap()
}

pub fn hermitian(rng: &mut ChaCha8Rng, k: usize) -> MatGR {
    let x = mat(rng, k);
    x.add(&x.adjoint())
}
