//! Canonical small data used throughout the tests, the CLI and the docs.

use crate::exact::MatGR;
use crate::polymat::{MatrixPoly, QuadraticDatum};

fn quad(a0: &[&[i64]], a1: &[&[i64]], a2: &[&[i64]]) -> QuadraticDatum {
    MatrixPoly::quadratic(MatGR::from_int_rows(a0), MatGR::from_int_rows(a1), MatGR::from_int_rows(a2))
        .expect("fixture shapes agree")
}

/// `[[2ζ, 1+2ζ²], [−2−ζ², −2ζ]]`: real normal form, smooth curve, definite.
pub fn fix1() -> QuadraticDatum {
    quad(&[&[0, 1], &[-2, 0]], &[&[2, 0], &[0, -2]], &[&[0, 2], &[-1, 0]])
}

/// `[[2ζ, 1+2ζ²], [2+ζ², −2ζ]]`: real line bundle with indefinite form.
pub fn fix2() -> QuadraticDatum {
    quad(&[&[0, 1], &[2, 0]], &[&[2, 0], &[0, -2]], &[&[0, 2], &[1, 0]])
}

/// `[[ζ, 1], [−ζ², −ζ]]`: regular everywhere with curve η² = 0.
pub fn fix3() -> QuadraticDatum {
    quad(&[&[0, 1], &[0, 0]], &[&[1, 0], &[0, -1]], &[&[0, 0], &[-1, 0]])
}

/// `[[−ζ, 0], [0, ζ]]`: not regular at ζ = 0.
pub fn fix4() -> QuadraticDatum {
    quad(&[&[0, 0], &[0, 0]], &[&[-1, 0], &[0, 1]], &[&[0, 0], &[0, 0]])
}

/// `[[1+ζ+ζ², 1], [ζ², 1+ζ+ζ²]]`: degenerate shifted Petri map.
pub fn fix5() -> QuadraticDatum {
    quad(&[&[1, 1], &[0, 1]], &[&[1, 0], &[0, 1]], &[&[1, 0], &[1, 1]])
}

/// `[[ζ, 2+ζ²], [−1−2ζ², −ζ]]`: reducible connected curve η² = −2(ζ²+1)².
pub fn fix6() -> QuadraticDatum {
    quad(&[&[0, 2], &[-1, 0]], &[&[1, 0], &[0, -1]], &[&[0, 1], &[-2, 0]])
}

/// `[[ζ, 1, 0], [−ζ², 0, 1], [0, −ζ², −ζ]]`: k = 3 real normal form, curve η³ + ζ²η.
pub fn fix7() -> QuadraticDatum {
    quad(
        &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]],
        &[&[1, 0, 0], &[0, 0, 0], &[0, 0, -1]],
        &[&[0, 0, 0], &[-1, 0, 0], &[0, -1, 0]],
    )
}

/// All fixtures with their names.
pub fn all() -> Vec<(&'static str, QuadraticDatum)> {
    vec![
        ("FIX1", fix1()),
        ("FIX2", fix2()),
        ("FIX3", fix3()),
        ("FIX4", fix4()),
        ("FIX5", fix5()),
        ("FIX6", fix6()),
        ("FIX7", fix7()),
    ]
}
