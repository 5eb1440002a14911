use super::{BiPoly, Mat, PolyGR, Ring};
use crate::error::{ChartError, Result};

/// Sylvester matrix in η of two bivariate polynomials, coefficients listed
/// from the top power of η down.
pub fn sylvester_eta(p: &BiPoly, q: &BiPoly) -> Result<Mat<PolyGR>> {
    let n = p.eta_degree().ok_or(ChartError::ZeroPolynomial)?;
    let m = q.eta_degree().ok_or(ChartError::ZeroPolynomial)?;
    let size = n + m;
    let mut s = Mat::zeros(size, size);
    for r in 0..m {
        for d in 0..=n {
            s.set(r, r + d, p.eta_coeff(n - d));
        }
    }
    for r in 0..n {
        for d in 0..=m {
            s.set(m + r, r + d, q.eta_coeff(m - d));
        }
    }
    Ok(s)
}

/// Resultant in η, a polynomial in ζ.
pub fn resultant_eta(p: &BiPoly, q: &BiPoly) -> Result<PolyGR> {
    let s = sylvester_eta(p, q)?;
    Ok(if s.rows() == 0 { PolyGR::one() } else { s.det_bareiss() })
}

/// `disc_η(P) = (−1)^{k(k−1)/2} Res_η(P, ∂P/∂η)` for `P` monic of degree k in η.
pub fn discriminant_eta(p: &BiPoly) -> Result<PolyGR> {
    if !p.is_monic_in_eta() {
        return Err(ChartError::NotMonic);
    }
    let k = p.eta_degree().unwrap();
    if k == 0 {
        return Ok(PolyGR::one());
    }
    let r = resultant_eta(p, &p.derivative_eta())?;
    Ok(if (k * (k - 1) / 2) % 2 == 1 { Ring::neg(&r) } else { r })
}
