use num_traits::Signed;

use super::MatGR;
use crate::error::{ChartError, Result};

/// Inertia `(p, q, z)` of a hermitian matrix: the numbers of positive,
/// negative and zero eigenvalues, by exact congruence diagonalisation.
pub fn hermitian_signature(h: &MatGR) -> Result<(usize, usize, usize)> {
    if !h.is_square() {
        return Err(ChartError::Dimension(format!("{}x{} matrix is not square", h.rows(), h.cols())));
    }
    let n = h.rows();
    for i in 0..n {
        for j in i..n {
            if *h.get(i, j) != h.get(j, i).conj() {
                return Err(ChartError::NotHermitian { row: i, col: j });
            }
        }
    }
    let mut m = h.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut p, mut q) = (0, 0);
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !m[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero())
                else {
                    break;
                };
                // e_i ← e_i + c e_j with c = conj(m_ij) makes the new diagonal 2|m_ij|²
                let c = m[i][j].conj();
                for r in 0..n {
                    let t = &m[r][j] * &c;
                    m[r][i] += &t;
                }
                let cc = c.conj();
                for col in 0..n {
                    let t = &m[j][col] * &cc;
                    m[i][col] += &t;
                }
                i
            }
        };
        let d = m[pivot][pivot].clone();
        debug_assert!(d.is_real());
        if d.re().is_positive() {
            p += 1;
        } else {
            q += 1;
        }
        let d_inv = d.inv().unwrap();
        active.retain(|&x| x != pivot);
        for &r in &active {
            let f = &m[r][pivot] * &d_inv;
            if f.is_zero() {
                continue;
            }
            for col in 0..n {
                let t = &f * &m[pivot][col];
                m[r][col] -= &t;
            }
            let fc = f.conj();
            for row in 0..n {
                let t = &m[row][pivot] * &fc;
                m[row][r] -= &t;
            }
        }
    }
    Ok((p, q, n - p - q))
}

/// Whether the hermitian matrix is positive or negative definite.
pub fn is_definite(h: &MatGR) -> Result<bool> {
    let (p, q, z) = hermitian_signature(h)?;
    Ok(z == 0 && (p == 0 || q == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational;

    #[test]
    fn small_cases() {
        assert_eq!(hermitian_signature(&MatGR::identity(3)).unwrap(), (3, 0, 0));
        assert_eq!(hermitian_signature(&MatGR::from_int_rows(&[&[1, 0], &[0, -1]])).unwrap(), (1, 1, 0));
        assert_eq!(hermitian_signature(&MatGR::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap(), (1, 1, 0));
        assert_eq!(hermitian_signature(&MatGR::from_int_rows(&[&[1, 1], &[1, 1]])).unwrap(), (1, 0, 1));
        assert_eq!(hermitian_signature(&MatGR::zeros(2, 2)).unwrap(), (0, 0, 2));
    }

    #[test]
    fn complex_offdiagonal() {
        let i = GaussianRational::i();
        let h = MatGR::from_rows(vec![
            vec![GaussianRational::zero(), i.clone()],
            vec![-&i, GaussianRational::zero()],
        ])
        .unwrap();
        assert_eq!(hermitian_signature(&h).unwrap(), (1, 1, 0));
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = MatGR::from_int_rows(&[&[1, 2], &[3, 1]]);
        assert!(matches!(hermitian_signature(&h), Err(ChartError::NotHermitian { row: 0, col: 1 })));
    }
}
