//! Exact arithmetic substrate: rational polynomials, integer binary forms,
//! Sylvester resultants and normalized points of the projective line.

mod form;
mod point;
mod poly;

pub use form::{resultant, BinaryFormZ};
pub use point::{normalize_point, weil_height, ProjectivePointQ};
pub use poly::BigRationalPoly;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid projective point: both coordinates are zero")]
    InvalidPoint,
    #[error("binary forms have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("binary form must have degree at least 1")]
    EmptyForm,
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // exact by Sylvester's identity
                m[i][j] = v.div_floor(&prev);
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Sylvester matrix of two coefficient vectors given in *descending* order,
/// with formal degrees `a.len() - 1` and `b.len() - 1`.
pub fn sylvester_matrix(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in a.iter().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in b.iter().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two integer polynomials (descending coefficients, formal degrees
/// taken from the slice lengths).
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert!(!a.is_empty() && !b.is_empty());
    if a.len() == 1 && b.len() == 1 {
        return BigInt::from(1);
    }
    bareiss_determinant(sylvester_matrix(a, b))
}

/// Natural logarithm of a positive big integer, accurate to double precision
/// for any size.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_det(m: &[Vec<BigInt>]) -> BigInt {
        // cofactor expansion along the first row
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for col in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][col] * naive_det(&minor);
            if col % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_agrees_with_cofactor_expansion() {
        let mat: Vec<Vec<BigInt>> = [
            [0i64, 2, -1, 3, 5],
            [4, 0, 0, 1, -2],
            [1, 1, 7, 0, 0],
            [-3, 2, 2, 2, 9],
            [0, 0, 5, -1, 1],
        ]
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
        assert_eq!(bareiss_determinant(mat.clone()), naive_det(&mat));
        let singular: Vec<Vec<BigInt>> = vec![
            vec![1.into(), 2.into()],
            vec![2.into(), 4.into()],
        ];
        assert!(bareiss_determinant(singular).is_zero());
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigUint::from(3u32).pow(5000);
        let expected = 5000.0 * 3f64.ln();
        assert!((ln_biguint(&n) - expected).abs() < 1e-9 * expected);
        assert!((ln_biguint(&BigUint::from(7u32)) - 7f64.ln()).abs() < 1e-15);
    }
}
