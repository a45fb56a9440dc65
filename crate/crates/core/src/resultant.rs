//! Sylvester resultants of multivariate polynomials.
//!
//! The Sylvester matrix lists the shifted coefficient rows of `p` first, then
//! those of `q`, leading coefficients on the left. Its determinant is taken
//! with the fraction-free Bareiss recurrence, whose divisions are exact in
//! the polynomial ring.

use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::scalar::Rational;

type QPoly = SparsePoly<Rational>;

pub fn sylvester_matrix(p: &QPoly, q: &QPoly, var: &str) -> Vec<Vec<QPoly>> {
    let m = p.degree_in(var) as usize;
    let n = q.degree_in(var) as usize;
    let size = m + n;
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![QPoly::zero(); size];
        for (i, c) in pc.iter().enumerate() {
            row[shift + m - i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![QPoly::zero(); size];
        for (i, c) in qc.iter().enumerate() {
            row[shift + n - i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn bareiss_determinant(matrix: Vec<Vec<QPoly>>) -> Result<QPoly> {
    let n = matrix.len();
    if n == 0 {
        return Ok(QPoly::one());
    }
    let mut a = matrix;
    let mut negate = false;
    let mut prev = QPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(QPoly::zero());
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?;
            }
            a[i][k] = QPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// Resultant of `p` and `q` with respect to `var`.
pub fn resultant(p: &QPoly, q: &QPoly, var: &str) -> Result<QPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::DegenerateInput("resultant of a zero polynomial".into()));
    }
    if p.degree_in(var) == 0 && q.degree_in(var) == 0 {
        return Err(Error::DegenerateInput(format!("variable {var} occurs in neither polynomial")));
    }
    bareiss_determinant(sylvester_matrix(p, q, var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qpoly;

    #[test]
    fn quadratic_against_linear() {
        let p = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 1)])]);
        let q = qpoly(&[(1, &[("y", 1)])]);
        assert_eq!(resultant(&p, &q, "y").unwrap(), qpoly(&[(-1, &[("x", 1)])]));
    }

    #[test]
    fn linear_pair() {
        let p = qpoly(&[(1, &[("x", 1)]), (-1, &[("a", 1)])]);
        let q = qpoly(&[(1, &[("x", 1)]), (-1, &[("b", 1)])]);
        assert_eq!(resultant(&p, &q, "x").unwrap(), qpoly(&[(1, &[("a", 1)]), (-1, &[("b", 1)])]));
    }

    #[test]
    fn cubic_discriminant() {
        let p = qpoly(&[(1, &[("x", 3)]), (1, &[("a", 1), ("x", 1)]), (1, &[("b", 1)])]);
        let q = p.derivative("x");
        let expected = qpoly(&[(4, &[("a", 3)]), (27, &[("b", 2)])]);
        assert_eq!(resultant(&p, &q, "x").unwrap(), expected);
    }

    #[test]
    fn zero_input_rejected() {
        let q = qpoly(&[(1, &[("x", 1)])]);
        assert!(matches!(resultant(&QPoly::zero(), &q, "x"), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn vanishes_on_common_root() {
        // (x-1)(x-2) and (x-2)(x+3) share x = 2; (x-1) and (x+3) do not.
        let a = qpoly(&[(1, &[("x", 2)]), (-3, &[("x", 1)]), (2, &[])]);
        let b = qpoly(&[(1, &[("x", 2)]), (1, &[("x", 1)]), (-6, &[])]);
        assert!(resultant(&a, &b, "x").unwrap().is_zero());
        let c = qpoly(&[(1, &[("x", 1)]), (-1, &[])]);
        let d = qpoly(&[(1, &[("x", 1)]), (3, &[])]);
        assert!(!resultant(&c, &d, "x").unwrap().is_zero());
    }
}
