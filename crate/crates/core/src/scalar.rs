//! Scalar abstraction shared by the polynomial, series and linear-algebra code.
//!
//! Everything above this module is written against [`Field`], so the same
//! echelon reduction runs over the rationals and over cyclotomic fields.
//! Only exact fields implement it: zero tests must be decisive.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// An exact commutative field.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embeds a rational number.
    fn from_rational(q: &Rational) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

impl Field for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` text form, or plain `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Converts a rational to `i64` when it is an integer in range.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

/// Exact `k`-th root of a non-negative rational, if it exists.
pub fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *q.numer() && num_traits::pow(d.clone(), k as usize) == *q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Euler's totient by trial division.
pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Prime factorization by trial division, giving `(prime, exponent)` pairs.
/// Returns `None` when `n` has a prime factor above `limit`.
pub fn factor_small(mut n: u64, limit: u64) -> Option<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n && p <= limit {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        if n > limit {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// Gcd of a list of rationals' numerators over the lcm of their denominators,
/// i.e. the positive rational content.
pub fn rational_content<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        Rational::one()
    } else {
        Rational::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_values() {
        let phis: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn nth_roots() {
        assert_eq!(rational_nth_root(&rat(27, 8), 3), Some(rat(3, 2)));
        assert_eq!(rational_nth_root(&rat(2, 1), 2), None);
        assert_eq!(rational_nth_root(&rat(-1, 1), 3), None);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&rat(3, 2)), "3/2");
        assert_eq!(format_rational(&rat(-4, 2)), "-2");
    }

    #[test]
    fn content_is_positive_gcd() {
        let v = [rat(4, 3), rat(-6, 1), rat(2, 9)];
        assert_eq!(rational_content(v.iter()), rat(2, 9));
    }
}
