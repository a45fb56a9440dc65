//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! An element of order `m` is stored by its coordinates in the power basis
//! `1, ζ_m, …, ζ_m^{φ(m)-1}`, i.e. as a residue modulo the `m`-th cyclotomic
//! polynomial. Binary operations on elements of different orders first embed
//! both into `Q(ζ_lcm)` using `ζ_m = ζ_M^{M/m}`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::solve;
use crate::scalar::{euler_phi, format_rational, lcm_u64, Field, Rational};

thread_local! {
    static CYCLOTOMIC_POLYS: RefCell<HashMap<u64, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients (ascending) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Rc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = CYCLOTOMIC_POLYS.with(|c| c.borrow().get(&m).cloned()) {
        return p;
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = divide_monic(&num, &div);
        }
    }
    let p = Rc::new(num);
    CYCLOTOMIC_POLYS.with(|c| c.borrow_mut().insert(m, p.clone()));
    p
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let n = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - n];
    for k in (n..num.len()).rev() {
        let c = rem[k];
        if c != 0 {
            quot[k - n] = c;
            for (i, d) in den.iter().enumerate() {
                rem[k - n + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of `Q(ζ_order)`.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

/// Reduces a polynomial in `ζ_m` (ascending coefficients) modulo `Φ_m`.
fn reduce(mut poly: Vec<Rational>, m: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(m);
    let n = phi.len() - 1;
    if poly.len() > n {
        for k in (n..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], Rational::zero());
            for (i, p) in phi.iter().take(n).enumerate() {
                if *p != 0 {
                    poly[k - n + i] -= &c * Rational::from_integer(BigInt::from(*p));
                }
            }
        }
    }
    poly.resize(n, Rational::zero());
    poly
}

impl Cyclotomic {
    /// Builds an element from power-basis coefficients of any length; the
    /// input is reduced modulo `Φ_order`.
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic { order, coeffs: reduce(coeffs, order) }
    }

    pub fn rational(q: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::from_coeffs(m, v)
    }

    pub fn zeta(m: u64) -> Self {
        Self::zeta_pow(m, 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Re-expresses the element in `Q(ζ_target)`; `target` must be a multiple
    /// of the current order.
    pub fn lift(&self, target: u64) -> Self {
        assert!(target.is_multiple_of(self.order), "order {} does not divide {}", self.order, target);
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Self::from_coeffs(target, v)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = lcm_u64(self.order, other.order);
        (self.lift(m), other.lift(m))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Smallest-order representation among the divisors of the current order.
    pub fn simplify(&self) -> Self {
        if self.is_rational() {
            return Cyclotomic::rational(self.as_rational().unwrap());
        }
        let n = self.coeffs.len();
        for d in 2..self.order {
            if !self.order.is_multiple_of(d) || euler_phi(d) as usize >= n {
                continue;
            }
            let basis: Vec<Vec<Rational>> =
                (0..euler_phi(d) as i64).map(|j| Cyclotomic::zeta_pow(d, j).lift(self.order).coeffs).collect();
            let matrix: Vec<Vec<Rational>> = (0..n).map(|i| basis.iter().map(|col| col[i].clone()).collect()).collect();
            if let Some(sol) = solve(&matrix, &self.coeffs) {
                return Cyclotomic { order: d, coeffs: sol };
            }
        }
        self.clone()
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Writes the element as `r · ζ_M^k` with `r > 0` rational, if possible.
    /// `M` is `lcm(order, 2)` so that signs are roots of unity too.
    pub fn as_scaled_root_of_unity(&self) -> Option<(Rational, u64, u64)> {
        if self.is_zero() {
            return None;
        }
        let m = lcm_u64(self.order, 2);
        let lifted = self.lift(m);
        for k in 0..m {
            let y = &lifted * &Cyclotomic::zeta_pow(m, -(k as i64));
            if let Some(r) = y.as_rational() {
                if r.is_positive() {
                    return Some((r, m, k));
                }
            }
        }
        None
    }

    fn mul_same_order(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic { order: self.order, coeffs: reduce(prod, self.order) }
    }

    /// Inverse via the multiplication matrix; `None` for zero.
    pub fn checked_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyclotomic::rational(q.recip()));
        }
        let n = self.coeffs.len();
        // Column j holds the coordinates of self * ζ^j.
        let cols: Vec<Vec<Rational>> =
            (0..n).map(|j| self.mul_same_order(&Cyclotomic::zeta_pow(self.order, j as i64)).coeffs).collect();
        let matrix: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let mut rhs = vec![Rational::zero(); n];
        rhs[0] = Rational::one();
        let sol = solve(&matrix, &rhs)?;
        Some(Cyclotomic { order: self.order, coeffs: sol })
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        if let Some(q) = s.as_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut first = true;
        for (i, c) in s.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let base = match i {
                0 => String::new(),
                1 => format!("z{}", s.order),
                _ => format!("z{}^{}", s.order, i),
            };
            if base.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", base)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), base)?;
            }
        }
        Ok(())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::rational(Rational::one())
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::rational(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = if self.order == other.order { (self.clone(), other.clone()) } else { self.aligned(other) };
        let coeffs = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x + y).collect();
        Cyclotomic { order: a.order, coeffs }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, other: &Cyclotomic) -> Cyclotomic {
        self + &(-other)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, other: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = other.as_rational() {
            return Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * &q).collect() };
        }
        if let Some(q) = self.as_rational() {
            return Cyclotomic { order: other.order, coeffs: other.coeffs.iter().map(|c| c * &q).collect() };
        }
        if self.order == other.order {
            self.mul_same_order(other)
        } else {
            let (a, b) = self.aligned(other);
            a.mul_same_order(&b)
        }
    }
}

impl<'a> Div<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, other: &Cyclotomic) -> Cyclotomic {
        let inv = other.checked_inverse().expect("division by zero cyclotomic number");
        self * &inv
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, other: Cyclotomic) -> Cyclotomic {
                (&self).$m(&other)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Field for Cyclotomic {
    fn from_rational(q: &Rational) -> Self {
        Cyclotomic::rational(q.clone())
    }
    fn inverse(&self) -> Option<Self> {
        self.checked_inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_has_exact_order() {
        for m in 1..=24u64 {
            let z = Cyclotomic::zeta(m);
            assert!(z.pow(m as u32).is_one(), "ζ_{m}^{m} != 1");
            for k in 1..m {
                assert!(!z.pow(k as u32).is_one());
            }
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Cyclotomic::zeta(4);
        assert_eq!(&i * &i, Cyclotomic::rational(rat(-1, 1)));
    }

    #[test]
    fn mixed_orders_embed() {
        // ζ_6 = -ζ_3^2 and ζ_12^2 = ζ_6.
        let z6 = Cyclotomic::zeta(6);
        assert_eq!(z6, -Cyclotomic::zeta_pow(3, 2));
        assert_eq!(Cyclotomic::zeta_pow(12, 2), z6);
        let s = &Cyclotomic::zeta(4) + &Cyclotomic::zeta(3);
        assert_eq!(s.order(), 12);
    }

    #[test]
    fn inverse_round_trip() {
        let a = Cyclotomic::from_coeffs(5, vec![rat(1, 1), rat(2, 3), rat(0, 1), rat(-1, 2)]);
        let inv = a.checked_inverse().unwrap();
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn scaled_root_of_unity_detection() {
        let x = &Cyclotomic::rational(rat(-3, 1)) * &Cyclotomic::zeta(3);
        let (r, m, k) = x.as_scaled_root_of_unity().unwrap();
        assert_eq!(r, rat(3, 1));
        let back = &Cyclotomic::rational(r) * &Cyclotomic::zeta_pow(m, k as i64);
        assert_eq!(back, x);
        let y = &Cyclotomic::one() + &Cyclotomic::zeta(5);
        // 1 + ζ_5 = -ζ_5^3 (ζ_5^2 + ... ) is not a scaled root of unity: |1+ζ_5| is irrational.
        assert!(y.as_scaled_root_of_unity().is_none());
    }

    #[test]
    fn display_simplifies() {
        let x = Cyclotomic::zeta_pow(12, 3);
        assert_eq!(x.to_string(), "z4");
        assert_eq!(Cyclotomic::rational(rat(1, 2)).lift(8).to_string(), "1/2");
    }
}
