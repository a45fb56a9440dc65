//! Truncated Puiseux series with explicit precision.
//!
//! A [`PuiseuxSeries`] stores finitely many terms `c·s^{k/n}` (with `n` the
//! ramification index) together with a truncation order `T`: every exponent at
//! or above `T` is *unknown*, not zero. `T = ∞` marks an exactly known series.
//! Products and sums propagate truncation so that no stored term is ever a
//! guess; questions whose answer depends on unknown terms return
//! [`Valuation::Indeterminate`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{format_rational, lcm_u64, Field, Rational};

/// Valuation of a possibly truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rational),
    /// The series is certified zero.
    Infinite,
    /// No term is known below the truncation order.
    Indeterminate,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxSeries<C> {
    ram: u64,
    terms: BTreeMap<i64, C>,
    trunc: Option<i64>,
}

impl<C: Field> PuiseuxSeries<C> {
    /// Builds a series from exponent numerators over `ram`. Zero coefficients
    /// and terms at or beyond `trunc` are dropped.
    pub fn new(ram: u64, terms: impl IntoIterator<Item = (i64, C)>, trunc: Option<i64>) -> Self {
        assert!(ram >= 1, "ramification index must be positive");
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (k, c) in terms {
            if trunc.is_some_and(|t| k >= t) {
                continue;
            }
            let sum = match map.remove(&k) {
                Some(prev) => prev + c,
                None => c,
            };
            if !sum.is_zero() {
                map.insert(k, sum);
            }
        }
        PuiseuxSeries { ram, terms: map, trunc }
    }

    /// Builds a series from rational exponents, choosing the ramification
    /// index as the lcm of `ram` and all exponent denominators. The
    /// truncation is rounded up to the grid of that index.
    pub fn from_rational_terms(
        ram: u64,
        terms: impl IntoIterator<Item = (Rational, C)>,
        trunc: Option<Rational>,
    ) -> Self {
        let terms: Vec<(Rational, C)> = terms.into_iter().collect();
        let mut n = ram.max(1);
        for (e, _) in &terms {
            n = lcm_u64(n, u64::try_from(e.denom()).expect("exponent denominator fits u64"));
        }
        let scale = Rational::from_integer(BigInt::from(n));
        let to_num = |e: &Rational| -> i64 {
            let v = e * &scale;
            i64::try_from(v.numer()).expect("exponent numerator fits i64")
        };
        let trunc = trunc.map(|t| {
            let v = (t * &scale).ceil();
            i64::try_from(v.numer()).expect("truncation fits i64")
        });
        Self::new(n, terms.iter().map(|(e, c)| (to_num(e), c.clone())), trunc)
    }

    pub fn zero() -> Self {
        PuiseuxSeries { ram: 1, terms: BTreeMap::new(), trunc: None }
    }

    /// `O(s^{trunc/ram})`: no known terms.
    pub fn unknown(ram: u64, trunc: i64) -> Self {
        PuiseuxSeries { ram, terms: BTreeMap::new(), trunc: Some(trunc) }
    }

    pub fn constant(c: C) -> Self {
        Self::new(1, [(0, c)], None)
    }

    pub fn monomial(c: C, k: i64, ram: u64) -> Self {
        Self::new(ram, [(k, c)], None)
    }

    pub fn ram(&self) -> u64 {
        self.ram
    }

    pub fn terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }

    /// Truncation order as an exponent numerator over [`Self::ram`].
    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn trunc_rational(&self) -> Option<Rational> {
        self.trunc.map(|t| Rational::new(BigInt::from(t), BigInt::from(self.ram)))
    }

    pub fn exponent(&self, k: i64) -> Rational {
        Rational::new(BigInt::from(k), BigInt::from(self.ram))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Certified zero: no terms and exact.
    pub fn is_certified_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&k) => Valuation::Finite(self.exponent(k)),
            None if self.trunc.is_none() => Valuation::Infinite,
            None => Valuation::Indeterminate,
        }
    }

    pub fn lowest_term(&self) -> Option<(i64, &C)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    /// Lowest known exponent numerator, or the truncation when no term is
    /// known; `None` for the certified zero series.
    pub fn order_bound(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    /// Coefficient of `s^{k/ram}`; `None` if that exponent is beyond the
    /// truncation.
    pub fn coefficient(&self, k: i64) -> Option<C> {
        if self.trunc.is_some_and(|t| k >= t) {
            return None;
        }
        Some(self.terms.get(&k).cloned().unwrap_or_else(C::zero))
    }

    /// Re-expresses the series over ramification index `target`
    /// (a multiple of the current one).
    pub fn with_ram(&self, target: u64) -> Self {
        assert!(target.is_multiple_of(self.ram), "ramification {} does not divide {}", self.ram, target);
        let f = (target / self.ram) as i64;
        PuiseuxSeries {
            ram: target,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            trunc: self.trunc.map(|t| t * f),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let n = lcm_u64(self.ram, other.ram);
        (self.with_ram(n), other.with_ram(n))
    }

    /// Forgets every term at or beyond `limit` (a numerator over `ram`).
    pub fn truncated(&self, limit: i64) -> Self {
        let trunc = Some(self.trunc.map_or(limit, |t| t.min(limit)));
        Self::new(self.ram, self.terms.iter().map(|(k, c)| (*k, c.clone())), trunc)
    }

    /// Multiplies by `s^{k/ram}`.
    pub fn shift(&self, k: i64) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            trunc: self.trunc.map(|t| t + k),
        }
    }

    /// Substitutes `s ↦ s^q` (exponent numerators scale by `q`).
    pub fn compose_power(&self, q: u64) -> Self {
        let q = q as i64;
        PuiseuxSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, c)| (e * q, c.clone())).collect(),
            trunc: self.trunc.map(|t| t * q),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return PuiseuxSeries { ram: self.ram, terms: BTreeMap::new(), trunc: self.trunc };
        }
        PuiseuxSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> PuiseuxSeries<D> {
        PuiseuxSeries::new(self.ram, self.terms.iter().map(|(k, c)| (*k, f(c))), self.trunc)
    }

    /// Applies `s^{1/ram} ↦ g(k) · s^{1/ram}` termwise: coefficient of
    /// exponent `k` is multiplied by `g(k)`.
    pub fn twist(&self, g: impl Fn(i64) -> C) -> Self {
        Self::new(self.ram, self.terms.iter().map(|(k, c)| (*k, c.clone() * g(*k))), self.trunc)
    }

    fn add_aligned(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = if self.ram == other.ram { (self.clone(), other.clone()) } else { self.aligned(other) };
        let trunc = match (a.trunc, b.trunc) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut terms = a.terms;
        for (k, c) in b.terms {
            let c = if negate { -c } else { c };
            let sum = match terms.remove(&k) {
                Some(prev) => prev + c,
                None => c,
            };
            if !sum.is_zero() {
                terms.insert(k, sum);
            }
        }
        if let Some(t) = trunc {
            terms.retain(|k, _| *k < t);
        }
        PuiseuxSeries { ram: a.ram, terms, trunc }
    }

    fn mul_aligned(&self, other: &Self) -> Self {
        let (a, b) = if self.ram == other.ram { (self.clone(), other.clone()) } else { self.aligned(other) };
        // Certified zero absorbs everything.
        if a.is_certified_zero() || b.is_certified_zero() {
            return PuiseuxSeries { ram: a.ram, terms: BTreeMap::new(), trunc: None };
        }
        let lo_a = a.order_bound().expect("not certified zero");
        let lo_b = b.order_bound().expect("not certified zero");
        let trunc = match (a.trunc, b.trunc) {
            (Some(x), Some(y)) => Some((x + lo_b).min(y + lo_a)),
            (Some(x), None) => Some(x + lo_b),
            (None, Some(y)) => Some(y + lo_a),
            (None, None) => None,
        };
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (i, x) in &a.terms {
            if trunc.is_some_and(|t| i + lo_b >= t) {
                break;
            }
            for (j, y) in &b.terms {
                let k = i + j;
                if trunc.is_some_and(|t| k >= t) {
                    break;
                }
                let prod = x.clone() * y.clone();
                match terms.get_mut(&k) {
                    Some(prev) => *prev = prev.clone() + prod,
                    None => {
                        terms.insert(k, prod);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        PuiseuxSeries { ram: a.ram, terms, trunc }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..k {
            acc = acc.mul_aligned(self);
        }
        acc
    }

    /// Inverse of a series with a known lowest term, to the precision the
    /// input supports (and at most `limit`, a numerator over `ram`).
    pub fn inverse(&self, limit: i64) -> Option<Self> {
        let (v, c0) = self.lowest_term()?;
        let c0_inv = c0.inverse()?;
        // self = c0 s^v u with u(0) = 1; invert u coefficient by coefficient.
        let unit = self.shift(-v).scale(&c0_inv);
        let goal = (limit + v).max(1);
        let n = unit.trunc.map_or(goal, |t| t.min(goal));
        let dense: Vec<C> = (0..n).map(|k| unit.terms.get(&k).cloned().unwrap_or_else(C::zero)).collect();
        let mut w: Vec<C> = vec![C::one()];
        for k in 1..n as usize {
            let mut acc = C::zero();
            for j in 1..=k {
                if !dense[j].is_zero() && !w[k - j].is_zero() {
                    acc = acc + dense[j].clone() * w[k - j].clone();
                }
            }
            w.push(-acc);
        }
        let inv = Self::new(self.ram, w.into_iter().enumerate().map(|(k, c)| (k as i64, c)), Some(n));
        Some(inv.scale(&c0_inv).shift(-v).truncated(limit))
    }

    /// Text form with the given variable name, e.g. `e^3 - 2*e^(7/2) + O(e^5)`.
    pub fn format_with(&self, var: &str) -> String
    where
        C: fmt::Display,
    {
        let mut out = String::new();
        for (k, c) in &self.terms {
            let e = self.exponent(*k);
            let body = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                var.to_string()
            } else if e.is_integer() {
                format!("{}^{}", var, format_rational(&e))
            } else {
                format!("{}^({})", var, format_rational(&e))
            };
            let coeff = c.to_string();
            let (neg, mag) = match coeff.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, coeff),
            };
            let mag = if mag.contains(' ') { format!("({})", mag) } else { mag };
            let term = if body.is_empty() {
                mag
            } else if mag == "1" {
                body
            } else {
                format!("{}*{}", mag, body)
            };
            if out.is_empty() {
                out = if neg { format!("-{}", term) } else { term };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        if let Some(t) = self.trunc_rational() {
            let o = if t.is_integer() {
                format!("O({}^{})", var, format_rational(&t))
            } else {
                format!("O({}^({}))", var, format_rational(&t))
            };
            if out.is_empty() {
                out = o;
            } else {
                out.push_str(" + ");
                out.push_str(&o);
            }
        } else if out.is_empty() {
            out = "0".into();
        }
        out
    }
}

/// Valuation of `a − b` over the common ramification frame.
pub fn difference_valuation<C: Field>(a: &PuiseuxSeries<C>, b: &PuiseuxSeries<C>) -> Valuation {
    (a - b).valuation()
}

impl<C: Field> PartialEq for PuiseuxSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.trunc == b.trunc && a.terms == b.terms
    }
}

impl<'a, C: Field> Add<&'a PuiseuxSeries<C>> for &'a PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn add(self, other: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
        self.add_aligned(other, false)
    }
}

impl<'a, C: Field> Sub<&'a PuiseuxSeries<C>> for &'a PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn sub(self, other: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
        self.add_aligned(other, true)
    }
}

impl<'a, C: Field> Mul<&'a PuiseuxSeries<C>> for &'a PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn mul(self, other: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
        self.mul_aligned(other)
    }
}

impl<C: Field> Neg for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn neg(self) -> PuiseuxSeries<C> {
        PuiseuxSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }
}

/// `gcd` of the ramification index and all stored exponent numerators.
pub fn exponent_gcd<C>(s: &PuiseuxSeries<C>) -> u64 {
    let mut g = s.ram as i64;
    for k in s.terms.keys() {
        g = g.gcd(k);
    }
    g.unsigned_abs()
}
