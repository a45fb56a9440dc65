//! Sparse multivariate polynomials with exact coefficients.
//!
//! Variables are kept sorted by name and only variables that actually occur
//! are stored, so structural equality is mathematical equality. Exponent
//! vectors compare lexicographically in that variable order, which makes the
//! last map entry the lex-leading term used by exact division.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use crate::scalar::{format_rational, Field, Rational};

type Terms<C> = BTreeMap<Vec<u32>, C>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<C> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Field> SparsePoly<C> {
    pub fn zero() -> Self {
        SparsePoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        SparsePoly { vars: Vec::new(), terms }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(C::one(), &[(name, 1)])
    }

    /// `c · Π name^exp`.
    pub fn monomial(c: C, powers: &[(&str, u32)]) -> Self {
        Self::from_terms([(powers.iter().map(|&(v, e)| (v.to_string(), e)).collect::<Vec<_>>(), c)])
    }

    /// Builds from `(Vec<(var, exponent)>, coefficient)` pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<(String, u32)>, C)>) -> Self {
        let terms: Vec<(Vec<(String, u32)>, C)> = terms.into_iter().collect();
        let mut vars: Vec<String> = terms.iter().flat_map(|(m, _)| m.iter().map(|(v, _)| v.clone())).collect();
        vars.sort();
        vars.dedup();
        let mut map: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (mono, c) in terms {
            let mut key = vec![0u32; vars.len()];
            for (v, e) in mono {
                let i = vars.binary_search(&v).unwrap();
                key[i] += e;
            }
            accumulate(&mut map, key, c);
        }
        SparsePoly { vars, terms: map }.normalized()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    /// Terms as `(var → exponent, coefficient)` with zero exponents omitted.
    pub fn named_terms(&self) -> Vec<(Vec<(String, u32)>, C)> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mono = self.vars.iter().zip(k).filter(|(_, &e)| e > 0).map(|(v, &e)| (v.clone(), e)).collect();
                (mono, c.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len()).map(|i| self.terms.keys().any(|k| k[i] > 0)).collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars = self.vars.iter().zip(&used).filter(|(_, &u)| u).map(|(v, _)| v.clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(k, c)| (k.into_iter().zip(&used).filter(|(_, &u)| u).map(|(e, _)| e).collect(), c))
            .collect();
        SparsePoly { vars, terms }
    }

    /// Re-keys both operands over the union of their variables.
    fn aligned(&self, other: &Self) -> (Vec<String>, Terms<C>, Terms<C>) {
        if self.vars == other.vars {
            return (self.vars.clone(), self.terms.clone(), other.terms.clone());
        }
        let mut vars: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        vars.sort();
        vars.dedup();
        (vars.clone(), self.rekey(&vars), other.rekey(&vars))
    }

    fn rekey(&self, vars: &[String]) -> BTreeMap<Vec<u32>, C> {
        let idx: Vec<usize> = self.vars.iter().map(|v| vars.binary_search(v).unwrap()).collect();
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut key = vec![0u32; vars.len()];
                for (i, e) in k.iter().enumerate() {
                    key[idx[i]] = *e;
                }
                (key, c.clone())
            })
            .collect()
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (vars, mut a, b) = self.aligned(other);
        for (k, c) in b {
            accumulate(&mut a, k, c);
        }
        SparsePoly { vars, terms: a }.normalized()
    }

    pub fn neg(&self) -> Self {
        SparsePoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (vars, a, b) = self.aligned(other);
        let mut out: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let key: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                accumulate(&mut out, key, ca.clone() * cb.clone());
            }
        }
        SparsePoly { vars, terms: out }.normalized()
    }

    pub fn scale(&self, c: &C) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a.clone() * c.clone())).collect(),
        }
        .normalized()
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|k| k[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.iter().sum()).max()
    }

    /// Lowest total degree of a term (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.iter().sum()).min()
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.iter().sum::<u32>() == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
        .normalized()
    }

    /// Coefficients with respect to `var`: entry `i` multiplies `var^i`.
    pub fn coefficients_in(&self, var: &str) -> Vec<Self> {
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(var) as usize;
        let mut out: Vec<BTreeMap<Vec<u32>, C>> = vec![BTreeMap::new(); deg + 1];
        for (k, c) in &self.terms {
            let mut key = k.clone();
            let e = key[i] as usize;
            key[i] = 0;
            out[e].insert(key, c.clone());
        }
        out.into_iter().map(|terms| SparsePoly { vars: self.vars.clone(), terms }.normalized()).collect()
    }

    pub fn derivative(&self, var: &str) -> Self {
        let Some(i) = self.var_index(var) else {
            return Self::zero();
        };
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            if k[i] == 0 {
                continue;
            }
            let mut key = k.clone();
            key[i] -= 1;
            accumulate(&mut out, key, c.clone() * C::from_i64(k[i] as i64));
        }
        SparsePoly { vars: self.vars.clone(), terms: out }.normalized()
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: &str, value: &Self) -> Self {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        // Group by the exponent of `var` and evaluate by Horner.
        let coeffs = {
            let deg = self.degree_in(var) as usize;
            let mut out: Vec<BTreeMap<Vec<u32>, C>> = vec![BTreeMap::new(); deg + 1];
            for (k, c) in &self.terms {
                let mut key = k.clone();
                let e = key[i] as usize;
                key[i] = 0;
                out[e].insert(key, c.clone());
            }
            out.into_iter().map(|terms| SparsePoly { vars: self.vars.clone(), terms }.normalized()).collect::<Vec<_>>()
        };
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Evaluates every variable; missing assignments are an error.
    pub fn eval(&self, assignment: &[(&str, C)]) -> Option<C> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            vals.push(assignment.iter().find(|(n, _)| n == v)?.1.clone());
        }
        let mut acc = C::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in vals.iter().zip(k) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// The constant term.
    pub fn constant_term(&self) -> C {
        self.terms.iter().find(|(k, _)| k.iter().all(|&e| e == 0)).map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.vars.is_empty() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.inverse()?));
        }
        let (vars, mut rem, div) = self.aligned(divisor);
        let (lead_k, lead_c) = div.iter().next_back().map(|(k, c)| (k.clone(), c.clone()))?;
        let lead_inv = lead_c.inverse()?;
        let mut quot: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        while let Some((rk, rc)) = rem.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            if rk.iter().zip(&lead_k).any(|(a, b)| a < b) {
                return None;
            }
            let qk: Vec<u32> = rk.iter().zip(&lead_k).map(|(a, b)| a - b).collect();
            let qc = rc * lead_inv.clone();
            for (dk, dc) in &div {
                let key: Vec<u32> = dk.iter().zip(&qk).map(|(a, b)| a + b).collect();
                accumulate(&mut rem, key, -(qc.clone() * dc.clone()));
            }
            accumulate(&mut quot, qk, qc);
        }
        Some(SparsePoly { vars, terms: quot }.normalized())
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        SparsePoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), f(c))).collect() }
            .normalized()
    }
}

fn accumulate<C: Field>(map: &mut BTreeMap<Vec<u32>, C>, key: Vec<u32>, c: C) {
    if c.is_zero() {
        return;
    }
    match map.remove(&key) {
        Some(prev) => {
            let s = prev + c;
            if !s.is_zero() {
                map.insert(key, s);
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

impl SparsePoly<Rational> {
    /// Canonical text form: terms by descending total degree, then by
    /// descending exponent vector; coefficients as `p/q`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut items: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, (k, c)) in items.iter().enumerate() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(k.iter())
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{}^{}", v, e) })
                .collect();
            let mag = c.abs();
            let body = if mono.is_empty() {
                format_rational(&mag)
            } else if mag.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", format_rational(&mag), mono.join("*"))
            };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    /// Scales to integer coefficients with positive content one, keeping the sign.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let content = crate::scalar::rational_content(self.terms.values());
        self.scale(&content.recip())
    }
}

impl fmt::Display for SparsePoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Convenience constructor for tests and examples: `poly(&[(c, &[("x", 2)])])`.
pub fn qpoly(terms: &[(i64, &[(&str, u32)])]) -> SparsePoly<Rational> {
    SparsePoly::from_terms(
        terms
            .iter()
            .map(|(c, m)| (m.iter().map(|&(v, e)| (v.to_string(), e)).collect::<Vec<_>>(), crate::scalar::int(*c))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn arithmetic_and_variables() {
        let x = SparsePoly::<Rational>::var("x");
        let y = SparsePoly::<Rational>::var("y");
        let p = x.add(&y).pow(2);
        assert_eq!(p, qpoly(&[(1, &[("x", 2)]), (2, &[("x", 1), ("y", 1)]), (1, &[("y", 2)])]));
        let q = p.sub(&y.pow(2)).sub(&x.mul(&y).scale(&int(2)));
        assert_eq!(q, x.pow(2));
        assert_eq!(q.vars(), &["x".to_string()]);
    }

    #[test]
    fn exact_division() {
        let x = SparsePoly::<Rational>::var("x");
        let y = SparsePoly::<Rational>::var("y");
        let a = x.add(&y);
        let b = x.sub(&y);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.add(&SparsePoly::one()).div_exact(&a), None);
    }

    #[test]
    fn substitution() {
        // y^2 - x^3 at x = t^2, y = t^3 vanishes.
        let f = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 3)])]);
        let t = SparsePoly::<Rational>::var("t");
        let g = f.substitute("x", &t.pow(2)).substitute("y", &t.pow(3));
        assert!(g.is_zero());
    }

    #[test]
    fn text_form() {
        let f = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 3)])]);
        assert_eq!(f.to_text(), "-x^3 + y^2");
        let g = qpoly(&[(3, &[("x", 1), ("y", 1)]), (-2, &[])]);
        assert_eq!(g.to_text(), "3*x*y - 2");
    }

    #[test]
    fn derivative_and_coefficients() {
        let f = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 3)]), (2, &[("x", 1), ("y", 1)])]);
        assert_eq!(f.derivative("x"), qpoly(&[(-3, &[("x", 2)]), (2, &[("y", 1)])]));
        let cs = f.coefficients_in("y");
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[1], qpoly(&[(2, &[("x", 1)])]));
    }
}
