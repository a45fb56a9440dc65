//! Per-branch invariants: characteristic exponents and pairs, inversion of
//! the roles of `x` and `y`, conjugate valuations, the valuation semigroup
//! and intersection numbers of pairs of branches.
//!
//! A [`Branch`] is the parametrization `x = t^d`, `y = y(t)`. Its
//! eigen-expansion is `y(ε^{1/d})`, and the `d` Galois conjugates are
//! obtained by `t ↦ ζ_d^j t`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::certificate::{LocalQuotientCertificate, Method};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::linalg::{echelon_pivot_orders, SparseVec};
use crate::scalar::{gcd_u64, lcm_u64, Rational};
use crate::series::{difference_valuation, PuiseuxSeries, Valuation};

type Series = PuiseuxSeries<Cyclotomic>;

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    d: u64,
    y: Series,
}

impl Branch {
    /// `y` must have integer exponents (ramification one) and no negative
    /// powers of `t`.
    pub fn new(d: u64, y: Series) -> Result<Self> {
        if d == 0 {
            return Err(Error::NonPositiveRamification(0));
        }
        if y.ram() != 1 {
            return Err(Error::InvalidInput("branch series must have integer exponents in t".into()));
        }
        if y.terms().keys().next().is_some_and(|&k| k < 0) {
            return Err(Error::InvalidInput("branch series has a negative power of t".into()));
        }
        if y.trunc().is_some_and(|t| t < 1) {
            return Err(Error::InvalidInput("branch truncation must be positive".into()));
        }
        Ok(Branch { d, y })
    }

    pub fn from_rational(d: u64, terms: &[(i64, Rational)], trunc: Option<i64>) -> Result<Self> {
        let y = Series::new(1, terms.iter().map(|(k, c)| (*k, Cyclotomic::rational(c.clone()))), trunc);
        Self::new(d, y)
    }

    /// Convenience constructor with integer coefficients and exact series.
    pub fn exact(d: u64, terms: &[(i64, i64)]) -> Self {
        let terms: Vec<(i64, Rational)> = terms.iter().map(|&(k, c)| (k, crate::scalar::int(c))).collect();
        Self::from_rational(d, &terms, None).expect("valid branch")
    }

    /// Reads a branch off an eigen-expansion in `ε^{1/n}`.
    pub fn from_expansion(s: &Series) -> Result<Self> {
        let y = Series::new(1, s.terms().iter().map(|(k, c)| (*k, c.clone())), s.trunc());
        Self::new(s.ram(), y)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn y(&self) -> &Series {
        &self.y
    }

    pub fn trunc(&self) -> Option<i64> {
        self.y.trunc()
    }

    pub fn center(&self) -> Cyclotomic {
        self.y.terms().get(&0).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    /// Lowest positive exponent of `y`, if known.
    pub fn n0(&self) -> Option<i64> {
        self.y.terms().keys().copied().find(|&k| k > 0)
    }

    /// `y − y(0)`.
    pub fn centered(&self) -> Series {
        Series::new(1, self.y.terms().iter().filter(|(k, _)| **k > 0).map(|(k, c)| (*k, c.clone())), self.y.trunc())
    }

    /// `y(ε^{1/d})` as a series in `ε`.
    pub fn expansion(&self) -> Series {
        Series::new(self.d, self.y.terms().iter().map(|(k, c)| (*k, c.clone())), self.y.trunc())
    }

    /// The `j`-th Galois conjugate `y(ζ_d^j ε^{1/d})`.
    pub fn conjugate(&self, j: u64) -> Series {
        let d = self.d;
        self.expansion().twist(|k| Cyclotomic::zeta_pow(d, (j as i64) * k).simplify())
    }

    /// Exponents with nonzero coefficient (constant term included).
    pub fn support(&self) -> Vec<i64> {
        self.y.terms().keys().copied().collect()
    }

    fn not_primitive(&self) -> Error {
        if self.y.is_exact() {
            Error::DegenerateInput(format!(
                "parametrization with x = t^{} is not primitive (exponents share a common factor)",
                self.d
            ))
        } else {
            Error::InsufficientPrecision(format!(
                "branch with x = t^{} is primitive only beyond the truncation t^{}",
                self.d,
                self.y.trunc().unwrap()
            ))
        }
    }
}

/// `(β₀; β₁, …, β_g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharExponents {
    beta: Vec<u64>,
}

impl CharExponents {
    pub fn new(beta: Vec<u64>) -> Result<Self> {
        let Some(&b0) = beta.first() else {
            return Err(Error::InvalidInput("characteristic exponents need β0".into()));
        };
        if b0 == 0 {
            return Err(Error::InvalidInput("β0 must be positive".into()));
        }
        let mut e = b0;
        for (i, &b) in beta.iter().enumerate().skip(1) {
            if i >= 2 && b <= beta[i - 1] {
                return Err(Error::InvalidInput(format!("characteristic exponents must increase: {beta:?}")));
            }
            if b == 0 || b % e == 0 {
                return Err(Error::InvalidInput(format!("β{i} = {b} is divisible by the previous gcd {e}")));
            }
            e = gcd_u64(e, b);
        }
        if e != 1 {
            return Err(Error::InvalidInput(format!("gcd of {beta:?} is {e}, not 1")));
        }
        Ok(CharExponents { beta })
    }

    pub fn beta(&self) -> &[u64] {
        &self.beta
    }

    pub fn multiplicity(&self) -> u64 {
        self.beta[0]
    }

    pub fn genus(&self) -> usize {
        self.beta.len() - 1
    }

    /// `e_0 = β₀, e_ν = gcd(e_{ν−1}, β_ν)`.
    pub fn gcd_chain(&self) -> Vec<u64> {
        let mut out = vec![self.beta[0]];
        for &b in &self.beta[1..] {
            let last = *out.last().unwrap();
            out.push(gcd_u64(last, b));
        }
        out
    }

    /// Each conjugate valuation `β_ν/β₀` with the number of nonzero twists
    /// `j` realizing it, `e_{ν−1} − e_ν`.
    pub fn conjugate_valuation_counts(&self) -> Vec<(Rational, u64)> {
        let e = self.gcd_chain();
        (1..self.beta.len())
            .map(|v| (Rational::new(BigInt::from(self.beta[v]), BigInt::from(self.beta[0])), e[v - 1] - e[v]))
            .collect()
    }
}

/// `((m₁, n₁), …, (m_g, n_g))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPairs {
    pairs: Vec<(u64, u64)>,
}

impl CharPairs {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        let mut denom = 1u64;
        let mut prev: Option<Rational> = None;
        for &(m, n) in &pairs {
            if m == 0 || n < 2 || gcd_u64(m, n) != 1 {
                return Err(Error::InvalidInput(format!("invalid characteristic pair ({m}, {n})")));
            }
            denom *= n;
            let r = Rational::new(BigInt::from(m), BigInt::from(denom));
            if prev.as_ref().is_some_and(|p| *p >= r) {
                return Err(Error::InvalidInput(format!("characteristic pairs {pairs:?} give non-increasing ratios")));
            }
            prev = Some(r);
        }
        Ok(CharPairs { pairs })
    }

    pub fn empty() -> Self {
        CharPairs { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// `n₁⋯n_g`, the multiplicity of the branch.
    pub fn degree(&self) -> u64 {
        self.pairs.iter().map(|p| p.1).product()
    }

    /// `m_ν / (n₁⋯n_ν)`.
    pub fn root_valuations(&self) -> Vec<Rational> {
        let mut denom = 1u64;
        self.pairs
            .iter()
            .map(|&(m, n)| {
                denom *= n;
                Rational::new(BigInt::from(m), BigInt::from(denom))
            })
            .collect()
    }
}

impl std::fmt::Display for CharPairs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inner: Vec<String> = self.pairs.iter().map(|(m, n)| format!("({m},{n})")).collect();
        write!(f, "({})", inner.join(","))
    }
}

impl std::fmt::Display for CharExponents {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rest: Vec<String> = self.beta[1..].iter().map(u64::to_string).collect();
        if rest.is_empty() {
            write!(f, "({})", self.beta[0])
        } else {
            write!(f, "({}; {})", self.beta[0], rest.join(", "))
        }
    }
}

/// The induction `β_{ν+1} = min{k : a_k ≠ 0, e_ν ∤ k}` without the
/// requirement that `y` has order at least `d`.
fn raw_exponents(b: &Branch) -> Result<CharExponents> {
    let mut beta = vec![b.d];
    let mut e = b.d;
    for &k in b.y.terms().keys() {
        if e == 1 {
            break;
        }
        if k > 0 && !(k as u64).is_multiple_of(e) {
            beta.push(k as u64);
            e = gcd_u64(e, k as u64);
        }
    }
    if e != 1 {
        return Err(b.not_primitive());
    }
    CharExponents::new(beta)
}

pub fn characteristic_exponents(b: &Branch) -> Result<CharExponents> {
    if b.d == 1 {
        return CharExponents::new(vec![1]);
    }
    match b.n0() {
        Some(n0) if (n0 as u64) < b.d => {
            return Err(Error::OrderBelowRamification { order: n0, ramification: b.d });
        }
        None => return Err(b.not_primitive()),
        _ => {}
    }
    raw_exponents(b)
}

pub fn characteristic_pairs(c: &CharExponents) -> CharPairs {
    let e = c.gcd_chain();
    let pairs = (1..c.beta.len()).map(|v| (c.beta[v] / e[v], e[v - 1] / e[v])).collect();
    CharPairs { pairs }
}

pub fn exponents_from_pairs(p: &CharPairs) -> CharExponents {
    let g = p.pairs.len();
    let mut e = vec![1u64; g + 1];
    for v in (1..=g).rev() {
        e[v - 1] = p.pairs[v - 1].1 * e[v];
    }
    let mut beta = vec![e[0]];
    for v in 1..=g {
        beta.push(p.pairs[v - 1].0 * e[v]);
    }
    CharExponents { beta }
}

pub fn pairs_from_root_valuations(vals: &[Rational]) -> Result<CharPairs> {
    if vals.is_empty() {
        return Err(Error::InvalidInput("no root valuations given".into()));
    }
    for (i, v) in vals.iter().enumerate() {
        if !v.is_positive() || (i > 0 && *v <= vals[i - 1]) {
            return Err(Error::InvalidInput("root valuations must be positive and strictly increasing".into()));
        }
    }
    let mut denom = BigInt::one();
    let mut pairs = Vec::new();
    for v in vals {
        let x = v * Rational::from_integer(denom.clone());
        if x.denom().is_one() {
            return Err(Error::NotRealizable(format!(
                "{} is an integer after clearing the denominators {}",
                crate::scalar::format_rational(&x),
                denom
            )));
        }
        let m = u64::try_from(x.numer()).map_err(|_| Error::InvalidInput("root valuation out of range".into()))?;
        let n = u64::try_from(x.denom()).map_err(|_| Error::InvalidInput("root valuation out of range".into()))?;
        pairs.push((m, n));
        denom *= n;
    }
    CharPairs::new(pairs).map_err(|e| Error::NotRealizable(e.to_string()))
}

fn inverted(p: &CharPairs) -> Vec<(i64, u64)> {
    let (m1, n1) = p.pairs[0];
    let shift = m1 as i64 - n1 as i64;
    let mut out = vec![(n1 as i64, m1)];
    let mut prod = 1i64;
    for &(m, n) in &p.pairs[1..] {
        prod *= n as i64;
        out.push((m as i64 - shift * prod, n));
    }
    out
}

fn to_pairs(raw: Vec<(i64, u64)>) -> Result<CharPairs> {
    let mut pairs = Vec::with_capacity(raw.len());
    for (m, n) in raw {
        if m <= 0 {
            return Err(Error::DegenerateInput(format!("inversion produces the non-positive entry {m}")));
        }
        pairs.push((m as u64, n));
    }
    CharPairs::new(pairs).map_err(|e| Error::DegenerateInput(e.to_string()))
}

/// Pairs of the parametrization with the roles of `x` and `y` exchanged.
pub fn invert_parametrization(p: &CharPairs) -> Result<CharPairs> {
    if p.is_empty() {
        return Err(Error::DegenerateInput("cannot invert the empty pair list".into()));
    }
    if p.pairs[0].0 == 1 {
        return Err(Error::DegenerateInput("first pair has m = 1, so the inverted first pair would have n = 1".into()));
    }
    to_pairs(inverted(p))
}

/// Inversion allowing `m₁ = 1`, in which case the leading pair, which then
/// carries no singular information, is dropped.
fn invert_dropping_unit(p: &CharPairs) -> Result<CharPairs> {
    let mut raw = inverted(p);
    if raw[0].1 == 1 {
        raw.remove(0);
    }
    to_pairs(raw)
}

/// Characteristic pairs of a branch, inverting first when `y` has order
/// below `d`.
pub fn branch_pairs(b: &Branch) -> Result<CharPairs> {
    if b.d == 1 {
        return Ok(CharPairs::empty());
    }
    let n0 = b.n0().ok_or_else(|| b.not_primitive())?;
    if n0 as u64 >= b.d {
        return Ok(characteristic_pairs(&characteristic_exponents(b)?));
    }
    invert_dropping_unit(&characteristic_pairs(&raw_exponents(b)?))
}

/// Characteristic exponents in coordinates where `x` is transverse.
pub fn branch_exponents(b: &Branch) -> Result<CharExponents> {
    Ok(exponents_from_pairs(&branch_pairs(b)?))
}

/// `min{k/d : a_k ≠ 0, jk ≢ 0 mod d}`.
pub fn conjugate_difference_valuation(b: &Branch, j: u64) -> Result<Rational> {
    if j == 0 || j >= b.d {
        return Err(Error::InvalidInput(format!("twist index {j} outside 1..{}", b.d.saturating_sub(1))));
    }
    for &k in b.y.terms().keys() {
        if !(j * k as u64).is_multiple_of(b.d) {
            return Ok(Rational::new(BigInt::from(k), BigInt::from(b.d)));
        }
    }
    Err(b.not_primitive())
}

/// The standard unit-coefficient branch `x = t^{β₀}, y = Σ t^{β_ν}`.
pub fn standard_branch(p: &CharPairs) -> Branch {
    let c = exponents_from_pairs(p);
    let terms: Vec<(i64, i64)> = c.beta[1..].iter().map(|&b| (b as i64, 1)).collect();
    Branch::exact(c.beta[0], &terms)
}

/// Valuation semigroup of a branch, certified exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    pub gaps: Vec<u64>,
    pub conductor: u64,
    pub generators: Vec<u64>,
    pub certificate: LocalQuotientCertificate,
}

/// Orders below `window` of the images of `x^a (y − y(0))^b`.
fn achieved_orders(b: &Branch, y0: &Series, n0: i64, window: i64) -> BTreeSet<usize> {
    let d = b.d as i64;
    let mut vecs: Vec<SparseVec<Cyclotomic>> = Vec::new();
    let mut ypow = Series::constant(Cyclotomic::one());
    let mut bexp = 0i64;
    while bexp * n0 < window {
        let mut a = 0i64;
        while d * a + bexp * n0 < window {
            let v: SparseVec<Cyclotomic> = ypow
                .terms()
                .iter()
                .map(|(k, c)| (k + d * a, c))
                .take_while(|(k, _)| *k < window)
                .map(|(k, c)| (k as usize, c.clone()))
                .collect();
            vecs.push(v);
            a += 1;
        }
        ypow = (&ypow * y0).truncated(window);
        bexp += 1;
    }
    echelon_pivot_orders(&vecs, window as usize)
}

fn gaps_below(orders: &BTreeSet<usize>, window: i64) -> Vec<u64> {
    (0..window as usize).filter(|k| !orders.contains(k)).map(|k| k as u64).collect()
}

pub fn branch_semigroup(b: &Branch) -> Result<Semigroup> {
    let d = b.d as i64;
    if d == 1 {
        return Ok(Semigroup {
            gaps: Vec::new(),
            conductor: 0,
            generators: vec![1],
            certificate: LocalQuotientCertificate {
                value: 0,
                stabilized_at: 1,
                rechecked_at: None,
                method: Method::SemigroupGaps,
            },
        });
    }
    if support_gcd(b) != 1 {
        return Err(b.not_primitive());
    }
    let n0 = b.n0().ok_or_else(|| b.not_primitive())?;
    let y0 = b.centered();
    let limit = b.trunc();
    let cap = limit.unwrap_or(i64::MAX);
    let mut window = (2 * (d + n0)).min(cap);
    let (gaps, conductor) = loop {
        let orders = achieved_orders(b, &y0, n0, window);
        let gaps = gaps_below(&orders, window);
        let conductor = gaps.last().map_or(0, |g| g + 1);
        if window as u64 >= conductor + b.d {
            break (gaps, conductor);
        }
        if window >= cap {
            return Err(Error::InsufficientPrecision(format!(
                "valuation semigroup not certified below the truncation t^{window}"
            )));
        }
        if window > 1 << 14 {
            return Err(Error::Internal("valuation semigroup failed to stabilize".into()));
        }
        window = (2 * window).min(cap);
    };
    let delta = gaps.len() as u64;
    if conductor != 2 * delta {
        return Err(Error::Internal(format!("conductor {conductor} differs from 2δ = {}", 2 * delta)));
    }
    let in_s = |k: u64| k >= conductor || gaps.binary_search(&k).is_err();
    for k in 0..conductor {
        if in_s(k) == in_s(conductor - 1 - k) {
            return Err(Error::Internal(format!("semigroup is not symmetric at {k}")));
        }
    }
    let recheck = window + d;
    let rechecked_at = if recheck <= cap {
        let again = gaps_below(&achieved_orders(b, &y0, n0, recheck), recheck);
        if again != gaps {
            return Err(Error::Internal(format!("semigroup gaps changed between t^{window} and t^{recheck}")));
        }
        Some(recheck as u64)
    } else {
        None
    };
    let top = conductor + b.d;
    let mut generators = Vec::new();
    for s in 1..top {
        if !in_s(s) {
            continue;
        }
        let decomposable = (1..s).any(|a| in_s(a) && in_s(s - a));
        if !decomposable {
            generators.push(s);
        }
    }
    Ok(Semigroup {
        gaps,
        conductor,
        generators,
        certificate: LocalQuotientCertificate {
            value: delta,
            stabilized_at: window as u64,
            rechecked_at,
            method: Method::SemigroupGaps,
        },
    })
}

pub fn branch_delta(b: &Branch) -> Result<LocalQuotientCertificate> {
    Ok(branch_semigroup(b)?.certificate)
}

/// Sum of `val(u_k − v_l)` over all pairs of conjugates, in the frame
/// `ε^{1/lcm(d₁, d₂)}`.
pub fn intersection_number(b1: &Branch, b2: &Branch) -> Result<u64> {
    let frame = lcm_u64(b1.d, b2.d);
    let us: Vec<Series> = (0..b1.d).map(|k| b1.conjugate(k).with_ram(frame)).collect();
    let vs: Vec<Series> = (0..b2.d).map(|l| b2.conjugate(l).with_ram(frame)).collect();
    let mut total = Rational::zero();
    for u in &us {
        for v in &vs {
            match difference_valuation(u, v) {
                Valuation::Finite(q) => total += q,
                Valuation::Infinite => {
                    return Err(Error::NotDistinct("two branches share a Puiseux root".into()));
                }
                Valuation::Indeterminate => {
                    return Err(Error::InsufficientPrecision(
                        "two Puiseux roots agree up to their common truncation".into(),
                    ));
                }
            }
        }
    }
    if !total.is_integer() {
        return Err(Error::Internal(format!("non-integral intersection sum {total}")));
    }
    u64::try_from(total.to_integer()).map_err(|_| Error::Internal("negative intersection sum".into()))
}

/// Greatest common divisor of `d` and the support of `y` (one for a primitive
/// parametrization).
pub fn support_gcd(b: &Branch) -> u64 {
    b.y.terms().keys().fold(b.d, |g, &k| g.gcd(&(k as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn pairs(v: &[(u64, u64)]) -> CharPairs {
        CharPairs::new(v.to_vec()).unwrap()
    }

    fn exps(v: &[u64]) -> CharExponents {
        CharExponents::new(v.to_vec()).unwrap()
    }

    #[test]
    fn exponents_of_examples() {
        assert_eq!(characteristic_exponents(&Branch::exact(2, &[(3, 1)])).unwrap(), exps(&[2, 3]));
        assert_eq!(characteristic_exponents(&Branch::exact(4, &[(6, 1), (7, 1)])).unwrap(), exps(&[4, 6, 7]));
        assert_eq!(characteristic_exponents(&Branch::exact(1, &[(2, 1)])).unwrap(), exps(&[1]));
    }

    #[test]
    fn low_order_is_rejected() {
        let b = Branch::exact(4, &[(2, 1), (3, 1)]);
        assert!(matches!(
            characteristic_exponents(&b),
            Err(Error::OrderBelowRamification { order: 2, ramification: 4 })
        ));
    }

    #[test]
    fn truncation_before_gcd_one() {
        let b = Branch::from_rational(4, &[(6, int(1))], Some(7)).unwrap();
        assert!(matches!(characteristic_exponents(&b), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn pairs_and_back() {
        assert_eq!(characteristic_pairs(&exps(&[2, 3])), pairs(&[(3, 2)]));
        assert_eq!(characteristic_pairs(&exps(&[4, 6, 7])), pairs(&[(3, 2), (7, 2)]));
        assert_eq!(characteristic_pairs(&exps(&[1])), CharPairs::empty());
        assert_eq!(exponents_from_pairs(&pairs(&[(3, 2), (7, 2)])), exps(&[4, 6, 7]));
        assert_eq!(exponents_from_pairs(&pairs(&[(3, 2)])), exps(&[2, 3]));
        assert_eq!(exponents_from_pairs(&CharPairs::empty()), exps(&[1]));
    }

    #[test]
    fn pairs_from_valuations() {
        assert_eq!(pairs_from_root_valuations(&[rat(3, 2)]).unwrap(), pairs(&[(3, 2)]));
        assert_eq!(pairs_from_root_valuations(&[rat(3, 2), rat(7, 4)]).unwrap(), pairs(&[(3, 2), (7, 2)]));
        assert!(matches!(pairs_from_root_valuations(&[rat(5, 3), rat(7, 3)]), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(invert_parametrization(&pairs(&[(2, 3)])).unwrap(), pairs(&[(3, 2)]));
        assert_eq!(invert_parametrization(&pairs(&[(3, 2)])).unwrap(), pairs(&[(2, 3)]));
        assert_eq!(invert_parametrization(&pairs(&[(5, 2), (11, 2)])).unwrap(), pairs(&[(2, 5), (5, 2)]));
        assert!(CharPairs::new(vec![(5, 2), (9, 2)]).is_err());
        assert!(matches!(invert_parametrization(&CharPairs::empty()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn routing_through_inversion() {
        // x = t^4, y = t^2 + t^3 is, after swapping, a branch with pairs ((5, 2)).
        assert_eq!(branch_pairs(&Branch::exact(4, &[(2, 1), (3, 1)])).unwrap(), pairs(&[(5, 2)]));
        assert_eq!(branch_pairs(&Branch::exact(3, &[(2, 1)])).unwrap(), pairs(&[(3, 2)]));
        assert_eq!(branch_pairs(&Branch::exact(2, &[(1, 1)])).unwrap(), CharPairs::empty());
    }

    #[test]
    fn conjugate_valuations() {
        let b = Branch::exact(4, &[(6, 1), (7, 1)]);
        assert_eq!(conjugate_difference_valuation(&b, 1).unwrap(), rat(3, 2));
        assert_eq!(conjugate_difference_valuation(&b, 2).unwrap(), rat(7, 4));
        assert_eq!(conjugate_difference_valuation(&b, 3).unwrap(), rat(3, 2));
        let cusp = Branch::exact(2, &[(3, 1)]);
        assert_eq!(conjugate_difference_valuation(&cusp, 1).unwrap(), rat(3, 2));
    }

    #[test]
    fn conjugate_valuations_match_subtraction() {
        let b = Branch::exact(4, &[(6, 1), (7, 1)]);
        for j in 1..4 {
            let direct = difference_valuation(&b.conjugate(0), &b.conjugate(j));
            assert_eq!(direct, Valuation::Finite(conjugate_difference_valuation(&b, j).unwrap()));
        }
    }

    #[test]
    fn deltas() {
        assert_eq!(branch_delta(&Branch::exact(2, &[(3, 1)])).unwrap().value, 1);
        assert_eq!(branch_delta(&Branch::exact(2, &[(5, 1)])).unwrap().value, 2);
        let s = branch_semigroup(&Branch::exact(4, &[(6, 1), (7, 1)])).unwrap();
        assert_eq!(s.certificate.value, 8);
        assert_eq!(s.conductor, 16);
        assert_eq!(s.generators, vec![4, 6, 13]);
        assert_eq!(branch_delta(&Branch::exact(1, &[(2, 1)])).unwrap().value, 0);
    }

    #[test]
    fn semigroup_needs_terms() {
        let b = Branch::from_rational(4, &[(6, int(1)), (7, int(1))], Some(12)).unwrap();
        assert!(matches!(branch_delta(&b), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn intersections() {
        let cusp = Branch::exact(2, &[(3, 1)]);
        let line = Branch::exact(1, &[]);
        assert_eq!(intersection_number(&cusp, &line).unwrap(), 3);
        let up = Branch::exact(1, &[(2, 1)]);
        let down = Branch::exact(1, &[(2, -1)]);
        assert_eq!(intersection_number(&up, &down).unwrap(), 2);
        let cubic = Branch::exact(1, &[(3, 1)]);
        assert_eq!(intersection_number(&up, &cubic).unwrap(), 2);
        assert!(matches!(intersection_number(&up, &up), Err(Error::NotDistinct(_))));
    }

    #[test]
    fn truncated_intersection_is_indeterminate() {
        let a = Branch::from_rational(1, &[(2, int(1))], Some(5)).unwrap();
        let b = Branch::from_rational(1, &[(2, int(1))], Some(5)).unwrap();
        assert!(matches!(intersection_number(&a, &b), Err(Error::InsufficientPrecision(_))));
    }
}
