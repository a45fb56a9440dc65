//! Exact roots of the small univariate polynomials met during Newton–Puiseux.
//!
//! Only polynomials whose roots are expressible in a cyclotomic field by
//! elementary means are handled: after a square-free split, each factor must
//! be linear, quadratic, a binomial `T^q - a`, or have only rational roots.
//! Square roots of rationals come from quadratic Gauss sums. Anything else is
//! reported as an unsupported coefficient field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::scalar::{euler_phi, lcm_u64, rational_nth_root, Field, Rational};

/// Largest prime whose square root is formed from a Gauss sum.
pub const SQRT_PRIME_CAP: u64 = 31;
/// Largest field degree a square root is allowed to create.
const MAX_FIELD_DEGREE: u64 = 128;

/// Univariate polynomial, coefficients from low to high degree.
pub type UPoly = Vec<Cyclotomic>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &UPoly) -> usize {
    p.len().saturating_sub(1)
}

fn monic(p: &UPoly) -> UPoly {
    let lead = p.last().unwrap().inverse().unwrap();
    p.iter().map(|c| c * &lead).collect()
}

fn derivative(p: &UPoly) -> UPoly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * &Cyclotomic::from_i64(i as i64)).collect())
}

fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let mut rem = a.clone();
    let db = degree(b);
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let lead_inv = b.last().unwrap().inverse().unwrap();
    let mut quot = vec![Cyclotomic::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[i + j] = &rem[i + j] - &(&c * bc);
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a)
    }
}

/// Yun's square-free decomposition: `(factor, multiplicity)` with monic,
/// square-free, pairwise coprime factors of positive degree.
pub fn squarefree_decomposition(p: &UPoly) -> Vec<(UPoly, usize)> {
    let p = monic(&trim(p.clone()));
    let mut out = Vec::new();
    if degree(&p) == 0 {
        return out;
    }
    let dp = derivative(&p);
    let mut a = gcd(&p, &dp);
    let mut b = divrem(&p, &a).0;
    let mut c = divrem(&dp, &a).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while degree(&b) > 0 {
        a = gcd(&b, &d);
        if degree(&a) > 0 {
            out.push((a.clone(), i));
        }
        b = divrem(&b, &a).0;
        c = divrem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

fn sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Cyclotomic::zero);
                let y = b.get(i).cloned().unwrap_or_else(Cyclotomic::zero);
                &x - &y
            })
            .collect(),
    )
}

pub fn evaluate(p: &UPoly, x: &Cyclotomic) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn describe(p: &UPoly) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        parts.push(match i {
            0 => format!("({c})"),
            1 => format!("({c})*T"),
            _ => format!("({c})*T^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// A square root of the prime `p` inside a cyclotomic field.
fn sqrt_prime(p: u64) -> Cyclotomic {
    if p == 2 {
        return &Cyclotomic::zeta_pow(8, 1) + &Cyclotomic::zeta_pow(8, 7);
    }
    let mut g = Cyclotomic::zero();
    for a in 1..p {
        let term = Cyclotomic::zeta_pow(p, a as i64);
        g = if legendre(a, p) == 1 { &g + &term } else { &g - &term };
    }
    if p % 4 == 1 {
        g
    } else {
        -(&Cyclotomic::zeta(4) * &g)
    }
}

/// A square root of a rational number, when its square-free part has only
/// small prime factors.
pub fn sqrt_rational(q: &Rational) -> Option<Cyclotomic> {
    if q.is_zero() {
        return Some(Cyclotomic::zero());
    }
    let negative = q.is_negative();
    let q = q.abs();
    // sqrt(n/d) = sqrt(n d) / d
    let mut rest: BigInt = q.numer() * q.denom();
    let mut square = BigInt::one();
    let mut primes = Vec::new();
    for p in 2..=SQRT_PRIME_CAP {
        if !(2..p).all(|k| p % k != 0) {
            continue;
        }
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        square *= num_traits::pow(bp, (e / 2) as usize);
        if e % 2 == 1 {
            primes.push(p);
        }
    }
    let s = rest.sqrt();
    if &s * &s != rest {
        return None;
    }
    square *= s;
    let mut order = if negative { 4 } else { 1 };
    for &p in &primes {
        order = lcm_u64(
            order,
            if p % 4 == 1 {
                p
            } else if p == 2 {
                8
            } else {
                4 * p
            },
        );
    }
    if euler_phi(order) > MAX_FIELD_DEGREE {
        return None;
    }
    let mut root = Cyclotomic::rational(Rational::new(square, q.denom().clone()));
    for &p in &primes {
        root = &root * &sqrt_prime(p);
    }
    if negative {
        root = &root * &Cyclotomic::zeta(4);
    }
    Some(root.simplify())
}

/// Positive real `k`-th root of a positive rational, if it lies in a
/// cyclotomic field by the means available here.
fn positive_root(r: &Rational, k: u64) -> Option<Cyclotomic> {
    let k32 = u32::try_from(k).ok()?;
    if let Some(s) = rational_nth_root(r, k32) {
        return Some(Cyclotomic::rational(s));
    }
    if k.is_multiple_of(2) {
        let half = rational_nth_root(r, k32 / 2)?;
        return sqrt_rational(&half);
    }
    None
}

/// One `k`-th root of `c`.
pub fn nth_root(c: &Cyclotomic, k: u64) -> Option<Cyclotomic> {
    if k == 1 || c.is_zero() {
        return Some(c.clone());
    }
    if let Some(q) = c.as_rational() {
        if k == 2 {
            return sqrt_rational(&q);
        }
        let base = positive_root(&q.abs(), k)?;
        return Some(if q.is_negative() { (&base * &Cyclotomic::zeta_pow(2 * k, 1)).simplify() } else { base });
    }
    let (r, m, e) = c.as_scaled_root_of_unity()?;
    let base = positive_root(&r, k)?;
    Some((&base * &Cyclotomic::zeta_pow(m * k, e as i64)).simplify())
}

fn rational_coefficients(p: &UPoly) -> Option<Vec<Rational>> {
    p.iter().map(Cyclotomic::as_rational).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    Some(out)
}

/// Rational roots of a square-free rational polynomial.
fn rational_roots(p: &[Rational]) -> Option<Vec<Rational>> {
    let mut lcm = BigInt::one();
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut out = Vec::new();
    let mut start = 0;
    while ints[start].is_zero() {
        out.push(Rational::zero());
        start += 1;
    }
    let lead = ints.last().unwrap();
    let nums = divisors(&ints[start])?;
    let dens = divisors(lead)?;
    for a in &nums {
        for b in &dens {
            if a.gcd(b) != BigInt::one() {
                continue;
            }
            for cand in [Rational::new(a.clone(), b.clone()), Rational::new(-a.clone(), b.clone())] {
                let mut acc = Rational::zero();
                for c in p.iter().rev() {
                    acc = acc * &cand + c;
                }
                if acc.is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn unsupported(p: &UPoly) -> Error {
    Error::UnsupportedCoefficientField(describe(p))
}

/// Roots of a monic square-free polynomial.
fn squarefree_roots(p: &UPoly) -> Result<Vec<Cyclotomic>> {
    let n = degree(p);
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![(-p[0].clone()).simplify()]),
        _ => {}
    }
    // Binomial T^n + c.
    if p[1..n].iter().all(Zero::is_zero) {
        let a = -p[0].clone();
        let base = nth_root(&a, n as u64).ok_or_else(|| unsupported(p))?;
        return Ok((0..n as i64).map(|j| (&base * &Cyclotomic::zeta_pow(n as u64, j)).simplify()).collect());
    }
    if n == 2 {
        let disc = &(&p[1] * &p[1]) - &(&Cyclotomic::from_i64(4) * &p[0]);
        let s = match disc.as_rational() {
            Some(q) => sqrt_rational(&q),
            None => nth_root(&disc, 2),
        }
        .ok_or_else(|| unsupported(p))?;
        let half = Cyclotomic::rational(Rational::new(BigInt::one(), BigInt::from(2)));
        let minus_b = -p[1].clone();
        return Ok(vec![(&(&minus_b + &s) * &half).simplify(), (&(&minus_b - &s) * &half).simplify()]);
    }
    let Some(rp) = rational_coefficients(p) else {
        return Err(unsupported(p));
    };
    let found = rational_roots(&rp).ok_or_else(|| unsupported(p))?;
    let mut rest = p.clone();
    let mut roots = Vec::new();
    for r in found {
        rest = divrem(&rest, &vec![Cyclotomic::rational(-r.clone()), Cyclotomic::one()]).0;
        roots.push(Cyclotomic::rational(r));
    }
    if degree(&rest) > 0 {
        if degree(&rest) == degree(p) {
            return Err(unsupported(p));
        }
        roots.extend(squarefree_roots(&monic(&rest)).map_err(|_| unsupported(p))?);
    }
    Ok(roots)
}

/// All roots with multiplicities of a nonzero polynomial, or an error naming
/// the polynomial when they are out of reach.
pub fn solve(p: &UPoly) -> Result<Vec<(Cyclotomic, usize)>> {
    let p = trim(p.clone());
    if p.is_empty() {
        return Err(Error::Internal("root search on the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(&p) {
        for r in squarefree_roots(&factor)? {
            out.push((r, mult));
        }
    }
    let total: usize = out.iter().map(|(_, m)| m).sum();
    if total != degree(&p) {
        return Err(Error::Internal(format!("root count {} for degree {}", total, degree(&p))));
    }
    for (r, _) in &out {
        if !evaluate(&p, r).is_zero() {
            return Err(Error::Internal(format!("computed root {r} does not annihilate {}", describe(&p))));
        }
    }
    Ok(out)
}
