//! Newton–Puiseux expansion of the roots of a polynomial in `y` whose
//! coefficients are truncated power series in `ε`.
//!
//! One representative root is produced per cycle of the monodromy
//! `ε^{1/n} ↦ ζ_n ε^{1/n}`, packaged as a [`Branch`] whose `d` is the cycle
//! length. At an edge of slope `−p/q` the substitution `s = s'^q`,
//! `y = s'^p (c + y₁)` is made for one `q`-th root `c` of each root of the
//! reduced edge polynomial; the other `q`-th roots give the conjugates.
//! A cluster shrinking to a single root is finished by Newton iteration,
//! and its precision is read off the residual.

use num_traits::{One, Zero};

use crate::branch::Branch;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::roots::{self, UPoly};
use crate::scalar::binomial;
use crate::series::{PuiseuxSeries, Valuation};

type Series = PuiseuxSeries<Cyclotomic>;

/// Expansion state: the original root equals `offset(s) + s^w · y_k`, with
/// `s^d = ε`.
#[derive(Clone)]
struct Frame {
    d: u64,
    offset: Series,
    w: i64,
}

/// `P(y)` by Horner's rule.
pub fn evaluate(p: &[Series], y: &Series) -> Series {
    let mut acc = p.last().cloned().unwrap_or_else(Series::zero);
    for c in p.iter().rev().skip(1) {
        acc = &(&acc * y) + c;
    }
    acc
}

/// `P(y)` known below `s^limit` only.
fn evaluate_below(p: &[Series], y: &Series, limit: i64) -> Series {
    let y = y.truncated(limit);
    let mut acc = p.last().map_or_else(Series::zero, |c| c.truncated(limit));
    for c in p.iter().rev().skip(1) {
        acc = (&(&acc * &y) + &c.truncated(limit)).truncated(limit);
    }
    acc
}

fn derivative(p: &[Series]) -> Vec<Series> {
    p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Cyclotomic::from(crate::scalar::int(i as i64)))).collect()
}

/// Coefficients of `s^{−v} · P(s^q, s^e (c + y₁))` as a polynomial in `y₁`.
fn substitute(p: &[Series], e: i64, q: u64, c: &Cyclotomic, v: i64) -> Vec<Series> {
    let n = p.len();
    let stretched: Vec<Series> = p.iter().enumerate().map(|(i, a)| a.compose_power(q).shift(e * i as i64)).collect();
    let cpow: Vec<Cyclotomic> = {
        let mut out = vec![Cyclotomic::one()];
        for _ in 1..n {
            let next = out.last().unwrap() * c;
            out.push(next);
        }
        out
    };
    (0..n)
        .map(|k| {
            let mut acc = Series::zero();
            for i in k..n {
                if stretched[i].is_certified_zero() {
                    continue;
                }
                let f = Cyclotomic::from(crate::scalar::Rational::from_integer(binomial(i, k))) * cpow[i - k].clone();
                if f.is_zero() {
                    continue;
                }
                acc = &acc + &stretched[i].scale(&f);
            }
            acc.shift(-v)
        })
        .collect()
}

fn insufficient(msg: &str) -> Error {
    Error::InsufficientPrecision(msg.to_string())
}

/// One edge of the lower Newton polygon.
struct Edge {
    start: usize,
    end: usize,
    /// Root valuation `p/q`.
    p: i64,
    q: u64,
}

/// Lower hull over `0..=m` of the points `(i, ord a_i)`.
fn newton_edges(p: &[Series], m: usize) -> Result<Vec<Edge>> {
    let mut known: Vec<(usize, i64)> = Vec::new();
    let mut unknown: Vec<(usize, i64)> = Vec::new();
    for (i, a) in p.iter().enumerate().take(m + 1) {
        match a.lowest_term() {
            Some((k, _)) => known.push((i, k)),
            None => {
                if let Some(t) = a.trunc() {
                    unknown.push((i, t));
                }
            }
        }
    }
    if known.first().map(|k| k.0) != Some(0) {
        return Err(insufficient("constant coefficient of the Newton polygon is not known"));
    }
    // Monotone chain; cross product sign decides convexity.
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &known {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    if hull.last() != Some(&(m, 0)) {
        return Err(Error::Internal("cluster coefficient does not have order zero".into()));
    }
    // An unknown coefficient must lie strictly above the hull.
    for &(i, t) in &unknown {
        let seg = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).unwrap();
        let ((x1, y1), (x2, y2)) = (seg[0], seg[1]);
        // height(i) = y1 + (y2 - y1)(i - x1)/(x2 - x1); need t > height(i).
        if t * (x2 - x1) as i64 <= y1 * (x2 - x1) as i64 + (y2 - y1) * (i - x1) as i64 {
            return Err(insufficient("an unknown coefficient may lie on the Newton polygon"));
        }
    }
    Ok(hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            let num = y1 - y2;
            let den = (x2 - x1) as i64;
            let g = num_integer::gcd(num, den);
            Edge { start: x1, end: x2, p: num / g, q: (den / g) as u64 }
        })
        .collect())
}

fn expand_cluster(p: Vec<Series>, m: usize, frame: Frame, goal: i64, out: &mut Vec<Branch>) -> Result<()> {
    let mut p = p;
    let mut m = m;
    if p[0].is_certified_zero() {
        out.push(Branch::new(frame.d, frame.offset.clone())?);
        if m == 1 {
            return Ok(());
        }
        if p[1].is_certified_zero() {
            return Err(Error::NotRegularSemisimple("the polynomial has a repeated root".into()));
        }
        p.remove(0);
        m -= 1;
    }
    if m == 1 {
        out.push(newton_finish(&p, &frame, goal)?);
        return Ok(());
    }
    for edge in newton_edges(&p, m)? {
        let q = edge.q as usize;
        let steps = (edge.end - edge.start) / q;
        let mut psi: UPoly = Vec::with_capacity(steps + 1);
        let base = p[edge.start].lowest_term().unwrap().0;
        for j in 0..=steps {
            let i = edge.start + j * q;
            // On the edge: ord a_i = base − p·(i − start)/q.
            let target = base - edge.p * (j as i64);
            let c = p[i].coefficient(target).unwrap_or_else(Cyclotomic::zero);
            let c = if p[i].lowest_term().is_some_and(|(k, _)| k == target) { c } else { Cyclotomic::zero() };
            psi.push(c);
        }
        let v = edge.q as i64 * base + edge.p * edge.start as i64;
        for (u, mult) in roots::solve(&psi)? {
            let c = roots::nth_root(&u, edge.q)
                .ok_or_else(|| Error::UnsupportedCoefficientField(format!("T^{} - ({u})", edge.q)))?;
            let next = substitute(&p, edge.p, edge.q, &c, v);
            if next[mult].coefficient(0).is_none_or(|c| c.is_zero()) {
                return Err(Error::Internal("cluster multiplicity lost after substitution".into()));
            }
            let w = edge.q as i64 * frame.w + edge.p;
            let offset = &frame.offset.compose_power(edge.q) + &Series::monomial(c.clone(), w, 1);
            let child = Frame { d: frame.d * edge.q, offset, w };
            expand_cluster(next, mult, child, goal, out)?;
        }
    }
    Ok(())
}

/// Exact precision (in `s`-units) certified by the residual `r` of a simple
/// root, or `None` when `r` is certified zero.
fn certified_precision(r: &Series) -> Option<i64> {
    match r.valuation() {
        Valuation::Infinite => None,
        Valuation::Indeterminate => r.trunc(),
        Valuation::Finite(_) => {
            let v = r.lowest_term().unwrap().0;
            Some(r.trunc().map_or(v, |t| t.min(v)))
        }
    }
}

fn newton_finish(p: &[Series], frame: &Frame, goal: i64) -> Result<Branch> {
    let goal_s = (goal * frame.d as i64 - frame.w).max(1);
    let dp = derivative(p);
    let mut y = Series::zero();
    let mut prec: Option<i64>;
    let exact = p.iter().all(Series::is_exact);
    let mut iterations = 0;
    loop {
        let r = evaluate_below(p, &y, goal_s);
        prec = certified_precision(&r);
        if exact && r.lowest_term().is_none() {
            prec = certified_precision(&evaluate(p, &y));
        }
        let done = match prec {
            None => true,
            Some(k) => k >= goal_s || r.lowest_term().is_none(),
        };
        iterations += 1;
        if done || iterations > 200 {
            break;
        }
        let slope = evaluate_below(&dp, &y, goal_s);
        let inv = slope
            .inverse(goal_s)
            .ok_or_else(|| insufficient("derivative at a simple root is not known to be a unit"))?;
        let corr = (&r * &inv).truncated(goal_s);
        let next = &y - &corr;
        let next = Series::new(1, next.terms().iter().map(|(k, c)| (*k, c.clone())), None);
        if next == y {
            break;
        }
        y = next;
    }
    let root = &frame.offset + &y.shift(frame.w);
    let root = match prec {
        None => root,
        Some(k) => root.truncated(frame.w + k),
    };
    if root.trunc().is_some_and(|t| t < 1) {
        return Err(insufficient("root is not determined by the known coefficients"));
    }
    Branch::new(frame.d, root)
}

fn check_coefficients(p: &[Series]) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::InvalidInput("polynomial in y must have positive degree".into()));
    }
    if p.iter().any(|a| a.ram() != 1) {
        return Err(Error::InvalidInput("coefficients must have integer exponents".into()));
    }
    if p.iter().any(|a| a.terms().keys().next().is_some_and(|&k| k < 0)) {
        return Err(Error::InvalidInput("coefficients must be power series".into()));
    }
    Ok(())
}

/// All roots of a monic polynomial `Σ a_i(ε) y^i`, one [`Branch`] per cycle,
/// developed to `ε`-precision `precision` where the input allows.
pub fn newton_puiseux(p: &[Series], precision: i64) -> Result<Vec<Branch>> {
    check_coefficients(p)?;
    let n = p.len() - 1;
    if !(p[n].is_exact() && p[n] == Series::constant(Cyclotomic::one())) {
        return Err(Error::InvalidInput("polynomial must be monic in y".into()));
    }
    let mut constants: UPoly = Vec::with_capacity(n + 1);
    for a in p {
        constants.push(a.coefficient(0).ok_or_else(|| insufficient("constant terms of the coefficients are unknown"))?);
    }
    let mut out = Vec::new();
    for (c, mult) in roots::solve(&constants)? {
        let shifted = substitute(p, 0, 1, &c, 0);
        let frame = Frame { d: 1, offset: Series::constant(c.clone()), w: 0 };
        expand_cluster(shifted, mult, frame, precision, &mut out)?;
    }
    let total: u64 = out.iter().map(Branch::d).sum();
    if total != n as u64 {
        return Err(Error::Internal(format!("found {total} roots of a degree {n} polynomial")));
    }
    Ok(out)
}

/// The roots through the origin (positive valuation) of `Σ a_i(ε) y^i`,
/// where the first coefficient with a nonzero constant term marks how many
/// of them there are.
pub fn newton_puiseux_at_origin(p: &[Series], precision: i64) -> Result<Vec<Branch>> {
    check_coefficients(p)?;
    let mut m = None;
    for (i, a) in p.iter().enumerate() {
        match a.coefficient(0) {
            None => return Err(insufficient("constant terms of the coefficients are unknown")),
            Some(c) if !c.is_zero() => {
                m = Some(i);
                break;
            }
            _ => {}
        }
    }
    let m = m.ok_or_else(|| Error::InvalidInput("no coefficient in y has a nonzero constant term".into()))?;
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    let frame = Frame { d: 1, offset: Series::zero(), w: 0 };
    expand_cluster(p.to_vec(), m, frame, precision, &mut out)?;
    let total: u64 = out.iter().map(Branch::d).sum();
    if total != m as u64 {
        return Err(Error::Internal(format!("found {total} roots through the origin, expected {m}")));
    }
    Ok(out)
}

/// `P(t^d, y(t))` as a series in `t`.
pub fn residual(p: &[Series], b: &Branch) -> Series {
    let stretched: Vec<Series> = p.iter().map(|a| a.compose_power(b.d())).collect();
    evaluate(&stretched, b.y())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Field};

    fn s(terms: &[(i64, i64)]) -> Series {
        Series::new(1, terms.iter().map(|&(k, c)| (k, Cyclotomic::from_i64(c))), None)
    }

    #[test]
    fn square_root_of_cube() {
        // y^2 - ε^3
        let p = vec![s(&[(3, -1)]), s(&[]), s(&[(0, 1)])];
        let bs = newton_puiseux(&p, 8).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].d(), 2);
        assert_eq!(bs[0].y().terms().len(), 1);
        assert!(bs[0].y().is_exact());
        assert!(residual(&p, &bs[0]).is_certified_zero());
    }

    #[test]
    fn split_square() {
        // y^2 - ε^2
        let p = vec![s(&[(2, -1)]), s(&[]), s(&[(0, 1)])];
        let bs = newton_puiseux(&p, 8).unwrap();
        assert_eq!(bs.len(), 2);
        assert!(bs.iter().all(|b| b.d() == 1));
    }

    #[test]
    fn binomial_series() {
        // y^2 - ε^2(1 + ε): roots ±ε(1 + ε/2 − ε²/8 + …)
        let p = vec![s(&[(2, -1), (3, -1)]), s(&[]), s(&[(0, 1)])];
        let bs = newton_puiseux(&p, 6).unwrap();
        assert_eq!(bs.len(), 2);
        for b in &bs {
            let sign = b.y().coefficient(1).unwrap();
            assert_eq!(b.y().coefficient(2).unwrap(), &sign * &Cyclotomic::rational(rat(1, 2)));
            assert_eq!(b.y().coefficient(3).unwrap(), &sign * &Cyclotomic::rational(rat(-1, 8)));
            let sq = b.y() * b.y();
            let expect = Series::new(1, [(2, Cyclotomic::one()), (3, Cyclotomic::one())], sq.trunc());
            assert_eq!(sq, expect);
            assert!(b.trunc().unwrap() >= 6);
        }
    }

    #[test]
    fn linear_factors() {
        // (y - ε)(y - 2ε) = y^2 - 3ε y + 2ε^2
        let p = vec![s(&[(2, 2)]), s(&[(1, -3)]), s(&[(0, 1)])];
        let bs = newton_puiseux(&p, 8).unwrap();
        assert_eq!(bs.len(), 2);
        let mut leads: Vec<Cyclotomic> = bs.iter().map(|b| b.y().coefficient(1).unwrap()).collect();
        leads.sort_by_key(|c| c.as_rational().unwrap());
        assert_eq!(leads, vec![Cyclotomic::from_i64(1), Cyclotomic::from_i64(2)]);
        assert!(bs.iter().all(|b| b.y().is_exact()));
    }

    #[test]
    fn repeated_root_is_certified() {
        // (y - ε)^2
        let p = vec![s(&[(2, 1)]), s(&[(1, -2)]), s(&[(0, 1)])];
        assert!(matches!(newton_puiseux(&p, 8), Err(Error::NotRegularSemisimple(_))));
    }

    #[test]
    fn truncation_limits_precision() {
        // y^2 - ε^2 - ε^3 known modulo ε^5.
        let t =
            |terms: &[(i64, i64)]| Series::new(1, terms.iter().map(|&(k, c)| (k, Cyclotomic::from_i64(c))), Some(5));
        let p = vec![t(&[(2, -1), (3, -1)]), t(&[]), s(&[(0, 1)])];
        let bs = newton_puiseux(&p, 20).unwrap();
        for b in &bs {
            assert_eq!(b.trunc(), Some(4));
        }
    }

    #[test]
    fn four_six_seven() {
        // Product of y - u over the four conjugates of u = ε^{3/2} + ε^{7/4}.
        let p = vec![s(&[(6, 1), (7, -1)]), s(&[(5, -4)]), s(&[(3, -2)]), s(&[]), s(&[(0, 1)])];
        let bs = newton_puiseux(&p, 4).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].d(), 4);
        let pairs = crate::branch::branch_pairs(&bs[0]).unwrap();
        assert_eq!(pairs.pairs(), &[(3, 2), (7, 2)]);
        let r = residual(&p, &bs[0]);
        assert!(r.terms().is_empty());
    }

    #[test]
    fn germ_roots_through_origin() {
        // y^2 - x^3 with an extra root y = 1 away from the origin: (y^2 - x^3)(y - 1).
        let p = vec![s(&[(3, 1)]), s(&[]), s(&[(0, -1)]), s(&[(0, 1)])];
        let bs = newton_puiseux_at_origin(&p, 8).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].d(), 2);
    }
}
