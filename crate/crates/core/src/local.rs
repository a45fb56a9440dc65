//! μ, τ and δ of a plane germ at the origin by exact elimination in
//! truncated local quotients.

use num_traits::{One, Zero};

use crate::branch::{branch_pairs, intersection_number, support_gcd, Branch, CharPairs};
use crate::certificate::{LocalQuotientCertificate, Method};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::SparsePoly;
use crate::puiseux::{newton_puiseux_at_origin, residual};
use crate::scalar::{Field, Rational};
use crate::series::PuiseuxSeries;

type QPoly = SparsePoly<Rational>;
type Series = PuiseuxSeries<Cyclotomic>;

/// Largest degree bound tried before a germ is declared non-isolated.
pub const DEFAULT_CEILING: usize = 30;

/// Largest `t`-truncation tried for the normalization codimension.
const DELTA_CAP: i64 = 4096;

type Terms = Vec<((u32, u32), Rational)>;

fn xy_terms(f: &QPoly) -> Result<Terms> {
    if let Some(v) = f.vars().iter().find(|v| *v != "x" && *v != "y") {
        return Err(Error::InvalidInput(format!("germ must be a polynomial in x and y, found {v}")));
    }
    Ok(f.named_terms()
        .into_iter()
        .map(|(mono, c)| {
            let mut e = (0, 0);
            for (v, k) in mono {
                if v == "x" {
                    e.0 = k;
                } else {
                    e.1 = k;
                }
            }
            (e, c)
        })
        .collect())
}

fn check_germ(f: &QPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial defines no germ".into()));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::InvalidInput("f does not vanish at the origin".into()));
    }
    Ok(())
}

fn index(a: u32, b: u32) -> usize {
    let k = (a + b) as usize;
    k * (k + 1) / 2 + b as usize
}

/// Dimension of `Q[x,y]/(I + m^D)` and whether every monomial of degree
/// `D − 1` lies in `I + m^D`.
fn truncated_quotient(gens: &[Terms], bound: u32) -> (u64, bool) {
    let mut basis: Echelon<Rational> = Echelon::new();
    for g in gens {
        let Some(low) = g.iter().map(|((a, b), _)| a + b).min() else { continue };
        if low >= bound {
            continue;
        }
        for k in 0..bound - low {
            for b in 0..=k {
                let a = k - b;
                let v: SparseVec<Rational> = g
                    .iter()
                    .filter(|((i, j), _)| i + j + k < bound)
                    .map(|((i, j), c)| (index(i + a, j + b), c.clone()))
                    .collect();
                basis.insert(v);
            }
        }
    }
    let total = index(bound, 0) as u64;
    let top = bound.saturating_sub(1);
    let covered = bound == 0
        || (0..=top).all(|b| basis.contains(std::iter::once((index(top - b, b), Rational::one())).collect()));
    (total - basis.rank() as u64, covered)
}

fn certified_quotient(gens: &[Terms], method: Method, ceiling: usize) -> Result<LocalQuotientCertificate> {
    for bound in 1..=ceiling as u32 {
        let (value, covered) = truncated_quotient(gens, bound);
        if !covered {
            continue;
        }
        let (again, _) = truncated_quotient(gens, bound + 1);
        if again != value {
            return Err(Error::Internal(format!(
                "{method} dimension moved from {value} to {again} after certification at degree {bound}"
            )));
        }
        return Ok(LocalQuotientCertificate {
            value,
            stabilized_at: bound as u64,
            rechecked_at: Some(bound as u64 + 1),
            method,
        });
    }
    Err(Error::NotIsolated(ceiling))
}

pub fn milnor_number(f: &QPoly) -> Result<LocalQuotientCertificate> {
    milnor_number_with_ceiling(f, DEFAULT_CEILING)
}

pub fn milnor_number_with_ceiling(f: &QPoly, ceiling: usize) -> Result<LocalQuotientCertificate> {
    check_germ(f)?;
    let gens = vec![xy_terms(&f.derivative("x"))?, xy_terms(&f.derivative("y"))?];
    certified_quotient(&gens, Method::JacobianQuotient, ceiling)
}

pub fn tjurina_number(f: &QPoly) -> Result<LocalQuotientCertificate> {
    tjurina_number_with_ceiling(f, DEFAULT_CEILING)
}

pub fn tjurina_number_with_ceiling(f: &QPoly, ceiling: usize) -> Result<LocalQuotientCertificate> {
    check_germ(f)?;
    let gens = vec![xy_terms(f)?, xy_terms(&f.derivative("x"))?, xy_terms(&f.derivative("y"))?];
    let tau = certified_quotient(&gens, Method::TjurinaQuotient, ceiling)?;
    let mu = milnor_number_with_ceiling(f, ceiling)?;
    if tau.value > mu.value {
        return Err(Error::Internal(format!("Tjurina number {} exceeds Milnor number {}", tau.value, mu.value)));
    }
    Ok(tau)
}

/// Coefficients of `f` as a polynomial in `y`, each an exact series in `x`.
pub fn as_series_in_y(f: &QPoly) -> Result<Vec<Series>> {
    let terms = xy_terms(f)?;
    let deg = terms.iter().map(|((_, b), _)| *b).max().unwrap_or(0) as usize;
    let mut columns: Vec<Vec<(i64, Cyclotomic)>> = vec![Vec::new(); deg + 1];
    for ((a, b), c) in terms {
        columns[b as usize].push((a as i64, Cyclotomic::rational(c)));
    }
    Ok(columns.into_iter().map(|c| Series::new(1, c, None)).collect())
}

fn branch_multiplicity(b: &Branch) -> Result<u64> {
    match b.centered().lowest_term() {
        Some((k, _)) => Ok(b.d().min(k as u64)),
        None if b.trunc().is_none_or(|t| t as u64 > b.d()) => Ok(b.d()),
        None => Err(Error::InsufficientPrecision("branch multiplicity is not determined".into())),
    }
}

/// `dim Ã/A` for the germ of `f`, given its branches.
pub fn delta_from_poly(f: &QPoly, branches: &[Branch]) -> Result<LocalQuotientCertificate> {
    check_germ(f)?;
    let p = as_series_in_y(f)?;
    for (i, b) in branches.iter().enumerate() {
        if !b.center().is_zero() {
            return Err(Error::InvalidInput(format!("branch {} does not pass through the origin", i + 1)));
        }
        if support_gcd(b) != 1 {
            return Err(Error::InvalidInput(format!("branch {} is not a primitive parametrization", i + 1)));
        }
        if !residual(&p, b).terms().is_empty() {
            return Err(Error::IncompleteFactorization(format!("branch {} does not lie on f", i + 1)));
        }
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            intersection_number(&branches[i], &branches[j])?;
        }
    }
    let mult = f.order().unwrap_or(0) as u64;
    let total = branches.iter().map(branch_multiplicity).sum::<Result<u64>>()?;
    if total != mult {
        return Err(Error::IncompleteFactorization(format!(
            "branch multiplicities sum to {total}, but f has multiplicity {mult}"
        )));
    }
    let step = branches.iter().map(|b| b.d() as i64).max().unwrap_or(1);
    let limit = branches.iter().filter_map(Branch::trunc).min().unwrap_or(DELTA_CAP);
    let mut values = vec![0u64];
    for n in 1..=limit {
        let c = normalization_codim(branches, n);
        values.push(c);
        let base = n - step;
        if base >= 1 && values[base as usize] == c {
            return Ok(LocalQuotientCertificate {
                value: c,
                stabilized_at: base as u64,
                rechecked_at: Some(n as u64),
                method: Method::NormalizationCodim,
            });
        }
    }
    if limit >= DELTA_CAP {
        return Err(Error::CapExceeded(format!("normalization codimension did not stabilize below t^{DELTA_CAP}")));
    }
    Err(Error::InsufficientPrecision(format!("normalization codimension did not stabilize within t^{limit}")))
}

/// `r·N − rank` of the monomial images in `⊕ Q(ζ)[t_i]/t_i^N`.
fn normalization_codim(branches: &[Branch], n: i64) -> u64 {
    let r = branches.len();
    let mut basis: Echelon<Cyclotomic> = Echelon::new();
    let xs: Vec<Series> = branches.iter().map(|b| Series::monomial(Cyclotomic::one(), b.d() as i64, 1)).collect();
    let nn = n as u32;
    for a in 0..nn {
        let xa: Vec<Series> = xs.iter().map(|x| x.pow(a).truncated(n)).collect();
        let mut yb: Vec<Series> = vec![Series::constant(Cyclotomic::one()); r];
        for _ in 0..nn - a {
            let mut v = SparseVec::new();
            for i in 0..r {
                let term = (&xa[i] * &yb[i]).truncated(n);
                for (k, c) in term.terms() {
                    if *k < n {
                        v.insert(i * n as usize + *k as usize, c.clone());
                    }
                }
            }
            basis.insert(v);
            yb = yb.iter().zip(branches).map(|(s, b)| (s * b.y()).truncated(n)).collect();
        }
    }
    (r as u64) * n as u64 - basis.rank() as u64
}

/// Branches of the germ of `f` at the origin, after the shear `x → x + λy`
/// with the least `λ ≥ 0` that makes the tangent cone avoid the `y`-axis.
/// Returns the branches, the sheared polynomial and `λ`.
pub fn germ_branches(f: &QPoly, precision: i64) -> Result<(Vec<Branch>, QPoly, i64)> {
    check_germ(f)?;
    xy_terms(f)?;
    let m = f.order().unwrap_or(0);
    let cone = f.homogeneous_part(m);
    let lambda = (0..=m as i64 + 1)
        .find(|&l| cone.eval(&[("x", Rational::from_i64(l)), ("y", Rational::one())]).is_some_and(|v| !v.is_zero()))
        .ok_or_else(|| Error::Internal("no shear makes the germ y-general".into()))?;
    let shifted = QPoly::var("x").add(&QPoly::var("y").scale(&Rational::from_i64(lambda)));
    let g = f.substitute("x", &shifted);
    let p = as_series_in_y(&g)?;
    let branches = newton_puiseux_at_origin(&p, precision).map_err(|e| match e {
        Error::NotRegularSemisimple(_) => Error::InvalidInput("f is not reduced".into()),
        e => e,
    })?;
    Ok((branches, g, lambda))
}

/// Branches of a germ with their characteristic pairs and intersection
/// numbers, in the sheared coordinates.
#[derive(Clone, Debug)]
pub struct GermBranches {
    pub branches: Vec<Branch>,
    pub pairs: Vec<CharPairs>,
    pub inter: Vec<Vec<u64>>,
    pub sheared: QPoly,
    pub shear: i64,
    pub precision: i64,
}

#[derive(Clone, Debug)]
pub struct GermReport {
    pub mu: LocalQuotientCertificate,
    pub tau: LocalQuotientCertificate,
    pub delta: LocalQuotientCertificate,
    pub germ: GermBranches,
}

const START_PRECISION: i64 = 8;
const MAX_PRECISION: i64 = 1024;

/// Runs `step` at increasing precision while it reports insufficient
/// precision. An explicit precision gets exactly one attempt.
fn with_precision<T>(precision: Option<i64>, mut step: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut n = precision.unwrap_or(START_PRECISION);
    loop {
        match step(n) {
            Err(Error::InsufficientPrecision(_)) if precision.is_none() && n < MAX_PRECISION => n *= 2,
            other => return other,
        }
    }
}

fn branch_data(f: &QPoly, n: i64) -> Result<GermBranches> {
    let (branches, sheared, shear) = germ_branches(f, n)?;
    let pairs = branches.iter().map(branch_pairs).collect::<Result<Vec<_>>>()?;
    let r = branches.len();
    let mut inter = vec![vec![0; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            let v = intersection_number(&branches[i], &branches[j])?;
            inter[i][j] = v;
            inter[j][i] = v;
        }
    }
    Ok(GermBranches { branches, pairs, inter, sheared, shear, precision: n })
}

/// Branch data of the germ of `f`; without an explicit precision the
/// expansion is redone at doubled precision until every number is certified.
pub fn germ_branch_data(f: &QPoly, precision: Option<i64>) -> Result<GermBranches> {
    with_precision(precision, |n| branch_data(f, n))
}

/// μ, τ, δ and the branch data of the germ of `f`.
pub fn analyze_germ(f: &QPoly, precision: Option<i64>) -> Result<GermReport> {
    let mu = milnor_number(f)?;
    let tau = tjurina_number(f)?;
    let (germ, delta) = with_precision(precision, |n| {
        let germ = branch_data(f, n)?;
        let delta = delta_from_poly(&germ.sheared, &germ.branches)?;
        Ok((germ, delta))
    })?;
    Ok(GermReport { mu, tau, delta, germ })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qpoly;

    fn cusp() -> QPoly {
        qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 3)])])
    }

    #[test]
    fn milnor_examples() {
        assert_eq!(milnor_number(&cusp()).unwrap().value, 2);
        let node = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 2)])]);
        assert_eq!(milnor_number(&node).unwrap().value, 1);
        let a4 = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 5)])]);
        assert_eq!(milnor_number(&a4).unwrap().value, 4);
    }

    #[test]
    fn tjurina_examples() {
        assert_eq!(tjurina_number(&cusp()).unwrap().value, 2);
        let node = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 2)])]);
        assert_eq!(tjurina_number(&node).unwrap().value, 1);
        // x^5 + y^5 + x^2 y^2 is not quasi-homogeneous: μ = 11, τ = 10.
        let f = qpoly(&[(1, &[("x", 5)]), (1, &[("y", 5)]), (1, &[("x", 2), ("y", 2)])]);
        assert_eq!(milnor_number(&f).unwrap().value, 11);
        assert_eq!(tjurina_number(&f).unwrap().value, 10);
    }

    #[test]
    fn smooth_and_non_isolated() {
        let line = qpoly(&[(1, &[("y", 1)]), (-1, &[("x", 2)])]);
        assert_eq!(milnor_number(&line).unwrap().value, 0);
        let double = qpoly(&[(1, &[("y", 2)])]);
        assert!(matches!(milnor_number_with_ceiling(&double, 8), Err(Error::NotIsolated(8))));
        let unit = qpoly(&[(1, &[("y", 2)]), (1, &[])]);
        assert!(matches!(milnor_number(&unit), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn delta_examples() {
        let d = delta_from_poly(&cusp(), &[Branch::exact(2, &[(3, 1)])]).unwrap();
        assert_eq!(d.value, 1);
        let tac = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 4)])]);
        let bs = [Branch::exact(1, &[(2, 1)]), Branch::exact(1, &[(2, -1)])];
        assert_eq!(delta_from_poly(&tac, &bs).unwrap().value, 2);
        let line = qpoly(&[(1, &[("y", 1)]), (-1, &[("x", 2)])]);
        assert_eq!(delta_from_poly(&line, &[Branch::exact(1, &[(2, 1)])]).unwrap().value, 0);
    }

    #[test]
    fn delta_rejects_incomplete() {
        let tac = qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 4)])]);
        let one = [Branch::exact(1, &[(2, 1)])];
        assert!(matches!(delta_from_poly(&tac, &one), Err(Error::IncompleteFactorization(_))));
        let wrong = [Branch::exact(1, &[(2, 1)]), Branch::exact(1, &[(2, 2)])];
        assert!(matches!(delta_from_poly(&tac, &wrong), Err(Error::IncompleteFactorization(_))));
    }

    #[test]
    fn germ_zoo() {
        let cases: Vec<(QPoly, (u64, u64, u64, usize))> = vec![
            (qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 2)])]), (1, 1, 1, 2)),
            (cusp(), (2, 2, 1, 1)),
            (qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 4)])]), (3, 3, 2, 2)),
            (qpoly(&[(1, &[("y", 2)]), (-1, &[("x", 5)])]), (4, 4, 2, 1)),
            (qpoly(&[(1, &[("x", 2), ("y", 1)]), (1, &[("x", 1), ("y", 2)])]), (4, 4, 3, 3)),
        ];
        for (f, (mu, tau, delta, r)) in cases {
            let g = analyze_germ(&f, None).unwrap();
            assert_eq!((g.mu.value, g.tau.value, g.delta.value, g.germ.branches.len()), (mu, tau, delta, r), "{f}");
        }
    }

    #[test]
    fn sheared_germ() {
        // x*y: the tangent cone contains the y-axis.
        let f = qpoly(&[(1, &[("x", 1), ("y", 1)])]);
        let g = analyze_germ(&f, None).unwrap();
        assert_eq!(g.germ.shear, 1);
        assert_eq!(g.germ.branches.len(), 2);
        assert_eq!(g.delta.value, 1);
    }
}
