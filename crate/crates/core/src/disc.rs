//! The miniversal deformation of `y² − xⁿ`, its discriminant and the tangent
//! hyperplanes along the critical locus.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rank, rref};
use crate::poly::SparsePoly;
use crate::resultant::resultant;
use crate::scalar::{Field, Rational};

type QPoly = SparsePoly<Rational>;

pub const MIN_N: usize = 2;
pub const MAX_N: usize = 9;

fn a(k: usize) -> String {
    format!("a{k}")
}

/// `y² − (xⁿ + a₂x^{n−2} + ⋯ + a_n)` with its discriminant parametrization.
#[derive(Clone, Debug, PartialEq)]
pub struct MiniversalAn {
    n: usize,
    family: QPoly,
    phi: Vec<QPoly>,
}

impl MiniversalAn {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &QPoly {
        &self.family
    }

    /// Components `(a₂, …, a_{n−2}, φ_{n−1}, φ_n)` as polynomials in
    /// `x, a₂, …, a_{n−2}`.
    pub fn phi(&self) -> &[QPoly] {
        &self.phi
    }

    /// `xⁿ + a₂x^{n−2} + ⋯ + a_n`.
    fn binary_form(&self) -> QPoly {
        binary_form(self.n)
    }

    /// Free coordinates of the critical locus besides `x`.
    pub fn parameters(&self) -> Vec<String> {
        (2..self.n.saturating_sub(1)).map(a).collect()
    }
}

fn binary_form(n: usize) -> QPoly {
    let x = QPoly::var("x");
    let mut p = x.pow(n as u32);
    for k in 2..=n {
        p = p.add(&QPoly::var(&a(k)).mul(&x.pow((n - k) as u32)));
    }
    p
}

/// Coefficient `a_k` of the binary form, with `a₀ = 1` and `a₁ = 0`.
fn coeff(k: usize) -> QPoly {
    match k {
        0 => QPoly::one(),
        1 => QPoly::zero(),
        _ => QPoly::var(&a(k)),
    }
}

pub fn build_miniversal(n: usize) -> Result<MiniversalAn> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::CapExceeded(format!("n must lie in {MIN_N}..={MAX_N}, got {n}")));
    }
    let x = QPoly::var("x");
    let family = QPoly::var("y").pow(2).sub(&binary_form(n));
    let mut phi: Vec<QPoly> = (2..n.saturating_sub(1)).map(|k| QPoly::var(&a(k))).collect();
    if n == 2 {
        return Ok(MiniversalAn { n, family, phi });
    }
    let mut prev = QPoly::zero();
    let mut last = QPoly::zero();
    for k in 0..=n - 2 {
        let scale = |c: usize| Rational::from_i64(c as i64);
        prev = prev.sub(&coeff(k).mul(&x.pow((n - k - 1) as u32)).scale(&scale(n - k)));
        last = last.add(&coeff(k).mul(&x.pow((n - k) as u32)).scale(&scale(n - k - 1)));
    }
    // The defining substitution must agree with the closed form.
    let on_locus = binary_form(n).substitute(&a(n - 1), &prev).substitute(&a(n), &QPoly::zero()).neg();
    if on_locus != last {
        return Err(Error::Internal(format!("closed form of the last discriminant coordinate fails for n = {n}")));
    }
    let critical = binary_form(n).derivative("x").substitute(&a(n - 1), &prev);
    if !critical.is_zero() {
        return Err(Error::Internal(format!("parametrization leaves the critical locus for n = {n}")));
    }
    phi.push(prev);
    phi.push(last);
    Ok(MiniversalAn { n, family, phi })
}

/// Discriminant of the binary form in `a₂, …, a_n`: the resultant with its
/// `x`-derivative, divided by its content and signed so that the coefficient
/// of `a_n^{n−1}` is positive.
pub fn discriminant_polynomial(m: &MiniversalAn) -> Result<QPoly> {
    let p = m.binary_form();
    let res = resultant(&p, &p.derivative("x"), "x")?.primitive_part();
    let lead = res
        .named_terms()
        .into_iter()
        .find(|(mono, _)| mono.len() == 1 && mono[0] == (a(m.n), (m.n - 1) as u32))
        .map(|(_, c)| c)
        .ok_or_else(|| Error::Internal("discriminant lacks the pure a_n term".into()))?;
    Ok(if lead.is_negative() { res.neg() } else { res })
}

/// `Δ ∘ φ`, which vanishes identically.
pub fn compose_with_phi(m: &MiniversalAn, disc: &QPoly) -> QPoly {
    let mut out = disc.clone();
    if m.n == 2 {
        // The critical locus is the single point x = a₂ = 0.
        return out.substitute(&a(2), &QPoly::zero());
    }
    out = out.substitute(&a(m.n), &m.phi[m.n - 2]);
    out.substitute(&a(m.n - 1), &m.phi[m.n - 3])
}

/// Jacobian of `(x, y, a₂, …, a_{n−1}) ↦ (a₂, …, a_{n−1}, y² − (xⁿ + ⋯ + a_{n−1}x))`.
pub fn tangent_jacobian(m: &MiniversalAn) -> Vec<Vec<QPoly>> {
    let n = m.n;
    let mut vars = vec!["x".to_string(), "y".to_string()];
    vars.extend((2..n).map(a));
    let mut comps: Vec<QPoly> = (2..n).map(|k| QPoly::var(&a(k))).collect();
    comps.push(m.family.substitute(&a(n), &QPoly::zero()));
    comps.iter().map(|c| vars.iter().map(|v| c.derivative(v)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleCheck {
    pub x: Rational,
    pub rank: usize,
    pub rank_ok: bool,
    /// Reduced row echelon basis of the tangent hyperplane.
    pub hyperplane: Vec<Vec<Rational>>,
    pub depends_only_on_x: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NashReport {
    pub n: usize,
    /// False for `n = 2`, where the critical locus is a point and no sample is
    /// admissible.
    pub applicable: bool,
    pub samples: Vec<SampleCheck>,
    pub injective: bool,
    /// Offending sample of the first failed check.
    pub failure: Option<Rational>,
}

impl NashReport {
    pub fn rank_ok(&self) -> bool {
        self.samples.iter().all(|s| s.rank_ok)
    }

    pub fn depends_only_on_x(&self) -> bool {
        self.samples.iter().all(|s| s.depends_only_on_x)
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn parameter_points(count: usize) -> Vec<Vec<Rational>> {
    let pick = |seed: i64, i: usize| Rational::new((seed * (i as i64 + 2) % 7 - 3).into(), (i as i64 + 1).into());
    let mut out = vec![vec![Rational::zero(); count]];
    out.push((0..count).map(|i| pick(3, i)).collect());
    out.push((0..count).map(|i| pick(5, i) + Rational::one()).collect());
    out
}

fn evaluate_matrix(mat: &[Vec<QPoly>], point: &[(&str, Rational)]) -> Result<Vec<Vec<Rational>>> {
    mat.iter()
        .map(|row| {
            row.iter()
                .map(|e| e.eval(point).ok_or_else(|| Error::Internal("unassigned variable in the Jacobian".into())))
                .collect()
        })
        .collect()
}

fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Evaluates the Jacobian at points of the critical locus over each sample
/// `x` and checks rank, `x`-dependence and injectivity of the tangent
/// hyperplane.
pub fn verify_rank_and_nash(m: &MiniversalAn, samples: &[Rational]) -> Result<NashReport> {
    for (i, s) in samples.iter().enumerate() {
        if s.is_zero() {
            return Err(Error::InvalidInput(format!("sample {} is zero", i + 1)));
        }
        if samples[..i].contains(s) {
            return Err(Error::InvalidInput(format!("sample {s} is repeated")));
        }
    }
    let n = m.n;
    if n == 2 {
        return Ok(NashReport { n, applicable: false, samples: Vec::new(), injective: true, failure: None });
    }
    let jac = tangent_jacobian(m);
    let params = m.parameters();
    let mut checks = Vec::new();
    let mut failure = None;
    for x in samples {
        let mut hyperplanes = Vec::new();
        let mut rank_ok = true;
        let mut min_rank = usize::MAX;
        for point in parameter_points(params.len()) {
            let mut assignment: Vec<(&str, Rational)> = vec![("x", x.clone()), ("y", Rational::zero())];
            for (name, v) in params.iter().zip(&point) {
                assignment.push((name.as_str(), v.clone()));
            }
            let critical = m.phi[n - 3].eval(&assignment).ok_or_else(|| Error::Internal("bad locus point".into()))?;
            let last = a(n - 1);
            assignment.push((last.as_str(), critical));
            let value = evaluate_matrix(&jac, &assignment)?;
            let r = rank(&value);
            min_rank = min_rank.min(r);
            rank_ok &= r + 2 >= n;
            hyperplanes.push(rref(&transpose(&value)));
        }
        let depends_only_on_x = hyperplanes.windows(2).all(|w| w[0] == w[1]);
        if failure.is_none() && !(rank_ok && depends_only_on_x) {
            failure = Some(x.clone());
        }
        checks.push(SampleCheck {
            x: x.clone(),
            rank: min_rank,
            rank_ok,
            hyperplane: hyperplanes.swap_remove(0),
            depends_only_on_x,
        });
    }
    let mut injective = true;
    for i in 0..checks.len() {
        for j in 0..i {
            if checks[i].hyperplane == checks[j].hyperplane {
                injective = false;
                failure.get_or_insert_with(|| checks[i].x.clone());
            }
        }
    }
    Ok(NashReport { n, applicable: true, samples: checks, injective, failure })
}

/// Rank of the Jacobian at an arbitrary point `(x, y, a₂, …, a_{n−1})`.
pub fn jacobian_rank_at(m: &MiniversalAn, point: &[Rational]) -> Result<usize> {
    let mut names = vec!["x".to_string(), "y".to_string()];
    names.extend((2..m.n).map(a));
    if point.len() != names.len() {
        return Err(Error::SizeMismatch(names.len(), point.len()));
    }
    let assignment: Vec<(&str, Rational)> = names.iter().map(String::as_str).zip(point.iter().cloned()).collect();
    Ok(rank(&evaluate_matrix(&tangent_jacobian(m), &assignment)?))
}
