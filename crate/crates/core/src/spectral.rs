//! From a regular semisimple matrix over truncated power series to the root
//! valuation datum and the equisingularity datum of its spectral germ, with
//! decisions of equivalence for both.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::branch::{
    branch_delta, branch_pairs, conjugate_difference_valuation, intersection_number, standard_branch, Branch, CharPairs,
};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::puiseux::newton_puiseux;
use crate::scalar::{lcm_u64, Rational};
use crate::series::{difference_valuation, PuiseuxSeries, Valuation};

type Series = PuiseuxSeries<Cyclotomic>;
type QSeries = PuiseuxSeries<Rational>;

/// Largest size handled by the relabeling searches.
pub const MAX_SEARCH_SIZE: usize = 10;

/// A `d×d` matrix whose entries are power series in `ε` known modulo
/// `ε^trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSeries {
    d: usize,
    entries: Vec<Vec<QSeries>>,
    trunc: i64,
}

impl MatrixSeries {
    /// Entries are given as `(exponent, coefficient)` lists; terms at or above
    /// `trunc` are discarded.
    pub fn new(d: usize, trunc: i64, entries: Vec<Vec<Vec<(i64, Rational)>>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("matrix size must be positive".into()));
        }
        if trunc < 1 {
            return Err(Error::InvalidInput("matrix truncation must be positive".into()));
        }
        let found: usize = entries.iter().map(Vec::len).sum();
        if entries.len() != d || entries.iter().any(|r| r.len() != d) {
            return Err(Error::WrongEntryCount { expected: d * d, found });
        }
        let mut rows = Vec::with_capacity(d);
        for (i, row) in entries.into_iter().enumerate() {
            let mut out = Vec::with_capacity(d);
            for (j, terms) in row.into_iter().enumerate() {
                if let Some(&(k, _)) = terms.iter().find(|(k, _)| *k < 0) {
                    return Err(Error::NegativeExponent { entry: i * d + j, exponent: k });
                }
                out.push(QSeries::new(1, terms, Some(trunc)));
            }
            rows.push(out);
        }
        Ok(MatrixSeries { d, entries: rows, trunc })
    }

    /// Companion matrix of the monic polynomial `y^n + Σ c_i y^i`, with
    /// `coeffs[i] = c_i` given as `(exponent, coefficient)` lists.
    pub fn companion(coeffs: &[Vec<(i64, Rational)>], trunc: i64) -> Result<Self> {
        let n = coeffs.len();
        let mut entries = vec![vec![Vec::new(); n]; n];
        for (i, row) in entries.iter_mut().enumerate().take(n.saturating_sub(1)) {
            row[i + 1] = vec![(0, Rational::one())];
        }
        for (j, c) in coeffs.iter().enumerate() {
            entries[n - 1][j] = c.iter().map(|(k, a)| (*k, -a.clone())).collect();
        }
        Self::new(n, trunc, entries)
    }

    /// Block-diagonal sum; the truncation is the smaller of the two.
    pub fn block_diagonal(blocks: &[MatrixSeries]) -> Result<Self> {
        let d: usize = blocks.iter().map(|b| b.d).sum();
        let trunc = blocks.iter().map(|b| b.trunc).min().ok_or_else(|| Error::InvalidInput("no blocks".into()))?;
        let mut entries = vec![vec![Vec::new(); d]; d];
        let mut at = 0;
        for b in blocks {
            for i in 0..b.d {
                for j in 0..b.d {
                    entries[at + i][at + j] = b.entries[i][j].terms().iter().map(|(k, c)| (*k, c.clone())).collect();
                }
            }
            at += b.d;
        }
        Self::new(d, trunc, entries)
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn entry(&self, i: usize, j: usize) -> &QSeries {
        &self.entries[i][j]
    }

    /// `det(y − γ)` by Faddeev–LeVerrier; coefficient `i` multiplies `y^i`.
    pub fn characteristic_polynomial(&self) -> Vec<QSeries> {
        let n = self.d;
        let zero = || QSeries::zero();
        let mul = |a: &Vec<Vec<QSeries>>, b: &Vec<Vec<QSeries>>| -> Vec<Vec<QSeries>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = zero();
                            for k in 0..n {
                                if a[i][k].is_certified_zero() || b[k][j].is_certified_zero() {
                                    continue;
                                }
                                acc = &acc + &(&a[i][k] * &b[k][j]);
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        };
        let mut coeffs = vec![zero(); n + 1];
        coeffs[n] = QSeries::constant(Rational::one());
        let mut m: Vec<Vec<QSeries>> = vec![vec![zero(); n]; n];
        for k in 1..=n {
            let mut next = mul(&self.entries, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] = &row[i] + &coeffs[n - k + 1];
            }
            m = next;
            let am = mul(&self.entries, &m);
            let mut tr = zero();
            for (i, row) in am.iter().enumerate() {
                tr = &tr + &row[i];
            }
            let f = -Rational::new(BigInt::one(), BigInt::from(k));
            coeffs[n - k] = tr.scale(&f);
        }
        // Never claim more than the entries support.
        coeffs.into_iter().enumerate().map(|(i, c)| if i == n { c } else { c.truncated(self.trunc) }).collect()
    }
}

/// One eigenvalue expansion per Galois orbit, from the characteristic
/// polynomial at `ε`-precision `precision` (default: the matrix truncation).
pub fn eigen_expansions(gamma: &MatrixSeries, precision: Option<i64>) -> Result<Vec<Branch>> {
    let poly: Vec<Series> =
        gamma.characteristic_polynomial().iter().map(|c| c.map_coeffs(|q| Cyclotomic::rational(q.clone()))).collect();
    let n = precision.unwrap_or(gamma.trunc).min(gamma.trunc);
    newton_puiseux(&poly, n)
}

/// Galois permutation `w` on the `d` eigen-embeddings with the symmetric
/// matrix of valuations of their differences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootValuationDatum {
    w: Vec<usize>,
    r: Vec<Vec<Rational>>,
}

fn cycles_of(w: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; w.len()];
    let mut out = Vec::new();
    for start in 0..w.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut i = w[start];
        while i != start {
            seen[i] = true;
            cycle.push(i);
            i = w[i];
        }
        out.push(cycle);
    }
    out
}

impl RootValuationDatum {
    /// Validates symmetry, the ultrametric inequality and `w`-equivariance;
    /// diagonal entries of `r` are ignored.
    pub fn new(w: Vec<usize>, r: Vec<Vec<Rational>>) -> Result<Self> {
        let d = w.len();
        let mut seen = vec![false; d];
        for &i in &w {
            if i >= d || seen[i] {
                return Err(Error::InvalidInput("w is not a permutation".into()));
            }
            seen[i] = true;
        }
        if r.len() != d || r.iter().any(|row| row.len() != d) {
            return Err(Error::SizeMismatch(d, r.len()));
        }
        let mut r = r;
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = Rational::zero();
        }
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                if r[i][j] != r[j][i] {
                    return Err(Error::InvalidInput(format!("r is not symmetric at ({}, {})", i + 1, j + 1)));
                }
                if r[w[i]][w[j]] != r[i][j] {
                    return Err(Error::InvalidInput(format!("r is not w-invariant at ({}, {})", i + 1, j + 1)));
                }
                for k in 0..d {
                    if k != i && k != j && r[i][k] < r[i][j].clone().min(r[j][k].clone()) {
                        return Err(Error::InvalidInput(format!(
                            "ultrametric inequality fails for ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(RootValuationDatum { w, r })
    }

    pub fn size(&self) -> usize {
        self.w.len()
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    /// Off-diagonal entry `val(γ′_i − γ′_j)`; `None` on the diagonal.
    pub fn r(&self, i: usize, j: usize) -> Option<&Rational> {
        if i == j {
            None
        } else {
            Some(&self.r[i][j])
        }
    }

    /// Disjoint cycles of `w` (zero-based), each starting at its minimum,
    /// sorted by their minima.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycles_of(&self.w)
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    /// The datum transported along `sigma`: index `i` becomes `sigma[i]`.
    pub fn relabeled(&self, sigma: &[usize]) -> Self {
        let d = self.size();
        let mut w = vec![0; d];
        let mut r = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            w[sigma[i]] = sigma[self.w[i]];
            for j in 0..d {
                r[sigma[i]][sigma[j]] = self.r[i][j].clone();
            }
        }
        RootValuationDatum { w, r }
    }

    fn sorted_row(&self, i: usize) -> Vec<Rational> {
        let mut row: Vec<Rational> = (0..self.size()).filter(|&j| j != i).map(|j| self.r[i][j].clone()).collect();
        row.sort();
        row
    }
}

pub fn root_valuation_datum(branches: &[Branch]) -> Result<RootValuationDatum> {
    let mut index: Vec<(usize, u64)> = Vec::new();
    for (b, br) in branches.iter().enumerate() {
        for j in 0..br.d() {
            index.push((b, j));
        }
    }
    let d = index.len();
    let mut w = vec![0; d];
    let mut start = 0;
    for br in branches {
        let n = br.d() as usize;
        for j in 0..n {
            w[start + j] = start + (j + 1) % n;
        }
        start += n;
    }
    let frame = branches.iter().fold(1, |acc, b| lcm_u64(acc, b.d()));
    let conj: Vec<Series> = index.iter().map(|&(b, j)| branches[b].conjugate(j).with_ram(frame)).collect();
    let mut r = vec![vec![Rational::zero(); d]; d];
    for a in 0..d {
        for c in a + 1..d {
            let (ba, ja) = index[a];
            let (bc, jc) = index[c];
            let v = if ba == bc {
                let n = branches[ba].d();
                conjugate_difference_valuation(&branches[ba], (jc + n - ja) % n)?
            } else {
                match difference_valuation(&conj[a], &conj[c]) {
                    Valuation::Finite(q) => q,
                    Valuation::Infinite => {
                        return Err(Error::NotDistinct(format!("branches {} and {} share a root", ba + 1, bc + 1)))
                    }
                    Valuation::Indeterminate => {
                        return Err(Error::InsufficientPrecision(format!(
                            "roots of branches {} and {} agree to the available precision",
                            ba + 1,
                            bc + 1
                        )))
                    }
                }
            };
            r[a][c] = v.clone();
            r[c][a] = v;
        }
    }
    RootValuationDatum::new(w, r)
        .map_err(|e| Error::Internal(format!("generated root valuation datum is invalid: {e}")))
}

/// A relabeling `σ` with `σ·a = b`, if one exists.
pub fn root_valuation_isomorphism(a: &RootValuationDatum, b: &RootValuationDatum) -> Result<Option<Vec<usize>>> {
    let d = a.size();
    if b.size() != d {
        return Err(Error::SizeMismatch(d, b.size()));
    }
    if d > MAX_SEARCH_SIZE {
        return Err(Error::CapExceeded(format!("relabeling search supports d ≤ {MAX_SEARCH_SIZE}, got {d}")));
    }
    if a.cycle_type() != b.cycle_type() {
        return Ok(None);
    }
    let rows_a: Vec<Vec<Rational>> = (0..d).map(|i| a.sorted_row(i)).collect();
    let rows_b: Vec<Vec<Rational>> = (0..d).map(|i| b.sorted_row(i)).collect();
    let mut ma = rows_a.clone();
    let mut mb = rows_b.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return Ok(None);
    }
    let ca = a.cycles();
    let cb = b.cycles();
    let mut sigma: Vec<Option<usize>> = vec![None; d];
    let mut used = vec![false; cb.len()];
    let found = search_cycles(a, b, &ca, &cb, &rows_a, &rows_b, 0, &mut sigma, &mut used);
    Ok(found.then(|| sigma.into_iter().map(Option::unwrap).collect()))
}

#[allow(clippy::too_many_arguments)]
fn search_cycles(
    a: &RootValuationDatum,
    b: &RootValuationDatum,
    ca: &[Vec<usize>],
    cb: &[Vec<usize>],
    rows_a: &[Vec<Rational>],
    rows_b: &[Vec<Rational>],
    at: usize,
    sigma: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if at == ca.len() {
        return true;
    }
    let cyc = &ca[at];
    let len = cyc.len();
    for (k, target) in cb.iter().enumerate() {
        if used[k] || target.len() != len {
            continue;
        }
        for off in 0..len {
            // Following w forces the whole cycle once one image is chosen.
            let images: Vec<usize> = (0..len).map(|t| target[(t + off) % len]).collect();
            if cyc.iter().zip(&images).any(|(&i, &j)| rows_a[i] != rows_b[j]) {
                continue;
            }
            let consistent = cyc.iter().zip(&images).all(|(&i, &si)| {
                (0..a.size()).all(|j| match sigma[j] {
                    Some(sj) => a.r[i][j] == b.r[si][sj],
                    None => true,
                }) && cyc.iter().zip(&images).all(|(&j, &sj)| a.r[i][j] == b.r[si][sj])
            });
            if !consistent {
                continue;
            }
            for (&i, &si) in cyc.iter().zip(&images) {
                sigma[i] = Some(si);
            }
            used[k] = true;
            if search_cycles(a, b, ca, cb, rows_a, rows_b, at + 1, sigma, used) {
                return true;
            }
            used[k] = false;
            for &i in cyc {
                sigma[i] = None;
            }
        }
    }
    false
}

pub fn equal_root_valuation(a: &RootValuationDatum, b: &RootValuationDatum) -> Result<bool> {
    Ok(root_valuation_isomorphism(a, b)?.is_some())
}

/// Characteristic pairs per branch and pairwise intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquisingularityDatum {
    pub branches: Vec<CharPairs>,
    /// Symmetric; diagonal entries are zero and carry no meaning.
    pub inter: Vec<Vec<u64>>,
}

impl EquisingularityDatum {
    pub fn new(branches: Vec<CharPairs>, inter: Vec<Vec<u64>>) -> Result<Self> {
        let r = branches.len();
        if inter.len() != r || inter.iter().any(|row| row.len() != r) {
            return Err(Error::SizeMismatch(r, inter.len()));
        }
        for i in 0..r {
            for j in 0..r {
                if inter[i][j] != inter[j][i] {
                    return Err(Error::InvalidInput("intersection matrix is not symmetric".into()));
                }
            }
        }
        let mut inter = inter;
        for (i, row) in inter.iter_mut().enumerate() {
            row[i] = 0;
        }
        Ok(EquisingularityDatum { branches, inter })
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn relabeled(&self, sigma: &[usize]) -> Self {
        let r = self.branch_count();
        let mut branches = vec![CharPairs::empty(); r];
        let mut inter = vec![vec![0; r]; r];
        for i in 0..r {
            branches[sigma[i]] = self.branches[i].clone();
            for j in 0..r {
                inter[sigma[i]][sigma[j]] = self.inter[i][j];
            }
        }
        EquisingularityDatum { branches, inter }
    }
}

pub fn equisingularity_datum(branches: &[Branch]) -> Result<EquisingularityDatum> {
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
    EquisingularityDatum::new(pairs, inter)
}

/// A branch bijection `σ` carrying `a` to `b`, if one exists.
pub fn equisingularity_isomorphism(a: &EquisingularityDatum, b: &EquisingularityDatum) -> Option<Vec<usize>> {
    let r = a.branch_count();
    if b.branch_count() != r {
        return None;
    }
    let mut ka: Vec<&CharPairs> = a.branches.iter().collect();
    let mut kb: Vec<&CharPairs> = b.branches.iter().collect();
    ka.sort();
    kb.sort();
    if ka != kb {
        return None;
    }
    let mut sigma = vec![usize::MAX; r];
    let mut used = vec![false; r];
    fn go(
        a: &EquisingularityDatum,
        b: &EquisingularityDatum,
        i: usize,
        sigma: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let r = sigma.len();
        if i == r {
            return true;
        }
        for k in 0..r {
            if used[k] || a.branches[i] != b.branches[k] {
                continue;
            }
            if (0..i).any(|j| a.inter[i][j] != b.inter[k][sigma[j]]) {
                continue;
            }
            sigma[i] = k;
            used[k] = true;
            if go(a, b, i + 1, sigma, used) {
                return true;
            }
            used[k] = false;
        }
        false
    }
    go(a, b, 0, &mut sigma, &mut used).then_some(sigma)
}

pub fn equal_equisingularity(a: &EquisingularityDatum, b: &EquisingularityDatum) -> bool {
    equisingularity_isomorphism(a, b).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aggregate {
    pub delta: u64,
    pub branches: u64,
    pub milnor: u64,
    /// δ of each branch, from its standard unit-coefficient parametrization.
    pub branch_deltas: Vec<u64>,
}

pub fn aggregate_invariants(e: &EquisingularityDatum) -> Result<Aggregate> {
    let branch_deltas =
        e.branches.iter().map(|p| branch_delta(&standard_branch(p)).map(|c| c.value)).collect::<Result<Vec<_>>>()?;
    let r = e.branch_count() as u64;
    if r == 0 {
        return Err(Error::InvalidInput("no branches".into()));
    }
    let mut delta: u64 = branch_deltas.iter().sum();
    for i in 0..e.branch_count() {
        for j in i + 1..e.branch_count() {
            delta += e.inter[i][j];
        }
    }
    Ok(Aggregate { delta, branches: r, milnor: 2 * delta + 1 - r, branch_deltas })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GkmReport {
    pub branches: (Vec<Branch>, Vec<Branch>),
    pub rootval: (RootValuationDatum, RootValuationDatum),
    pub equising: (EquisingularityDatum, EquisingularityDatum),
    pub rootval_equal: bool,
    pub equising_equal: bool,
    pub rootval_witness: Option<Vec<usize>>,
    pub equising_witness: Option<Vec<usize>>,
    pub implication: Verdict,
}

/// Checks that equal root valuation data imply equal equisingularity data.
/// The converse is recorded but not asserted.
pub fn verify_gkm_lemma(g1: &MatrixSeries, g2: &MatrixSeries, precision: Option<i64>) -> Result<GkmReport> {
    let b1 = eigen_expansions(g1, precision)?;
    let b2 = eigen_expansions(g2, precision)?;
    let r1 = root_valuation_datum(&b1)?;
    let r2 = root_valuation_datum(&b2)?;
    let e1 = equisingularity_datum(&b1)?;
    let e2 = equisingularity_datum(&b2)?;
    let rootval_witness = if r1.size() == r2.size() { root_valuation_isomorphism(&r1, &r2)? } else { None };
    let equising_witness = equisingularity_isomorphism(&e1, &e2);
    let rootval_equal = rootval_witness.is_some();
    let equising_equal = equising_witness.is_some();
    let implication = if rootval_equal && !equising_equal { Verdict::Fail } else { Verdict::Pass };
    Ok(GkmReport {
        branches: (b1, b2),
        rootval: (r1, r2),
        equising: (e1, e2),
        rootval_equal,
        equising_equal,
        rootval_witness,
        equising_witness,
        implication,
    })
}

/// Number of entries of each value in the strict upper triangle of `r`.
pub fn valuation_histogram(datum: &RootValuationDatum) -> BTreeMap<Rational, usize> {
    let mut out = BTreeMap::new();
    for i in 0..datum.size() {
        for j in i + 1..datum.size() {
            *out.entry(datum.r[i][j].clone()).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn poly(terms: &[(i64, i64)]) -> Vec<(i64, Rational)> {
        terms.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn characteristic_polynomial_of_companion() {
        let m = MatrixSeries::companion(&[poly(&[(3, -1)]), poly(&[])], 6).unwrap();
        assert_eq!(m.entry(1, 0).terms().get(&3), Some(&int(1)));
        let cp = m.characteristic_polynomial();
        assert_eq!(cp[0].terms().get(&3), Some(&int(-1)));
        assert!(cp[1].terms().is_empty());
    }

    #[test]
    fn node_diagonal() {
        let m = MatrixSeries::new(2, 6, vec![vec![poly(&[(1, 1)]), vec![]], vec![vec![], poly(&[(1, 2)])]]).unwrap();
        let bs = eigen_expansions(&m, None).unwrap();
        assert_eq!(bs.len(), 2);
        let rv = root_valuation_datum(&bs).unwrap();
        assert_eq!(rv.cycles(), vec![vec![0], vec![1]]);
        assert_eq!(rv.r(0, 1), Some(&int(1)));
    }

    #[test]
    fn cusp_companion() {
        let m = MatrixSeries::companion(&[poly(&[(3, -1)]), poly(&[])], 6).unwrap();
        let bs = eigen_expansions(&m, None).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].d(), 2);
        let rv = root_valuation_datum(&bs).unwrap();
        assert_eq!(rv.cycles(), vec![vec![0, 1]]);
        assert_eq!(rv.r(0, 1), Some(&rat(3, 2)));
    }

    #[test]
    fn split_companion() {
        let m = MatrixSeries::companion(&[poly(&[(2, -1)]), poly(&[])], 6).unwrap();
        let bs = eigen_expansions(&m, None).unwrap();
        assert_eq!(bs.len(), 2);
    }

    #[test]
    fn four_cycle_valuations() {
        let b = Branch::exact(4, &[(6, 1), (7, 1)]);
        let rv = root_valuation_datum(&[b]).unwrap();
        assert_eq!(rv.cycles(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(rv.r(0, 1), Some(&rat(3, 2)));
        assert_eq!(rv.r(0, 2), Some(&rat(7, 4)));
        assert_eq!(rv.r(0, 3), Some(&rat(3, 2)));
        let hist = valuation_histogram(&rv);
        assert_eq!(hist.get(&rat(3, 2)), Some(&4));
        assert_eq!(hist.get(&rat(7, 4)), Some(&2));
    }

    #[test]
    fn rootval_equality() {
        let node = root_valuation_datum(&[Branch::exact(1, &[(1, 1)]), Branch::exact(1, &[(1, 2)])]).unwrap();
        let cusp = root_valuation_datum(&[Branch::exact(2, &[(3, 1)])]).unwrap();
        assert!(equal_root_valuation(&node, &node).unwrap());
        assert!(equal_root_valuation(&node, &node.relabeled(&[1, 0])).unwrap());
        assert!(!equal_root_valuation(&node, &cusp).unwrap());
        let big = root_valuation_datum(&[Branch::exact(1, &[])]).unwrap();
        assert!(matches!(equal_root_valuation(&node, &big), Err(Error::SizeMismatch(2, 1))));
    }

    #[test]
    fn equisingularity_examples() {
        let cusp = equisingularity_datum(&[Branch::exact(2, &[(3, 1)])]).unwrap();
        assert_eq!(cusp.branches, vec![CharPairs::new(vec![(3, 2)]).unwrap()]);
        let tac = equisingularity_datum(&[Branch::exact(1, &[(2, 1)]), Branch::exact(1, &[(2, -1)])]).unwrap();
        assert_eq!(tac.inter[0][1], 2);
        assert!(equal_equisingularity(&tac, &tac.relabeled(&[1, 0])));
        let node = equisingularity_datum(&[Branch::exact(1, &[]), Branch::exact(1, &[(1, 1)])]).unwrap();
        assert_eq!(node.inter[0][1], 1);
        assert!(!equal_equisingularity(&tac, &node));
        assert!(!equal_equisingularity(&cusp, &node));
    }

    #[test]
    fn aggregates() {
        let cusp = equisingularity_datum(&[Branch::exact(2, &[(3, 1)])]).unwrap();
        let a = aggregate_invariants(&cusp).unwrap();
        assert_eq!((a.delta, a.branches, a.milnor), (1, 1, 2));
        let tac = equisingularity_datum(&[Branch::exact(1, &[(2, 1)]), Branch::exact(1, &[(2, -1)])]).unwrap();
        let a = aggregate_invariants(&tac).unwrap();
        assert_eq!((a.delta, a.branches, a.milnor), (2, 2, 3));
        let triple =
            equisingularity_datum(&[Branch::exact(1, &[]), Branch::exact(1, &[(1, 1)]), Branch::exact(1, &[(1, -1)])])
                .unwrap();
        let a = aggregate_invariants(&triple).unwrap();
        assert_eq!((a.delta, a.branches, a.milnor), (3, 3, 4));
    }

    #[test]
    fn gkm_on_rescaled_cusp() {
        let a = MatrixSeries::companion(&[poly(&[(3, -1)]), poly(&[])], 8).unwrap();
        let b = MatrixSeries::companion(&[poly(&[(3, -25)]), poly(&[])], 8).unwrap();
        let report = verify_gkm_lemma(&a, &b, None).unwrap();
        assert!(report.rootval_equal && report.equising_equal);
        assert_eq!(report.implication, Verdict::Pass);
        let node = MatrixSeries::new(2, 8, vec![vec![poly(&[(1, 1)]), vec![]], vec![vec![], poly(&[(1, 2)])]]).unwrap();
        let report = verify_gkm_lemma(&node, &a, None).unwrap();
        assert!(!report.rootval_equal);
        assert_eq!(report.implication, Verdict::Pass);
    }
}
