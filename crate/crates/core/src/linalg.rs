//! Exact linear algebra over any [`Field`].
//!
//! [`Echelon`] is the workhorse: an incrementally maintained echelon basis of
//! sparse vectors, pivoting on the *smallest* nonzero index. The pivot set of
//! such a basis is exactly the set of indices realized as the leading index
//! of some vector in the span, which is how valuation semigroups and
//! truncated quotient dimensions are read off.

use std::collections::{BTreeMap, BTreeSet};

use crate::scalar::Field;

/// Sparse vector: index → nonzero entry.
pub type SparseVec<F> = BTreeMap<usize, F>;

/// Echelon basis keyed by leading (smallest) index; every stored row has
/// leading coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

fn strip<F: Field>(v: &mut SparseVec<F>) {
    v.retain(|_, c| !c.is_zero());
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    /// Reduces `v` against the basis until its leading index is not a pivot.
    /// The result is zero exactly when `v` lies in the span.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        strip(&mut v);
        let mut floor = 0usize;
        loop {
            let lead = match v.range(floor..).next() {
                Some((&k, _)) => k,
                None => return v,
            };
            match self.rows.get(&lead) {
                None => {
                    // Leading index is free; lower-order indices are settled,
                    // but keep reducing the tail so the remainder is canonical.
                    floor = lead + 1;
                }
                Some(row) => {
                    let c = v[&lead].clone();
                    for (k, a) in row {
                        let entry = v.remove(k).unwrap_or_else(F::zero);
                        let updated = entry - c.clone() * a.clone();
                        if !updated.is_zero() {
                            v.insert(*k, updated);
                        }
                    }
                }
            }
        }
    }

    /// Adds `v` to the span. Returns the new pivot if `v` was independent.
    pub fn insert(&mut self, v: SparseVec<F>) -> Option<usize> {
        let mut v = strip_then(v);
        // Only elimination of the leading index matters for the pivot set.
        loop {
            let (&lead, _) = v.iter().next()?;
            match self.rows.get(&lead) {
                None => {
                    let inv = v[&lead].inverse().expect("nonzero leading entry");
                    for c in v.values_mut() {
                        *c = c.clone() * inv.clone();
                    }
                    self.rows.insert(lead, v);
                    return Some(lead);
                }
                Some(row) => {
                    let c = v[&lead].clone();
                    for (k, a) in row {
                        let entry = v.remove(k).unwrap_or_else(F::zero);
                        let updated = entry - c.clone() * a.clone();
                        if !updated.is_zero() {
                            v.insert(*k, updated);
                        }
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> BTreeSet<usize> {
        self.rows.keys().copied().collect()
    }
}

fn strip_then<F: Field>(mut v: SparseVec<F>) -> SparseVec<F> {
    strip(&mut v);
    v
}

/// Leading orders of an echelon basis of the span of `vecs`, restricted to
/// orders below `bound` (entries at or above `bound` are ignored).
pub fn echelon_pivot_orders<F: Field>(vecs: &[SparseVec<F>], bound: usize) -> BTreeSet<usize> {
    let mut ech = Echelon::new();
    for v in vecs {
        let clipped: SparseVec<F> = v.range(..bound).map(|(k, c)| (*k, c.clone())).collect();
        ech.insert(clipped);
    }
    ech.pivots()
}

fn to_sparse<F: Field>(row: &[F]) -> SparseVec<F> {
    row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(to_sparse(r));
    }
    ech.rank()
}

/// Reduced row echelon form of the row space: a canonical basis, so two
/// matrices have the same row space exactly when their `rref`s are equal.
pub fn rref<F: Field>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(to_sparse(r));
    }
    let pivots: Vec<usize> = ech.pivots().into_iter().collect();
    let mut basis: Vec<SparseVec<F>> = pivots.iter().map(|p| ech.rows[p].clone()).collect();
    // Back-substitute so every pivot column is a unit vector.
    for i in (0..basis.len()).rev() {
        let p = pivots[i];
        let pivot_row = basis[i].clone();
        for (j, row) in basis.iter_mut().enumerate() {
            if j == i {
                continue;
            }
            if let Some(c) = row.get(&p).cloned() {
                for (k, a) in &pivot_row {
                    let entry = row.remove(k).unwrap_or_else(F::zero);
                    let updated = entry - c.clone() * a.clone();
                    if !updated.is_zero() {
                        row.insert(*k, updated);
                    }
                }
            }
        }
    }
    basis.into_iter().map(|row| (0..width).map(|k| row.get(&k).cloned().unwrap_or_else(F::zero)).collect()).collect()
}

/// Solves `matrix · x = rhs` (rows ≥ columns allowed). Returns one solution,
/// with free variables set to zero, or `None` if the system is inconsistent.
pub fn solve<F: Field>(matrix: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let n = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..aug.len()).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][col].inverse()?;
        for c in aug[r].iter_mut() {
            *c = c.clone() * inv.clone();
        }
        for i in 0..aug.len() {
            if i != r && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for c in 0..=n {
                    let v = aug[i][c].clone() - f.clone() * aug[r][c].clone();
                    aug[i][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == aug.len() {
            break;
        }
    }
    if aug[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[i][n].clone();
    }
    Some(x)
}

/// Determinant by Gaussian elimination.
pub fn determinant<F: Field>(matrix: &[Vec<F>]) -> F {
    let n = matrix.len();
    let mut a: Vec<Vec<F>> = matrix.to_vec();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det = det * a[col][col].clone();
        let inv = a[col][col].inverse().expect("nonzero pivot");
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone() * inv.clone();
            for j in col..n {
                let v = a[i][j].clone() - f.clone() * a[col][j].clone();
                a[i][j] = v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};
    use proptest::prelude::*;

    fn vec_of(entries: &[(usize, i64)]) -> SparseVec<Rational> {
        entries.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn independent_leading_orders() {
        let vecs = vec![vec_of(&[(2, 1)]), vec_of(&[(3, 1)])];
        assert_eq!(echelon_pivot_orders(&vecs, 10), [2, 3].into());
    }

    #[test]
    fn cancellation_creates_order() {
        let vecs = vec![vec_of(&[(2, 1), (3, 1)]), vec_of(&[(2, 1)])];
        assert_eq!(echelon_pivot_orders(&vecs, 10), [2, 3].into());
    }

    #[test]
    fn empty_span() {
        let vecs: Vec<SparseVec<Rational>> = vec![];
        assert!(echelon_pivot_orders(&vecs, 10).is_empty());
    }

    #[test]
    fn membership() {
        let mut e = Echelon::new();
        e.insert(vec_of(&[(0, 1), (1, 2)]));
        e.insert(vec_of(&[(1, 1), (2, 1)]));
        assert!(e.contains(vec_of(&[(0, 1), (1, 3), (2, 1)])));
        assert!(!e.contains(vec_of(&[(2, 1)])));
    }

    #[test]
    fn small_determinants() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(determinant(&m), int(5));
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(determinant(&singular), int(0));
    }

    #[test]
    fn solve_overdetermined() {
        let m = vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]];
        assert_eq!(solve(&m, &[int(1), int(2), int(3)]), Some(vec![int(1), int(2)]));
        assert_eq!(solve(&m, &[int(1), int(2), int(4)]), None);
    }

    #[test]
    fn rref_is_canonical() {
        let a = vec![vec![int(1), int(2), int(3)], vec![int(0), int(1), int(1)]];
        let b = vec![vec![int(1), int(3), int(4)], vec![int(2), int(4), int(6)]];
        assert_eq!(rref(&a), rref(&b));
        assert_eq!(rref(&a), vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]]);
    }

    proptest! {
        // Pivot orders depend only on the span, not on the chosen generators.
        #[test]
        fn pivots_invariant_under_recombination(
            raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 8), 1..5),
            mix in proptest::collection::vec(-2i64..=2, 16),
        ) {
            let vecs: Vec<SparseVec<Rational>> = raw.iter().map(|r| to_sparse(&r.iter().map(|&c| int(c)).collect::<Vec<_>>())).collect();
            let base = echelon_pivot_orders(&vecs, 8);
            // Unit upper-triangular recombination is invertible.
            let n = vecs.len();
            let mut mixed = Vec::new();
            for i in 0..n {
                let mut acc: SparseVec<Rational> = vecs[i].clone();
                for j in i + 1..n {
                    let f = rat(mix[(i * 4 + j) % mix.len()], 1);
                    for (k, c) in &vecs[j] {
                        let e = acc.remove(k).unwrap_or_else(|| int(0)) + f.clone() * c.clone();
                        acc.insert(*k, e);
                    }
                }
                mixed.push(acc);
            }
            mixed.reverse();
            prop_assert_eq!(echelon_pivot_orders(&mixed, 8), base);
        }
    }
}
