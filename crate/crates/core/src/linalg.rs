//! Sparse exact linear algebra: vectors over `Q` and row-echelon subspaces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{q, Q};

/// Sparse vector indexed by basis position. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec {
    entries: BTreeMap<usize, Q>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.entries.insert(i, Q::one());
        v
    }

    pub fn single(i: usize, c: Q) -> Self {
        let mut v = Self::new();
        v.add_term(i, c);
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (i, c) in pairs {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Q {
        self.entries.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, i: usize) -> Option<&Q> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, &Q)> + '_ {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn add_term(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, x * c);
        }
    }

    pub fn add(&mut self, other: &SparseVec) {
        for (i, x) in other.iter() {
            self.add_term(i, x.clone());
        }
    }

    pub fn scaled(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        self.scaled(&q(-1))
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut r = self.clone();
        r.add_scaled(other, &q(-1));
        r
    }

    pub fn plus(&self, other: &SparseVec) -> SparseVec {
        let mut r = self.clone();
        r.add(other);
        r
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut acc = Q::zero();
        for (i, x) in self.iter() {
            if let Some(y) = other.coeff(i) {
                acc += x * y;
            }
        }
        acc
    }

    /// Keeps only the entries whose index satisfies `keep`.
    pub fn filtered<F: Fn(usize) -> bool>(&self, keep: F) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn map_indices<F: Fn(usize) -> usize>(&self, f: F) -> SparseVec {
        let mut r = SparseVec::new();
        for (i, c) in self.iter() {
            r.add_term(f(i), c.clone());
        }
        r
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut d = vec![Q::zero(); n];
        for (i, c) in self.iter() {
            d[i] = c.clone();
        }
        d
    }

    pub fn from_dense(d: &[Q]) -> SparseVec {
        SparseVec::from_pairs(d.iter().cloned().enumerate())
    }
}

/// A subspace kept in echelon form. Each row is normalized so its largest
/// index (the pivot) has coefficient one. Reduction removes pivot
/// coordinates from the top down, so reduced forms are canonical.
#[derive(Clone, Debug, Default)]
pub struct Subspace {
    rows: BTreeMap<usize, SparseVec>,
}

impl Subspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.rows.values()
    }

    /// Canonical representative of `v` modulo the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => v.iter().rev().find(|(i, _)| self.rows.contains_key(i)),
                Some(c) => v
                    .iter()
                    .rev()
                    .find(|(i, _)| *i < c && self.rows.contains_key(i)),
            };
            let Some((p, c)) = next else { break };
            let c = c.clone();
            v.add_scaled(&self.rows[&p], &(-c));
            cursor = Some(p);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns true when the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.max_index() else {
            return false;
        };
        let inv = Q::one() / r.get(p);
        let r = r.scaled(&inv);
        self.rows.insert(p, r);
        true
    }

    /// Coordinates with respect to the rows.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.values().cloned().collect()
    }
}

/// Echelon basis that remembers each row as a combination of the inserted
/// vectors, numbered in insertion order.
#[derive(Clone, Debug, Default)]
pub struct TrackedSubspace {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
}

impl TrackedSubspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo = SparseVec::new();
        for (p, (row, rc)) in self.rows.iter().rev() {
            let c = v.get(*p);
            if !c.is_zero() {
                v.add_scaled(row, &-c.clone());
                combo.add_scaled(rc, &c);
            }
        }
        (v, combo)
    }

    /// Inserts `v` as vector number `self.inserted()`; returns independence.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let k = self.inserted;
        self.inserted += 1;
        let (r, combo) = self.reduce_tracked(v);
        let Some(p) = r.max_index() else {
            return false;
        };
        let mut rc = SparseVec::unit(k);
        rc.add_scaled(&combo, &-Q::one());
        let inv = Q::one() / r.get(p);
        self.rows.insert(p, (r.scaled(&inv), rc.scaled(&inv)));
        true
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Coefficients `c` with `v = Σ c_k (inserted vector k)`, if `v` is in the span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (r, combo) = self.reduce_tracked(v);
        r.is_zero().then_some(combo)
    }
}

/// Dense row reduction used for small matrices (kernels and ranks).
pub fn rank(rows: &[SparseVec]) -> usize {
    let mut s = Subspace::new();
    for r in rows {
        s.insert(r);
    }
    s.dim()
}

/// Kernel of the matrix whose rows are `rows`, acting on vectors of length `n`.
/// Returns a basis of `{x : rows · x = 0}`.
pub fn kernel(rows: &[SparseVec], n: usize) -> Vec<SparseVec> {
    // Reduced row echelon form with pivots chosen as smallest indices.
    let mut mat: Vec<Vec<Q>> = rows.iter().map(|r| r.to_dense(n)).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r >= mat.len() {
            break;
        }
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = Q::one() / mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = SparseVec::unit(f);
            for (row, &pc) in pivot_cols.iter().enumerate() {
                let x = &mat[row][f];
                if !x.is_zero() {
                    v.add_term(pc, -x.clone());
                }
            }
            v
        })
        .collect()
}

/// Dense matrix helpers over `Q`.
pub type Matrix = Vec<Vec<Q>>;

pub fn mat_zero(r: usize, c: usize) -> Matrix {
    vec![vec![Q::zero(); c]; r]
}

pub fn mat_identity(n: usize) -> Matrix {
    let mut m = mat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut c = mat_zero(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    c[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    c
}

pub fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect()
}

pub fn mat_is_zero(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn mat_vec(a: &Matrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(Q::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Inverse via Gauss-Jordan; `None` if singular.
pub fn mat_inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = Q::one() / m[c][c].clone();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
