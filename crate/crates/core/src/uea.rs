//! Universal enveloping algebras in PBW normal form.
//!
//! Monomials are non-decreasing index sequences over the ambient basis
//! order. Straightening swaps the first descent `…ba… = …ab… + …[b,a]…`,
//! which lowers (length, inversions) lexicographically.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liealg::LieAlgebraData;
use crate::linalg::{mat_identity, mat_mul, Matrix, SparseVec, Subspace};
use crate::rational::Q;

/// Structure constants of a finite-dimensional Lie algebra in a fixed basis.
#[derive(Debug, PartialEq)]
pub struct StructureConstants {
    pub name: String,
    pub labels: Vec<String>,
    brackets: Vec<SparseVec>,
}

impl StructureConstants {
    pub fn new(name: String, labels: Vec<String>, brackets: Vec<SparseVec>) -> Self {
        assert_eq!(brackets.len(), labels.len() * labels.len());
        Self {
            name,
            labels,
            brackets,
        }
    }

    pub fn from_lie(g: &LieAlgebraData) -> Self {
        let n = g.dim();
        let mut br = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                br.push(g.bracket_basis(a, b).clone());
            }
        }
        Self::new(g.type_label(), g.labels.clone(), br)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a * self.dim() + b]
    }
}

pub type Monomial = Vec<usize>;

#[derive(Clone, Debug)]
pub struct PBWElement {
    alg: Arc<StructureConstants>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for PBWElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg) && self.terms == other.terms
    }
}

impl PBWElement {
    pub fn zero(alg: &Arc<StructureConstants>) -> Self {
        Self {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alg: &Arc<StructureConstants>, c: Q) -> Self {
        let mut z = Self::zero(alg);
        z.add_term(Vec::new(), c);
        z
    }

    pub fn one(alg: &Arc<StructureConstants>) -> Self {
        Self::scalar(alg, Q::one())
    }

    pub fn generator(alg: &Arc<StructureConstants>, i: usize) -> Self {
        let mut z = Self::zero(alg);
        z.add_term(vec![i], Q::one());
        z
    }

    /// Embeds a Lie element `Σ c_i x_i` as a degree-one element.
    pub fn from_lie(alg: &Arc<StructureConstants>, x: &SparseVec) -> Self {
        let mut z = Self::zero(alg);
        for (i, c) in x.iter() {
            z.add_term(vec![i], c.clone());
        }
        z
    }

    pub fn algebra(&self) -> &Arc<StructureConstants> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.alg);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(&-Q::one()))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.alg);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut w = m1.clone();
                w.extend_from_slice(m2);
                let p = pbw_normalize(&self.alg, &w);
                let c = c1 * c2;
                for (m, x) in p.terms {
                    out.add_term(m, x * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(&self.alg);
        for _ in 0..k {
            acc = acc.multiply(self).expect("same algebra");
        }
        acc
    }

    /// Evaluates in a representation given by one matrix per basis element.
    pub fn represent(&self, mats: &[Matrix]) -> Matrix {
        let n = mats.first().map(|m| m.len()).unwrap_or(0);
        let mut out = vec![vec![Q::zero(); n]; n];
        for (m, c) in &self.terms {
            let mut p = mat_identity(n);
            for &i in m {
                p = mat_mul(&p, &mats[i]);
            }
            for (r, row) in out.iter_mut().enumerate() {
                for (s, x) in row.iter_mut().enumerate() {
                    if !p[r][s].is_zero() {
                        *x += &p[r][s] * c;
                    }
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        crate::text::format_terms(self.terms.iter().map(|(m, c)| {
            let body = m
                .iter()
                .map(|&i| self.alg.labels[i].as_str())
                .collect::<Vec<_>>()
                .join(".");
            (c.clone(), body)
        }))
    }

    /// Parses `3/2*e.h.f - f + 2`; monomials need not be ordered.
    pub fn parse(alg: &Arc<StructureConstants>, s: &str) -> Result<Self> {
        let lookup: HashMap<&str, usize> = alg
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut out = Self::zero(alg);
        for (c, body) in crate::text::split_terms(s)? {
            let word: Vec<usize> = match body {
                None => Vec::new(),
                Some(b) => b
                    .split('.')
                    .map(|sym| {
                        lookup
                            .get(sym)
                            .copied()
                            .ok_or_else(|| Error::Parse(format!("unknown generator {sym:?}")))
                    })
                    .collect::<Result<_>>()?,
            };
            let p = pbw_normalize(alg, &word);
            out = out.add(&p.scaled(&c))?;
        }
        Ok(out)
    }
}

/// Rewrites a word into ordered monomials.
pub fn pbw_normalize(alg: &Arc<StructureConstants>, word: &[usize]) -> PBWElement {
    let mut out = PBWElement::zero(alg);
    let mut pending: BTreeMap<Monomial, Q> = BTreeMap::new();
    pending.insert(word.to_vec(), Q::one());
    while let Some((w, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            None => out.add_term(w, c),
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                *pending.entry(swapped).or_insert_with(Q::zero) += &c;
                for (k, x) in alg.bracket_basis(w[i], w[i + 1]).iter() {
                    let mut shorter = Vec::with_capacity(w.len() - 1);
                    shorter.extend_from_slice(&w[..i]);
                    shorter.push(k);
                    shorter.extend_from_slice(&w[i + 2..]);
                    *pending.entry(shorter).or_insert_with(Q::zero) += &c * x;
                }
            }
        }
    }
    out
}

/// Ordered monomials of exact length `d` in `n` generators.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, d, i, cur, out);
            cur.pop();
        }
    }
    rec(n, d, 0, &mut cur, &mut out);
    out
}

/// `span{m₁·gen·m₂ : deg m₁ + deg gen + deg m₂ ≤ cap}` in the monomial basis.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub generator: PBWElement,
    pub degree_cap: usize,
    index: HashMap<Monomial, usize>,
    pub span: Subspace,
}

impl IdealBasis {
    pub fn new(gen: &PBWElement, degree_cap: usize) -> Self {
        let alg = gen.algebra().clone();
        let n = alg.dim();
        let mut index = HashMap::new();
        for d in 0..=degree_cap {
            for m in monomials_of_degree(n, d) {
                let k = index.len();
                index.insert(m, k);
            }
        }
        let mut span = Subspace::new();
        let dg = gen.degree();
        if dg <= degree_cap {
            let room = degree_cap - dg;
            for d1 in 0..=room {
                for m1 in monomials_of_degree(n, d1) {
                    let left = pbw_normalize(&alg, &m1).multiply(gen).expect("same algebra");
                    for d2 in 0..=room - d1 {
                        for m2 in monomials_of_degree(n, d2) {
                            let p = left.multiply(&pbw_normalize(&alg, &m2)).expect("same algebra");
                            span.insert(&Self::coords(&index, &p));
                        }
                    }
                }
            }
        }
        Self {
            generator: gen.clone(),
            degree_cap,
            index,
            span,
        }
    }

    fn coords(index: &HashMap<Monomial, usize>, p: &PBWElement) -> SparseVec {
        SparseVec::from_pairs(p.terms.iter().map(|(m, c)| (index[m], c.clone())))
    }

    pub fn contains(&self, x: &PBWElement) -> Result<bool> {
        if x.degree() > self.degree_cap {
            return Err(Error::DegreeCap {
                degree: x.degree(),
                cap: self.degree_cap,
            });
        }
        Ok(self.span.contains(&Self::coords(&self.index, x)))
    }
}

/// One-sided test: `true` certifies membership in the two-sided ideal.
pub fn ideal_membership_bounded(x: &PBWElement, gen: &PBWElement, degree_cap: usize) -> Result<bool> {
    x.check_same(gen)?;
    if x.degree() > degree_cap {
        return Err(Error::DegreeCap {
            degree: x.degree(),
            cap: degree_cap,
        });
    }
    IdealBasis::new(gen, degree_cap).contains(x)
}
