//! Simple Lie algebras in a Chevalley basis.
//!
//! Basis order: `e_β` for positive roots (height, then lexicographic with
//! `α_1` first), then `h_1..h_r`, then `f_β` in the same root order.
//!
//! Simply-laced types use the bimultiplicative sign `ε` on the root lattice
//! with `ε(α_i, α_j) = -1` when `i = j` or when `i < j` and `α_i, α_j` are
//! adjacent, and `+1` otherwise. With `E_β` the lattice root vectors,
//!
//! ```text
//! [E_α, E_β]  = ε(α, β) E_{α+β}     (α + β a root)
//! [E_α, E_-α] = ε(α, -α) H_α
//! e_β = E_β,  f_β = ε(β, -β) E_{-β}
//! ```
//!
//! so that `[e_β, f_β] = h_β` and `⟨e_β, f_β⟩ = 1`. Types B, C, F and G are
//! the fixed points of a diagram automorphism of D, A, E6 and D4, spanned by
//! orbit sums of the parent basis; the restricted form is already normalized.

pub mod adapted;
pub mod automorphism;
pub mod cyclotomic;
pub mod roots;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::rational::{parse_q, q, to_fraction_string, Q};

pub use automorphism::{Automorphism, EigenDecomposition};
pub use roots::{CartanType, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisKind {
    Pos(usize),
    Cartan(usize),
    Neg(usize),
}

#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub roots: RootSystem,
    pub labels: Vec<String>,
    pub kinds: Vec<BasisKind>,
    brackets: Vec<SparseVec>,
    form: Vec<SparseVec>,
}

impl PartialEq for LieAlgebraData {
    fn eq(&self, other: &Self) -> bool {
        self.type_label() == other.type_label()
    }
}

/// Parses labels such as `A2`, `e8`, `D 4`.
pub fn parse_type_label(s: &str) -> Result<(CartanType, usize)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidType {
        label: s.clone(),
        rank: 0,
    };
    let mut chars = s.chars();
    let letter = chars.next().ok_or_else(bad)?;
    let t = CartanType::parse(&letter.to_string())?;
    let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
    Ok((t, rank))
}

pub fn build_lie_algebra(t: CartanType, rank: usize) -> Result<LieAlgebraData> {
    roots::validate(t, rank, false)?;
    build_any(t, rank)
}

fn build_any(t: CartanType, rank: usize) -> Result<LieAlgebraData> {
    match t {
        CartanType::A | CartanType::D | CartanType::E => build_simply_laced(t, rank),
        CartanType::B => fold(t, rank, CartanType::D, rank + 1, {
            let mut orbits: Vec<Vec<usize>> = (0..rank - 1).map(|i| vec![i]).collect();
            orbits.push(vec![rank - 1, rank]);
            orbits
        }),
        CartanType::C => fold(
            t,
            rank,
            CartanType::A,
            2 * rank - 1,
            (0..rank)
                .map(|j| {
                    if j + 1 == rank {
                        vec![j]
                    } else {
                        vec![j, 2 * rank - 2 - j]
                    }
                })
                .collect(),
        ),
        CartanType::F => fold(
            t,
            rank,
            CartanType::E,
            6,
            vec![vec![1], vec![3], vec![2, 4], vec![0, 5]],
        ),
        CartanType::G => fold(t, rank, CartanType::D, 4, vec![vec![0, 2, 3], vec![1]]),
    }
}

fn basis_layout(rs: &RootSystem) -> (Vec<String>, Vec<BasisKind>) {
    let p = rs.positive.len();
    let r = rs.rank;
    let mut labels = Vec::with_capacity(2 * p + r);
    let mut kinds = Vec::with_capacity(2 * p + r);
    let coords = |v: &[i64]| v.iter().map(|c| c.to_string()).collect::<String>();
    for (i, b) in rs.positive.iter().enumerate() {
        labels.push(if r == 1 { "e".into() } else { format!("e_{}", coords(b)) });
        kinds.push(BasisKind::Pos(i));
    }
    for i in 0..r {
        labels.push(if r == 1 { "h".into() } else { format!("h_{}", i + 1) });
        kinds.push(BasisKind::Cartan(i));
    }
    for (i, b) in rs.positive.iter().enumerate() {
        labels.push(if r == 1 { "f".into() } else { format!("f_{}", coords(b)) });
        kinds.push(BasisKind::Neg(i));
    }
    (labels, kinds)
}

fn epsilon(rs: &RootSystem, a: &[i64], b: &[i64]) -> i64 {
    let mut exp = 0i64;
    for i in 0..rs.rank {
        if a[i] == 0 {
            continue;
        }
        exp += a[i] * b[i];
        for j in i + 1..rs.rank {
            if rs.cartan[i][j] == -1 {
                exp += a[i] * b[j];
            }
        }
    }
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn build_simply_laced(t: CartanType, rank: usize) -> Result<LieAlgebraData> {
    let rs = RootSystem::new(t, rank)?;
    let (labels, kinds) = basis_layout(&rs);
    let p = rs.positive.len();
    let dim = 2 * p + rank;
    // Signed root and scale of each root vector: x = s E_root.
    let root_of = |k: &BasisKind| -> Option<(Vec<i64>, i64)> {
        match *k {
            BasisKind::Pos(i) => Some((rs.positive[i].clone(), 1)),
            BasisKind::Neg(i) => {
                let b = &rs.positive[i];
                let nb: Vec<i64> = b.iter().map(|c| -c).collect();
                Some((nb.clone(), epsilon(&rs, b, &nb)))
            }
            BasisKind::Cartan(_) => None,
        }
    };
    let index_of_root = |v: &[i64]| -> Option<(usize, i64)> {
        if v.iter().all(|&c| c >= 0) {
            rs.positive_index(v).map(|i| (i, 1))
        } else {
            let nv: Vec<i64> = v.iter().map(|c| -c).collect();
            rs.positive_index(&nv)
                .map(|i| (p + rank + i, epsilon(&rs, &nv, v)))
        }
    };
    let info: Vec<Option<(Vec<i64>, i64)>> = kinds.iter().map(root_of).collect();
    let mut brackets = vec![SparseVec::new(); dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let v = match (&info[a], &info[b]) {
                (Some((ra, sa)), Some((rb, sb))) => {
                    let sum: Vec<i64> = ra.iter().zip(rb).map(|(x, y)| x + y).collect();
                    let sign = sa * sb * epsilon(&rs, ra, rb);
                    if sum.iter().all(|&c| c == 0) {
                        SparseVec::from_pairs(
                            ra.iter()
                                .enumerate()
                                .filter(|(_, &c)| c != 0)
                                .map(|(i, &c)| (p + i, q(sign * c))),
                        )
                    } else if let Some((idx, s)) = index_of_root(&sum) {
                        // E_sum = s x_idx
                        SparseVec::single(idx, q(sign * s))
                    } else {
                        SparseVec::new()
                    }
                }
                (None, Some((rb, _))) => {
                    let i = match kinds[a] {
                        BasisKind::Cartan(i) => i,
                        _ => unreachable!(),
                    };
                    let mut ai = vec![0; rank];
                    ai[i] = 1;
                    SparseVec::single(b, rs.inner_product(&ai, rb))
                }
                (Some((ra, _)), None) => {
                    let i = match kinds[b] {
                        BasisKind::Cartan(i) => i,
                        _ => unreachable!(),
                    };
                    let mut ai = vec![0; rank];
                    ai[i] = 1;
                    SparseVec::single(a, -rs.inner_product(&ai, ra))
                }
                (None, None) => SparseVec::new(),
            };
            brackets[a * dim + b] = v;
        }
    }
    let mut form = vec![SparseVec::new(); dim];
    for i in 0..p {
        form[i] = SparseVec::single(p + rank + i, q(1));
        form[p + rank + i] = SparseVec::single(i, q(1));
    }
    for i in 0..rank {
        form[p + i] = SparseVec::from_pairs((0..rank).map(|j| (p + j, rs.inner[i][j].clone())));
    }
    Ok(LieAlgebraData {
        roots: rs,
        labels,
        kinds,
        brackets,
        form,
    })
}

/// Fixed-point construction `g = parent^μ`. `orbits[j]` lists the parent
/// nodes restricting to the folded simple root `j`.
fn fold(
    t: CartanType,
    rank: usize,
    pt: CartanType,
    prank: usize,
    orbits: Vec<Vec<usize>>,
) -> Result<LieAlgebraData> {
    let parent = build_simply_laced(pt, prank)?;
    let mut perm = vec![0; prank];
    for o in &orbits {
        for (k, &i) in o.iter().enumerate() {
            perm[i] = o[(k + 1) % o.len()];
        }
    }
    let mu = automorphism::signed_action(&parent, &perm)?;
    let rs = RootSystem::new(t, rank)?;
    let (labels, kinds) = basis_layout(&rs);
    let pp = parent.roots.positive.len();
    let restrict = |b: &[i64]| -> Vec<i64> {
        orbits
            .iter()
            .map(|o| o.iter().map(|&i| b[i]).sum())
            .collect()
    };
    // Parent vector of each folded basis element and its representative index.
    let orbit_sum = |start: usize| -> Result<SparseVec> {
        let mut v = SparseVec::new();
        let (mut idx, mut sign) = (start, q(1));
        loop {
            v.add_term(idx, sign.clone());
            let (next, s) = &mu[idx];
            sign *= s;
            idx = *next;
            if idx == start {
                if !sign.is_one() {
                    return Err(Error::Automorphism("orbit sum vanishes".into()));
                }
                return Ok(v);
            }
        }
    };
    let mut vecs = Vec::new();
    let mut reps = Vec::new();
    for k in &kinds {
        match *k {
            BasisKind::Pos(i) | BasisKind::Neg(i) => {
                let target = &rs.positive[i];
                let j = (0..pp)
                    .find(|&j| restrict(&parent.roots.positive[j]) == *target)
                    .ok_or_else(|| Error::Automorphism("no parent root for folded root".into()))?;
                let start = if matches!(k, BasisKind::Pos(_)) { j } else { pp + prank + j };
                vecs.push(orbit_sum(start)?);
                reps.push(start);
            }
            BasisKind::Cartan(j) => {
                vecs.push(SparseVec::from_pairs(orbits[j].iter().map(|&i| (pp + i, q(1)))));
                reps.push(pp + orbits[j][0]);
            }
        }
    }
    let dim = vecs.len();
    let coords = |v: &SparseVec| -> Result<SparseVec> {
        let c = SparseVec::from_pairs(reps.iter().enumerate().map(|(a, &r)| (a, v.get(r))));
        let mut back = SparseVec::new();
        for (a, x) in c.iter() {
            back.add_scaled(&vecs[a], x);
        }
        if back != *v {
            return Err(Error::Automorphism("bracket leaves the fixed subalgebra".into()));
        }
        Ok(c)
    };
    let mut brackets = vec![SparseVec::new(); dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            brackets[a * dim + b] = coords(&parent.bracket(&vecs[a], &vecs[b]))?;
        }
    }
    let mut form = vec![SparseVec::new(); dim];
    for a in 0..dim {
        for b in 0..dim {
            let v = parent.invariant_form(&vecs[a], &vecs[b]);
            if !v.is_zero() {
                form[a].add_term(b, v);
            }
        }
    }
    Ok(LieAlgebraData {
        roots: rs,
        labels,
        kinds,
        brackets,
        form,
    })
}

impl LieAlgebraData {
    pub fn cartan_type(&self) -> CartanType {
        self.roots.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn type_label(&self) -> String {
        format!("{}{}", self.cartan_type().letter(), self.rank())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.positive.len()
    }

    pub fn e_index(&self, root: usize) -> usize {
        root
    }

    pub fn h_index(&self, i: usize) -> usize {
        self.num_positive() + i
    }

    pub fn f_index(&self, root: usize) -> usize {
        self.num_positive() + self.rank() + root
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a * self.dim() + b]
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let br = self.bracket_basis(a, b);
                if !br.is_empty() {
                    out.add_scaled(br, &(ca * cb));
                }
            }
        }
        out
    }

    pub fn form_basis(&self, a: usize, b: usize) -> Q {
        self.form[a].get(b)
    }

    pub fn form_row(&self, a: usize) -> &SparseVec {
        &self.form[a]
    }

    pub fn invariant_form(&self, x: &SparseVec, y: &SparseVec) -> Q {
        let mut acc = Q::zero();
        for (a, ca) in x.iter() {
            for (b, f) in self.form[a].iter() {
                let cb = y.get(b);
                if !cb.is_zero() {
                    acc += ca * f * cb;
                }
            }
        }
        acc
    }

    /// Matrix of `ad x`, columns indexed by the basis: `M[i][j] = [x, b_j]_i`.
    pub fn ad_matrix(&self, x: &SparseVec) -> Matrix {
        let n = self.dim();
        let mut m = vec![vec![Q::zero(); n]; n];
        for j in 0..n {
            let col = self.bracket(x, &SparseVec::unit(j));
            for (i, c) in col.iter() {
                m[i][j] = c.clone();
            }
        }
        m
    }

    pub fn ad(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.bracket(x, y)
    }

    pub fn highest_root_index(&self) -> usize {
        self.num_positive() - 1
    }

    /// `e_θ`
    pub fn highest_root_vector(&self) -> SparseVec {
        SparseVec::unit(self.highest_root_index())
    }

    pub fn lowest_root_vector(&self) -> SparseVec {
        SparseVec::unit(self.f_index(self.highest_root_index()))
    }

    /// `h_θ = [e_θ, f_θ]`
    pub fn highest_coroot(&self) -> SparseVec {
        self.bracket(&self.highest_root_vector(), &self.lowest_root_vector())
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parses a basis symbol: canonical labels, `e_theta`/`f_theta`/`h_theta`,
    /// and `e1`, `h2`, `f3` for simple generators.
    pub fn parse_symbol(&self, s: &str) -> Result<SparseVec> {
        let s = s.trim();
        if let Some(i) = self.label_index(s) {
            return Ok(SparseVec::unit(i));
        }
        match s {
            "e_theta" | "e_θ" => return Ok(self.highest_root_vector()),
            "f_theta" | "f_θ" => return Ok(self.lowest_root_vector()),
            "h_theta" | "h_θ" => return Ok(self.highest_coroot()),
            _ => {}
        }
        let bad = || Error::Parse(format!("unknown basis symbol {s:?} for {}", self.type_label()));
        let mut it = s.chars();
        let head = it.next().ok_or_else(bad)?;
        let i: usize = it.as_str().parse().map_err(|_| bad())?;
        if i == 0 || i > self.rank() {
            return Err(bad());
        }
        let idx = match head {
            'e' => self.e_index(i - 1),
            'f' => self.f_index(i - 1),
            'h' => self.h_index(i - 1),
            _ => return Err(bad()),
        };
        Ok(SparseVec::unit(idx))
    }

    /// Parses `2*e_10 - 1/2*h_1 + f_theta`; `0` is the zero element.
    pub fn parse_element(&self, s: &str) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (coef, body) in crate::text::split_terms(s)? {
            match body {
                None => {
                    if !coef.is_zero() {
                        return Err(Error::Parse(format!("bare scalar in Lie element {s:?}")));
                    }
                }
                Some(b) => out.add_scaled(&self.parse_symbol(&b)?, &coef),
            }
        }
        Ok(out)
    }

    pub fn element_string(&self, x: &SparseVec) -> String {
        crate::text::format_terms(x.iter().map(|(i, c)| (c.clone(), self.labels[i].clone())))
    }

    /// Triples `(i, j, k, num, den)` with `[b_i, b_j] = Σ (num/den) b_k`, `i < j`.
    pub fn structure_constant_triples(&self) -> Vec<(usize, usize, usize, String, String)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (k, c) in self.bracket_basis(i, j).iter() {
                    out.push((i, j, k, c.numer().to_string(), c.denom().to_string()));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let form: Vec<serde_json::Value> = (0..self.dim())
            .flat_map(|i| {
                self.form[i]
                    .iter()
                    .filter(move |(j, _)| *j >= i)
                    .map(move |(j, c)| serde_json::json!([i, j, to_fraction_string(c)]))
            })
            .collect();
        let mut m = BTreeMap::new();
        m.insert("type_label", serde_json::json!(self.cartan_type().letter().to_string()));
        m.insert("rank", serde_json::json!(self.rank()));
        m.insert("dim", serde_json::json!(self.dim()));
        m.insert("basis", serde_json::json!(self.labels));
        m.insert("positive_roots", serde_json::json!(self.roots.positive));
        m.insert("cartan_matrix", serde_json::json!(self.roots.cartan));
        m.insert("dual_coxeter", serde_json::json!(self.roots.dual_coxeter()));
        m.insert(
            "structure_constants",
            serde_json::json!(self
                .structure_constant_triples()
                .into_iter()
                .map(|(i, j, k, n, d)| serde_json::json!([i, j, k, n, d]))
                .collect::<Vec<_>>()),
        );
        m.insert("form", serde_json::json!(form));
        serde_json::to_value(m).expect("serializable")
    }

    /// Rebuilds from `type_label` and `rank` and checks the stored constants.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let label = v["type_label"]
            .as_str()
            .ok_or_else(|| Error::Parse("missing type_label".into()))?;
        let rank = v["rank"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing rank".into()))? as usize;
        let g = build_lie_algebra(CartanType::parse(label)?, rank)?;
        if g.to_json() != *v {
            return Err(Error::Parse("stored Lie algebra data does not match".into()));
        }
        Ok(g)
    }

    /// `⟨x, y⟩` restricted to the Cartan part, used for weights.
    pub fn cartan_coords(&self, x: &SparseVec) -> Vec<Q> {
        (0..self.rank()).map(|i| x.get(self.h_index(i))).collect()
    }

    /// The Chevalley involution `ω`: `e_β ↦ -f_β`, `h ↦ -h`.
    pub fn chevalley_involution(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.iter() {
            let j = match self.kinds[i] {
                BasisKind::Pos(r) => self.f_index(r),
                BasisKind::Neg(r) => self.e_index(r),
                BasisKind::Cartan(_) => i,
            };
            out.add_term(j, -c.clone());
        }
        out
    }

    /// A scalar multiple of the parsed scalar string, for CLI convenience.
    pub fn scalar(s: &str) -> Result<Q> {
        parse_q(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_jacobi(g: &LieAlgebraData) {
        let n = g.dim();
        for a in 0..n {
            for b in 0..n {
                let ab = g.bracket_basis(a, b);
                let ba = g.bracket_basis(b, a);
                assert_eq!(*ab, ba.neg(), "antisymmetry {a} {b}");
            }
        }
        for a in 0..n {
            let ea = SparseVec::unit(a);
            for b in a + 1..n {
                let eb = SparseVec::unit(b);
                let ab = g.bracket_basis(a, b).clone();
                for c in b + 1..n {
                    let ec = SparseVec::unit(c);
                    let mut s = g.bracket(&ab, &ec);
                    s.add(&g.bracket(&g.bracket_basis(b, c).clone(), &ea));
                    s.add(&g.bracket(&g.bracket_basis(c, a).clone(), &eb));
                    assert!(s.is_zero(), "jacobi {a} {b} {c} in {}", g.type_label());
                }
            }
        }
    }

    fn check_form(g: &LieAlgebraData) {
        let n = g.dim();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(g.form_basis(a, b), g.form_basis(b, a));
                for c in 0..n {
                    let x = g.invariant_form(g.bracket_basis(a, b), &SparseVec::unit(c));
                    let y = g.invariant_form(&SparseVec::unit(b), g.bracket_basis(a, c));
                    assert!((x + y).is_zero());
                }
            }
        }
    }

    fn check_chevalley(g: &LieAlgebraData) {
        for (r, beta) in g.roots.positive.iter().enumerate() {
            let e = SparseVec::unit(g.e_index(r));
            let f = SparseVec::unit(g.f_index(r));
            let h = g.bracket(&e, &f);
            let co = g.roots.coroot_coords(beta);
            let expect = SparseVec::from_pairs((0..g.rank()).map(|i| (g.h_index(i), co[i].clone())));
            assert_eq!(h, expect, "[e,f] = coroot for {beta:?}");
            assert_eq!(g.bracket(&h, &e), e.scaled(&q(2)));
        }
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                for (_, c) in g.bracket_basis(i, j).iter() {
                    assert!(crate::rational::is_integer(c));
                }
            }
        }
        let th = g.highest_root_vector();
        assert_eq!(g.invariant_form(&th, &g.lowest_root_vector()), q(1));
        let hth = g.highest_coroot();
        assert_eq!(g.invariant_form(&hth, &hth), q(2));
    }

    #[test]
    fn sl2_relations() {
        let g = build_lie_algebra(CartanType::A, 1).unwrap();
        assert_eq!(g.labels, vec!["e", "h", "f"]);
        let (e, h, f) = (SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(2));
        assert_eq!(g.bracket(&e, &f), h);
        assert_eq!(g.bracket(&h, &e), e.scaled(&q(2)));
        assert_eq!(g.bracket(&h, &f), f.scaled(&q(-2)));
        assert_eq!(g.invariant_form(&e, &f), q(1));
        assert_eq!(g.invariant_form(&h, &h), q(2));
        assert_eq!(g.invariant_form(&e, &e), q(0));
    }

    #[test]
    fn dimensions() {
        let d = |t, n| build_lie_algebra(t, n).unwrap().dim();
        assert_eq!(d(CartanType::A, 2), 8);
        assert_eq!(d(CartanType::D, 4), 28);
        assert_eq!(d(CartanType::B, 2), 10);
        assert_eq!(d(CartanType::G, 2), 14);
        assert_eq!(d(CartanType::F, 4), 52);
        assert_eq!(d(CartanType::E, 6), 78);
    }

    #[test]
    fn jacobi_and_invariance_small_rank() {
        for (t, n) in [
            (CartanType::A, 1),
            (CartanType::A, 2),
            (CartanType::A, 3),
            (CartanType::B, 2),
            (CartanType::B, 3),
            (CartanType::C, 3),
            (CartanType::D, 4),
            (CartanType::G, 2),
        ] {
            let g = build_lie_algebra(t, n).unwrap();
            check_jacobi(&g);
            check_form(&g);
            check_chevalley(&g);
        }
    }

    #[test]
    fn f4_chevalley_property() {
        let g = build_lie_algebra(CartanType::F, 4).unwrap();
        check_chevalley(&g);
        check_form(&g);
    }

    #[test]
    fn rejects_bad_type() {
        assert!(build_lie_algebra(CartanType::E, 4).is_err());
        assert!(parse_type_label("Q2").is_err());
        assert_eq!(parse_type_label("a3").unwrap(), (CartanType::A, 3));
    }

    #[test]
    fn parse_and_print_elements() {
        let g = build_lie_algebra(CartanType::A, 2).unwrap();
        let x = g.parse_element("2*e_10 - 1/2*h_1 + f_theta").unwrap();
        assert_eq!(g.element_string(&x), "2*e_10 - 1/2*h_1 + f_11");
        assert_eq!(g.parse_element("e2").unwrap(), SparseVec::unit(1));
        assert!(g.parse_element("e_99").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = build_lie_algebra(CartanType::B, 2).unwrap();
        let j = g.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        let h = LieAlgebraData::from_json(&back).unwrap();
        assert_eq!(h.dim(), 10);
    }
}
