//! The `σ`-twisted Zhu algebra of the affine VOA `V = V_g(0, ℓ)`.
//!
//! For `u ∈ V^[α]` homogeneous of weight `wt u`,
//!
//! ```text
//! u ∘ v = Res_x x^{-1-δ_α} Y((1+x)^{wt u + N - 1 + δ_α + α} u, x) v
//! u * v = Res_x x^{-1} Y((1+x)^{wt u + N} u, x) v      (u ∈ V^[0], else 0)
//! ```
//!
//! with `N = e(0)`. Expanding `(1+x)^{w+N} = Σ_{p,q} C(w,p) C(N,q) x^{p+q}`
//! turns every residue into a finite sum of vertex-operator modes.

use std::cell::OnceCell;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hwmodule::FiniteModule;
use crate::liealg::adapted::AdaptedBasis;
use crate::linalg::{SparseVec, Subspace};
use crate::rational::{binom_q, grade, grade_to_q, Grade, Q};
use crate::report::IdentityReport;
use crate::uea::PBWElement;
use crate::voa::{InducedModule, VertexOps};

/// A vector of `V` together with its canonical form modulo the truncated
/// `O_σ(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZhuClass {
    pub representative: SparseVec,
    pub reduced: SparseVec,
}

pub struct ZhuAlgebra {
    pub ops: VertexOps,
    pub depth: i64,
    o_span: OnceCell<Subspace>,
}

impl ZhuAlgebra {
    /// Works in `V_{≤ depth}`; `depth = None` picks `max(ℓ + 2, 4)`.
    pub fn new(ab: Arc<AdaptedBasis>, level: Q, depth: Option<i64>) -> Result<Self> {
        let depth = depth.unwrap_or_else(|| default_depth(&level));
        if depth < 0 {
            return Err(Error::Truncation {
                weight: "0".into(),
                cap: depth.to_string(),
            });
        }
        let top = Arc::new(FiniteModule::trivial(&ab));
        let v = Arc::new(InducedModule::new(ab, false, level, top, grade(depth, 1))?);
        Ok(Self {
            ops: VertexOps::on_self(v)?,
            depth,
            o_span: OnceCell::new(),
        })
    }

    pub fn v(&self) -> &Arc<InducedModule> {
        &self.ops.v
    }

    pub fn ab(&self) -> &Arc<AdaptedBasis> {
        &self.ops.v.ab
    }

    pub fn level(&self) -> &Q {
        &self.ops.v.level
    }

    /// `N u = e(0) u`.
    pub fn n_apply(&self, u: &SparseVec) -> Result<SparseVec> {
        self.v().act_element(&self.ab().e, Grade::zero(), u)
    }

    /// `C(N, j) u`, listed for `j = 0..=jmax`.
    pub fn binom_n_series(&self, u: &SparseVec, jmax: usize) -> Result<Vec<SparseVec>> {
        let mut out = vec![u.clone()];
        for j in 1..=jmax {
            let prev = &out[j - 1];
            let mut x = self.n_apply(prev)?;
            x.add_scaled(prev, &-Q::from_integer((j as i64 - 1).into()));
            out.push(x.scaled(&(Q::one() / Q::from_integer((j as i64).into()))));
        }
        Ok(out)
    }

    /// `(ad e)`-block size of a vector of `V`.
    pub fn block_size(&self, u: &SparseVec) -> Result<usize> {
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut k = 1;
        let mut x = self.n_apply(u)?;
        while !x.is_zero() {
            k += 1;
            x = self.n_apply(&x)?;
        }
        Ok(k)
    }

    /// Weight and `μ`-class `j` (so `α = j/T`) of a homogeneous vector.
    pub fn homogeneity(&self, u: &SparseVec) -> Result<(i64, usize)> {
        let v = self.v();
        let mut it = u.indices();
        let Some(first) = it.next() else {
            return Err(Error::ZeroVector);
        };
        let key = (v.depth_of(first), v.class_of(first));
        for i in it {
            if (v.depth_of(i), v.class_of(i)) != key {
                return Err(Error::NotHomogeneous(v.vector_string(u)));
            }
        }
        Ok((key.0.to_integer(), key.1))
    }

    fn alpha(&self, class: usize) -> Grade {
        Grade::new(class as i64, self.ab().order as i64)
    }

    fn max_weight(&self, v: &SparseVec) -> Option<i64> {
        v.indices().map(|i| self.v().depth_of(i).to_integer()).max()
    }

    /// `Res_x x^{-1-d} Y((1+x)^{w + N} u, x) v` for homogeneous `u` of weight `wu`.
    pub fn residue(&self, u: &SparseVec, wu: i64, w: &Q, d: i64, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        let Some(wv) = self.max_weight(v) else {
            return Ok(out);
        };
        if u.is_zero() {
            return Ok(out);
        }
        let top = wu + wv + d;
        if top > self.depth {
            return Err(Error::Truncation {
                weight: top.to_string(),
                cap: self.depth.to_string(),
            });
        }
        // b_n v = 0 once n ≥ wu + wv.
        let nmax = wu + wv - 1;
        let qmax = (nmax + 1 + d).max(0) as usize;
        let series = self.binom_n_series(u, qmax)?;
        for (qq, b) in series.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut p = 0i64;
            loop {
                let n = p + qq as i64 - 1 - d;
                if n > nmax {
                    break;
                }
                let c = binom_q(w, p as usize);
                if !c.is_zero() {
                    let x = self.ops.mode(b, grade(n, 1), v)?;
                    out.add_scaled(&x, &c);
                }
                p += 1;
            }
        }
        Ok(out)
    }

    pub fn circ(&self, u: &SparseVec, v: &SparseVec) -> Result<SparseVec> {
        if u.is_zero() {
            return Ok(SparseVec::new());
        }
        let (wu, j) = self.homogeneity(u)?;
        let alpha = self.alpha(j);
        let delta = if j == 0 { 1 } else { 0 };
        let w = Q::from_integer((wu - 1 + delta).into()) + grade_to_q(alpha);
        self.residue(u, wu, &w, delta, v)
    }

    pub fn star(&self, u: &SparseVec, v: &SparseVec) -> Result<SparseVec> {
        if u.is_zero() {
            return Ok(SparseVec::new());
        }
        let (wu, j) = self.homogeneity(u)?;
        if j != 0 {
            return Ok(SparseVec::new());
        }
        self.residue(u, wu, &Q::from_integer(wu.into()), 0, v)
    }

    /// `Res_x Y((1+x)^{wt u + N - 1} u, x) v`.
    pub fn lie_bracket_term(&self, u: &SparseVec, v: &SparseVec) -> Result<SparseVec> {
        if u.is_zero() {
            return Ok(SparseVec::new());
        }
        let (wu, _) = self.homogeneity(u)?;
        self.residue(u, wu, &Q::from_integer((wu - 1).into()), -1, v)
    }

    /// Linear extension of `∘` and `*` to inhomogeneous `u`.
    pub fn circ_linear(&self, u: &SparseVec, v: &SparseVec) -> Result<SparseVec> {
        self.split_apply(u, |x| self.circ(x, v))
    }

    pub fn star_linear(&self, u: &SparseVec, v: &SparseVec) -> Result<SparseVec> {
        self.split_apply(u, |x| self.star(x, v))
    }

    fn split_apply<F: Fn(&SparseVec) -> Result<SparseVec>>(&self, u: &SparseVec, f: F) -> Result<SparseVec> {
        let mut parts: std::collections::BTreeMap<(Grade, usize), SparseVec> = Default::default();
        for (i, c) in u.iter() {
            let v = self.v();
            parts.entry((v.depth_of(i), v.class_of(i))).or_default().add_term(i, c.clone());
        }
        let mut out = SparseVec::new();
        for p in parts.values() {
            out.add(&f(p)?);
        }
        Ok(out)
    }

    /// Row-reduced span of `u ∘ v` over basis vectors with result weight
    /// within the working depth.
    pub fn o_span(&self) -> Result<&Subspace> {
        if let Some(s) = self.o_span.get() {
            return Ok(s);
        }
        let v = self.v();
        let mut sub = Subspace::new();
        for i in 0..v.dim() {
            let wi = v.depth_of(i).to_integer();
            let delta = if v.class_of(i) == 0 { 1 } else { 0 };
            for j in 0..v.dim() {
                let wj = v.depth_of(j).to_integer();
                if wi + wj + delta > self.depth {
                    break;
                }
                let x = self.circ(&SparseVec::unit(i), &SparseVec::unit(j))?;
                sub.insert(&x);
            }
        }
        let _ = self.o_span.set(sub);
        Ok(self.o_span.get().expect("just set"))
    }

    pub fn o_span_dim(&self) -> Result<usize> {
        Ok(self.o_span()?.dim())
    }

    /// Dimensions of `V_{≤n} / (O ∩ V_{≤n})` for `n = 0..=depth`.
    pub fn quotient_dims(&self) -> Result<Vec<usize>> {
        let span = self.o_span()?;
        let v = self.v();
        let mut out = Vec::new();
        let mut total = 0;
        let mut piv = 0;
        for n in 0..=self.depth {
            let piece = v.graded_piece(grade(n, 1));
            total += piece.len();
            piv += piece.iter().filter(|&&i| span.is_pivot(i)).count();
            out.push(total - piv);
        }
        Ok(out)
    }

    pub fn reduce(&self, x: &SparseVec) -> Result<ZhuClass> {
        if let Some(w) = self.max_weight(x) {
            if w > self.depth {
                return Err(Error::Truncation {
                    weight: w.to_string(),
                    cap: self.depth.to_string(),
                });
            }
        }
        Ok(ZhuClass {
            representative: x.clone(),
            reduced: self.o_span()?.reduce(x),
        })
    }

    /// `[x] * [y]` computed on reduced representatives.
    pub fn product(&self, x: &ZhuClass, y: &ZhuClass) -> Result<ZhuClass> {
        let p = self.star_linear(&x.reduced, &y.reduced)?;
        self.reduce(&p)
    }

    pub fn vacuum_class(&self) -> Result<ZhuClass> {
        self.reduce(&self.v().vacuum())
    }

    /// `g(-1)1 + ℓ⟨e, g⟩1` for `g ∈ g^[0]` in adapted coordinates.
    pub fn i_vector(&self, g: &SparseVec) -> Result<SparseVec> {
        let ab = self.ab();
        if g.indices().any(|a| ab.class(a) != 0) {
            return Err(Error::NotFixed);
        }
        let v = self.v();
        let mut out = v.act_element(g, grade(-1, 1), &v.vacuum())?;
        let c = ab.form(&ab.e, g) * self.level();
        out.add_term(0, c);
        Ok(out)
    }

    /// `I(g_1 ⋯ g_n) = i(g_1) * ⋯ * i(g_n)` for `p ∈ U(g^[0])`.
    pub fn map_i(&self, p: &PBWElement) -> Result<ZhuClass> {
        let ab = self.ab();
        if !(Arc::ptr_eq(p.algebra(), &ab.fixed_structure) || **p.algebra() == *ab.fixed_structure) {
            return Err(Error::MixedAlgebras);
        }
        let mut total = SparseVec::new();
        for (mono, c) in p.terms() {
            let mut cur = self.vacuum_class()?;
            for &k in mono.iter().rev() {
                let iv = self.i_vector(&SparseVec::unit(ab.fixed[k]))?;
                let ic = self.reduce(&iv)?;
                cur = self.product(&ic, &cur)?;
            }
            total.add_scaled(&cur.reduced, c);
        }
        self.reduce(&total)
    }

    pub fn power(&self, c: &ZhuClass, k: usize) -> Result<ZhuClass> {
        let mut cur = self.vacuum_class()?;
        for _ in 0..k {
            cur = self.product(c, &cur)?;
        }
        Ok(cur)
    }

    /// Compares `u*v - v*u` with `Res_x Y((1+x)^{wt u + N - 1} u, x) v` modulo `O`.
    pub fn verify_lie_relation(&self, u: &SparseVec, v: &SparseVec) -> Result<IdentityReport> {
        let lhs = self.star(u, v)?.sub(&self.star_linear(v, u)?);
        let rhs = self.lie_bracket_term(u, v)?;
        let (l, r) = (self.reduce(&lhs)?, self.reduce(&rhs)?);
        let vm = self.v();
        let mut rep = IdentityReport::new(
            "lie-relation",
            &format!("u = {}, v = {}", vm.vector_string(u), vm.vector_string(v)),
        );
        rep.record(vm.vector_string(&l.reduced), vm.vector_string(&r.reduced), l.reduced == r.reduced);
        Ok(rep)
    }

    /// `u * (v ∘ w)` and `(v ∘ w) * u` both lie in `O` (linear in all arguments).
    pub fn verify_ideal(&self, u: &SparseVec, v: &SparseVec, w: &SparseVec) -> Result<IdentityReport> {
        let vm = self.v();
        let o = self.split_apply(v, |x| self.circ(x, w))?;
        let mut rep = IdentityReport::new(
            "ideal",
            &format!("u = {}, v = {}, w = {}", vm.vector_string(u), vm.vector_string(v), vm.vector_string(w)),
        );
        for x in [self.star_linear(u, &o)?, self.star_linear(&o, u)?] {
            let r = self.reduce(&x)?;
            rep.record(vm.vector_string(&r.reduced), "0".into(), r.reduced.is_zero());
        }
        Ok(rep)
    }

    /// `(a * b) * c ≡ a * (b * c)` modulo `O`.
    pub fn verify_associativity(&self, a: &SparseVec, b: &SparseVec, c: &SparseVec) -> Result<IdentityReport> {
        let vm = self.v();
        let lhs = self.star_linear(&self.star_linear(a, b)?, c)?;
        let rhs = self.star_linear(a, &self.star_linear(b, c)?)?;
        let (l, r) = (self.reduce(&lhs)?, self.reduce(&rhs)?);
        let mut rep = IdentityReport::new(
            "associativity",
            &format!("a = {}, b = {}, c = {}", vm.vector_string(a), vm.vector_string(b), vm.vector_string(c)),
        );
        rep.record(vm.vector_string(&l.reduced), vm.vector_string(&r.reduced), l.reduced == r.reduced);
        Ok(rep)
    }

    /// For `d = 0..=max_degree`: `(d, dim span{I(m) : deg m ≤ d}, dim U(g^[0])_{≤d})`.
    pub fn map_i_span_dims(&self, max_degree: usize) -> Result<Vec<(usize, usize, usize)>> {
        let alg = self.ab().fixed_structure.clone();
        let n = alg.dim();
        let mut span = Subspace::new();
        let mut expected = 0;
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for m in crate::uea::monomials_of_degree(n, d) {
                let mut p = PBWElement::one(&alg);
                for &k in &m {
                    p = p.multiply(&PBWElement::generator(&alg, k))?;
                }
                span.insert(&self.map_i(&p)?.reduced);
                expected += 1;
            }
            out.push((d, span.dim(), expected));
        }
        Ok(out)
    }

    /// `e(-1)^k 1` for an adapted index `e`.
    pub fn current_power(&self, a: usize, k: usize) -> Result<SparseVec> {
        let v = self.v();
        let mut x = v.vacuum();
        for _ in 0..k {
            x = v.act(a, grade(-1, 1), &x)?;
        }
        Ok(x)
    }

    pub fn class_string(&self, c: &ZhuClass) -> String {
        format!("[{}]", self.v().vector_string(&c.reduced))
    }
}

pub fn default_depth(level: &Q) -> i64 {
    let l = level.floor().to_integer();
    let l: i64 = l.try_into().unwrap_or(0);
    (l + 2).max(4)
}

/// Right side of the power formula:
/// `[e^k] + Σ_{i<k} C(k,i) C(ℓ-i,k-i) (k-i)! [e^i]`, as coefficients of `e^i`.
pub fn power_formula(level: &Q, k: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); k + 1];
    out[k] = Q::one();
    for (i, slot) in out.iter_mut().enumerate().take(k) {
        let c = binom_q(&Q::from_integer((k as i64).into()), i)
            * binom_q(&(level - Q::from_integer((i as i64).into())), k - i)
            * crate::rational::factorial((k - i) as u64);
        *slot = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::AlgebraContext;
    use crate::rational::q;

    fn zhu(alg: &str, mu: &str, e: Option<&str>, l: i64, depth: i64) -> (AlgebraContext, ZhuAlgebra) {
        let cx = AlgebraContext::new(alg, mu, e).unwrap();
        let z = ZhuAlgebra::new(cx.ab.clone(), q(l), Some(depth)).unwrap();
        (cx, z)
    }

    #[test]
    fn untwisted_products() {
        let (cx, z) = zhu("A1", "id", None, 3, 3);
        let v = z.v().clone();
        let (e, h, f) = (cx.adapted_index("e").unwrap(), cx.adapted_index("h").unwrap(), cx.adapted_index("f").unwrap());
        let e1 = v.act(e, grade(-1, 1), &v.vacuum()).unwrap();
        let f1 = v.act(f, grade(-1, 1), &v.vacuum()).unwrap();
        let expect = v
            .act(e, grade(-1, 1), &f1)
            .unwrap()
            .plus(&v.act(h, grade(-1, 1), &v.vacuum()).unwrap());
        assert_eq!(z.star(&e1, &f1).unwrap(), expect);
        assert_eq!(z.star(&v.vacuum(), &f1).unwrap(), f1);
        // g(-1)1 ∘ v = g(-2)v + g(-1)v
        let circ = z.circ(&e1, &f1).unwrap();
        let expect = v.act(e, grade(-2, 1), &f1).unwrap().plus(&v.act(e, grade(-1, 1), &f1).unwrap());
        assert_eq!(circ, expect);
        assert_eq!(z.quotient_dims().unwrap(), vec![1, 4, 10, 20]);
        let vac = z.vacuum_class().unwrap();
        assert_eq!(vac.reduced, v.vacuum());
        // g(-2)1 ≡ -g(-1)1
        let e2 = v.act(e, grade(-2, 1), &v.vacuum()).unwrap();
        assert_eq!(z.reduce(&e2).unwrap().reduced, z.reduce(&e1.neg()).unwrap().reduced);
    }

    #[test]
    fn star_recurrence_and_power() {
        for l in 1..=3i64 {
            let (cx, z) = zhu("A1", "id", Some("f"), l, l + 2);
            let e = cx.adapted_index("e").unwrap();
            let lq = q(l);
            let e1 = z.current_power(e, 1).unwrap();
            for k in 0..=(l as usize) {
                let lhs = z.star(&e1, &z.current_power(e, k).unwrap()).unwrap();
                let kq = q(k as i64);
                let mut rhs = z.current_power(e, k + 1).unwrap();
                rhs.add_scaled(&z.current_power(e, k).unwrap(), &(-q(2) * &kq));
                if k > 0 {
                    rhs.add_scaled(
                        &z.current_power(e, k - 1).unwrap(),
                        &-(kq.clone() * (lq.clone() - kq.clone() + q(1))),
                    );
                }
                assert_eq!(lhs, rhs, "l = {l}, k = {k}");
            }
            let ie = z.reduce(&z.i_vector(&SparseVec::unit(e)).unwrap()).unwrap();
            for k in 0..=(l as usize + 1) {
                let p = z.power(&ie, k).unwrap();
                let mut rhs = SparseVec::new();
                for (i, c) in power_formula(&lq, k).iter().enumerate() {
                    rhs.add_scaled(&z.current_power(e, i).unwrap(), c);
                }
                assert_eq!(p.reduced, z.reduce(&rhs).unwrap().reduced, "l = {l}, k = {k}");
            }
        }
    }

    #[test]
    fn lie_relation_currents() {
        let (cx, z) = zhu("A1", "id", Some("f"), 2, 4);
        let v = z.v().clone();
        for a in 0..3 {
            for b in 0..3 {
                let ua = v.act(a, grade(-1, 1), &v.vacuum()).unwrap();
                let ub = v.act(b, grade(-1, 1), &v.vacuum()).unwrap();
                let rep = z.verify_lie_relation(&ua, &ub).unwrap();
                assert!(rep.equal, "{rep:?}");
                let lhs = z.star(&ua, &ub).unwrap().sub(&z.star(&ub, &ua).unwrap());
                let br = cx.ab.bracket_basis(a, b).clone();
                let mut rhs = v.act_element(&br, grade(-1, 1), &v.vacuum()).unwrap();
                let c = cx.ab.form(&cx.ab.ad_e(&SparseVec::unit(a)), &SparseVec::unit(b)) * q(2);
                rhs.add_term(0, c);
                assert_eq!(z.reduce(&lhs).unwrap().reduced, z.reduce(&rhs).unwrap().reduced);
            }
        }
    }

    #[test]
    fn twisted_classes_vanish() {
        let (_, z) = zhu("A2", "flip", None, 1, 3);
        let v = z.v().clone();
        for i in 0..v.dim() {
            if v.class_of(i) != 0 {
                assert!(z.reduce(&SparseVec::unit(i)).unwrap().reduced.is_zero());
            }
        }
        // A_σ ≅ U(sl_2): filtered dims 1, 4, 10, 20
        assert_eq!(z.quotient_dims().unwrap(), vec![1, 4, 10, 20]);
    }

    #[test]
    fn ideal_associativity_and_map_i() {
        let (cx, z) = zhu("A1", "id", Some("f"), 1, 4);
        let v = z.v().clone();
        let e1 = z.current_power(cx.adapted_index("e").unwrap(), 1).unwrap();
        let h1 = z.current_power(cx.adapted_index("h").unwrap(), 1).unwrap();
        let f1 = z.current_power(cx.adapted_index("f").unwrap(), 1).unwrap();
        assert!(z.verify_ideal(&e1, &f1, &v.vacuum()).unwrap().equal);
        assert!(z.verify_ideal(&h1, &e1, &f1).unwrap().equal);
        assert!(z.verify_associativity(&e1, &f1, &h1).unwrap().equal);
        assert!(z.verify_associativity(&f1, &e1, &e1).unwrap().equal);
        assert_eq!(z.map_i_span_dims(2).unwrap(), vec![(0, 1, 1), (1, 4, 4), (2, 10, 10)]);
    }
}
