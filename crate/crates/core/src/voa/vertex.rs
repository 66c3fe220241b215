//! Vertex operators of the affine VOA on itself and on twisted modules.
//!
//! For `u = a(k) v` with `k < 0` and `a` of mode offset `m`,
//!
//! ```text
//! u_(r) w = Σ_i (-1)^i C(k,i) [ a_(m+k-i) v_(r-m+i) w - (-1)^k v_(r-m+k-i) a_(m+i) w ]
//!         - Σ_{(i,j) ≠ (0,0)} C(m,i) ((C(N,j) a)_(k+i+j) v)_(r-i-j) w
//! ```
//!
//! where on a `σ`-twisted module `a_(n) = a(n) - δ_{n,0} ⟨e, a⟩ ℓ` and
//! `N = ad e`, and on the VOA itself `m = 0`, `N = 0`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::rational::{binom_grade, binom_int, grade_string, Grade, Q};
use crate::voa::module::InducedModule;

pub struct VertexOps {
    pub v: Arc<InducedModule>,
    pub w: Arc<InducedModule>,
    pub sigma: bool,
    memo: RefCell<HashMap<(usize, Grade, usize), SparseVec>>,
    binom_n: RefCell<HashMap<(usize, usize), SparseVec>>,
}

impl VertexOps {
    /// `v` must be the vacuum module. With `sigma`, `w` is read as a
    /// `σ`-twisted module for `σ = μ exp(2πi ad e)`.
    pub fn new(v: Arc<InducedModule>, w: Arc<InducedModule>, sigma: bool) -> Result<Self> {
        if v.twisted || v.top.dim != 1 {
            return Err(Error::Unsupported("vertex operators need the vacuum module as source".into()));
        }
        if !Self::same_algebra(&v, &w) {
            return Err(Error::MixedAlgebras);
        }
        if sigma && !w.twisted && w.ab.order > 1 {
            return Err(Error::Unsupported("target must be built with twisted modes".into()));
        }
        Ok(Self {
            v,
            w,
            sigma,
            memo: RefCell::new(HashMap::new()),
            binom_n: RefCell::new(HashMap::new()),
        })
    }

    /// The VOA acting on itself.
    pub fn on_self(v: Arc<InducedModule>) -> Result<Self> {
        Self::new(v.clone(), v, false)
    }

    fn same_algebra(v: &InducedModule, w: &InducedModule) -> bool {
        Arc::ptr_eq(&v.ab, &w.ab) || v.ab.structure == w.ab.structure
    }

    /// `C(N, j) a` in adapted coordinates.
    pub fn binom_n(&self, a: usize, j: usize) -> SparseVec {
        if !self.sigma {
            return if j == 0 { SparseVec::unit(a) } else { SparseVec::new() };
        }
        if let Some(v) = self.binom_n.borrow().get(&(a, j)) {
            return v.clone();
        }
        let out = if j == 0 {
            SparseVec::unit(a)
        } else {
            let prev = self.binom_n(a, j - 1);
            let mut x = self.v.ab.ad_e(&prev);
            x.add_scaled(&prev, &-Q::from_integer((j as i64 - 1).into()));
            x.scaled(&(Q::one() / Q::from_integer((j as i64).into())))
        };
        self.binom_n.borrow_mut().insert((a, j), out.clone());
        out
    }

    /// `N u = e(0) u` on the source when reading the target as `σ`-twisted,
    /// and zero otherwise.
    pub fn n_vec(&self, u: &SparseVec) -> Result<SparseVec> {
        if !self.sigma {
            return Ok(SparseVec::new());
        }
        self.v.act_element(&self.v.ab.e, Grade::zero(), u)
    }

    /// `C(N, j) u` on the source for `j = 0..=jmax`.
    pub fn binom_n_vec(&self, u: &SparseVec, jmax: usize) -> Result<Vec<SparseVec>> {
        let mut out = vec![u.clone()];
        for j in 1..=jmax {
            let prev = &out[j - 1];
            let mut x = self.n_vec(prev)?;
            x.add_scaled(prev, &-Q::from_integer((j as i64 - 1).into()));
            out.push(x.scaled(&(Q::one() / Q::from_integer((j as i64).into()))));
        }
        Ok(out)
    }

    /// Offset in `[0, 1)` of the modes of a homogeneous source vector.
    pub fn vector_offset(&self, u: &SparseVec) -> Grade {
        u.indices().next().map(|i| self.state_offset(i)).unwrap_or_default()
    }

    fn offset(&self, a: usize) -> Grade {
        if self.sigma {
            self.w.mode_offset(a)
        } else {
            Grade::zero()
        }
    }

    /// Current `a_(n)` on the target.
    pub fn current(&self, a: usize, n: Grade, x: &SparseVec) -> Result<SparseVec> {
        let mut out = self.w.act(a, n, x)?;
        if self.sigma && n.is_zero() {
            let c = self.v.ab.form(&self.v.ab.e, &SparseVec::unit(a)) * &self.w.level;
            if !c.is_zero() {
                out.add_scaled(x, &-c);
            }
        }
        Ok(out)
    }

    fn wt(&self, u: usize) -> Grade {
        self.v.depth_of(u)
    }

    /// Offset of the admissible modes of the state `u` on the target.
    pub fn state_offset(&self, u: usize) -> Grade {
        if !self.sigma {
            return Grade::zero();
        }
        let t = self.w.ab.order as i64;
        let c = self.v.states()[u].mono.iter().map(|g| self.w.ab.class(g.a) as i64).sum::<i64>();
        Grade::new(c.rem_euclid(t), t)
    }

    /// `u_(r) w` for basis vectors `u ∈ V` and `w ∈ W`.
    pub fn mode_basis(&self, u: usize, r: Grade, w: usize) -> Result<SparseVec> {
        if !(r - self.state_offset(u)).is_integer() {
            return Err(Error::ClassMismatch {
                mode: grade_string(r),
                class: grade_string(self.state_offset(u)),
            });
        }
        let depth = self.wt(u) - r - Grade::one() + self.w.depth_of(w);
        if depth.is_negative() {
            return Ok(SparseVec::new());
        }
        if depth > self.w.depth_cap {
            return Err(Error::Truncation {
                weight: grade_string(depth),
                cap: grade_string(self.w.depth_cap),
            });
        }
        if let Some(x) = self.memo.borrow().get(&(u, r, w)) {
            return Ok(x.clone());
        }
        let st = &self.v.states()[u];
        let out = match st.mono.first() {
            None => {
                if r == -Grade::one() {
                    SparseVec::unit(w)
                } else {
                    SparseVec::new()
                }
            }
            Some(g) => {
                let (a, k) = (g.a, g.mode);
                let v = self.v.state_index(&st.mono[1..], 0).expect("prefix state");
                let m = self.offset(a);
                let wv = self.wt(v);
                let dw = self.w.depth_of(w);
                let ki = k.to_integer();
                let unit_w = SparseVec::unit(w);
                let mut out = SparseVec::new();
                let imax = (wv - r + m - Grade::one() + dw).floor().to_integer();
                for i in 0..=imax.max(-1) {
                    let c = binom_int(ki, i as usize) * sign(i);
                    let inner = self.mode_basis(v, r - m + Grade::from_integer(i), w)?;
                    if inner.is_zero() {
                        continue;
                    }
                    let x = self.current(a, m + k - Grade::from_integer(i), &inner)?;
                    out.add_scaled(&x, &c);
                }
                let imax = (dw - m).floor().to_integer();
                let sk = -sign(ki);
                for i in 0..=imax.max(-1) {
                    let c = binom_int(ki, i as usize) * sign(i) * &sk;
                    let inner = self.current(a, m + Grade::from_integer(i), &unit_w)?;
                    if inner.is_zero() {
                        continue;
                    }
                    let x = self.mode(&SparseVec::unit(v), r - m + k - Grade::from_integer(i), &inner)?;
                    out.add_scaled(&x, &c);
                }
                if self.sigma {
                    let top = (wv - k).floor().to_integer();
                    for s in 1..=top.max(0) {
                        for i in 0..=s {
                            let j = (s - i) as usize;
                            let cm = binom_grade(m, i as usize);
                            if cm.is_zero() {
                                continue;
                            }
                            let b = self.binom_n(a, j);
                            if b.is_zero() {
                                continue;
                            }
                            let n = k + Grade::from_integer(s);
                            let x = self.v.act_element(&b, n, &SparseVec::unit(v))?;
                            if x.is_zero() {
                                continue;
                            }
                            let y = self.mode(&x, r - Grade::from_integer(s), &unit_w)?;
                            out.add_scaled(&y, &-cm);
                        }
                    }
                }
                out
            }
        };
        self.memo.borrow_mut().insert((u, r, w), out.clone());
        Ok(out)
    }

    /// `u_(r) x` for vectors `u ∈ V`, `x ∈ W`.
    pub fn mode(&self, u: &SparseVec, r: Grade, x: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (i, a) in u.iter() {
            for (j, b) in x.iter() {
                let y = self.mode_basis(i, r, j)?;
                if !y.is_zero() {
                    out.add_scaled(&y, &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn memo_size(&self) -> usize {
        self.memo.borrow().len()
    }
}

fn sign(i: i64) -> Q {
    if i % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Sugawara vector `ω = (1 / 2(ℓ + h∨)) Σ x_i(-1) x^i(-1) 1`.
pub fn conformal_vector(v: &InducedModule, dual_coxeter: i64) -> Result<SparseVec> {
    let denom = (v.level.clone() + Q::from_integer(dual_coxeter.into())) * Q::from_integer(2.into());
    if denom.is_zero() {
        return Err(Error::CriticalLevel);
    }
    let n = v.ab.dim();
    let gram: Vec<Vec<Q>> = (0..n).map(|a| (0..n).map(|b| v.ab.form_basis(a, b)).collect()).collect();
    let inv = crate::linalg::mat_inverse(&gram).ok_or(Error::Unsupported("degenerate form".into()))?;
    let vac = v.vacuum();
    let mut out = SparseVec::new();
    let m1 = -Grade::one();
    for a in 0..n {
        for b in 0..n {
            if inv[a][b].is_zero() {
                continue;
            }
            let x = v.act(a, m1, &v.act(b, m1, &vac)?)?;
            out.add_scaled(&x, &inv[a][b]);
        }
    }
    Ok(out.scaled(&(Q::one() / denom)))
}

/// `L(n) = ω_(n+1)` on the target.
pub fn virasoro(ops: &VertexOps, omega: &SparseVec, n: Grade, x: &SparseVec) -> Result<SparseVec> {
    ops.mode(omega, n + Grade::one(), x)
}

/// Central charge `ℓ dim g / (ℓ + h∨)`.
pub fn central_charge(level: &Q, dim: usize, dual_coxeter: i64) -> Result<Q> {
    let d = level.clone() + Q::from_integer(dual_coxeter.into());
    if d.is_zero() {
        return Err(Error::CriticalLevel);
    }
    Ok(level * Q::from_integer((dim as i64).into()) / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hwmodule::FiniteModule;
    use crate::liealg::adapted::AdaptedBasis;
    use crate::liealg::automorphism::{named_permutation, Automorphism};
    use crate::liealg::{build_lie_algebra, CartanType};
    use crate::rational::{grade, q, qr};
    use crate::voa::Gen;

    fn basis(t: CartanType, n: usize, mu: &str) -> (Arc<AdaptedBasis>, i64) {
        let g = build_lie_algebra(t, n).unwrap();
        let p = named_permutation(&g, mu).unwrap();
        let a = Automorphism::diagram(&g, &p).unwrap();
        (Arc::new(AdaptedBasis::new(&g, &a).unwrap()), g.roots.dual_coxeter())
    }

    fn vac(ab: &Arc<AdaptedBasis>, l: Q, cap: i64) -> Arc<InducedModule> {
        Arc::new(InducedModule::new(ab.clone(), false, l, Arc::new(FiniteModule::trivial(ab)), grade(cap, 1)).unwrap())
    }

    fn g1(n: i64) -> Grade {
        grade(n, 1)
    }

    #[test]
    fn vacuum_and_creation() {
        let (ab, _) = basis(CartanType::A, 2, "id");
        let v = vac(&ab, q(2), 3);
        let ops = VertexOps::on_self(v.clone()).unwrap();
        for u in 0..v.dim() {
            if v.depth_of(u) > g1(2) {
                continue;
            }
            assert_eq!(ops.mode_basis(u, g1(-1), 0).unwrap(), SparseVec::unit(u));
            for n in 0..3 {
                assert!(ops.mode_basis(u, g1(n), 0).unwrap().is_zero());
            }
            assert_eq!(ops.mode_basis(0, g1(-1), u).unwrap(), SparseVec::unit(u));
        }
        let a = v.act(0, g1(-1), &v.vacuum()).unwrap();
        let x = v.monomial(&[Gen::new(3, g1(-1)), Gen::new(5, g1(-2))], 0).unwrap();
        for n in 0..3 {
            assert_eq!(ops.mode(&a, g1(n), &x).unwrap(), v.act(0, g1(n), &x).unwrap());
        }
    }

    #[test]
    fn sugawara_sl2() {
        let (ab, hv) = basis(CartanType::A, 1, "id");
        let l = q(3);
        let v = vac(&ab, l.clone(), 4);
        let ops = VertexOps::on_self(v.clone()).unwrap();
        let w = conformal_vector(&v, hv).unwrap();
        let c = central_charge(&l, 3, hv).unwrap();
        assert_eq!(c, qr(9, 5));
        for u in 0..v.dim() {
            if v.depth_of(u) > g1(2) {
                continue;
            }
            let x = SparseVec::unit(u);
            let l0 = virasoro(&ops, &w, g1(0), &x).unwrap();
            assert_eq!(l0, x.scaled(&crate::rational::grade_to_q(v.depth_of(u))));
        }
        let l2 = virasoro(&ops, &w, g1(2), &w).unwrap();
        assert_eq!(l2, v.vacuum().scaled(&(c / q(2))));
        let e1 = v.act(0, g1(-1), &v.vacuum()).unwrap();
        assert_eq!(virasoro(&ops, &w, g1(-1), &e1).unwrap(), v.act(0, g1(-2), &v.vacuum()).unwrap());
        assert!(matches!(conformal_vector(&vac(&ab, q(-2), 2), hv), Err(Error::CriticalLevel)));
    }

    #[test]
    fn sugawara_on_highest_weight_top() {
        // L(0) on the top of V(λ, ℓ) is (λ, λ + 2ρ) / 2(ℓ + h∨); λ = ω_1 for sl_3 gives 4/3.
        let (ab, hv) = basis(CartanType::A, 2, "id");
        let l = q(1);
        let v = vac(&ab, l.clone(), 2);
        let top = Arc::new(FiniteModule::build(&ab, &[1, 0]).unwrap());
        let m = Arc::new(InducedModule::new(ab.clone(), false, l, top, g1(1)).unwrap());
        let ops = VertexOps::new(v.clone(), m.clone(), false).unwrap();
        let w = conformal_vector(&v, hv).unwrap();
        for i in 0..3 {
            let x = SparseVec::unit(i);
            assert_eq!(virasoro(&ops, &w, g1(0), &x).unwrap(), x.scaled(&qr(1, 3)));
        }
    }

    #[test]
    fn twisted_sugawara_a2() {
        // Twisted vacuum weight ℓ/(ℓ + h∨) Σ_j j(T - j) dim g^[j] / 4T².
        let (ab, hv) = basis(CartanType::A, 2, "flip");
        let l = q(1);
        let v = vac(&ab, l.clone(), 3);
        let w = Arc::new(InducedModule::new(ab.clone(), true, l.clone(), Arc::new(FiniteModule::trivial(&ab)), grade(3, 2)).unwrap());
        let ops = VertexOps::new(v.clone(), w.clone(), true).unwrap();
        let om = conformal_vector(&v, hv).unwrap();
        let h0 = qr(1, 4) * qr(5, 16);
        let vac_w = w.vacuum();
        assert_eq!(virasoro(&ops, &om, g1(0), &vac_w).unwrap(), vac_w.scaled(&h0));
        for s in 0..w.dim() {
            if w.depth_of(s) > g1(1) {
                continue;
            }
            let x = SparseVec::unit(s);
            let expect = x.scaled(&(h0.clone() + crate::rational::grade_to_q(w.depth_of(s))));
            assert_eq!(virasoro(&ops, &om, g1(0), &x).unwrap(), expect);
        }
    }
}
