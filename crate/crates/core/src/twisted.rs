//! Twisted affinizations and `σ`-twisted modules for `σ = μ exp(2πi ad e)`.
//!
//! A `σ`-twisted module is realised on an induced module of the
//! `μ`-twisted affinization through the isomorphism
//! `a ⊗ t^m ↦ a(m) - δ_{m,0} ⟨e, a⟩ k`; Y₀ is the untwisted-log part of
//! the vertex operator and `Y(u, x) = Y₀(x^{-N} u, x)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::context::AlgebraContext;
use crate::error::{Error, Result};
use crate::hwmodule::FiniteModule;
use crate::liealg::adapted::AdaptedBasis;
use crate::linalg::{kernel, mat_identity, mat_is_zero, mat_mul, mat_sub, mat_zero, Matrix, SparseVec, TrackedSubspace};
use crate::rational::{binom_grade, binom_int, factorial, grade_string, q, q_to_i64, to_short_string, Grade, Q};
use crate::report::IdentityReport;
use crate::voa::{InducedModule, Radical, Shapovalov, VertexOps};

/// `Σ c · a ⊗ t^m + z k` in a twisted affinization (adapted basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedAffineElement {
    pub terms: BTreeMap<(usize, Grade), Q>,
    pub central: Q,
}

impl Default for TwistedAffineElement {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
            central: Q::zero(),
        }
    }
}

impl TwistedAffineElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(a: usize, m: Grade) -> Self {
        let mut x = Self::zero();
        x.add_term(a, m, Q::one());
        x
    }

    pub fn central(c: Q) -> Self {
        Self {
            terms: BTreeMap::new(),
            central: c,
        }
    }

    pub fn add_term(&mut self, a: usize, m: Grade, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, m)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, m));
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        for (&(a, m), x) in &other.terms {
            self.add_term(a, m, x * c);
        }
        self.central += &other.central * c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    /// Every `a ⊗ t^m` must have `m ∈ class(a)/T + Z`.
    pub fn check(&self, ab: &AdaptedBasis) -> Result<()> {
        for &(a, m) in self.terms.keys() {
            let off = Grade::new(ab.class(a) as i64, ab.order as i64);
            if !(m - off).is_integer() {
                return Err(Error::ClassMismatch {
                    mode: grade_string(m),
                    class: grade_string(off),
                });
            }
        }
        Ok(())
    }

    pub fn to_string(&self, ab: &AdaptedBasis) -> String {
        let mut terms: Vec<(Q, String)> = self
            .terms
            .iter()
            .map(|(&(a, m), c)| (c.clone(), format!("{}⊗t^{}", ab.label(a), grade_string(m))))
            .collect();
        if !self.central.is_zero() {
            terms.push((self.central.clone(), "k".into()));
        }
        crate::text::format_terms(terms.into_iter())
    }
}

fn bracket_with(
    ab: &AdaptedBasis,
    x: &TwistedAffineElement,
    y: &TwistedAffineElement,
    central: impl Fn(usize, Grade, usize, &SparseVec) -> Q,
) -> Result<TwistedAffineElement> {
    x.check(ab)?;
    y.check(ab)?;
    let mut out = TwistedAffineElement::zero();
    for (&(a, m), ca) in &x.terms {
        for (&(b, n), cb) in &y.terms {
            let c = ca * cb;
            let ab_br = ab.bracket_basis(a, b);
            for (i, x) in ab_br.iter() {
                out.add_term(i, m + n, x * &c);
            }
            if (m + n).is_zero() {
                out.central += central(a, m, b, ab_br) * &c;
            }
        }
    }
    Ok(out)
}

/// `[a⊗t^m, b⊗t^n] = [a,b]⊗t^{m+n} + δ_{m+n,0}(m⟨a,b⟩ + ⟨e,[a,b]⟩) k`.
pub fn twisted_bracket(ab: &AdaptedBasis, x: &TwistedAffineElement, y: &TwistedAffineElement) -> Result<TwistedAffineElement> {
    bracket_with(ab, x, y, |a, m, b, br| {
        crate::rational::grade_to_q(m) * ab.form_basis(a, b) + ab.form(&ab.e, br)
    })
}

/// Bracket of the `μ`-twisted affinization, `[a(m), b(n)] = [a,b](m+n) + m δ_{m+n,0} ⟨a,b⟩ k`.
pub fn mu_bracket(ab: &AdaptedBasis, x: &TwistedAffineElement, y: &TwistedAffineElement) -> Result<TwistedAffineElement> {
    bracket_with(ab, x, y, |a, m, b, _| crate::rational::grade_to_q(m) * ab.form_basis(a, b))
}

/// `a ⊗ t^m ↦ a(m) - δ_{m,0} ⟨e, a⟩ k`.
pub fn iso_phi(ab: &AdaptedBasis, x: &TwistedAffineElement) -> TwistedAffineElement {
    shift_zero_modes(ab, x, -Q::one())
}

pub fn iso_phi_inverse(ab: &AdaptedBasis, x: &TwistedAffineElement) -> TwistedAffineElement {
    shift_zero_modes(ab, x, Q::one())
}

fn shift_zero_modes(ab: &AdaptedBasis, x: &TwistedAffineElement, s: Q) -> TwistedAffineElement {
    let mut out = x.clone();
    for (&(a, m), c) in &x.terms {
        if m.is_zero() {
            out.central += ab.form(&ab.e, &SparseVec::unit(a)) * c * &s;
        }
    }
    out
}

/// Checks `φ[x, y] = [φx, φy]` on all pairs of basis elements with `|m| ≤ bound`.
pub fn verify_phi(ab: &AdaptedBasis, bound: i64) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("phi-homomorphism", &format!("|m| <= {bound}"));
    let t = ab.order as i64;
    let modes = |a: usize| -> Vec<Grade> {
        let c = ab.class(a) as i64;
        (-bound - 1..=bound)
            .map(|j| Grade::new(c, t) + Grade::from_integer(j))
            .filter(|m| m.abs() <= Grade::from_integer(bound))
            .collect()
    };
    for a in 0..ab.dim() {
        for m in modes(a) {
            let x = TwistedAffineElement::basis(a, m);
            for b in 0..ab.dim() {
                for n in modes(b) {
                    let y = TwistedAffineElement::basis(b, n);
                    let lhs = iso_phi(ab, &twisted_bracket(ab, &x, &y)?);
                    let rhs = mu_bracket(ab, &iso_phi(ab, &x), &iso_phi(ab, &y))?;
                    let eq = lhs == rhs;
                    rep.record(lhs.to_string(ab), rhs.to_string(ab), eq);
                }
            }
        }
    }
    Ok(rep)
}

/// A `σ`-twisted module of `V_g(0, ℓ)` (or `V` itself), optionally replaced by
/// its simple quotient.
pub struct TwistedModule {
    pub ops: VertexOps,
    /// `V` acting on itself, for iterated products inside `V`.
    pub vv: VertexOps,
    pub radical: Option<Radical>,
}

impl TwistedModule {
    /// `V_(g,μ)(λ, ℓ)` truncated at `depth`, with `V` built to `v_depth`.
    pub fn verma(cx: &AlgebraContext, lambda: &[i64], level: &Q, depth: Grade, v_depth: i64) -> Result<Self> {
        let v = cx.vacuum_module(level, v_depth)?;
        let w = cx.twisted_verma(lambda, level, depth)?;
        Self::from_modules(v, w, true)
    }

    /// `L_(g,μ)(λ, ℓ)`.
    pub fn simple(cx: &AlgebraContext, lambda: &[i64], level: &Q, depth: Grade, v_depth: i64) -> Result<Self> {
        Self::verma(cx, lambda, level, depth, v_depth)?.into_simple()
    }

    /// `V` as a module over itself (untwisted, `N = 0`).
    pub fn vacuum(cx: &AlgebraContext, level: &Q, depth: i64) -> Result<Self> {
        let v = cx.vacuum_module(level, depth)?;
        Self::from_modules(v.clone(), v, false)
    }

    pub fn from_modules(v: Arc<InducedModule>, w: Arc<InducedModule>, sigma: bool) -> Result<Self> {
        let vv = VertexOps::on_self(v.clone())?;
        Ok(Self {
            ops: VertexOps::new(v, w, sigma)?,
            vv,
            radical: None,
        })
    }

    /// Quotient by the radical of the contravariant form.
    pub fn into_simple(mut self) -> Result<Self> {
        self.radical = Some(Shapovalov::new(&self.ops.w).radical()?);
        Ok(self)
    }

    pub fn v(&self) -> &InducedModule {
        &self.ops.v
    }

    pub fn w(&self) -> &InducedModule {
        &self.ops.w
    }

    pub fn ab(&self) -> &AdaptedBasis {
        &self.ops.w.ab
    }

    pub fn is_simple(&self) -> bool {
        self.radical.is_some()
    }

    pub fn reduce(&self, x: &SparseVec) -> SparseVec {
        match &self.radical {
            Some(r) => r.reduce(x),
            None => x.clone(),
        }
    }

    pub fn graded_dims(&self) -> Vec<(Grade, usize)> {
        match &self.radical {
            Some(r) => r.quotient_dims(),
            None => self.w().graded_dims(),
        }
    }

    /// States spanning the module (the quotient when simple) up to `max_depth`.
    pub fn basis_states(&self, max_depth: Grade) -> Vec<usize> {
        (0..self.w().dim())
            .filter(|&i| self.w().depth_of(i) <= max_depth)
            .filter(|&i| self.radical.as_ref().map_or(true, |r| !r.subspace.is_pivot(i)))
            .collect()
    }

    /// Conformal weight of a homogeneous vector of `V`.
    pub fn source_weight(&self, u: &SparseVec) -> Result<Grade> {
        homogeneous_depth(self.v(), u)
    }

    /// `Y₀(u, x)` coefficient of `x^{-n-1}` applied to `x`.
    pub fn y0(&self, u: &SparseVec, n: Grade, x: &SparseVec) -> Result<SparseVec> {
        Ok(self.reduce(&self.ops.mode(u, n, x)?))
    }

    /// Coefficient of `x^{-n-1} (log x)^k` in `Y(u, x) x`, namely
    /// `((-N)^k / k! u)_n x`.
    pub fn full_y(&self, u: &SparseVec, n: Grade, k: usize, x: &SparseVec) -> Result<SparseVec> {
        let mut y = u.clone();
        for _ in 0..k {
            y = self.ops.n_vec(&y)?.neg();
        }
        let c = Q::one() / factorial(k as u64);
        Ok(self.y0(&y, n, x)?.scaled(&c))
    }

    /// Smallest `K` with `N^K u = 0`: the number of log powers in `Y(u, x)`.
    pub fn log_degree(&self, u: &SparseVec) -> Result<usize> {
        let mut y = u.clone();
        let mut k = 0;
        while !y.is_zero() {
            y = self.ops.n_vec(&y)?;
            k += 1;
        }
        Ok(k)
    }

    /// `o(x) = Σ_d x_d(d - 1)` for `x = Σ_d x_d` split by weight.
    pub fn zero_mode(&self, x: &SparseVec, w: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (d, part) in split_by_depth(self.v(), x) {
            out.add(&self.ops.mode(&part, d - Grade::one(), w)?);
        }
        Ok(self.reduce(&out))
    }

    /// `i(g) = g(-1)1 + ℓ⟨e, g⟩ 1`.
    pub fn i_vector(&self, g: &SparseVec) -> Result<SparseVec> {
        let v = self.v();
        let vac = v.vacuum();
        let mut out = v.act_element(g, -Grade::one(), &vac)?;
        if self.ops.sigma {
            let c = v.ab.form(&v.ab.e, g) * &v.level;
            out.add_scaled(&vac, &c);
        }
        Ok(out)
    }

    /// `a(-1)^k 1` for an adapted element `a`.
    pub fn current_power(&self, a: &SparseVec, k: usize) -> Result<SparseVec> {
        let v = self.v();
        let mut x = v.vacuum();
        for _ in 0..k {
            x = v.act_element(a, -Grade::one(), &x)?;
        }
        Ok(x)
    }
}

fn homogeneous_depth(m: &InducedModule, u: &SparseVec) -> Result<Grade> {
    let mut it = u.indices().map(|i| m.depth_of(i));
    let Some(d) = it.next() else {
        return Err(Error::ZeroVector);
    };
    if it.any(|x| x != d) {
        return Err(Error::NotHomogeneous(m.vector_string(u)));
    }
    Ok(d)
}

fn split_by_depth(m: &InducedModule, x: &SparseVec) -> BTreeMap<Grade, SparseVec> {
    let mut out: BTreeMap<Grade, SparseVec> = BTreeMap::new();
    for (i, c) in x.iter() {
        out.entry(m.depth_of(i)).or_default().add_term(i, c.clone());
    }
    out
}

fn g(n: i64) -> Grade {
    Grade::from_integer(n)
}

fn floor(x: Grade) -> i64 {
    x.floor().to_integer()
}

/// Evaluates a coefficient, turning truncation into `None`.
fn determined(r: Result<SparseVec>) -> Result<Option<SparseVec>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::Truncation { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Operands {
    wu: Grade,
    wv: Grade,
    a: Grade,
    b: Grade,
    nu: Vec<SparseVec>,
}

fn operands(tm: &TwistedModule, u: &SparseVec, v: &SparseVec, window: i64) -> Result<Operands> {
    if window < 1 {
        return Err(Error::Window(format!("window {window} must be at least 1")));
    }
    let (wu, wv) = (tm.source_weight(u)?, tm.source_weight(v)?);
    Ok(Operands {
        wu,
        wv,
        a: tm.ops.vector_offset(u),
        b: tm.ops.vector_offset(v),
        nu: tm.ops.binom_n_vec(u, (floor(wu + wv) + window + 2).max(0) as usize)?,
    })
}

/// `Σ_{i,j} C(m,i) ((C(N,j)u)_(k+i+j) v)_(p-i-j) w`, the iterate side shared
/// by the Borcherds and commutator identities.
fn iterate_side(tm: &TwistedModule, op: &Operands, v: &SparseVec, m: Grade, k: i64, p: Grade, w: &SparseVec) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    let top = floor(op.wu + op.wv - Grade::one() - g(k));
    for s in 0..=top.max(-1) {
        for j in 0..op.nu.len().min(s as usize + 1) {
            let i = s as usize - j;
            let c = binom_grade(m, i);
            if c.is_zero() {
                continue;
            }
            let z = tm.vv.mode(&op.nu[j], g(k + s), v)?;
            if z.is_zero() {
                continue;
            }
            out.add_scaled(&tm.ops.mode(&z, p - g(s), w)?, &c);
        }
    }
    Ok(tm.reduce(&out))
}

fn instance(tm: &TwistedModule, u: &SparseVec, v: &SparseVec, window: i64) -> String {
    format!(
        "u = {}, v = {}, window {}",
        tm.v().vector_string(u),
        tm.v().vector_string(v),
        window
    )
}

/// Borcherds form of the twisted Jacobi identity, coefficient by coefficient:
///
/// ```text
/// Σ_i (-1)^i C(k,i) [u_(m+k-i) v_(n+i) - (-1)^k v_(n+k-i) u_(m+i)] w
///   = Σ_{i,j} C(m,i) ((C(N,j)u)_(k+i+j) v)_(m+n-i-j) w
/// ```
///
/// over `m ∈ a + [-R, R]`, `k ∈ [-R, R]`, `n ∈ b + [-R, R]`.
pub fn verify_twisted_jacobi(tm: &TwistedModule, u: &SparseVec, v: &SparseVec, ws: &[usize], window: i64) -> Result<IdentityReport> {
    let op = operands(tm, u, v, window)?;
    let mut rep = IdentityReport::new("twisted-jacobi", &instance(tm, u, v, window));
    let cap = tm.w().depth_cap;
    for &wi in ws {
        let w = SparseVec::unit(wi);
        let dw = tm.w().depth_of(wi);
        for mi in -window..=window {
            let m = op.a + g(mi);
            for k in -window..=window {
                for ni in -window..=window {
                    let n = op.b + g(ni);
                    let depth = op.wu + op.wv - m - g(k) - n - g(2) + dw;
                    if depth.is_negative() {
                        continue;
                    }
                    if depth > cap {
                        rep.excluded += 1;
                        continue;
                    }
                    let lhs = determined((|| {
                        let mut out = SparseVec::new();
                        for i in 0..=floor(op.wv - Grade::one() + dw - n).max(-1) {
                            let c = binom_int(k, i as usize) * alt(i);
                            let x = tm.ops.mode(v, n + g(i), &w)?;
                            if !x.is_zero() {
                                out.add_scaled(&tm.ops.mode(u, m + g(k - i), &x)?, &c);
                            }
                        }
                        for i in 0..=floor(op.wu - Grade::one() + dw - m).max(-1) {
                            let c = binom_int(k, i as usize) * alt(i) * alt(k);
                            let x = tm.ops.mode(u, m + g(i), &w)?;
                            if !x.is_zero() {
                                out.add_scaled(&tm.ops.mode(v, n + g(k - i), &x)?, &-c);
                            }
                        }
                        Ok(tm.reduce(&out))
                    })())?;
                    let rhs = determined(iterate_side(tm, &op, v, m, k, m + n, &w))?;
                    match (lhs, rhs) {
                        (Some(l), Some(r)) => {
                            let eq = l == r;
                            rep.record(tm.w().vector_string(&l), tm.w().vector_string(&r), eq)
                        }
                        _ => rep.excluded += 1,
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// `[u_(m), v_(n)] w = Σ_{i,j} C(m,i) ((C(N,j)u)_(i+j) v)_(m+n-i-j) w`.
pub fn verify_commutator(tm: &TwistedModule, u: &SparseVec, v: &SparseVec, ws: &[usize], window: i64) -> Result<IdentityReport> {
    let op = operands(tm, u, v, window)?;
    let mut rep = IdentityReport::new("commutator", &instance(tm, u, v, window));
    let cap = tm.w().depth_cap;
    for &wi in ws {
        let w = SparseVec::unit(wi);
        let dw = tm.w().depth_of(wi);
        for mi in -window..=window {
            let m = op.a + g(mi);
            for ni in -window..=window {
                let n = op.b + g(ni);
                let depth = op.wu + op.wv - m - n - g(2) + dw;
                if depth.is_negative() {
                    continue;
                }
                if depth > cap {
                    rep.excluded += 1;
                    continue;
                }
                let lhs = determined((|| {
                    let uv = tm.ops.mode(u, m, &tm.ops.mode(v, n, &w)?)?;
                    let vu = tm.ops.mode(v, n, &tm.ops.mode(u, m, &w)?)?;
                    Ok(tm.reduce(&uv.sub(&vu)))
                })())?;
                let rhs = determined(iterate_side(tm, &op, v, m, 0, m + n, &w))?;
                match (lhs, rhs) {
                    (Some(l), Some(r)) => {
                        let eq = l == r;
                        rep.record(tm.w().vector_string(&l), tm.w().vector_string(&r), eq)
                    }
                    _ => rep.excluded += 1,
                }
            }
        }
    }
    Ok(rep)
}

/// Smallest `l ∈ a + Z` with `u_(n) w = 0` for all `n ≥ l`, as far as the
/// truncation can decide.
pub fn associativity_shift(tm: &TwistedModule, u: &SparseVec, w: &SparseVec) -> Result<Grade> {
    let wu = tm.source_weight(u)?;
    let a = tm.ops.vector_offset(u);
    let dw = homogeneous_depth(tm.w(), w)?;
    let mut n = a + g(floor(wu - Grade::one() + dw - a));
    loop {
        match tm.ops.mode(u, n, w) {
            Ok(x) if tm.reduce(&x).is_zero() => n -= Grade::one(),
            Ok(_) => return Ok(n + Grade::one()),
            Err(Error::Truncation { .. }) => return Ok(n + Grade::one()),
            Err(e) => return Err(e),
        }
    }
}

/// Weak associativity
/// `(x₀+x₂)^l Y₀(u, x₀+x₂) Y₀(v, x₂) w = (x₂+x₀)^l Y₀(Y((1 + x₀/x₂)^N u, x₀) v, x₂) w`
/// compared at `x₀^P x₂^Q` for `P ∈ [-R, R]`, `Q ∈ -b + [-R, R]`.
pub fn verify_weak_associativity(tm: &TwistedModule, u: &SparseVec, v: &SparseVec, ws: &[usize], window: i64) -> Result<IdentityReport> {
    let op = operands(tm, u, v, window)?;
    let mut rep = IdentityReport::new("weak-assoc", &instance(tm, u, v, window));
    let cap = tm.w().depth_cap;
    for &wi in ws {
        let w = SparseVec::unit(wi);
        let dw = tm.w().depth_of(wi);
        let l = associativity_shift(tm, u, &w)?;
        for p in -window..=window {
            for qi in -window..=window {
                let qq = -op.b + g(qi);
                let depth = op.wu + op.wv - l + g(p) + qq + dw;
                if depth.is_negative() {
                    continue;
                }
                if depth > cap {
                    rep.excluded += 1;
                    continue;
                }
                let lhs = determined((|| {
                    let mut out = SparseVec::new();
                    for t in 0..=floor(op.wv + dw + qq).max(-1) {
                        let x = tm.ops.mode(v, g(t) - qq - Grade::one(), &w)?;
                        if x.is_zero() {
                            continue;
                        }
                        let c = binom_int(p + t, t as usize);
                        out.add_scaled(&tm.ops.mode(u, l - g(1 + t + p), &x)?, &c);
                    }
                    Ok(tm.reduce(&out))
                })())?;
                let rhs = determined((|| {
                    let mut out = SparseVec::new();
                    for s in 0..=floor(op.wu + op.wv + g(p)).max(-1) {
                        for j in 0..op.nu.len().min(s as usize + 1) {
                            let i = s as usize - j;
                            let c = binom_grade(l, i);
                            if c.is_zero() {
                                continue;
                            }
                            let z = tm.vv.mode(&op.nu[j], g(s - p - 1), v)?;
                            if z.is_zero() {
                                continue;
                            }
                            out.add_scaled(&tm.ops.mode(&z, l - g(s) - qq - Grade::one(), &w)?, &c);
                        }
                    }
                    Ok(tm.reduce(&out))
                })())?;
                match (lhs, rhs) {
                    (Some(l), Some(r)) => {
                        let eq = l == r;
                        rep.record(tm.w().vector_string(&l), tm.w().vector_string(&r), eq)
                    }
                    _ => rep.excluded += 1,
                }
            }
        }
    }
    Ok(rep)
}

fn alt(i: i64) -> Q {
    if i.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Power field check for an isotropic root vector `f ∉ g^[0]`:
/// `(f(-1)^p 1)_(r) = Σ_{n₁+…+n_p = r+1-p} f_(n₁) ⋯ f_(n_p)` on every
/// state in `ws`, together with `[f_(n), (f(-1)^p 1)_(r)] = 0`.
pub fn verify_power_field(tm: &TwistedModule, f: usize, power: usize, ws: &[usize], window: i64) -> Result<IdentityReport> {
    let ab = tm.ab();
    if ab.class(f) == 0 {
        return Err(Error::Unsupported("power field needs f outside g^[0]".into()));
    }
    if !ab.form_basis(f, f).is_zero() {
        return Err(Error::Unsupported("power field needs an isotropic root vector".into()));
    }
    let fv = SparseVec::unit(f);
    let x = tm.current_power(&fv, power)?;
    let c = tm.w().mode_offset(f);
    let xoff = tm.ops.vector_offset(&x);
    let mut rep = IdentityReport::new(
        "power-field",
        &format!("f = {}, power {}, window {}", ab.label(f), power, window),
    );
    let cap = tm.w().depth_cap;
    for &wi in ws {
        let w = SparseVec::unit(wi);
        let dw = tm.w().depth_of(wi);
        for ri in -window..=window {
            let r = xoff + g(ri);
            let depth = g(power as i64) - r - Grade::one() + dw;
            if depth.is_negative() {
                continue;
            }
            if depth > cap {
                rep.excluded += 1;
                continue;
            }
            let lhs = determined(tm.y0(&x, r, &w))?;
            let rhs = determined(power_product(tm, f, c, power, r + Grade::one() - g(power as i64), &w))?;
            match (lhs, rhs) {
                (Some(l), Some(rr)) => {
                    let eq = l == rr;
                    rep.record(tm.w().vector_string(&l), tm.w().vector_string(&rr), eq);
                }
                _ => rep.excluded += 1,
            }
            for ni in -window..=window {
                let n = c + g(ni);
                if (depth - n).is_negative() {
                    continue;
                }
                let comm = determined((|| {
                    let a = tm.ops.current(f, n, &tm.y0(&x, r, &w)?)?;
                    let b = tm.y0(&x, r, &tm.reduce(&tm.ops.current(f, n, &w)?))?;
                    Ok(tm.reduce(&a.sub(&b)))
                })())?;
                match comm {
                    Some(z) => rep.record(tm.w().vector_string(&z), "0".into(), z.is_zero()),
                    None => rep.excluded += 1,
                }
            }
        }
    }
    Ok(rep)
}

/// `Σ f_(n₁) ⋯ f_(n_p) w` over all tuples with `Σ nᵢ = total`, grouped into
/// non-increasing tuples with their multinomial multiplicities.
fn power_product(tm: &TwistedModule, f: usize, c: Grade, p: usize, total: Grade, w: &SparseVec) -> Result<SparseVec> {
    fn rec(
        tm: &TwistedModule,
        f: usize,
        c: Grade,
        left: usize,
        total: Grade,
        prev: Option<Grade>,
        run: usize,
        x: &SparseVec,
        mult: &Q,
        out: &mut SparseVec,
    ) -> Result<()> {
        if left == 0 {
            if total.is_zero() {
                out.add_scaled(x, mult);
            }
            return Ok(());
        }
        let d = x.indices().map(|i| tm.w().depth_of(i)).max().unwrap_or_default();
        let mut hi = c + g(floor(d - c));
        if let Some(p) = prev {
            hi = hi.min(p);
        }
        let lo = total / g(left as i64);
        let mut n = hi;
        while n >= lo {
            let y = tm.reduce(&tm.ops.current(f, n, x)?);
            if !y.is_zero() {
                let r = if prev == Some(n) { run + 1 } else { 1 };
                let m = mult.clone() / q(r as i64);
                rec(tm, f, c, left - 1, total - n, Some(n), r, &y, &m, out)?;
            }
            n -= Grade::one();
        }
        Ok(())
    }
    let mut out = SparseVec::new();
    if w.is_zero() {
        return Ok(out);
    }
    rec(tm, f, c, p, total, None, 0, w, &factorial(p as u64), &mut out)?;
    Ok(tm.reduce(&out))
}

/// Lowest-weight space `Ω(W)`: vectors killed by every positive mode, with
/// the action `o(i(g)) = g(0)` of `g^[0]`.
#[derive(Clone, Debug)]
pub struct Omega {
    pub basis: Vec<SparseVec>,
    pub depths: Vec<Grade>,
    /// `h̄`-weights of the basis vectors.
    pub weights: Vec<Vec<i64>>,
    /// Adapted indices of `g^[0]` paired with the matrices of `o(i(g))`.
    pub actions: Vec<(usize, Matrix)>,
    /// Whether every `o(i(g))` preserved the computed space.
    pub invariant: bool,
    tracked: TrackedSubspace,
}

impl Omega {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` in the basis, if `x ∈ Ω`.
    pub fn coordinates(&self, x: &SparseVec) -> Option<SparseVec> {
        self.tracked.express(x)
    }

    pub fn action(&self, a: usize) -> Option<&Matrix> {
        self.actions.iter().find(|(b, _)| *b == a).map(|(_, m)| m)
    }

    /// Matrix of `o(x)` for some `x ∈ V^[0]`.
    pub fn matrix_of(&self, tm: &TwistedModule, x: &SparseVec) -> Result<Option<Matrix>> {
        let n = self.dim();
        let mut m = mat_zero(n, n);
        for (j, b) in self.basis.iter().enumerate() {
            let y = tm.zero_mode(x, b)?;
            let Some(c) = self.coordinates(&y) else {
                return Ok(None);
            };
            for (i, v) in c.iter() {
                m[i][j] = v.clone();
            }
        }
        Ok(Some(m))
    }

    /// Matrix of an element of `g^[0]` given in adapted coordinates.
    pub fn element_matrix(&self, x: &SparseVec) -> Matrix {
        let n = self.dim();
        let mut m = mat_zero(n, n);
        for (a, c) in x.iter() {
            if let Some(ma) = self.action(a) {
                for i in 0..n {
                    for j in 0..n {
                        if !ma[i][j].is_zero() {
                            m[i][j] += &ma[i][j] * c;
                        }
                    }
                }
            }
        }
        m
    }
}

impl TwistedModule {
    /// `Ω` through `max_depth`, computed per `(depth, h̄-weight)` block.
    pub fn omega_subspace(&self, max_depth: Grade) -> Result<Omega> {
        let w = self.w();
        let mut blocks: BTreeMap<(Grade, Vec<i64>), Vec<usize>> = BTreeMap::new();
        for i in self.basis_states(max_depth.min(w.depth_cap)) {
            blocks.entry((w.depth_of(i), w.weight_of(i))).or_default().push(i);
        }
        let mut basis = Vec::new();
        let mut depths = Vec::new();
        let mut weights = Vec::new();
        for ((d, wt), block) in blocks {
            let mut rows: BTreeMap<(usize, Grade, usize), SparseVec> = BTreeMap::new();
            for a in 0..w.ab.dim() {
                let off = w.mode_offset(a);
                let mut n = if off.is_zero() { Grade::one() } else { off };
                while n <= d {
                    for (col, &s) in block.iter().enumerate() {
                        let y = self.reduce(&self.ops.current(a, n, &SparseVec::unit(s))?);
                        for (t, c) in y.iter() {
                            rows.entry((a, n, t)).or_default().add_term(col, c.clone());
                        }
                    }
                    n += Grade::one();
                }
            }
            let rows: Vec<SparseVec> = rows.into_values().collect();
            for k in kernel(&rows, block.len()) {
                basis.push(k.map_indices(|c| block[c]));
                depths.push(d);
                weights.push(wt.clone());
            }
        }
        let mut tracked = TrackedSubspace::new();
        for b in &basis {
            tracked.insert(b);
        }
        let mut om = Omega {
            basis,
            depths,
            weights,
            actions: Vec::new(),
            invariant: true,
            tracked,
        };
        for &a in &self.ab().fixed {
            let x = self.i_vector(&SparseVec::unit(a))?;
            match om.matrix_of(self, &x)? {
                Some(m) => om.actions.push((a, m)),
                None => om.invariant = false,
            }
        }
        Ok(om)
    }
}

/// Complete-reducibility certificate for `Ω` as a `g^[0]`-module.
#[derive(Clone, Debug, Serialize)]
pub struct SemisimplicityCertificate {
    pub omega_dim: usize,
    /// Highest weights of the lowest-weight vectors, with multiplicity.
    pub highest_weights: Vec<Vec<i64>>,
    /// `Σ dim L(μ)` over the highest weights equals `dim Ω`.
    pub dims_match: bool,
    /// Basis vectors are `h̄`-eigenvectors with the recorded weights.
    pub weights_consistent: bool,
    /// Distinct Casimir eigenvalues on highest-weight vectors.
    pub casimir_eigenvalues: Vec<String>,
    /// `Π (C - c) = 0` over those eigenvalues.
    pub casimir_split: bool,
    /// `o(i(x))^{ℓ+1} = 0` for `x = e_θ` or `e_{θ^0}`.
    pub theta_power_vanishes: bool,
    pub semisimple: bool,
}

pub fn semisimplicity_certificate(cx: &AlgebraContext, tm: &TwistedModule, om: &Omega) -> Result<SemisimplicityCertificate> {
    let ab = tm.ab();
    let n = om.dim();
    let level = q_to_i64(&tm.v().level).filter(|l| *l >= 0).ok_or_else(|| {
        Error::Unsupported("certificate needs a non-negative integral level".into())
    })?;
    let mut weights_consistent = om.invariant;
    for (j, s) in ab.simple.iter().enumerate() {
        let h = om.action(s.h).map(|m| {
            let mut m = m.clone();
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x *= &s.scale;
                }
            }
            m
        });
        let Some(h) = h else {
            weights_consistent = false;
            continue;
        };
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { q(om.weights[b][j]) } else { Q::zero() };
                if h[a][b] != want {
                    weights_consistent = false;
                }
            }
        }
    }
    let raising: Vec<&Matrix> = ab.simple.iter().filter_map(|s| om.action(s.e)).collect();
    let mut by_weight: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, w) in om.weights.iter().enumerate() {
        by_weight.entry(w.clone()).or_default().push(i);
    }
    let casimir = casimir_matrix(ab, om)?;
    let mut highest = Vec::new();
    let mut total = 0usize;
    let mut dims_ok = raising.len() == ab.simple.len();
    let mut eigen: Vec<Q> = Vec::new();
    for (wt, cols) in &by_weight {
        let mut rows = Vec::new();
        for e in &raising {
            for r in 0..n {
                let row = SparseVec::from_pairs(cols.iter().enumerate().map(|(k, &c)| (k, e[r][c].clone())));
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
        for k in kernel(&rows, cols.len()) {
            let v = k.map_indices(|c| cols[c]).to_dense(n);
            highest.push(wt.clone());
            match FiniteModule::build(ab, wt) {
                Ok(m) => total += m.dim,
                Err(_) => dims_ok = false,
            }
            let cv = crate::linalg::mat_vec(&casimir, &v);
            let p = v.iter().position(|x| !x.is_zero()).expect("nonzero kernel vector");
            let c = &cv[p] / &v[p];
            if cv.iter().zip(&v).any(|(a, b)| *a != &c * b) {
                dims_ok = false;
            }
            if !eigen.contains(&c) {
                eigen.push(c);
            }
        }
    }
    let dims_match = dims_ok && total == n;
    let mut prod = mat_identity(n);
    for c in &eigen {
        let shifted = mat_sub(&casimir, &scalar_matrix(n, c));
        prod = mat_mul(&prod, &shifted);
    }
    let casimir_split = mat_is_zero(&prod);
    let x = om.element_matrix(&cx.theta_zero_vector());
    let mut p = mat_identity(n);
    for _ in 0..=level {
        p = mat_mul(&p, &x);
    }
    let theta_power_vanishes = mat_is_zero(&p);
    eigen.sort();
    Ok(SemisimplicityCertificate {
        omega_dim: n,
        highest_weights: highest,
        dims_match,
        weights_consistent,
        casimir_eigenvalues: eigen.iter().map(to_short_string).collect(),
        casimir_split,
        theta_power_vanishes,
        semisimple: dims_match && weights_consistent && casimir_split,
    })
}

fn scalar_matrix(n: usize, c: &Q) -> Matrix {
    let mut m = mat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c.clone();
    }
    m
}

/// Casimir `Σ (G⁻¹)_{ab} X_a X_b` of `g^[0]` on `Ω` for the restricted form `G`.
fn casimir_matrix(ab: &AdaptedBasis, om: &Omega) -> Result<Matrix> {
    let f = &ab.fixed;
    let gram: Matrix = f.iter().map(|&a| f.iter().map(|&b| ab.form_basis(a, b)).collect()).collect();
    let inv = crate::linalg::mat_inverse(&gram).ok_or_else(|| Error::Unsupported("degenerate form on g^[0]".into()))?;
    let n = om.dim();
    let mut c = mat_zero(n, n);
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in f.iter().enumerate() {
            if inv[i][j].is_zero() {
                continue;
            }
            let (Some(ma), Some(mb)) = (om.action(a), om.action(b)) else {
                return Err(Error::Unsupported("Ω is not g^[0]-invariant".into()));
            };
            let p = mat_mul(ma, mb);
            for r in 0..n {
                for s in 0..n {
                    if !p[r][s].is_zero() {
                        c[r][s] += &p[r][s] * &inv[i][j];
                    }
                }
            }
        }
    }
    Ok(c)
}

/// Whether `λ` is the lowest weight of a module for the simple quotient
/// `L_g(ℓ, 0)`, certified on the truncated simple quotient `L(λ, ℓ)`.
#[derive(Clone, Debug, Serialize)]
pub struct Admissibility {
    pub lambda: Vec<i64>,
    pub graded_dims: Vec<(String, usize)>,
    pub omega_dim: usize,
    /// Modes of `e_θ(-1)^{ℓ+1} 1` compared with zero.
    pub singular_checked: usize,
    pub singular_excluded: usize,
    /// Every determined mode of `e_θ(-1)^{ℓ+1} 1` vanishes on `L(λ, ℓ)`.
    pub singular_vanishes: bool,
    /// `o(i(x))^{ℓ+1} = 0` on `Ω` for `x = e_θ` or `e_{θ^0}`.
    pub theta_power_vanishes: bool,
    pub admissible: bool,
}

fn nonneg_level(level: &Q) -> Result<i64> {
    q_to_i64(level)
        .filter(|l| *l >= 0)
        .ok_or_else(|| Error::Unsupported("classification needs a non-negative integral level".into()))
}

/// Admissibility certificate for one `λ` with the module truncated at `depth`.
pub fn admissibility(cx: &AlgebraContext, lambda: &[i64], level: &Q, depth: Grade) -> Result<Admissibility> {
    let l = nonneg_level(level)?;
    let tm = TwistedModule::simple(cx, lambda, level, depth, l + 1)?;
    admissibility_of(cx, &tm, lambda)
}

pub fn admissibility_of(cx: &AlgebraContext, tm: &TwistedModule, lambda: &[i64]) -> Result<Admissibility> {
    let l = nonneg_level(&tm.v().level)?;
    let x = tm.current_power(&cx.theta_vector(), (l + 1) as usize)?;
    let xoff = tm.ops.vector_offset(&x);
    let cap = tm.w().depth_cap;
    let (mut checked, mut excluded, mut vanishes) = (0, 0, true);
    for wi in tm.basis_states(cap) {
        let dw = tm.w().depth_of(wi);
        let top = floor(g(l) + dw - xoff);
        let mut r = xoff + g(top);
        loop {
            let depth = g(l + 1) - r - Grade::one() + dw;
            if depth > cap {
                break;
            }
            match determined(tm.y0(&x, r, &SparseVec::unit(wi)))? {
                Some(y) => {
                    checked += 1;
                    vanishes &= y.is_zero();
                }
                None => excluded += 1,
            }
            r -= Grade::one();
        }
    }
    let om = tm.omega_subspace(Grade::zero())?;
    let xm = om.element_matrix(&cx.theta_zero_vector());
    let mut p = mat_identity(om.dim());
    for _ in 0..=l {
        p = mat_mul(&p, &xm);
    }
    let theta_power_vanishes = om.invariant && mat_is_zero(&p);
    Ok(Admissibility {
        lambda: lambda.to_vec(),
        graded_dims: tm.graded_dims().into_iter().map(|(d, n)| (grade_string(d), n)).collect(),
        omega_dim: om.dim(),
        singular_checked: checked,
        singular_excluded: excluded,
        singular_vanishes: vanishes,
        theta_power_vanishes,
        admissible: vanishes && theta_power_vanishes,
    })
}

/// Certificates for every dominant `λ` of `g^[0]` with coordinates `≤ bound`.
pub fn classify(cx: &AlgebraContext, level: &Q, depth: Grade, bound: i64) -> Result<Vec<Admissibility>> {
    let r = cx.ab.simple.len();
    let mut out = Vec::new();
    let mut lam = vec![0i64; r];
    loop {
        out.push(admissibility(cx, &lam, level, depth)?);
        let mut i = 0;
        while i < r && lam[i] == bound {
            lam[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
        lam[i] += 1;
    }
    Ok(out)
}

pub fn admissible_weights(list: &[Admissibility]) -> Vec<Vec<i64>> {
    list.iter().filter(|a| a.admissible).map(|a| a.lambda.clone()).collect()
}

/// Rows `numerator,T,dim` for weights `numerator / T`.
pub fn graded_dims_csv(dims: &[(Grade, usize)], order: usize) -> String {
    let t = order as i64;
    let mut s = String::from("weight_numerator,T,dim\n");
    for (d, n) in dims {
        let num = (*d * Grade::from_integer(t)).to_integer();
        s.push_str(&format!("{num},{t},{n}\n"));
    }
    s
}
