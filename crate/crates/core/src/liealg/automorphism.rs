//! Diagram automorphisms `μ`, the twist `σ = μ·exp(ad e)`, and the
//! `μ`-eigenspace decomposition.
//!
//! `μ` sends `e_{α_i} ↦ e_{α_π(i)}`, `f_{α_i} ↦ f_{α_π(i)}`, `h_i ↦ h_π(i)` and
//! is extended to all root vectors through `e_β = c⁻¹ [e_{α_i}, e_{β-α_i}]`,
//! so it acts on the Chevalley basis as a signed permutation.

use num_traits::{One, Zero};

use super::cyclotomic::Cyclo;
use super::{BasisKind, LieAlgebraData};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::rational::{to_fraction_string, Q};

/// Image of every basis vector under the extension of `perm`: `b_i ↦ c b_j`.
pub fn signed_action(g: &LieAlgebraData, perm: &[usize]) -> Result<Vec<(usize, Q)>> {
    let rs = &g.roots;
    if !rs.is_diagram_symmetry(perm) {
        return Err(Error::NotDiagramSymmetry(perm.to_vec()));
    }
    let r = rs.rank;
    let n = g.dim();
    let mut img: Vec<Option<SparseVec>> = vec![None; n];
    for i in 0..r {
        img[g.e_index(i)] = Some(SparseVec::unit(g.e_index(perm[i])));
        img[g.f_index(i)] = Some(SparseVec::unit(g.f_index(perm[i])));
        img[g.h_index(i)] = Some(SparseVec::unit(g.h_index(perm[i])));
    }
    for (b, beta) in rs.positive.iter().enumerate() {
        if img[g.e_index(b)].is_some() {
            continue;
        }
        let (i, gamma) = (0..r)
            .find_map(|i| {
                let mut gm = beta.clone();
                gm[i] -= 1;
                rs.positive_index(&gm).map(|k| (i, k))
            })
            .ok_or_else(|| Error::Automorphism("root without a predecessor".into()))?;
        for (xi, xg, xb) in [
            (g.e_index(i), g.e_index(gamma), g.e_index(b)),
            (g.f_index(i), g.f_index(gamma), g.f_index(b)),
        ] {
            let c = g.bracket_basis(xi, xg).get(xb);
            if c.is_zero() {
                return Err(Error::Automorphism("vanishing structure constant".into()));
            }
            let a = img[xi].clone().expect("earlier root");
            let bb = img[xg].clone().expect("earlier root");
            img[xb] = Some(g.bracket(&a, &bb).scaled(&(Q::one() / c)));
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for v in img {
        let v = v.expect("all basis vectors assigned");
        if v.len() != 1 {
            return Err(Error::Automorphism("image is not a single basis vector".into()));
        }
        let (j, c) = v.iter().next().map(|(j, c)| (j, c.clone())).expect("one term");
        if seen[j] {
            return Err(Error::Automorphism("image is not a permutation".into()));
        }
        seen[j] = true;
        out.push((j, c));
    }
    Ok(out)
}

/// Standard symmetries by name: `identity`, `flip`, `triality` (or a 1-based list).
pub fn named_permutation(g: &LieAlgebraData, name: &str) -> Result<Vec<usize>> {
    use super::CartanType::*;
    let r = g.rank();
    let name = name.trim().to_ascii_lowercase();
    let perm: Vec<usize> = match name.as_str() {
        "identity" | "id" | "trivial" | "none" => (0..r).collect(),
        "flip" => match g.cartan_type() {
            A => (0..r).rev().collect(),
            D => {
                let mut p: Vec<usize> = (0..r).collect();
                p.swap(r - 2, r - 1);
                p
            }
            E if r == 6 => vec![5, 1, 4, 3, 2, 0],
            _ => return Err(Error::NotDiagramSymmetry(vec![])),
        },
        "triality" | "rotation" if g.cartan_type() == D && r == 4 => vec![2, 1, 3, 0],
        other => other
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1)
                    .ok_or_else(|| Error::Parse(format!("bad permutation {other:?}")))
            })
            .collect::<Result<_>>()?,
    };
    Ok(perm)
}

#[derive(Clone, Debug)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub order: usize,
    pub e: SparseVec,
    action: Vec<(usize, Q)>,
    /// Smallest `k` with `(ad e)^k = 0` on `g`.
    pub nilpotency: usize,
}

impl Automorphism {
    /// `μ` from a diagram symmetry, with `e = 0`.
    pub fn diagram(g: &LieAlgebraData, perm: &[usize]) -> Result<Self> {
        use super::CartanType::*;
        let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
        if !identity && !matches!(g.cartan_type(), A | D | E) {
            return Err(Error::NotDiagramSymmetry(perm.to_vec()));
        }
        let action = signed_action(g, perm)?;
        let mut order = 1;
        loop {
            let mut ok = true;
            for i in 0..g.dim() {
                let (j, c) = power_image(&action, i, order);
                if j != i || !c.is_one() {
                    ok = false;
                    break;
                }
            }
            if ok {
                break;
            }
            order += 1;
        }
        let aut = Self {
            perm: perm.to_vec(),
            order,
            e: SparseVec::new(),
            action,
            nilpotency: 1,
        };
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let lhs = aut.mu(g.bracket_basis(a, b));
                let rhs = g.bracket(&aut.mu(&SparseVec::unit(a)), &aut.mu(&SparseVec::unit(b)));
                if lhs != rhs {
                    return Err(Error::Automorphism("μ does not preserve brackets".into()));
                }
            }
        }
        Ok(aut)
    }

    pub fn trivial(g: &LieAlgebraData) -> Self {
        Self::diagram(g, &(0..g.rank()).collect::<Vec<_>>()).expect("identity is a symmetry")
    }

    /// Attaches a nilpotent `e ∈ g^[0]`.
    pub fn with_nilpotent(mut self, g: &LieAlgebraData, e: SparseVec) -> Result<Self> {
        if self.mu(&e) != e {
            return Err(Error::NotFixed);
        }
        let n = g.dim();
        let mut k = 0;
        let mut cols: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
        while cols.iter().any(|c| !c.is_zero()) {
            if k > n {
                return Err(Error::Automorphism("e is not ad-nilpotent".into()));
            }
            cols = cols.iter().map(|c| g.bracket(&e, c)).collect();
            k += 1;
        }
        self.nilpotency = k.max(1);
        self.e = e;
        Ok(self)
    }

    pub fn is_inner(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn is_diagram(&self) -> bool {
        self.e.is_zero()
    }

    pub fn basis_image(&self, i: usize) -> (usize, &Q) {
        let (j, c) = &self.action[i];
        (*j, c)
    }

    pub fn mu(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.iter() {
            let (j, s) = &self.action[i];
            out.add_term(*j, c * s);
        }
        out
    }

    /// `exp(ad e) x`, a finite sum.
    pub fn exp_ad_e(&self, g: &LieAlgebraData, x: &SparseVec) -> SparseVec {
        let mut out = x.clone();
        let mut term = x.clone();
        let mut k = 1i64;
        loop {
            term = g.bracket(&self.e, &term).scaled(&crate::rational::qr(1, k));
            if term.is_zero() {
                break;
            }
            out.add(&term);
            k += 1;
        }
        out
    }

    /// `σ = μ·exp(ad e)`
    pub fn sigma(&self, g: &LieAlgebraData, x: &SparseVec) -> SparseVec {
        self.mu(&self.exp_ad_e(g, x))
    }

    /// Orbits of basis indices under `μ` with the sign accumulated around each.
    pub fn orbits(&self) -> Vec<(Vec<usize>, Q)> {
        let n = self.action.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let (mut j, mut s) = (self.action[start].0, self.action[start].1.clone());
            while j != start {
                seen[j] = true;
                orbit.push(j);
                s *= &self.action[j].1;
                j = self.action[j].0;
            }
            out.push((orbit, s));
        }
        out
    }

    pub fn to_json(&self, g: &LieAlgebraData) -> serde_json::Value {
        let action: Vec<serde_json::Value> = self
            .action
            .iter()
            .map(|(j, c)| serde_json::json!([j, to_fraction_string(c)]))
            .collect();
        serde_json::json!({
            "mu_perm": self.perm,
            "order_T": self.order,
            "e": g.element_string(&self.e),
            "is_inner": self.is_inner(),
            "is_diagram": self.is_diagram(),
            "nilpotency": self.nilpotency,
            "action": action,
        })
    }
}

fn power_image(action: &[(usize, Q)], i: usize, k: usize) -> (usize, Q) {
    let (mut j, mut c) = (i, Q::one());
    for _ in 0..k {
        let (nj, s) = &action[j];
        c *= s;
        j = *nj;
    }
    (j, c)
}

/// Smallest `k` with `(ad e)^k v = 0`.
pub fn ad_e_block_size(g: &LieAlgebraData, aut: &Automorphism, v: &SparseVec) -> Result<usize> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut k = 0;
    let mut w = v.clone();
    while !w.is_zero() {
        w = g.bracket(&aut.e, &w);
        k += 1;
    }
    Ok(k)
}

/// `g = ⊕ g^[j]`, `μ = ζ_T^j` on `g^[j]`, bases with coefficients in `Q(ζ_T)`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub order: usize,
    pub components: Vec<Vec<Vec<(usize, Cyclo)>>>,
}

impl EigenDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }

    /// Rational bases, available when `T ≤ 2`.
    pub fn rational_components(&self) -> Option<Vec<Vec<SparseVec>>> {
        self.components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|v| {
                        v.iter()
                            .map(|(i, c)| c.as_rational().map(|x| (*i, x)))
                            .collect::<Option<Vec<_>>>()
                            .map(SparseVec::from_pairs)
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|comp| {
                serde_json::json!(comp
                    .iter()
                    .map(|v| v
                        .iter()
                        .map(|(i, c)| serde_json::json!([i, c.to_strings()]))
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            })
            .collect();
        serde_json::json!({
            "order_T": self.order,
            "dims": self.dims(),
            "components": comps,
        })
    }
}

/// Eigenvectors `Σ_k λ^{-k} μ^k b` for every orbit and every `λ` with `λ^s = sign`.
pub fn eigenspace_decomposition(g: &LieAlgebraData, aut: &Automorphism) -> EigenDecomposition {
    let t = aut.order;
    let mut components = vec![Vec::new(); t];
    for (orbit, sign) in aut.orbits() {
        let s = orbit.len();
        for j in 0..t {
            // λ = ζ_T^j must satisfy λ^s = sign.
            let lam_s = Cyclo::zeta_pow(t, (j * s) as i64);
            if lam_s != Cyclo::from_q(t, sign.clone()) {
                continue;
            }
            let mut v: Vec<(usize, Cyclo)> = Vec::new();
            let (mut idx, mut c) = (orbit[0], Q::one());
            for k in 0..s {
                let coef = Cyclo::zeta_pow(t, -((j * k) as i64)).scale(&c);
                v.push((idx, coef));
                let (nj, sg) = &aut.action[idx];
                c *= sg;
                idx = *nj;
            }
            v.sort_by_key(|(i, _)| *i);
            components[j].push(v);
        }
    }
    debug_assert_eq!(components.iter().map(|c| c.len()).sum::<usize>(), g.dim());
    for comp in &mut components {
        comp.sort_by_key(|v| v.iter().map(|(i, _)| *i).min());
    }
    EigenDecomposition {
        order: t,
        components,
    }
}

/// `μ`-fixed vector spanning the root space of the highest root of `g^[0]`.
pub fn highest_root_vector_fixed(g: &LieAlgebraData, aut: &Automorphism) -> SparseVec {
    let mut best: Option<(i64, SparseVec)> = None;
    for (orbit, sign) in aut.orbits() {
        if !sign.is_one() {
            continue;
        }
        let BasisKind::Pos(r) = g.kinds[orbit[0]] else {
            continue;
        };
        let h = super::RootSystem::height(&g.roots.positive[r]);
        if best.as_ref().map_or(true, |(bh, _)| h > *bh) {
            let mut v = SparseVec::new();
            let (mut idx, mut c) = (orbit[0], Q::one());
            for _ in 0..orbit.len() {
                v.add_term(idx, c.clone());
                let (nj, sg) = &aut.action[idx];
                c *= sg;
                idx = *nj;
            }
            best = Some((h, v));
        }
    }
    best.map(|(_, v)| v).unwrap_or_else(SparseVec::new)
}
