//! A rational basis of `μ`-eigenvectors, for automorphisms of order at most 2.
//!
//! Each orbit `{b}` or `{b, μb}` of the signed Chevalley permutation gives
//! `b` itself, or `b + μb` (class 0) and `b - μb` (class 1). For trivial `μ`
//! the adapted basis is the Chevalley basis. Vectors carry their class, the
//! weight for `h^[0] = span{Σ_{i∈O} h_i}` and the height of the source root.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::automorphism::Automorphism;
use super::{BasisKind, LieAlgebraData};
use crate::error::{Error, Result};
use crate::linalg::{mat_inverse, SparseVec};
use crate::rational::{q, Q};
use crate::uea::StructureConstants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Pos,
    Cartan,
    Neg,
}

#[derive(Clone, Debug)]
pub struct AdaptedVector {
    /// Chevalley coordinates.
    pub vec: SparseVec,
    pub class: usize,
    pub kind: Kind,
    /// Signed height of the source root (0 on the Cartan part).
    pub height: i64,
    /// `h^[0]`-weight evaluated on `Σ_{i∈O} h_i` per node orbit `O`.
    pub weight: Vec<i64>,
    pub label: String,
}

/// Chevalley generators of `g^[0]`: `[ē, f̄] = h̄`, `ᾱ(h̄) = 2`.
#[derive(Clone, Debug)]
pub struct SimpleGenerator {
    pub e: usize,
    pub f: usize,
    pub h: usize,
    /// `f̄ = scale · f_O`, `h̄ = scale · h_O` for the adapted `f_O`, `h_O`.
    pub scale: Q,
}

#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub order: usize,
    pub vectors: Vec<AdaptedVector>,
    pub node_orbits: Vec<Vec<usize>>,
    pub structure: Arc<StructureConstants>,
    form: Vec<SparseVec>,
    inverse: Vec<SparseVec>,
    theta: Vec<(usize, Q)>,
    /// `e` in adapted coordinates.
    pub e: SparseVec,
    ad_e: Vec<SparseVec>,
    pub simple: Vec<SimpleGenerator>,
    /// `cartan0[j][k] = ᾱ_k(h̄_j)`
    pub cartan0: Vec<Vec<i64>>,
    pub fixed: Vec<usize>,
    pub fixed_structure: Arc<StructureConstants>,
}

impl AdaptedBasis {
    pub fn new(g: &LieAlgebraData, aut: &Automorphism) -> Result<Self> {
        if aut.order > 2 {
            return Err(Error::Unsupported(format!(
                "module constructions need an automorphism of order at most 2, got {}",
                aut.order
            )));
        }
        let r = g.rank();
        let mut node_orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..r {
            if node_orbits.iter().any(|o| o.contains(&i)) {
                continue;
            }
            let mut o = vec![i];
            let mut j = aut.perm[i];
            while j != i {
                o.push(j);
                j = aut.perm[j];
            }
            o.sort();
            node_orbits.push(o);
        }
        let mut raw: Vec<(SparseVec, usize, usize)> = Vec::new();
        for (orbit, sign) in aut.orbits() {
            let b = orbit[0];
            if orbit.len() == 1 {
                let class = if sign.is_one() { 0 } else { 1 };
                raw.push((SparseVec::unit(b), class, b));
            } else {
                let (j, s) = aut.basis_image(b);
                let plus = SparseVec::from_pairs([(b, q(1)), (j, s.clone())]);
                let minus = SparseVec::from_pairs([(b, q(1)), (j, -s.clone())]);
                raw.push((plus, 0, b.min(j)));
                raw.push((minus, 1, b.min(j)));
            }
        }
        let kind_of = |k: &BasisKind| match k {
            BasisKind::Pos(_) => Kind::Pos,
            BasisKind::Cartan(_) => Kind::Cartan,
            BasisKind::Neg(_) => Kind::Neg,
        };
        raw.sort_by_key(|(_, c, b)| (kind_of(&g.kinds[*b]), *b, *c));
        let mut vectors = Vec::with_capacity(raw.len());
        for (v, class, b) in raw {
            let (height, root): (i64, Option<Vec<i64>>) = match g.kinds[b] {
                BasisKind::Pos(i) => {
                    let beta = g.roots.positive[i].clone();
                    (beta.iter().sum(), Some(beta))
                }
                BasisKind::Neg(i) => {
                    let beta: Vec<i64> = g.roots.positive[i].iter().map(|c| -c).collect();
                    (beta.iter().sum(), Some(beta))
                }
                BasisKind::Cartan(_) => (0, None),
            };
            let weight = node_orbits
                .iter()
                .map(|o| {
                    root.as_ref()
                        .map_or(0, |beta| o.iter().map(|&i| g.roots.pairing_coroot(beta, i)).sum())
                })
                .collect();
            let label = if v.len() == 1 {
                g.labels[b].clone()
            } else {
                format!("({})", g.element_string(&v).replace(' ', ""))
            };
            vectors.push(AdaptedVector {
                vec: v,
                class,
                kind: kind_of(&g.kinds[b]),
                height,
                weight,
                label,
            });
        }
        let n = vectors.len();
        // Chevalley -> adapted: invert the block of each orbit.
        let mut inverse = vec![SparseVec::new(); n];
        let mut done = vec![false; n];
        for a in 0..n {
            if done[a] {
                continue;
            }
            let support: Vec<usize> = vectors[a].vec.indices().collect();
            let members: Vec<usize> = (0..n)
                .filter(|&k| vectors[k].vec.indices().all(|i| support.contains(&i)))
                .collect();
            let mat: Vec<Vec<Q>> = support
                .iter()
                .map(|&i| members.iter().map(|&k| vectors[k].vec.get(i)).collect())
                .collect();
            let inv = mat_inverse(&mat)
                .ok_or_else(|| Error::Automorphism("singular orbit block".into()))?;
            // b_i = Σ_k (M⁻¹)_{k,i} v_k
            for (row, &i) in support.iter().enumerate() {
                let mut img = SparseVec::new();
                for (col, &k) in members.iter().enumerate() {
                    img.add_term(k, inv[col][row].clone());
                }
                inverse[i] = img;
            }
            for k in members {
                done[k] = true;
            }
        }
        let to_adapted = |x: &SparseVec| -> SparseVec {
            let mut out = SparseVec::new();
            for (i, c) in x.iter() {
                out.add_scaled(&inverse[i], c);
            }
            out
        };
        let mut brackets = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                brackets.push(to_adapted(&g.bracket(&vectors[a].vec, &vectors[b].vec)));
            }
        }
        let form: Vec<SparseVec> = (0..n)
            .map(|a| {
                SparseVec::from_pairs(
                    (0..n).map(|b| (b, g.invariant_form(&vectors[a].vec, &vectors[b].vec))),
                )
            })
            .collect();
        let mut theta = Vec::with_capacity(n);
        for v in &vectors {
            let w = to_adapted(&g.chevalley_involution(&v.vec).neg());
            if w.len() != 1 {
                return Err(Error::Automorphism("μ does not commute with the Chevalley involution".into()));
            }
            let (j, c) = w.iter().next().map(|(j, c)| (j, c.clone())).unwrap();
            if vectors[j].class != v.class {
                return Err(Error::Automorphism("involution changes the class".into()));
            }
            theta.push((j, c));
        }
        let e = to_adapted(&aut.e);
        if e.iter().any(|(i, _)| vectors[i].class != 0) {
            return Err(Error::NotFixed);
        }
        let labels: Vec<String> = vectors.iter().map(|v| v.label.clone()).collect();
        let structure = Arc::new(StructureConstants::new(
            format!("{}-adapted", g.type_label()),
            labels.clone(),
            brackets,
        ));
        let ad_e: Vec<SparseVec> = (0..n)
            .map(|b| {
                let mut out = SparseVec::new();
                for (a, c) in e.iter() {
                    out.add_scaled(structure.bracket_basis(a, b), c);
                }
                out
            })
            .collect();
        // Simple generators of g^[0].
        let find = |target: &SparseVec| -> Result<usize> {
            let t = to_adapted(target);
            let hit = t.iter().next().filter(|(_, c)| t.len() == 1 && c.is_one()).map(|(k, _)| k);
            hit.ok_or_else(|| Error::Automorphism("simple generator is not an adapted vector".into()))
        };
        let mut simple = Vec::new();
        for o in &node_orbits {
            let ev = SparseVec::from_pairs(o.iter().map(|&i| (g.e_index(i), q(1))));
            let fv = SparseVec::from_pairs(o.iter().map(|&i| (g.f_index(i), q(1))));
            let hv = SparseVec::from_pairs(o.iter().map(|&i| (g.h_index(i), q(1))));
            let (ei, fi, hi) = (find(&ev)?, find(&fv)?, find(&hv)?);
            let t = structure.bracket_basis(hi, ei).get(ei);
            if t.is_zero() {
                return Err(Error::Automorphism("degenerate fixed simple root".into()));
            }
            simple.push(SimpleGenerator {
                e: ei,
                f: fi,
                h: hi,
                scale: q(2) / t,
            });
        }
        let cartan0 = simple
            .iter()
            .map(|sj| {
                simple
                    .iter()
                    .map(|sk| {
                        let v = structure.bracket_basis(sj.h, sk.e).get(sk.e) * &sj.scale;
                        crate::rational::q_to_i64(&v).expect("integral Cartan matrix of g^[0]")
                    })
                    .collect()
            })
            .collect();
        let fixed: Vec<usize> = (0..n).filter(|&k| vectors[k].class == 0).collect();
        let pos_in_fixed = |k: usize| fixed.iter().position(|&x| x == k);
        let mut fb = Vec::with_capacity(fixed.len() * fixed.len());
        for &a in &fixed {
            for &b in &fixed {
                let v = structure.bracket_basis(a, b);
                fb.push(SparseVec::from_pairs(
                    v.iter().map(|(k, c)| (pos_in_fixed(k).expect("closed"), c.clone())),
                ));
            }
        }
        let fixed_structure = Arc::new(StructureConstants::new(
            format!("{}-fixed", g.type_label()),
            fixed.iter().map(|&k| labels[k].clone()).collect(),
            fb,
        ));
        Ok(Self {
            order: aut.order,
            vectors,
            node_orbits,
            structure,
            form,
            inverse,
            theta,
            e,
            ad_e,
            simple,
            cartan0,
            fixed,
            fixed_structure,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn class(&self, a: usize) -> usize {
        self.vectors[a].class
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        self.structure.bracket_basis(a, b)
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(self.bracket_basis(a, b), &(ca * cb));
            }
        }
        out
    }

    pub fn form_basis(&self, a: usize, b: usize) -> Q {
        self.form[a].get(b)
    }

    pub fn form(&self, x: &SparseVec, y: &SparseVec) -> Q {
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

    /// Chevalley coordinates to adapted coordinates.
    pub fn to_adapted(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.iter() {
            out.add_scaled(&self.inverse[i], c);
        }
        out
    }

    pub fn to_chevalley(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, c) in x.iter() {
            out.add_scaled(&self.vectors[a].vec, c);
        }
        out
    }

    /// The anti-involution `θ = -ω` on adapted vectors: `a ↦ c·b`.
    pub fn theta(&self, a: usize) -> (usize, &Q) {
        let (j, c) = &self.theta[a];
        (*j, c)
    }

    /// `[e, b]` in adapted coordinates.
    pub fn ad_e_basis(&self, b: usize) -> &SparseVec {
        &self.ad_e[b]
    }

    pub fn ad_e(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (b, c) in x.iter() {
            out.add_scaled(&self.ad_e[b], c);
        }
        out
    }

    /// Position of an adapted index inside the fixed subalgebra basis.
    pub fn fixed_position(&self, a: usize) -> Option<usize> {
        self.fixed.iter().position(|&x| x == a)
    }

    /// Eigenvalue of `h̄_j` on an adapted vector.
    pub fn fixed_weight(&self, a: usize) -> Vec<i64> {
        self.simple
            .iter()
            .zip(&self.node_orbits)
            .enumerate()
            .map(|(j, (s, _))| {
                crate::rational::q_to_i64(&(q(self.vectors[a].weight[j]) * &s.scale))
                    .expect("integral weight")
            })
            .collect()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.vectors[a].label
    }

    pub fn index_of_label(&self, l: &str) -> Option<usize> {
        self.vectors.iter().position(|v| v.label == l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::automorphism::named_permutation;
    use crate::liealg::{build_lie_algebra, CartanType};

    fn adapted(t: CartanType, n: usize, mu: &str) -> (LieAlgebraData, AdaptedBasis) {
        let g = build_lie_algebra(t, n).unwrap();
        let p = named_permutation(&g, mu).unwrap();
        let a = Automorphism::diagram(&g, &p).unwrap();
        let b = AdaptedBasis::new(&g, &a).unwrap();
        (g, b)
    }

    #[test]
    fn trivial_is_chevalley() {
        let (g, b) = adapted(CartanType::A, 2, "identity");
        for (i, v) in b.vectors.iter().enumerate() {
            assert_eq!(v.vec, SparseVec::unit(i));
            assert_eq!(v.label, g.labels[i]);
        }
        assert_eq!(b.cartan0, g.roots.cartan);
    }

    #[test]
    fn flip_fixed_types() {
        let (_, b) = adapted(CartanType::A, 2, "flip");
        assert_eq!(b.fixed.len(), 3);
        assert_eq!(b.cartan0, vec![vec![2]]);
        let (_, b) = adapted(CartanType::A, 3, "flip");
        assert_eq!(b.fixed.len(), 10);
        // C2 or B2: off-diagonal entries -1 and -2.
        let c = &b.cartan0;
        assert_eq!(c[0][1] * c[1][0], 2);
        let (_, b) = adapted(CartanType::A, 4, "flip");
        assert_eq!(b.fixed.len(), 10);
        assert_eq!(b.cartan0[0][1] * b.cartan0[1][0], 2);
    }

    #[test]
    fn classes_graded_by_bracket() {
        let (_, b) = adapted(CartanType::A, 3, "flip");
        for x in 0..b.dim() {
            for y in 0..b.dim() {
                for (z, _) in b.bracket_basis(x, y).iter() {
                    assert_eq!(b.class(z), (b.class(x) + b.class(y)) % 2);
                }
            }
        }
    }

    #[test]
    fn theta_is_anti_automorphism() {
        let (_, b) = adapted(CartanType::A, 2, "flip");
        let th = |x: &SparseVec| {
            let mut out = SparseVec::new();
            for (a, c) in x.iter() {
                let (j, s) = b.theta(a);
                out.add_term(j, c * s);
            }
            out
        };
        for x in 0..b.dim() {
            for y in 0..b.dim() {
                let lhs = th(b.bracket_basis(x, y));
                let rhs = b.bracket(&th(&SparseVec::unit(y)), &th(&SparseVec::unit(x)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_order_three() {
        let g = build_lie_algebra(CartanType::D, 4).unwrap();
        let p = named_permutation(&g, "triality").unwrap();
        let a = Automorphism::diagram(&g, &p).unwrap();
        assert!(matches!(AdaptedBasis::new(&g, &a), Err(Error::Unsupported(_))));
    }
}
