//! Finite-dimensional irreducible modules `L(λ)` of `g^[0]`.
//!
//! Weight spaces `λ - Σ n_j ᾱ_j` are built by height. At weight `n` the
//! candidates `f̄_j b` (with `b` of weight `n - e_j`) are identified with
//! their images under all raising operators; in an irreducible module a
//! vector below the top is zero iff every `ē_k` kills it, so this yields
//! `L(λ)` directly.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::adapted::AdaptedBasis;
use crate::linalg::{mat_mul, mat_sub, mat_zero, Matrix, SparseVec, TrackedSubspace};
use crate::rational::{q, Q};

const MAX_DIM: usize = 20_000;

#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub lambda: Vec<i64>,
    pub dim: usize,
    /// Action of each class-0 adapted vector; `None` off `g^[0]`.
    pub mats: Vec<Option<Matrix>>,
    /// Contravariant form with `⟨x u, w⟩ = ⟨u, θ(x) w⟩`, `⟨v_λ, v_λ⟩ = 1`.
    pub gram: Matrix,
    /// `h̄_j`-eigenvalues of each basis vector.
    pub weights: Vec<Vec<i64>>,
}

impl FiniteModule {
    pub fn trivial(ab: &AdaptedBasis) -> Self {
        let r = ab.simple.len();
        Self::build(ab, &vec![0; r]).expect("trivial module")
    }

    pub fn build(ab: &AdaptedBasis, lambda: &[i64]) -> Result<Self> {
        let r = ab.simple.len();
        if lambda.len() != r || lambda.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant(format!("{lambda:?}")));
        }
        let cartan = &ab.cartan0;
        let weight_at = |n: &[usize]| -> Vec<i64> {
            (0..r)
                .map(|i| lambda[i] - (0..r).map(|j| n[j] as i64 * cartan[i][j]).sum::<i64>())
                .collect()
        };
        let unit = |n: &[usize], j: usize, up: bool| -> Option<Vec<usize>> {
            let mut m = n.to_vec();
            if up {
                m[j] += 1;
            } else {
                if m[j] == 0 {
                    return None;
                }
                m[j] -= 1;
            }
            Some(m)
        };
        let mut dims: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        // e_img[(j, n)][b]: ē_j on basis b of weight n, coordinates in n - e_j.
        let mut e_img: HashMap<(usize, Vec<usize>), Vec<SparseVec>> = HashMap::new();
        // f_img[(j, n)][b]: f̄_j on basis b of weight n, coordinates in n + e_j.
        let mut f_img: HashMap<(usize, Vec<usize>), Vec<SparseVec>> = HashMap::new();
        // origin[n][s] = (j, b): basis vector s of n is f̄_j b.
        let mut origin: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        let zero = vec![0usize; r];
        dims.insert(zero.clone(), 1);
        for j in 0..r {
            e_img.insert((j, zero.clone()), vec![SparseVec::new()]);
        }
        let mut level: Vec<Vec<usize>> = vec![zero];
        let mut total = 1;
        while !level.is_empty() {
            let mut next: Vec<Vec<usize>> = Vec::new();
            for n in &level {
                for j in 0..r {
                    let m = unit(n, j, true).unwrap();
                    if !next.contains(&m) {
                        next.push(m);
                    }
                }
            }
            next.sort();
            let mut built = Vec::new();
            for n in next {
                let mut cands = Vec::new();
                for j in 0..r {
                    if let Some(src) = unit(&n, j, false) {
                        if let Some(&d) = dims.get(&src) {
                            for b in 0..d {
                                cands.push((j, b, src.clone()));
                            }
                        }
                    }
                }
                // Block offsets for the concatenated raising images.
                let mut offs = Vec::with_capacity(r);
                let mut acc = 0;
                for k in 0..r {
                    offs.push(acc);
                    if let Some(t) = unit(&n, k, false) {
                        acc += dims.get(&t).copied().unwrap_or(0);
                    }
                }
                let mut images: Vec<Vec<SparseVec>> = Vec::with_capacity(cands.len());
                let mut ts = TrackedSubspace::new();
                let mut selected: Vec<usize> = Vec::new();
                for (ci, (j, b, src)) in cands.iter().enumerate() {
                    let mut per_k = Vec::with_capacity(r);
                    let mut flat = SparseVec::new();
                    for k in 0..r {
                        let mut img = SparseVec::new();
                        if let Some(t) = unit(&n, k, false) {
                            if dims.contains_key(&t) {
                                // f̄_j ē_k b
                                if let Some(mid) = unit(src, k, false) {
                                    if dims.contains_key(&mid) {
                                        let ekb = &e_img[&(k, src.clone())][*b];
                                        let fj = &f_img[&(*j, mid.clone())];
                                        for (x, c) in ekb.iter() {
                                            img.add_scaled(&fj[x], c);
                                        }
                                    }
                                }
                                if k == *j {
                                    img.add_term(*b, q(weight_at(src)[*j]));
                                }
                            }
                        }
                        for (x, c) in img.iter() {
                            flat.add_term(offs[k] + x, c.clone());
                        }
                        per_k.push(img);
                    }
                    if ts.insert(&flat) {
                        selected.push(ci);
                    }
                    images.push(per_k);
                }
                let d = selected.len();
                if d == 0 {
                    continue;
                }
                total += d;
                if total > MAX_DIM {
                    return Err(Error::Unsupported(format!("module L({lambda:?}) is too large")));
                }
                for k in 0..r {
                    e_img.insert(
                        (k, n.clone()),
                        selected.iter().map(|&ci| images[ci][k].clone()).collect(),
                    );
                }
                let pos: HashMap<usize, usize> =
                    selected.iter().enumerate().map(|(s, &ci)| (ci, s)).collect();
                for (ci, (j, b, src)) in cands.iter().enumerate() {
                    let mut flat = SparseVec::new();
                    for k in 0..r {
                        for (x, c) in images[ci][k].iter() {
                            flat.add_term(offs[k] + x, c.clone());
                        }
                    }
                    let combo = ts.express(&flat).expect("candidate lies in the span");
                    let coords = combo.map_indices(|i| pos[&i]);
                    let entry = f_img
                        .entry((*j, src.clone()))
                        .or_insert_with(|| vec![SparseVec::new(); dims[src]]);
                    entry[*b] = coords;
                }
                origin.insert(
                    n.clone(),
                    selected.iter().map(|&ci| (cands[ci].0, cands[ci].1)).collect(),
                );
                dims.insert(n.clone(), d);
                built.push(n);
            }
            level = built;
        }
        // Global numbering: by level, then weight.
        let mut order: Vec<Vec<usize>> = dims.keys().cloned().collect();
        order.sort_by_key(|n| (n.iter().sum::<usize>(), n.clone()));
        let mut offset: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut dim = 0;
        for n in &order {
            offset.insert(n.clone(), dim);
            dim += dims[n];
        }
        let mut e_mats = vec![mat_zero(dim, dim); r];
        let mut f_mats = vec![mat_zero(dim, dim); r];
        let mut weights = vec![Vec::new(); dim];
        for n in &order {
            let o = offset[n];
            for b in 0..dims[n] {
                weights[o + b] = weight_at(n);
            }
            for j in 0..r {
                if let Some(t) = unit(n, j, false) {
                    if let Some(imgs) = e_img.get(&(j, n.clone())) {
                        if let Some(&ot) = offset.get(&t) {
                            for (b, v) in imgs.iter().enumerate() {
                                for (x, c) in v.iter() {
                                    e_mats[j][ot + x][o + b] = c.clone();
                                }
                            }
                        }
                    }
                }
                if let Some(imgs) = f_img.get(&(j, n.clone())) {
                    let t = unit(n, j, true).unwrap();
                    let ot = offset[&t];
                    for (b, v) in imgs.iter().enumerate() {
                        for (x, c) in v.iter() {
                            f_mats[j][ot + x][o + b] = c.clone();
                        }
                    }
                }
            }
        }
        // Contravariant form, weight space by weight space.
        let mut gram = mat_zero(dim, dim);
        gram[0][0] = q(1);
        for n in order.iter().skip(1) {
            let o = offset[n];
            for (s, &(j, b)) in origin[n].iter().enumerate() {
                let src = unit(n, j, false).unwrap();
                let os = offset[&src];
                // ⟨f̄_j b, y⟩ = scale_j ⟨b, ē_j y⟩
                for y in 0..dims[n] {
                    let mut acc = Q::zero();
                    for t in 0..dims[&src] {
                        let c = &e_mats[j][os + t][o + y];
                        if !c.is_zero() {
                            acc += &gram[os + b][os + t] * c;
                        }
                    }
                    gram[o + s][o + y] = acc * &ab.simple[j].scale;
                }
            }
        }
        let mut mats: Vec<Option<Matrix>> = vec![None; ab.dim()];
        let mut closure = TrackedSubspace::new();
        let mut inserted: Vec<Matrix> = Vec::new();
        let mut queue: VecDeque<(SparseVec, Matrix)> = VecDeque::new();
        let mut gens: Vec<(SparseVec, Matrix)> = Vec::new();
        for (j, s) in ab.simple.iter().enumerate() {
            gens.push((SparseVec::unit(s.e), e_mats[j].clone()));
            let inv = q(1) / &s.scale;
            let fm: Matrix = f_mats[j]
                .iter()
                .map(|row| row.iter().map(|x| x * &inv).collect())
                .collect();
            gens.push((SparseVec::unit(s.f), fm));
        }
        for (v, m) in &gens {
            inserted.push(m.clone());
            if closure.insert(v) {
                queue.push_back((v.clone(), m.clone()));
            }
        }
        while let Some((x, xm)) = queue.pop_front() {
            if closure.dim() == ab.fixed.len() {
                break;
            }
            for (y, ym) in &gens {
                let z = ab.bracket(y, &x);
                if z.is_zero() {
                    continue;
                }
                let zm = mat_sub(&mat_mul(ym, &xm), &mat_mul(&xm, ym));
                inserted.push(zm.clone());
                if closure.insert(&z) {
                    queue.push_back((z, zm));
                }
            }
        }
        if closure.dim() != ab.fixed.len() {
            return Err(Error::Automorphism("generators do not span g^[0]".into()));
        }
        for &a in &ab.fixed {
            let combo = closure.express(&SparseVec::unit(a)).expect("spanning set");
            let mut m = mat_zero(dim, dim);
            for (k, c) in combo.iter() {
                for (row, src) in m.iter_mut().zip(&inserted[k]) {
                    for (x, y) in row.iter_mut().zip(src) {
                        if !y.is_zero() {
                            *x += y * c;
                        }
                    }
                }
            }
            mats[a] = Some(m);
        }
        Ok(Self {
            lambda: lambda.to_vec(),
            dim,
            mats,
            gram,
            weights,
        })
    }

    pub fn action(&self, a: usize) -> Option<&Matrix> {
        self.mats[a].as_ref()
    }
}

/// Weyl dimension formula, used as an independent check of [`FiniteModule`].
pub fn weyl_dimension(rs: &crate::liealg::RootSystem, lambda: &[i64]) -> Q {
    let rho: Vec<i64> = vec![1; rs.rank];
    let mut num = q(1);
    let mut den = q(1);
    for beta in &rs.positive {
        let co = rs.coroot_coords(beta);
        let mut a = Q::zero();
        let mut b = Q::zero();
        for i in 0..rs.rank {
            a += q(lambda[i] + rho[i]) * &co[i];
            b += q(rho[i]) * &co[i];
        }
        num *= a;
        den *= b;
    }
    num / den
}
