//! Contravariant form on induced modules and the simple quotient.
//!
//! The anti-involution is `a(m) ↦ θ(a)(-m)`, `θ = -ω`, which on the top
//! restricts to the contravariant form of the finite module.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::Result;
use crate::linalg::{kernel, SparseVec, Subspace};
use crate::rational::{Grade, Q};
use crate::voa::module::InducedModule;

pub struct Shapovalov<'a> {
    m: &'a InducedModule,
    memo: RefCell<HashMap<(usize, usize), Q>>,
}

impl<'a> Shapovalov<'a> {
    pub fn new(m: &'a InducedModule) -> Self {
        Self {
            m,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Form on two basis vectors.
    pub fn basis(&self, s: usize, t: usize) -> Result<Q> {
        let (ss, ts) = (self.m.state(s), self.m.state(t));
        if ss.depth != ts.depth || self.m.weight_of(s) != self.m.weight_of(t) {
            return Ok(Q::zero());
        }
        if let Some(v) = self.memo.borrow().get(&(s, t)) {
            return Ok(v.clone());
        }
        let val = match ss.mono.first() {
            None => {
                if ts.mono.is_empty() {
                    self.m.top.gram[ss.top][ts.top].clone()
                } else {
                    Q::zero()
                }
            }
            Some(g) => {
                let rest = self.m.state_index(&ss.mono[1..], ss.top).expect("prefix state");
                let (b, c) = self.m.ab.theta(g.a);
                let image = self.m.act_basis(b, -g.mode, t)?;
                let mut acc = Q::zero();
                for (j, x) in image.iter() {
                    acc += x * self.basis(rest, j)?;
                }
                acc * c
            }
        };
        self.memo.borrow_mut().insert((s, t), val.clone());
        Ok(val)
    }

    pub fn pair(&self, x: &SparseVec, y: &SparseVec) -> Result<Q> {
        let mut acc = Q::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let v = self.basis(i, j)?;
                if !v.is_zero() {
                    acc += a * b * v;
                }
            }
        }
        Ok(acc)
    }

    /// Basis vectors grouped by depth and `h̄`-weight, in basis order.
    pub fn blocks(&self) -> Vec<((Grade, Vec<i64>), Vec<usize>)> {
        let mut map: BTreeMap<(Grade, Vec<i64>), Vec<usize>> = BTreeMap::new();
        for i in 0..self.m.dim() {
            map.entry((self.m.depth_of(i), self.m.weight_of(i))).or_default().push(i);
        }
        map.into_iter().collect()
    }

    pub fn block_gram(&self, block: &[usize]) -> Result<Vec<SparseVec>> {
        let mut rows = Vec::with_capacity(block.len());
        for &s in block {
            let mut r = SparseVec::new();
            for (k, &t) in block.iter().enumerate() {
                r.add_term(k, self.basis(s, t)?);
            }
            rows.push(r);
        }
        Ok(rows)
    }

    /// The radical of the form, which is the maximal proper submodule
    /// through the truncation depth.
    pub fn radical(&self) -> Result<Radical> {
        let mut sub = Subspace::new();
        let mut dims: BTreeMap<Grade, (usize, usize)> = BTreeMap::new();
        for ((depth, _), block) in self.blocks() {
            let rows = self.block_gram(&block)?;
            let ker = kernel(&rows, block.len());
            for v in &ker {
                sub.insert(&v.map_indices(|k| block[k]));
            }
            let e = dims.entry(depth).or_default();
            e.0 += block.len();
            e.1 += ker.len();
        }
        Ok(Radical {
            subspace: sub,
            graded: dims.into_iter().map(|(d, (n, r))| (d, n, r)).collect(),
        })
    }
}

/// Radical of the contravariant form; quotienting gives the simple module.
#[derive(Clone, Debug)]
pub struct Radical {
    pub subspace: Subspace,
    /// `(depth, dim of induced piece, dim of radical piece)`.
    pub graded: Vec<(Grade, usize, usize)>,
}

impl Radical {
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.subspace.reduce(v)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.subspace.contains(v)
    }

    pub fn quotient_dims(&self) -> Vec<(Grade, usize)> {
        self.graded.iter().map(|&(d, n, r)| (d, n - r)).collect()
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Checks that every mode of every adapted vector maps the radical into
    /// itself wherever the result stays within the truncation.
    pub fn check_submodule(&self, m: &InducedModule) -> Result<bool> {
        for row in self.subspace.rows() {
            let depth = m.depth_of(row.max_index().unwrap_or(0));
            for a in 0..m.ab.dim() {
                for k in mode_range(m, a, depth) {
                    if !self.contains(&m.act(a, k, row)?) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Admissible modes `k` of `a` with `0 ≤ depth - k ≤ cap`.
pub fn mode_range(m: &InducedModule, a: usize, depth: Grade) -> Vec<Grade> {
    let off = m.mode_offset(a);
    let lo = (depth - m.depth_cap - off).ceil().to_integer();
    let hi = (depth - off).floor().to_integer();
    (lo..=hi).map(|j| off + Grade::from_integer(j)).collect()
}

/// Submodule generated by `v` under all modes that keep the depth within the
/// truncation; an independent check on the radical.
pub fn generated_submodule(m: &InducedModule, seeds: &[SparseVec]) -> Result<Subspace> {
    let mut sub = Subspace::new();
    let mut queue: Vec<SparseVec> = Vec::new();
    for s in seeds {
        if sub.insert(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        let depth = v.indices().map(|i| m.depth_of(i)).max().unwrap_or_default();
        for a in 0..m.ab.dim() {
            for k in mode_range(m, a, depth) {
                let img = m.act(a, k, &v)?;
                if !img.is_zero() && sub.insert(&img) {
                    queue.push(img);
                }
            }
        }
    }
    Ok(sub)
}
