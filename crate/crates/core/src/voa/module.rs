//! Truncated induced modules over (twisted) affinizations.
//!
//! Generators are modes `a(m)` of adapted vectors. In the untwisted case
//! every mode is an integer; in the twisted case `a ∈ g^[j]` only has modes
//! `m ∈ j/T + Z`. A basis vector is a normally ordered monomial
//! `a_1(m_1) ⋯ a_k(m_k) u`, `(m_1, a_1) ≤ ⋯ ≤ (m_k, a_k)`, all `m_i < 0`,
//! applied to a basis vector `u` of the top. Brackets are
//! `[a(m), b(n)] = [a, b](m + n) + m δ_{m+n,0} ⟨a, b⟩ ℓ`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hwmodule::FiniteModule;
use crate::liealg::adapted::AdaptedBasis;
use crate::linalg::SparseVec;
use crate::rational::{grade_string, grade_to_q, Grade, Q};

/// A mode `a(m)` of adapted basis vector `a`; ordered by `(m, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub mode: Grade,
    pub a: usize,
}

impl Gen {
    pub fn new(a: usize, mode: Grade) -> Self {
        Self { mode, a }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub mono: Vec<Gen>,
    pub top: usize,
    pub depth: Grade,
}

#[derive(Debug)]
pub struct InducedModule {
    pub ab: Arc<AdaptedBasis>,
    pub twisted: bool,
    pub level: Q,
    pub top: Arc<FiniteModule>,
    pub depth_cap: Grade,
    states: Vec<State>,
    index: HashMap<(Vec<Gen>, usize), usize>,
    memo: RefCell<HashMap<(Gen, usize), SparseVec>>,
}

impl InducedModule {
    /// Builds the PBW basis up to `depth_cap`.
    pub fn new(
        ab: Arc<AdaptedBasis>,
        twisted: bool,
        level: Q,
        top: Arc<FiniteModule>,
        depth_cap: Grade,
    ) -> Result<Self> {
        if depth_cap.is_negative() {
            return Err(Error::Truncation {
                weight: grade_string(depth_cap),
                cap: "0".into(),
            });
        }
        let trivial_top = top.dim == 1 && top.lambda.iter().all(|&x| x == 0);
        if !twisted && ab.order > 1 && !trivial_top {
            return Err(Error::Unsupported(
                "untwisted modules with a nontrivial top need the trivial automorphism".into(),
            ));
        }
        let mut gens = Vec::new();
        for a in 0..ab.dim() {
            let off = Self::offset_for(&ab, twisted, a);
            let mut m = if off.is_zero() { -Grade::one() } else { off - Grade::one() };
            while -m <= depth_cap {
                gens.push(Gen::new(a, m));
                m -= Grade::one();
            }
        }
        gens.sort();
        let mut monos: Vec<(Vec<Gen>, Grade)> = Vec::new();
        fn rec(
            gens: &[Gen],
            start: usize,
            cap: Grade,
            cur: &mut Vec<Gen>,
            depth: Grade,
            out: &mut Vec<(Vec<Gen>, Grade)>,
        ) {
            out.push((cur.clone(), depth));
            for i in start..gens.len() {
                let d = depth - gens[i].mode;
                if d <= cap {
                    cur.push(gens[i]);
                    rec(gens, i, cap, cur, d, out);
                    cur.pop();
                }
            }
        }
        rec(&gens, 0, depth_cap, &mut Vec::new(), Grade::zero(), &mut monos);
        monos.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
        let mut states = Vec::with_capacity(monos.len() * top.dim);
        let mut index = HashMap::new();
        for (mono, depth) in monos {
            for u in 0..top.dim {
                index.insert((mono.clone(), u), states.len());
                states.push(State {
                    mono: mono.clone(),
                    top: u,
                    depth,
                });
            }
        }
        Ok(Self {
            ab,
            twisted,
            level,
            top,
            depth_cap,
            states,
            index,
            memo: RefCell::new(HashMap::new()),
        })
    }

    fn offset_for(ab: &AdaptedBasis, twisted: bool, a: usize) -> Grade {
        if twisted {
            Grade::new(ab.class(a) as i64, ab.order as i64)
        } else {
            Grade::zero()
        }
    }

    /// Representative in `[0, 1)` of the admissible modes of `a`.
    pub fn mode_offset(&self, a: usize) -> Grade {
        Self::offset_for(&self.ab, self.twisted, a)
    }

    pub fn order(&self) -> usize {
        if self.twisted {
            self.ab.order
        } else {
            1
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state_index(&self, mono: &[Gen], top: usize) -> Option<usize> {
        self.index.get(&(mono.to_vec(), top)).copied()
    }

    pub fn depth_of(&self, i: usize) -> Grade {
        self.states[i].depth
    }

    /// Indices of basis vectors of the given depth.
    pub fn graded_piece(&self, depth: Grade) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.states[i].depth == depth).collect()
    }

    /// The distinct depths `0, 1/T, 2/T, …` that occur, in order.
    pub fn depths(&self) -> Vec<Grade> {
        let mut d: Vec<Grade> = self.states.iter().map(|s| s.depth).collect();
        d.dedup();
        d
    }

    pub fn graded_dims(&self) -> Vec<(Grade, usize)> {
        let mut out: Vec<(Grade, usize)> = Vec::new();
        for s in &self.states {
            match out.last_mut() {
                Some((d, n)) if *d == s.depth => *n += 1,
                _ => out.push((s.depth, 1)),
            }
        }
        out
    }

    /// `h̄`-weight of a basis vector.
    pub fn weight_of(&self, i: usize) -> Vec<i64> {
        let s = &self.states[i];
        let mut w = self.top.weights[s.top].clone();
        for g in &s.mono {
            for (x, y) in w.iter_mut().zip(self.ab.fixed_weight(g.a)) {
                *x += y;
            }
        }
        w
    }

    /// `μ`-class of a basis vector: sum of the classes of its generators.
    pub fn class_of(&self, i: usize) -> usize {
        let t = self.ab.order;
        self.states[i].mono.iter().map(|g| self.ab.class(g.a)).sum::<usize>() % t.max(1)
    }

    pub fn check_mode(&self, a: usize, m: Grade) -> Result<()> {
        let off = self.mode_offset(a);
        if !(m - off).is_integer() {
            return Err(Error::ClassMismatch {
                mode: grade_string(m),
                class: grade_string(off),
            });
        }
        Ok(())
    }

    /// `a(m)` applied to basis vector `i`.
    pub fn act_basis(&self, a: usize, m: Grade, i: usize) -> Result<SparseVec> {
        self.check_mode(a, m)?;
        let d = self.states[i].depth - m;
        if d > self.depth_cap {
            return Err(Error::Truncation {
                weight: grade_string(d),
                cap: grade_string(self.depth_cap),
            });
        }
        if d.is_negative() {
            return Ok(SparseVec::new());
        }
        self.act_gen(Gen::new(a, m), i)
    }

    fn act_gen(&self, g: Gen, i: usize) -> Result<SparseVec> {
        if let Some(v) = self.memo.borrow().get(&(g, i)) {
            return Ok(v.clone());
        }
        let st = &self.states[i];
        let out = if g.mode.is_negative() {
            match st.mono.first() {
                Some(y) if *y < g => {
                    let y = *y;
                    let rest = self.index[&(st.mono[1..].to_vec(), st.top)];
                    let inner = self.act_gen(g, rest)?;
                    let mut out = self.act_vec_gen(y, &inner)?;
                    out.add(&self.bracket_on(g, y, rest)?);
                    out
                }
                _ => {
                    let mut mono = Vec::with_capacity(st.mono.len() + 1);
                    mono.push(g);
                    mono.extend_from_slice(&st.mono);
                    SparseVec::unit(self.index[&(mono, st.top)])
                }
            }
        } else {
            match st.mono.first() {
                None => {
                    if g.mode.is_zero() && self.top.action(g.a).is_none() {
                        SparseVec::new()
                    } else if g.mode.is_zero() {
                        let mat = self.top.action(g.a).expect("top action");
                        let mut out = SparseVec::new();
                        for (r, row) in mat.iter().enumerate() {
                            let c = &row[st.top];
                            if !c.is_zero() {
                                out.add_term(self.index[&(Vec::new(), r)], c.clone());
                            }
                        }
                        out
                    } else {
                        SparseVec::new()
                    }
                }
                Some(y) => {
                    let y = *y;
                    let rest = self.index[&(st.mono[1..].to_vec(), st.top)];
                    let inner = self.act_gen(g, rest)?;
                    let mut out = self.act_vec_gen(y, &inner)?;
                    out.add(&self.bracket_on(g, y, rest)?);
                    out
                }
            }
        };
        self.memo.borrow_mut().insert((g, i), out.clone());
        Ok(out)
    }

    fn act_vec_gen(&self, g: Gen, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            if (self.states[j].depth - g.mode).is_negative() {
                continue;
            }
            out.add_scaled(&self.act_gen(g, j)?, c);
        }
        Ok(out)
    }

    /// `[x(m), y(n)]` applied to basis vector `rest`.
    fn bracket_on(&self, x: Gen, y: Gen, rest: usize) -> Result<SparseVec> {
        let mode = x.mode + y.mode;
        let mut out = SparseVec::new();
        let depth = self.states[rest].depth - mode;
        if !depth.is_negative() {
            for (z, c) in self.ab.bracket_basis(x.a, y.a).iter() {
                out.add_scaled(&self.act_gen(Gen::new(z, mode), rest)?, c);
            }
        }
        if mode.is_zero() {
            let f = self.ab.form_basis(x.a, y.a);
            if !f.is_zero() {
                let c = grade_to_q(x.mode) * f * &self.level;
                out.add_term(rest, c);
            }
        }
        Ok(out)
    }

    /// `a(m) v` for a vector `v`.
    pub fn act(&self, a: usize, m: Grade, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.act_basis(a, m, i)?, c);
        }
        Ok(out)
    }

    /// `x(m) v` for a Lie element `x` in adapted coordinates.
    pub fn act_element(&self, x: &SparseVec, m: Grade, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (a, c) in x.iter() {
            out.add_scaled(&self.act(a, m, v)?, c);
        }
        Ok(out)
    }

    /// Applies a word of modes right to left: `g_1 ⋯ g_k v`.
    pub fn act_word(&self, word: &[Gen], v: &SparseVec) -> Result<SparseVec> {
        let mut cur = v.clone();
        for g in word.iter().rev() {
            cur = self.act(g.a, g.mode, &cur)?;
        }
        Ok(cur)
    }

    /// Highest weight vector of the top.
    pub fn vacuum(&self) -> SparseVec {
        SparseVec::unit(0)
    }

    /// Basis vector of a monomial given in any order.
    pub fn monomial(&self, word: &[Gen], top: usize) -> Result<SparseVec> {
        self.act_word(word, &SparseVec::unit(self.index[&(Vec::new(), top)]))
    }

    pub fn state_label(&self, i: usize) -> String {
        let s = &self.states[i];
        let mut parts: Vec<String> = s
            .mono
            .iter()
            .map(|g| format!("{}({})", self.ab.label(g.a), grade_string(g.mode)))
            .collect();
        if self.top.dim == 1 {
            parts.push("1".into());
        } else {
            parts.push(format!("u{}", s.top));
        }
        parts.join(" ")
    }

    pub fn vector_string(&self, v: &SparseVec) -> String {
        crate::text::format_terms(v.iter().map(|(i, c)| (c.clone(), format!("[{}]", self.state_label(i)))))
    }

    pub fn memo_size(&self) -> usize {
        self.memo.borrow().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::automorphism::{named_permutation, Automorphism};
    use crate::liealg::{build_lie_algebra, CartanType};
    use crate::rational::{grade, q};

    pub(crate) fn setup(
        t: CartanType,
        n: usize,
        mu: &str,
        twisted: bool,
        lambda: Option<Vec<i64>>,
        level: Q,
        cap: Grade,
    ) -> InducedModule {
        let g = build_lie_algebra(t, n).unwrap();
        let p = named_permutation(&g, mu).unwrap();
        let a = Automorphism::diagram(&g, &p).unwrap();
        let ab = Arc::new(AdaptedBasis::new(&g, &a).unwrap());
        let top = match lambda {
            Some(l) => FiniteModule::build(&ab, &l).unwrap(),
            None => FiniteModule::trivial(&ab),
        };
        InducedModule::new(ab, twisted, level, Arc::new(top), cap).unwrap()
    }

    fn g1(n: i64) -> Grade {
        grade(n, 1)
    }

    #[test]
    fn sl2_graded_dims() {
        let v = setup(CartanType::A, 1, "id", false, None, q(1), g1(2));
        let dims: Vec<usize> = v.graded_dims().into_iter().map(|x| x.1).collect();
        assert_eq!(dims, vec![1, 3, 9]);
        let v = setup(CartanType::A, 1, "id", false, None, q(3), g1(0));
        assert_eq!(v.dim(), 1);
        let w = setup(CartanType::A, 1, "id", false, Some(vec![1]), q(1), g1(1));
        assert_eq!(w.top.dim, 2);
    }

    #[test]
    fn basic_actions() {
        let l = q(5);
        let v = setup(CartanType::A, 1, "id", false, None, l.clone(), g1(3));
        let (e, h, f) = (0, 1, 2);
        let fv = v.act(f, g1(-1), &v.vacuum()).unwrap();
        assert_eq!(v.act(e, g1(1), &fv).unwrap(), v.vacuum().scaled(&l));
        for a in 0..3 {
            for m in 0..3 {
                assert!(v.act(a, g1(m), &v.vacuum()).unwrap().is_zero());
            }
        }
        // f(1) e(-1)^k 1 = k(ℓ - k + 1) e(-1)^{k-1} 1
        let mut ek = v.vacuum();
        let mut powers = vec![ek.clone()];
        for _ in 0..3 {
            ek = v.act(e, g1(-1), &ek).unwrap();
            powers.push(ek.clone());
        }
        for k in 1..=3i64 {
            let lhs = v.act(f, g1(1), &powers[k as usize]).unwrap();
            let rhs = powers[k as usize - 1].scaled(&(q(k) * (l.clone() - q(k) + q(1))));
            assert_eq!(lhs, rhs);
        }
        let _ = h;
        assert!(matches!(
            v.act(e, g1(-4), &v.vacuum()),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn affine_bracket_consistency() {
        let v = setup(CartanType::A, 2, "id", false, Some(vec![1, 0]), q(2), g1(2));
        let n = v.ab.dim();
        let probe: Vec<usize> = v.graded_piece(g1(1)).into_iter().take(4).collect();
        for a in 0..n {
            for b in 0..n {
                for (m, k) in [(1i64, -1i64), (0, -1), (-1, 1), (1, 0), (0, 0)] {
                    for &s in &probe {
                        let x = SparseVec::unit(s);
                        let lhs = v
                            .act(a, g1(m), &v.act(b, g1(k), &x).unwrap())
                            .unwrap()
                            .sub(&v.act(b, g1(k), &v.act(a, g1(m), &x).unwrap()).unwrap());
                        let mut rhs = v.act_element(v.ab.bracket_basis(a, b), g1(m + k), &x).unwrap();
                        if m + k == 0 {
                            rhs.add_scaled(&x, &(q(m) * v.ab.form_basis(a, b) * &v.level));
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_a2_dims() {
        let w = setup(CartanType::A, 2, "flip", true, None, q(1), g1(1));
        let dims = w.graded_dims();
        assert_eq!(dims[0], (grade(0, 1), 1));
        assert_eq!(dims[1], (grade(1, 2), 5));
        // weight 1: three fixed currents at -1 plus Sym² of the five at -1/2.
        assert_eq!(dims[2], (grade(1, 1), 3 + 15));
        assert!(matches!(
            w.act(0, grade(-1, 2), &w.vacuum()),
            Err(Error::ClassMismatch { .. })
        ));
    }
}
