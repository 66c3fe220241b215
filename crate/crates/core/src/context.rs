//! One-stop construction of an algebra, an automorphism and its adapted basis.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hwmodule::FiniteModule;
use crate::liealg::adapted::AdaptedBasis;
use crate::liealg::automorphism::{highest_root_vector_fixed, named_permutation, Automorphism};
use crate::liealg::{build_lie_algebra, parse_type_label, LieAlgebraData};
use crate::linalg::SparseVec;
use crate::rational::{Grade, Q};
use crate::voa::InducedModule;

#[derive(Debug)]
pub struct AlgebraContext {
    pub g: Arc<LieAlgebraData>,
    pub aut: Automorphism,
    pub ab: Arc<AdaptedBasis>,
}

impl AlgebraContext {
    /// `algebra` like `A2`, `mu` a permutation name or list, `e` a Lie element
    /// in Chevalley labels (`f_theta`, `e_10 + e_01`, …).
    pub fn new(algebra: &str, mu: &str, e: Option<&str>) -> Result<Self> {
        let (t, r) = parse_type_label(algebra)?;
        let g = build_lie_algebra(t, r)?;
        let perm = named_permutation(&g, mu)?;
        let mut aut = Automorphism::diagram(&g, &perm)?;
        if let Some(e) = e {
            let x = g.parse_element(e)?;
            aut = aut.with_nilpotent(&g, x)?;
        }
        Self::from_parts(g, aut)
    }

    pub fn from_parts(g: LieAlgebraData, aut: Automorphism) -> Result<Self> {
        let ab = Arc::new(AdaptedBasis::new(&g, &aut)?);
        Ok(Self {
            g: Arc::new(g),
            aut,
            ab,
        })
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.g.roots.dual_coxeter()
    }

    pub fn order(&self) -> usize {
        self.aut.order
    }

    /// Adapted coordinates of a Chevalley-label expression.
    pub fn adapted(&self, s: &str) -> Result<SparseVec> {
        Ok(self.ab.to_adapted(&self.g.parse_element(s)?))
    }

    /// Adapted index of a basis symbol, accepting adapted labels too.
    pub fn adapted_index(&self, s: &str) -> Result<usize> {
        if let Some(i) = self.ab.index_of_label(s) {
            return Ok(i);
        }
        let x = self.adapted(s)?;
        let mut it = x.iter();
        match (it.next(), it.next()) {
            (Some((i, c)), None) if *c == Q::from_integer(1.into()) => Ok(i),
            _ => Err(Error::Parse(format!("{s:?} is not a single adapted basis vector"))),
        }
    }

    /// `e_θ` in adapted coordinates.
    pub fn theta_vector(&self) -> SparseVec {
        self.ab.to_adapted(&self.g.highest_root_vector())
    }

    /// `e_θ` when it lies in `g^[0]`, otherwise the highest root vector
    /// `e_{θ^0}` of `g^[0]`.
    pub fn theta_zero_vector(&self) -> SparseVec {
        let t = self.theta_vector();
        if t.indices().all(|i| self.ab.class(i) == 0) {
            t
        } else {
            self.ab.to_adapted(&highest_root_vector_fixed(&self.g, &self.aut))
        }
    }

    pub fn check_level(&self, level: &Q) -> Result<()> {
        if (level + Q::from_integer(self.dual_coxeter().into())).is_zero() {
            return Err(Error::CriticalLevel);
        }
        Ok(())
    }

    /// `V_g(0, ℓ)` truncated at `depth`.
    pub fn vacuum_module(&self, level: &Q, depth: i64) -> Result<Arc<InducedModule>> {
        self.check_level(level)?;
        let top = Arc::new(FiniteModule::trivial(&self.ab));
        Ok(Arc::new(InducedModule::new(
            self.ab.clone(),
            false,
            level.clone(),
            top,
            Grade::from_integer(depth),
        )?))
    }

    /// Untwisted `V_g(λ, ℓ)` (requires trivial `μ`; `λ` in fundamental-weight
    /// coordinates of `g`).
    pub fn verma(&self, lambda: &[i64], level: &Q, depth: Grade) -> Result<Arc<InducedModule>> {
        self.check_level(level)?;
        let top = Arc::new(FiniteModule::build(&self.ab, lambda)?);
        Ok(Arc::new(InducedModule::new(self.ab.clone(), false, level.clone(), top, depth)?))
    }

    /// `V_(g, μ)(λ, ℓ)` with `λ` a dominant weight of `g^[0]`.
    pub fn twisted_verma(&self, lambda: &[i64], level: &Q, depth: Grade) -> Result<Arc<InducedModule>> {
        self.check_level(level)?;
        let top = Arc::new(FiniteModule::build(&self.ab, lambda)?);
        Ok(Arc::new(InducedModule::new(self.ab.clone(), true, level.clone(), top, depth)?))
    }
}

impl AlgebraContext {
    /// Parses `2*e(-1)f(-1)1 - h(-2)1 + 3` into a vector of `m` (trivial top).
    /// Factors are `x(m)` with `x` an adapted label or a Chevalley expression
    /// in parentheses; a trailing `1` is optional.
    pub fn parse_state(&self, m: &InducedModule, s: &str) -> Result<SparseVec> {
        if m.top.dim != 1 {
            return Err(Error::Unsupported("state parsing needs a one-dimensional top".into()));
        }
        let mut out = SparseVec::new();
        for (c, body) in crate::text::split_terms(s)? {
            let mut x = m.vacuum();
            if let Some(body) = body {
                for (label, mode) in split_factors(&body)?.into_iter().rev() {
                    let a = match self.ab.index_of_label(&label) {
                        Some(i) => SparseVec::unit(i),
                        None => self.adapted(label.trim_start_matches('(').trim_end_matches(')'))?,
                    };
                    x = m.act_element(&a, crate::rational::parse_grade(&mode)?, &x)?;
                }
            }
            out.add_scaled(&x, &c);
        }
        Ok(out)
    }
}

fn balanced(chars: &[char], start: usize) -> Result<usize> {
    let mut depth = 0;
    for (i, &ch) in chars.iter().enumerate().skip(start) {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(Error::Parse(format!("unbalanced parentheses in {:?}", chars.iter().collect::<String>())))
}

fn split_factors(body: &str) -> Result<Vec<(String, String)>> {
    let chars: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if matches!(chars[i], '.' | '*') {
            i += 1;
            continue;
        }
        if chars[i] == '1' && i + 1 == chars.len() {
            break;
        }
        let label_end = if chars[i] == '(' {
            balanced(&chars, i)? + 1
        } else {
            i + chars[i..]
                .iter()
                .position(|&c| c == '(')
                .ok_or_else(|| Error::Parse(format!("factor without a mode in {body:?}")))?
        };
        if label_end >= chars.len() || chars[label_end] != '(' {
            return Err(Error::Parse(format!("factor without a mode in {body:?}")));
        }
        let mode_end = balanced(&chars, label_end)?;
        out.push((
            chars[i..label_end].iter().collect(),
            chars[label_end + 1..mode_end].iter().collect(),
        ));
        i = mode_end + 1;
    }
    Ok(out)
}
