//! Cartan data and positive roots for the simple types, Bourbaki labeling.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{q, qr, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            "D" => Ok(Self::D),
            "E" => Ok(Self::E),
            "F" => Ok(Self::F),
            "G" => Ok(Self::G),
            other => Err(Error::InvalidType {
                label: other.to_string(),
                rank: 0,
            }),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
            Self::F => 'F',
            Self::G => 'G',
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Self::A | Self::D | Self::E)
    }
}

/// Checks the (type, rank) pair. `allow_small_d` admits D3 for internal folding.
pub fn validate(t: CartanType, rank: usize, allow_small_d: bool) -> Result<()> {
    let ok = match t {
        CartanType::A => rank >= 1,
        CartanType::B | CartanType::C => rank >= 2,
        CartanType::D => rank >= 4 || (allow_small_d && rank == 3),
        CartanType::E => (6..=8).contains(&rank),
        CartanType::F => rank == 4,
        CartanType::G => rank == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidType {
            label: t.letter().to_string(),
            rank,
        })
    }
}

/// Gram matrix `(α_i, α_j)` of the simple roots, long roots of length 2.
pub fn simple_inner_products(t: CartanType, n: usize) -> Vec<Vec<Q>> {
    let mut m = vec![vec![Q::zero(); n]; n];
    let edge = |m: &mut Vec<Vec<Q>>, i: usize, j: usize, v: Q| {
        m[i][j] = v.clone();
        m[j][i] = v;
    };
    match t {
        CartanType::A => {
            for i in 0..n {
                m[i][i] = q(2);
            }
            for i in 0..n.saturating_sub(1) {
                edge(&mut m, i, i + 1, q(-1));
            }
        }
        CartanType::B => {
            for i in 0..n {
                m[i][i] = if i + 1 == n { q(1) } else { q(2) };
            }
            for i in 0..n - 1 {
                edge(&mut m, i, i + 1, q(-1));
            }
        }
        CartanType::C => {
            for i in 0..n {
                m[i][i] = if i + 1 == n { q(2) } else { q(1) };
            }
            for i in 0..n - 1 {
                let v = if i + 2 == n { q(-1) } else { qr(-1, 2) };
                edge(&mut m, i, i + 1, v);
            }
        }
        CartanType::D => {
            for i in 0..n {
                m[i][i] = q(2);
            }
            for i in 0..n - 2 {
                edge(&mut m, i, i + 1, q(-1));
            }
            edge(&mut m, n - 3, n - 1, q(-1));
        }
        CartanType::E => {
            for i in 0..n {
                m[i][i] = q(2);
            }
            // 1-3-4-5-6-7-8 chain with 2 attached to 4.
            edge(&mut m, 0, 2, q(-1));
            edge(&mut m, 1, 3, q(-1));
            for i in 2..n - 1 {
                edge(&mut m, i, i + 1, q(-1));
            }
        }
        CartanType::F => {
            m[0][0] = q(2);
            m[1][1] = q(2);
            m[2][2] = q(1);
            m[3][3] = q(1);
            edge(&mut m, 0, 1, q(-1));
            edge(&mut m, 1, 2, q(-1));
            edge(&mut m, 2, 3, qr(-1, 2));
        }
        CartanType::G => {
            m[0][0] = qr(2, 3);
            m[1][1] = q(2);
            edge(&mut m, 0, 1, q(-1));
        }
    }
    m
}

/// Root system data in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `(α_i, α_j)`
    pub inner: Vec<Vec<Q>>,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots ordered by height, then lexicographically.
    pub positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn new(t: CartanType, rank: usize) -> Result<Self> {
        validate(t, rank, true)?;
        let inner = simple_inner_products(t, rank);
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let v = q(2) * inner[i][j].clone() / inner[i][i].clone();
                        crate::rational::q_to_i64(&v).expect("integral Cartan matrix")
                    })
                    .collect()
            })
            .collect();
        let mut positive: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: std::collections::HashSet<Vec<i64>> = positive.iter().cloned().collect();
        let mut layer = positive.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..rank {
                    // q = largest k with beta - k α_i a root
                    let mut qmax = 0;
                    let mut probe = beta.clone();
                    loop {
                        probe[i] -= 1;
                        if known.contains(&probe) {
                            qmax += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[i][j]).sum();
                    let p = qmax - pairing;
                    if p > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            next.sort_by(|a, b| a.cmp(b));
            positive.extend(next.iter().cloned());
            layer = next;
        }
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let index = positive
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        Ok(Self {
            cartan_type: t,
            rank,
            inner,
            cartan,
            positive,
            index,
        })
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    pub fn positive_index(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn is_root(&self, root: &[i64]) -> bool {
        if root.iter().all(|&c| c >= 0) {
            self.index.contains_key(root)
        } else if root.iter().all(|&c| c <= 0) {
            let neg: Vec<i64> = root.iter().map(|c| -c).collect();
            self.index.contains_key(&neg)
        } else {
            false
        }
    }

    /// `(β, γ)` for vectors in simple-root coordinates.
    pub fn inner_product(&self, a: &[i64], b: &[i64]) -> Q {
        let mut acc = Q::zero();
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] != 0 {
                    acc += q(a[i] * b[j]) * self.inner[i][j].clone();
                }
            }
        }
        acc
    }

    /// `⟨β, α_i^∨⟩`
    pub fn pairing_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| beta[j] * self.cartan[i][j]).sum()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().expect("nonempty root system")
    }

    /// Coroot of `β` in simple-coroot coordinates: `β^∨ = Σ c_i (α_i,α_i)/(β,β) α_i^∨`.
    pub fn coroot_coords(&self, beta: &[i64]) -> Vec<Q> {
        let bb = self.inner_product(beta, beta);
        (0..self.rank)
            .map(|i| q(beta[i]) * self.inner[i][i].clone() / bb.clone())
            .collect()
    }

    /// `ρ` in simple-root coordinates.
    pub fn rho(&self) -> Vec<Q> {
        let mut r = vec![Q::zero(); self.rank];
        for beta in &self.positive {
            for i in 0..self.rank {
                r[i] += qr(beta[i], 2);
            }
        }
        r
    }

    /// Dual Coxeter number `1 + (θ, ρ)` with `(θ, θ) = 2`.
    pub fn dual_coxeter(&self) -> i64 {
        let theta = self.highest_root().to_vec();
        let rho = self.rho();
        let mut acc = Q::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += q(theta[i]) * rho[j].clone() * self.inner[i][j].clone();
            }
        }
        crate::rational::q_to_i64(&(acc + q(1))).expect("integral dual Coxeter number")
    }

    /// Fundamental weights in simple-root coordinates: inverse Cartan transposed.
    pub fn fundamental_weights(&self) -> Vec<Vec<Q>> {
        let r = self.rank;
        // ω_i = Σ_j M_ij α_j with ⟨ω_i, α_k^∨⟩ = δ_ik, i.e. M · C^T = I.
        let ct: Vec<Vec<Q>> = (0..r)
            .map(|j| (0..r).map(|k| q(self.cartan[k][j])).collect())
            .collect();
        crate::linalg::mat_inverse(&ct).expect("Cartan matrix invertible")
    }

    /// Diagram symmetries of order > 1 preserve the Cartan matrix.
    pub fn is_diagram_symmetry(&self, perm: &[usize]) -> bool {
        let n = self.rank;
        if perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        (0..n).all(|i| (0..n).all(|j| self.cartan[perm[i]][perm[j]] == self.cartan[i][j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(t: CartanType, n: usize) -> usize {
        RootSystem::new(t, n).unwrap().positive.len()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(count(CartanType::A, 1), 1);
        assert_eq!(count(CartanType::A, 3), 6);
        assert_eq!(count(CartanType::B, 3), 9);
        assert_eq!(count(CartanType::C, 3), 9);
        assert_eq!(count(CartanType::D, 4), 12);
        assert_eq!(count(CartanType::E, 6), 36);
        assert_eq!(count(CartanType::E, 7), 63);
        assert_eq!(count(CartanType::E, 8), 120);
        assert_eq!(count(CartanType::F, 4), 24);
        assert_eq!(count(CartanType::G, 2), 6);
    }

    #[test]
    fn dual_coxeter_numbers() {
        let h = |t, n| RootSystem::new(t, n).unwrap().dual_coxeter();
        assert_eq!(h(CartanType::A, 1), 2);
        assert_eq!(h(CartanType::A, 4), 5);
        assert_eq!(h(CartanType::B, 3), 5);
        assert_eq!(h(CartanType::C, 3), 4);
        assert_eq!(h(CartanType::D, 5), 8);
        assert_eq!(h(CartanType::E, 6), 12);
        assert_eq!(h(CartanType::E, 8), 30);
        assert_eq!(h(CartanType::F, 4), 9);
        assert_eq!(h(CartanType::G, 2), 4);
    }

    #[test]
    fn highest_root_is_long() {
        for (t, n) in [(CartanType::B, 3), (CartanType::C, 3), (CartanType::G, 2), (CartanType::F, 4)] {
            let rs = RootSystem::new(t, n).unwrap();
            let th = rs.highest_root().to_vec();
            assert_eq!(rs.inner_product(&th, &th), q(2));
        }
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(validate(CartanType::E, 5, false).is_err());
        assert!(validate(CartanType::D, 3, false).is_err());
        assert!(validate(CartanType::G, 3, false).is_err());
        assert!(validate(CartanType::A, 0, false).is_err());
    }
}
