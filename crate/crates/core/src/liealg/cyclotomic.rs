//! Elements of `Q(ζ_n)` as polynomials in `ζ` reduced modulo `Φ_n`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::{q, to_fraction_string, Q};

/// Integer coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut quo = vec![0i64; a.len() - db];
    for k in (0..quo.len()).rev() {
        let c = r[k + db];
        quo[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    quo
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    n: usize,
    c: Vec<Q>,
}

impl Cyclo {
    pub fn degree(n: usize) -> usize {
        cyclotomic_poly(n).len() - 1
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            c: vec![Q::zero(); Self::degree(n)],
        }
    }

    pub fn from_q(n: usize, x: Q) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = x;
        z
    }

    /// `ζ_n^k`
    pub fn zeta_pow(n: usize, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![Q::zero(); k + 1];
        raw[k] = q(1);
        Self::reduce(n, raw)
    }

    fn reduce(n: usize, mut raw: Vec<Q>) -> Self {
        let phi = cyclotomic_poly(n);
        let d = phi.len() - 1;
        while raw.len() > d {
            let top = raw.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let base = raw.len() - d;
            for (j, &pj) in phi.iter().take(d).enumerate() {
                raw[base + j] -= &top * q(pj);
            }
        }
        raw.resize(d, Q::zero());
        Self { n, c: raw }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn coefficients(&self) -> &[Q] {
        &self.c
    }

    pub fn scale(&self, x: &Q) -> Self {
        Self {
            n: self.n,
            c: self.c.iter().map(|y| y * x).collect(),
        }
    }

    /// Coefficients of `1, ζ, ζ², ...` as `num/den` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(to_fraction_string).collect()
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.n, o.n);
        Cyclo {
            n: self.n,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self + &(-o)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.n, o.n);
        let mut raw = vec![Q::zero(); self.c.len() + o.c.len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Cyclo::reduce(self.n, raw)
    }
}
