//! Exact scalars.
//!
//! Coefficients are arbitrary-precision rationals. Mode indices and
//! conformal weights stay small, so they use `Ratio<i64>`.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient field.
pub type Q = BigRational;

/// Mode indices and weights (denominator divides the twisting order).
pub type Grade = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn grade(n: i64, d: i64) -> Grade {
    Grade::new(n, d)
}

pub fn grade_to_q(g: Grade) -> Q {
    qr(*g.numer(), *g.denom())
}

/// `binom(x, k) = x (x-1) ... (x-k+1) / k!` for rational `x`.
pub fn binom_q(x: &Q, k: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc *= x - q(i as i64);
        acc /= q(i as i64 + 1);
    }
    acc
}

pub fn binom_grade(x: Grade, k: usize) -> Q {
    binom_q(&grade_to_q(x), k)
}

/// Binomial coefficient for an integer top entry; negative tops allowed.
pub fn binom_int(n: i64, k: usize) -> Q {
    binom_q(&q(n), k)
}

pub fn factorial(n: u64) -> Q {
    (1..=n).fold(Q::one(), |acc, i| acc * q(i as i64))
}

/// Canonical `num/den` form used by every serialized artifact.
pub fn to_fraction_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Human-facing form: integers print without a denominator.
pub fn to_short_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn grade_string(g: Grade) -> String {
    if *g.denom() == 1 {
        g.numer().to_string()
    } else {
        format!("{}/{}", g.numer(), g.denom())
    }
}

/// Parses `n`, `-n`, `n/d`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

pub fn parse_grade(s: &str) -> Result<Grade> {
    let x = parse_q(s)?;
    let n: i64 = x.numer().try_into().map_err(|_| Error::Parse(s.to_string()))?;
    let d: i64 = x.denom().try_into().map_err(|_| Error::Parse(s.to_string()))?;
    Ok(Grade::new(n, d))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn q_to_i64(x: &Q) -> Option<i64> {
    if !is_integer(x) {
        return None;
    }
    x.numer().try_into().ok()
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Floor of a grade.
pub fn floor_grade(g: Grade) -> i64 {
    g.floor().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac_part(g: Grade) -> Grade {
    g - Grade::from_integer(floor_grade(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_int(5, 2), q(10));
        assert_eq!(binom_int(-1, 3), q(-1));
        assert_eq!(binom_int(2, 3), q(0));
        assert_eq!(binom_q(&qr(1, 2), 2), qr(-1, 8));
    }

    #[test]
    fn parse_and_print() {
        let x = parse_q(" -6/4 ").unwrap();
        assert_eq!(x, qr(-3, 2));
        assert_eq!(to_fraction_string(&x), "-3/2");
        assert_eq!(to_fraction_string(&q(2)), "2/1");
        assert_eq!(to_short_string(&q(2)), "2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(frac_part(grade(-1, 2)), grade(1, 2));
    }
}
