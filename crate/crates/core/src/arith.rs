//! Rational and integer helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn frac(q: &Rat) -> Rat {
    q - q.floor()
}

pub fn is_int(q: &Rat) -> bool {
    q.is_integer()
}

pub fn to_i64(q: &Rat) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| lcm_int(&acc, q.denom()))
}

/// Prime factorization by trial division; fine for the small integers
/// (determinants, discriminants) this crate handles.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn factor_big(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let n = n.abs();
    let v = n
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("cannot factor {n}")))?;
    Ok(factor(v))
}

/// Writes `n = s^2 * core` with `core` squarefree; returns `(s, core)`.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut core = 1;
    for (p, e) in factor(n) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    (s, core)
}

/// Squarefree part of a nonzero signed integer (sign kept).
pub fn squarefree_core(n: i64) -> i64 {
    let (_, core) = squarefree_split(n.unsigned_abs());
    if n < 0 {
        -(core as i64)
    } else {
        core as i64
    }
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square_u64(n: u64) -> bool {
    let r = isqrt_u128(n as u128) as u64;
    r * r == n
}

/// Exact rational square test.
pub fn is_square_rat(q: &Rat) -> bool {
    if q.is_negative() {
        return false;
    }
    if q.is_zero() {
        return true;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    &(&n * &n) == q.numer() && &(&d * &d) == q.denom()
}

/// Floor division for i128 values.
pub fn div_floor_i128(a: i128, b: i128) -> i128 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

pub fn div_ceil_i128(a: i128, b: i128) -> i128 {
    -div_floor_i128(-a, b)
}

pub fn to_i128(n: &BigInt) -> Result<i128> {
    n.to_i128()
        .ok_or_else(|| Error::Overflow(format!("{n} exceeds 128 bits")))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Sum of divisors.
pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(fmt_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(fmt_rat(&parse_rat("-3/6").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn floor_division() {
        assert_eq!(div_floor_i128(-7, 2), -4);
        assert_eq!(div_floor_i128(7, -2), -4);
        assert_eq!(div_ceil_i128(-7, 2), -3);
        assert_eq!(div_ceil_i128(7, 2), 4);
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_core(-12), -3);
        assert!(is_square_rat(&rat(9, 4)));
        assert!(!is_square_rat(&rat(2, 1)));
    }
}
