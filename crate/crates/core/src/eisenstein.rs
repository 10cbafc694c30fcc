//! Hurwitz class numbers and the holomorphic part of Zagier's weight-3/2
//! Eisenstein series `Σ H(N) q^N`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{int, rat, sigma1, Rat};
use crate::error::{Error, Result};
use crate::field::KElem;
use crate::lattice::Case;
use crate::modform::{CoeffKey, QExpansion, TailModel};

/// `H(N)` at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzValue {
    pub index: u64,
    pub value: Rat,
}

/// Reduced positive definite forms `(a, b, c)` of discriminant `D`:
/// `|b| ≤ a ≤ c`, and `b ≥ 0` if `|b| = a` or `a = c`. Non-primitive forms
/// are included.
pub fn reduced_forms(d: i64) -> Result<Vec<(i64, i64, i64)>> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::BadDiscriminant(format!("{d} is not a negative discriminant")));
    }
    Ok(scan(d.unsigned_abs()))
}

/// All `(a, b, c)` in the reduced region with `4ac − b² = n`; empty unless
/// `n ≡ 0, 3 mod 4`.
fn scan(n: u64) -> Vec<(i64, i64, i64)> {
    let n = n as i64;
    let mut out = Vec::new();
    // 3a² ≤ 4ac − b² = n
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = n + b * b;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

/// `H(N)`: weighted number of `SL₂(ℤ)`-classes of positive definite forms
/// of discriminant `−N`, classes of `a(x² + y²)` counting ½ and of
/// `a(x² + xy + y²)` counting ⅓; `H(0) = −1/12`.
pub fn hurwitz(n: u64) -> Rat {
    if n == 0 {
        return rat(-1, 12);
    }
    let mut twelfths = 0i64;
    for (a, b, c) in scan(n) {
        twelfths += if b == 0 && a == c {
            6
        } else if a == b && b == c {
            4
        } else {
            12
        };
    }
    Rat::new(twelfths.into(), 12.into())
}

pub fn hurwitz_values(bound: u64) -> Vec<HurwitzValue> {
    (0..=bound).into_par_iter().map(|n| HurwitzValue { index: n, value: hurwitz(n) }).collect()
}

/// `Σ_{N ≤ bound} H(N) q^N` as a scalar genus-1 expansion. Only the
/// holomorphic part is produced, so the expansion is flagged as mock.
pub fn zagier_coeffs(bound: i64) -> Result<QExpansion> {
    if bound < 0 {
        return Err(Error::Parse("bound must be nonnegative".into()));
    }
    let mut f = QExpansion::new(1, rat(3, 2), Case::Orthogonal, None, ZAGIER_HASH, 1, int(bound));
    f.mock = true;
    f.tail = TailModel::Linear;
    for hv in hurwitz_values(bound as u64) {
        f.set(CoeffKey::new(vec![KElem::from_rat(int(hv.index as i64))], vec![0]), hv.value)?;
    }
    Ok(f)
}

/// Placeholder lattice hash of the Zagier series (no lattice behind it).
pub const ZAGIER_HASH: &str = "zagier";

/// Both sides of `Σ_{r ∈ ℤ} H(4n − r²) = 2σ(n) − Σ_{d | n} min(d, n/d)`,
/// with the `H(0)` terms kept on the left.
pub fn kronecker_hurwitz(n: u64) -> (Rat, Rat) {
    let mut lhs = Rat::zero();
    let mut r: u64 = 0;
    while r * r <= 4 * n {
        let h = hurwitz(4 * n - r * r);
        lhs += if r == 0 { h } else { h * int(2) };
        r += 1;
    }
    let boundary: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d.min(n / d)).sum();
    let rhs = Rat::from_integer(BigInt::from(2 * sigma1(n))) - Rat::from_integer(BigInt::from(boundary));
    (lhs, rhs)
}

/// `H(N)` from Dirichlet's class number formula, independent of any form
/// enumeration: `H(N) = Σ_{f² | N, −N/f² ≡ 0,1 (4)} h_w(−N/f²)` with
/// `h_w(D₀f²) = h_w(D₀)·f·Π_{p | f}(1 − χ(p)/p)` and
/// `h_w(D₀) = −(1/|D₀|) Σ_{a=1}^{|D₀|} χ(a)·a` for fundamental `D₀`.
pub fn hurwitz_dirichlet(n: u64) -> Rat {
    if n == 0 {
        return rat(-1, 12);
    }
    let mut total = Rat::zero();
    let mut f = 1u64;
    while f * f <= n {
        if n % (f * f) == 0 {
            let m = n / (f * f);
            if m % 4 == 0 || m % 4 == 3 {
                total += weighted_class_number(-(m as i64));
            }
        }
        f += 1;
    }
    total
}

/// `h(D)/ (w(D)/2)` for any negative discriminant `D`.
fn weighted_class_number(d: i64) -> Rat {
    let (d0, f) = fundamental(d);
    let m = d0.unsigned_abs() as i64;
    let mut s = 0i64;
    for a in 1..=m {
        s += kronecker(d0, a) as i64 * a;
    }
    let mut h = Rat::new((-s).into(), m.into());
    h *= int(f);
    for (p, _) in crate::arith::factor(f as u64) {
        h *= Rat::one() - Rat::new((kronecker(d0, p as i64) as i64).into(), (p as i64).into());
    }
    h
}

/// `D = D₀·f²` with `D₀` fundamental.
fn fundamental(d: i64) -> (i64, i64) {
    let mut f = 1i64;
    let mut d0 = d;
    let mut p = 2i64;
    while p * p <= d0.abs() {
        while d0 % (p * p) == 0 && is_disc(d0 / (p * p)) {
            d0 /= p * p;
            f *= p;
        }
        p += 1;
    }
    (d0, f)
}

fn is_disc(d: i64) -> bool {
    d.rem_euclid(4) <= 1
}

/// Kronecker symbol `(d/n)` for `n ≥ 1`.
fn kronecker(d: i64, n: i64) -> i32 {
    let mut res = 1;
    let mut n = n;
    while n % 2 == 0 {
        n /= 2;
        res *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    res * jacobi(d.rem_euclid(n.max(1)), n)
}

fn jacobi(mut a: i64, mut n: i64) -> i32 {
    if n == 1 {
        return 1;
    }
    let mut res = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(reduced_forms(-3).unwrap(), vec![(1, 1, 1)]);
        assert_eq!(reduced_forms(-4).unwrap(), vec![(1, 0, 1)]);
        assert_eq!(reduced_forms(-23).unwrap().len(), 3);
        assert!(matches!(reduced_forms(-5), Err(Error::BadDiscriminant(_))));
        assert!(matches!(reduced_forms(4), Err(Error::BadDiscriminant(_))));
        assert_eq!(hurwitz(0), rat(-1, 12));
        assert_eq!(hurwitz(3), rat(1, 3));
        assert_eq!(hurwitz(4), rat(1, 2));
        // (1,0,3), (2,2,2) → 1 + 1/3
        assert_eq!(hurwitz(12), rat(4, 3));
        assert_eq!(hurwitz(16), rat(3, 2));
        assert_eq!(hurwitz(23), int(3));
    }

    #[test]
    fn dirichlet_oracle() {
        for n in 0..=200 {
            assert_eq!(hurwitz(n), hurwitz_dirichlet(n), "N = {n}");
        }
    }

    #[test]
    fn class_number_relation() {
        for n in 1..=20 {
            let (l, r) = kronecker_hurwitz(n);
            assert_eq!(l, r, "n = {n}");
        }
    }

    #[test]
    fn zagier_series() {
        let f = zagier_coeffs(4).unwrap();
        assert!(f.mock);
        let key = |n: i64| CoeffKey::new(vec![KElem::from_rat(int(n))], vec![0]);
        assert_eq!(f.get(&key(0)), rat(-1, 12));
        assert_eq!(f.get(&key(3)), rat(1, 3));
        assert_eq!(f.get(&key(4)), rat(1, 2));
        assert_eq!(f.len(), 3);
        assert_eq!(zagier_coeffs(0).unwrap().len(), 1);
        assert!(zagier_coeffs(-1).is_err());
    }
}
