//! Exact Fincke–Pohst enumeration of coset vectors in a positive definite
//! lattice.
//!
//! With `e` the exponent of `L*/L`, a vector `x ∈ μ + L` has integral
//! `y = e·x`. The square completion `xᵗGx = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²`
//! is cleared of denominators once: `z_i = den_i·y_i + Σ_{j>i} N_ij y_j` and
//! `M·e²·xᵗGx = Σ C_i z_i²` with integers `C_i`, so pruning and the final
//! norm test run in `i128` without rounding.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{common_denominator, div_ceil_i128, div_floor_i128, isqrt_u128, to_i128, Rat};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;

/// Largest budget accepted; keeps every intermediate product inside `i128`.
const BUDGET_LIMIT: i128 = 1 << 100;

#[derive(Debug, Clone)]
pub struct ShortVectors {
    m: usize,
    e: i128,
    den: Vec<i128>,
    /// `nmat[i][j]` for `j > i`.
    nmat: Vec<Vec<i128>>,
    c: Vec<i128>,
    /// `M` in `M·e²·xᵗGx = Σ C_i z_i²`.
    mscale: i128,
    gram: Vec<Vec<i128>>,
}

/// A vector `x = y/e` found by the enumeration, with `norm = yᵗGy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub y: Vec<i64>,
    pub norm: i128,
}

impl ShortVectors {
    /// `gram` integral and positive definite; `e` the coordinate denominator.
    pub fn new(gram: &QMatrix, e: u64) -> Result<ShortVectors> {
        let m = gram.rows();
        let q = gram
            .square_completion()
            .ok_or_else(|| Error::IndefiniteLattice("enumeration needs a positive definite lattice".into()))?;
        let mut den = Vec::with_capacity(m);
        let mut nmat = vec![vec![0i128; m]; m];
        let mut cs = Vec::with_capacity(m);
        for i in 0..m {
            let row: Vec<&Rat> = (i + 1..m).map(|j| &q[(i, j)]).collect();
            let d = common_denominator(row.iter().copied());
            for j in i + 1..m {
                let v = &q[(i, j)] * Rat::from_integer(d.clone());
                nmat[i][j] = to_i128(&v.to_integer())?;
            }
            den.push(to_i128(&d)?);
            // coefficient of z_i² is q_ii/den_i²
            cs.push(&q[(i, i)] / Rat::from_integer(&d * &d));
        }
        let big_m = common_denominator(cs.iter());
        let c = cs.iter().map(|ci| to_i128(&(ci * Rat::from_integer(big_m.clone())).to_integer())).collect::<Result<Vec<_>>>()?;
        let gram_i = (0..m)
            .map(|i| (0..m).map(|j| to_i128(&gram[(i, j)].to_integer())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ShortVectors { m, e: e as i128, den, nmat, c, mscale: to_i128(&big_m)?, gram: gram_i })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    /// Integer budget `⌊M·e²·2B⌋` for `Q(x) ≤ B`; `None` for negative `B`.
    fn budget(&self, q_bound: &Rat) -> Result<Option<i128>> {
        if q_bound.is_negative() {
            return Ok(None);
        }
        let b = q_bound * Rat::from_integer(BigInt::from(2 * self.mscale * self.e * self.e));
        let b = b.floor().to_integer();
        let b = to_i128(&b)?;
        if b > BUDGET_LIMIT {
            return Err(Error::Overflow("enumeration budget exceeds 2^100".into()));
        }
        Ok(Some(b))
    }

    /// `yᵗGy` for a value `V = Σ C_i z_i²`.
    pub fn norm_from_value(&self, v: i128) -> i128 {
        v / self.mscale
    }

    /// `Q(x)` as a rational for `yᵗGy`.
    pub fn q_of_norm(&self, norm: i128) -> Rat {
        Rat::new(BigInt::from(norm), BigInt::from(2 * self.e * self.e))
    }

    /// `yᵗGy` target for `Q(x) = t`, if `t` is attainable at all.
    pub fn norm_of_q(&self, t: &Rat) -> Option<i128> {
        let v = t * Rat::from_integer(BigInt::from(2 * self.e * self.e));
        if v.is_integer() {
            v.to_integer().to_i128()
        } else {
            None
        }
    }

    pub fn gram(&self) -> &[Vec<i128>] {
        &self.gram
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i128 {
        let mut s = 0i128;
        for i in 0..self.m {
            if a[i] == 0 {
                continue;
            }
            let mut r = 0i128;
            for j in 0..self.m {
                r += self.gram[i][j] * b[j] as i128;
            }
            s += a[i] as i128 * r;
        }
        s
    }

    /// Candidate values of `y_i`, given the remaining budget and the
    /// already chosen `y_j`, `j > i`.
    fn range(&self, i: usize, rem: i128, y: &[i64], residue: i128) -> (i128, i128, i128) {
        let s: i128 = (i + 1..self.m).map(|j| self.nmat[i][j] * y[j] as i128).sum();
        let zmax = isqrt_u128((rem / self.c[i]) as u128) as i128;
        let lo = div_ceil_i128(-zmax - s, self.den[i]);
        let hi = div_floor_i128(zmax - s, self.den[i]);
        // first value ≥ lo congruent to residue mod e
        let first = lo + (residue - lo).rem_euclid(self.e);
        (first, hi, s)
    }

    fn recurse<F: FnMut(&[i64], i128)>(&self, i: usize, rem: i128, used: i128, y: &mut Vec<i64>, res: &[i128], f: &mut F) {
        let (first, hi, s) = self.range(i, rem, y, res[i]);
        let mut v = first;
        while v <= hi {
            let z = self.den[i] * v + s;
            let cost = self.c[i] * z * z;
            if cost <= rem {
                y[i] = v as i64;
                if i == 0 {
                    f(y, used + cost);
                } else {
                    self.recurse(i - 1, rem - cost, used + cost, y, res, f);
                }
            }
            v += self.e;
        }
        y[i] = 0;
    }

    /// Calls `f(y, V)` for every `y ≡ residues (mod e)` with `Q(y/e) ≤ q_bound`,
    /// sequentially in a fixed order.
    pub fn for_each<F: FnMut(&[i64], i128)>(&self, residues: &[i128], q_bound: &Rat, mut f: F) -> Result<()> {
        let Some(bud) = self.budget(q_bound)? else { return Ok(()) };
        if self.m == 0 {
            f(&[], 0);
            return Ok(());
        }
        let mut y = vec![0i64; self.m];
        self.recurse(self.m - 1, bud, 0, &mut y, residues, &mut f);
        Ok(())
    }

    /// Runs independent enumerations per value of the outermost coordinate
    /// in parallel; `fold` builds one accumulator per value and the results
    /// come back in increasing order of that value.
    pub fn par_fold<A, F>(&self, residues: &[i128], q_bound: &Rat, init: impl Fn() -> A + Sync, fold: F) -> Result<Vec<A>>
    where
        A: Send,
        F: Fn(&mut A, &[i64], i128) + Sync,
    {
        let Some(bud) = self.budget(q_bound)? else { return Ok(Vec::new()) };
        if self.m == 0 {
            let mut a = init();
            fold(&mut a, &[], 0);
            return Ok(vec![a]);
        }
        let top = self.m - 1;
        let y0 = vec![0i64; self.m];
        let (first, hi, s) = self.range(top, bud, &y0, residues[top]);
        let mut values = Vec::new();
        let mut v = first;
        while v <= hi {
            values.push(v);
            v += self.e;
        }
        Ok(values
            .into_par_iter()
            .map(|v| {
                let mut acc = init();
                let z = self.den[top] * v + s;
                let cost = self.c[top] * z * z;
                if cost <= bud {
                    let mut y = vec![0i64; self.m];
                    y[top] = v as i64;
                    if top == 0 {
                        fold(&mut acc, &y, cost);
                    } else {
                        self.recurse(top - 1, bud - cost, cost, &mut y, residues, &mut |yy: &[i64], val| fold(&mut acc, yy, val));
                    }
                }
                acc
            })
            .collect())
    }

    /// All vectors with `Q(x) ≤ q_bound` in the coset, in enumeration order.
    pub fn collect(&self, residues: &[i128], q_bound: &Rat) -> Result<Vec<Found>> {
        let parts = self.par_fold(residues, q_bound, Vec::new, |acc: &mut Vec<Found>, y, v| {
            acc.push(Found { y: y.to_vec(), norm: v / self.mscale })
        })?;
        Ok(parts.into_iter().flatten().collect())
    }

    /// Vectors with `Q(x) = t` exactly.
    pub fn shell(&self, residues: &[i128], t: &Rat) -> Result<Vec<Found>> {
        let Some(target) = self.norm_of_q(t) else { return Ok(Vec::new()) };
        let tv = target * self.mscale;
        let parts = self.par_fold(residues, t, Vec::new, |acc: &mut Vec<Found>, y, v| {
            if v == tv {
                acc.push(Found { y: y.to_vec(), norm: target })
            }
        })?;
        Ok(parts.into_iter().flatten().collect())
    }

    /// Number of vectors with `Q(x) = t`, without storing them.
    pub fn count_shell(&self, residues: &[i128], t: &Rat) -> Result<u64> {
        let Some(target) = self.norm_of_q(t) else { return Ok(0) };
        let tv = target * self.mscale;
        let parts = self.par_fold(residues, t, || 0u64, |acc: &mut u64, _y, v| {
            if v == tv {
                *acc += 1
            }
        })?;
        Ok(parts.into_iter().sum())
    }

    /// Counts by `yᵗGy / step` for `Q(x) ≤ q_bound`; `step` must divide
    /// every attained norm.
    pub fn norm_histogram(&self, residues: &[i128], q_bound: &Rat, step: i128) -> Result<Vec<u64>> {
        let Some(bud) = self.budget(q_bound)? else { return Ok(Vec::new()) };
        let len = (bud / self.mscale / step) as usize + 1;
        let parts = self.par_fold(residues, q_bound, || vec![0u64; len], |acc: &mut Vec<u64>, _y, v| {
            acc[(v / self.mscale / step) as usize] += 1
        })?;
        let mut h = vec![0u64; len];
        for p in parts {
            for (a, b) in h.iter_mut().zip(p) {
                *a += b;
            }
        }
        Ok(h)
    }
}

/// Residues of `e·lift` modulo `e`.
pub fn residues(lift: &[Rat], e: u64) -> Vec<i128> {
    lift.iter()
        .map(|c| {
            let v = c * Rat::from_integer(BigInt::from(e));
            debug_assert!(v.is_integer());
            v.to_integer().to_i128().expect("small").rem_euclid(e as i128)
        })
        .collect()
}

pub fn found_to_rat(y: &[i64], e: u64) -> Vec<Rat> {
    y.iter().map(|&v| Rat::new(BigInt::from(v), BigInt::from(e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::lattice::standard;

    #[test]
    fn e8_shells() {
        let sv = ShortVectors::new(standard::e8().gram(), 1).unwrap();
        let r = vec![0i128; 8];
        assert_eq!(sv.count_shell(&r, &int(1)).unwrap(), 240);
        assert_eq!(sv.count_shell(&r, &int(2)).unwrap(), 2160);
        let h = sv.norm_histogram(&r, &int(3), 2).unwrap();
        assert_eq!(&h[..4], &[1, 240, 2160, 6720]);
    }

    #[test]
    fn a1_cosets() {
        let a1 = standard::a(1);
        let sv = ShortVectors::new(a1.gram(), 2).unwrap();
        // μ = ½: y odd
        let v = sv.shell(&[1], &rat(1, 4)).unwrap();
        let ys: Vec<i64> = v.iter().map(|f| f.y[0]).collect();
        assert_eq!(ys, vec![-1, 1]);
        assert_eq!(sv.count_shell(&[0], &int(1)).unwrap(), 2);
        assert_eq!(sv.count_shell(&[0], &int(0)).unwrap(), 1);
        assert_eq!(sv.count_shell(&[1], &int(0)).unwrap(), 0);
        assert_eq!(sv.count_shell(&[0], &rat(1, 3)).unwrap(), 0);
    }

    #[test]
    fn rejects_indefinite() {
        assert!(matches!(ShortVectors::new(standard::hyperbolic().gram(), 1), Err(Error::IndefiniteLattice(_))));
    }
}
