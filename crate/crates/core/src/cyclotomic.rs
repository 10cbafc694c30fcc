//! Exact scalars in `ℚ(ζ_N)·d^{−k/2}`.
//!
//! The cyclotomic part is stored reduced modulo `Φ_N` in the power basis
//! `1, ζ_N, …, ζ_N^{φ(N)−1}`; the radical part is a squarefree `d ≥ 1`
//! with exponent `k ∈ {0, 1}`. Arithmetic embeds operands into
//! `ℚ(ζ_lcm)`. Mixing different radicals rewrites `√d` as a Gauss sum,
//! so that sums stay exact.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor, fmt_rat, frac, gcd_u64, int, lcm_u64, squarefree_split, Rat};
use crate::error::{Error, Result};
use crate::interval::{Ball, CBall};
use crate::matrix::QMatrix;

/// Default bound on the cyclotomic order of intermediate results.
pub const DEFAULT_ORDER_BOUND: u64 = 1_000_000;

static ORDER_BOUND: AtomicU64 = AtomicU64::new(DEFAULT_ORDER_BOUND);

/// Sets the overflow policy: operations whose result would need a
/// cyclotomic order above `bound` fail with [`Error::Overflow`].
pub fn set_order_bound(bound: u64) {
    ORDER_BOUND.store(bound.max(1), Ordering::Relaxed);
}

pub fn order_bound() -> u64 {
    ORDER_BOUND.load(Ordering::Relaxed)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        poly = div_exact_monic(&poly, &cyclotomic_poly(d));
    }
    let p = Arc::new(poly);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn div_exact_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

/// Reduces a polynomial in `ζ_n` (any degree) modulo `Φ_n`.
fn reduce_mod_phi(poly: &mut Vec<Rat>, n: u64) {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for i in (deg..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut poly[i]);
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if !pj.is_zero() {
                poly[i - deg + j] -= &c * pj;
            }
        }
    }
    poly.truncate(deg);
    poly.resize(deg, Rat::zero());
}

#[derive(Clone)]
pub struct ExactScalar {
    order: u64,
    coeffs: Vec<Rat>,
    radical: u64,
    k: u8,
}

impl ExactScalar {
    /// Builds `(Σ_j c_j ζ_n^j)·d^{−k/2}` from coefficients of any length.
    pub fn from_poly(n: u64, poly: Vec<Rat>, d: u64, k: u8) -> ExactScalar {
        assert!(n >= 1 && d >= 1);
        let mut p = poly;
        // x^n = 1 first, then Φ_n
        if p.len() > n as usize {
            let mut folded = vec![Rat::zero(); n as usize];
            for (j, c) in p.into_iter().enumerate() {
                folded[j % n as usize] += c;
            }
            p = folded;
        }
        reduce_mod_phi(&mut p, n);
        let mut s = ExactScalar { order: n, coeffs: p, radical: 1, k: 0 };
        s.apply_radical(d, k as u32);
        s
    }

    /// Cyclotomic element from integer coefficients of `ζ_n^j`, `j < n`.
    pub fn from_cyclic_ints(n: u64, coeffs: &[i64]) -> ExactScalar {
        ExactScalar::from_poly(n, coeffs.iter().map(|&c| int(c)).collect(), 1, 0)
    }

    pub fn from_rat(q: Rat) -> ExactScalar {
        ExactScalar { order: 1, coeffs: vec![q], radical: 1, k: 0 }
    }

    pub fn zero() -> ExactScalar {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> ExactScalar {
        Self::from_rat(Rat::one())
    }

    /// `e(z) = ζ_b^a` for `z = a/b`, in `ℚ(ζ_m)` with `m` minimal.
    pub fn root_of_unity(z: &Rat) -> ExactScalar {
        let z = frac(z);
        let b = z.denom().to_u64().expect("root of unity order fits u64");
        let a = z.numer().to_u64().expect("fits");
        let mut poly = vec![Rat::zero(); b as usize];
        poly[a as usize] = Rat::one();
        let s = ExactScalar::from_poly(b, poly, 1, 0);
        s.minimal()
    }

    /// `ζ_n^j`.
    pub fn zeta(n: u64, j: i64) -> ExactScalar {
        Self::root_of_unity(&Rat::new(BigInt::from(j), BigInt::from(n)))
    }

    /// `d^{−1/2}` for a positive integer `d`.
    pub fn inv_sqrt(d: u64) -> ExactScalar {
        Self::one().with_inv_sqrt(d)
    }

    /// `√d` for a positive integer `d`.
    pub fn sqrt(d: u64) -> ExactScalar {
        // √d = d·d^{−1/2}
        Self::inv_sqrt(d).scale(&int(d as i64))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn radical(&self) -> (u64, u8) {
        (self.radical, self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Multiplies by `d^{−k/2}` and renormalizes the radical.
    fn apply_radical(&mut self, d: u64, k: u32) {
        // d^{-k/2} = d^{-⌊k/2⌋}·(d^{-1/2} if k odd)
        let (sq, core) = squarefree_split(d);
        let whole = k / 2;
        let mut factor = Rat::one();
        if whole > 0 {
            factor /= int(d as i64).pow(whole as i32);
        }
        if k % 2 == 1 {
            // d^{-1/2} = 1/(sq·√core)
            factor /= int(sq as i64);
            if core > 1 {
                if self.k == 1 {
                    // √a·√b = g·√(ab/g²)
                    let g = gcd_u64(self.radical, core);
                    factor /= int(g as i64);
                    self.radical = self.radical / g * (core / g);
                    if self.radical == 1 {
                        self.k = 0;
                    }
                } else {
                    self.radical = core;
                    self.k = 1;
                }
            }
        }
        if !factor.is_one() {
            for c in self.coeffs.iter_mut() {
                *c *= &factor;
            }
        }
    }

    pub fn with_inv_sqrt(&self, d: u64) -> ExactScalar {
        let mut s = self.clone();
        s.apply_radical(d, 1);
        s
    }

    pub fn scale(&self, q: &Rat) -> ExactScalar {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c *= q;
        }
        s
    }

    /// Coefficients embedded into `ℚ(ζ_m)`, `order | m`, reduced mod `Φ_m`.
    fn embedded(&self, m: u64) -> Vec<Rat> {
        if m == self.order {
            return self.coeffs.clone();
        }
        let step = (m / self.order) as usize;
        let mut p = vec![Rat::zero(); (self.coeffs.len().saturating_sub(1)) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            p[j * step] = c.clone();
        }
        reduce_mod_phi(&mut p, m);
        p
    }

    fn common_order(&self, o: &ExactScalar) -> Result<u64> {
        let m = lcm_u64(self.order, o.order);
        if m > order_bound() {
            return Err(Error::Overflow(format!("cyclotomic order {m} exceeds the bound {}", order_bound())));
        }
        Ok(m)
    }

    /// The same value with `k = 0`: `√d` rewritten as a Gauss sum.
    pub fn to_pure(&self) -> Result<ExactScalar> {
        if self.k == 0 {
            return Ok(self.clone());
        }
        let d = self.radical;
        let root = sqrt_cyclotomic(d)?;
        // c/√d = c·√d/d
        let mut s = self.checked_mul_plain(&root)?;
        s.radical = 1;
        s.k = 0;
        Ok(s.scale(&Rat::new(BigInt::one(), BigInt::from(d))))
    }

    /// Product of the cyclotomic parts; radicals multiplied separately.
    fn checked_mul_plain(&self, o: &ExactScalar) -> Result<ExactScalar> {
        let m = self.common_order(o)?;
        let a = self.embedded(m);
        let b = o.embedded(m);
        let mut p = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        reduce_mod_phi(&mut p, m);
        Ok(ExactScalar { order: m, coeffs: p, radical: self.radical, k: self.k })
    }

    pub fn checked_mul(&self, o: &ExactScalar) -> Result<ExactScalar> {
        let mut s = self.checked_mul_plain(o)?;
        if o.k == 1 {
            s.apply_radical(o.radical, 1);
        }
        Ok(s)
    }

    pub fn checked_add(&self, o: &ExactScalar) -> Result<ExactScalar> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if (self.radical, self.k) != (o.radical, o.k) {
            return self.to_pure()?.checked_add(&o.to_pure()?);
        }
        let m = self.common_order(o)?;
        let mut a = self.embedded(m);
        for (x, y) in a.iter_mut().zip(o.embedded(m)) {
            *x += y;
        }
        Ok(ExactScalar { order: m, coeffs: a, radical: self.radical, k: self.k })
    }

    pub fn mul(&self, o: &ExactScalar) -> ExactScalar {
        self.checked_mul(o).expect("cyclotomic order overflow")
    }

    pub fn add(&self, o: &ExactScalar) -> ExactScalar {
        self.checked_add(o).expect("cyclotomic order overflow")
    }

    pub fn sub(&self, o: &ExactScalar) -> ExactScalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ExactScalar {
        self.scale(&int(-1))
    }

    /// Complex conjugate (`ζ ↦ ζ^{−1}`; the radical is real).
    pub fn conj(&self) -> ExactScalar {
        let n = self.order as usize;
        let mut p = vec![Rat::zero(); n.max(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            p[(n - j) % n] += c;
        }
        reduce_mod_phi(&mut p, self.order);
        ExactScalar { order: self.order, coeffs: p, radical: self.radical, k: self.k }
    }

    pub fn pow(&self, mut e: u64) -> ExactScalar {
        let mut base = self.clone();
        let mut acc = ExactScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Rewrites the cyclotomic part in the smallest `ℚ(ζ_m)` containing it
    /// (radical left untouched).
    pub fn minimal(&self) -> ExactScalar {
        if self.order == 1 {
            return self.clone();
        }
        for m in divisors(self.order) {
            if m == self.order {
                break;
            }
            if m % 4 == 2 {
                continue;
            }
            if let Some(c) = self.express_in(m) {
                return ExactScalar { order: m, coeffs: c, radical: self.radical, k: self.k };
            }
        }
        self.clone()
    }

    /// Coefficients over `ℚ(ζ_m)` if the cyclotomic part lies there.
    fn express_in(&self, m: u64) -> Option<Vec<Rat>> {
        let pm = euler_phi(m) as usize;
        let pn = self.coeffs.len();
        let step = self.order / m;
        let mut a = QMatrix::zeros(pn, pm);
        for j in 0..pm {
            let col = ExactScalar::from_poly(self.order, monomial(j * step as usize), 1, 0);
            for i in 0..pn {
                a[(i, j)] = col.coeffs[i].clone();
            }
        }
        a.solve(&self.coeffs)
    }

    /// Canonical form: radical-free, in the minimal cyclotomic field.
    /// Two scalars are equal iff their canonical forms coincide.
    pub fn canonical(&self) -> ExactScalar {
        self.to_pure().expect("cyclotomic order overflow").minimal()
    }

    /// Complex ball containing the value.
    pub fn embed(&self, precision: u32) -> CBall {
        let wp = precision + 16;
        let mut acc = CBall::zero(wp);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = CBall::e_rat(&Rat::new(BigInt::from(j), BigInt::from(self.order)), wp);
            acc = acc.add(&z.mul_rat(c));
        }
        if self.k == 1 {
            let r = Ball::from_int(self.radical as i64, wp).sqrt().expect("positive").recip().expect("nonzero");
            acc = acc.mul_real(&r);
        }
        CBall::new(acc.re.with_prec(precision), acc.im.with_prec(precision))
    }

    /// Rational value, if the scalar is rational.
    pub fn to_rat(&self) -> Option<Rat> {
        let c = self.canonical();
        (c.order == 1).then(|| c.coeffs[0].clone())
    }

    /// If the scalar is `±1 · ζ` for a root of unity `ζ = e(z)`, returns `z ∈ [0,1)`.
    pub fn as_root_of_unity(&self) -> Option<Rat> {
        let c = self.canonical();
        let n = c.order.max(1);
        let mut m = n;
        if m % 2 == 1 {
            m *= 2;
        }
        (0..m).map(|j| Rat::new(BigInt::from(j), BigInt::from(m))).find(|z| ExactScalar::root_of_unity(z) == c)
    }

    /// Δ-free text form `(N: c_0,…,c_{φ(N)−1}; d; k)` of the minimal representation.
    pub fn render(&self) -> String {
        let m = self.minimal();
        let cs: Vec<String> = m.coeffs.iter().map(fmt_rat).collect();
        format!("({}: {}; {}; {})", m.order, cs.join(","), m.radical, m.k)
    }
}

fn monomial(j: usize) -> Vec<Rat> {
    let mut p = vec![Rat::zero(); j + 1];
    p[j] = Rat::one();
    p
}

/// `√d` for squarefree `d` as an element of `ℚ(ζ_{4d})`.
fn sqrt_cyclotomic(d: u64) -> Result<ExactScalar> {
    let mut acc = ExactScalar::one();
    for (p, _) in factor(d) {
        let r = if p == 2 {
            // ζ₈ + ζ₈⁷
            ExactScalar::from_cyclic_ints(8, &[0, 1, 0, 0, 0, 0, 0, 1])
        } else {
            // Gauss sum g_p = Σ (a/p) ζ_p^a; g_p² = (−1/p)·p
            let mut c = vec![0i64; p as usize];
            for a in 1..p {
                c[a as usize] = legendre(a, p);
            }
            let g = ExactScalar::from_cyclic_ints(p, &c);
            if p % 4 == 1 {
                g
            } else {
                // √p = −i·g_p
                g.checked_mul(&ExactScalar::from_cyclic_ints(4, &[0, 0, 0, 1]))?
            }
        };
        acc = acc.checked_mul(&r)?;
    }
    Ok(acc)
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        if (self.radical, self.k) == (other.radical, other.k) {
            let Ok(m) = self.common_order(other) else { return false };
            return self.embedded(m) == other.embedded(m);
        }
        match (self.to_pure(), other.to_pure()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for ExactScalar {}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Human-readable form of a scalar of the shape `s·√d·e(z)`, if it has one.
pub fn pretty(x: &ExactScalar) -> String {
    if x.is_zero() {
        return "0".into();
    }
    // try x = r·√d·e(z) with rational r > 0 and d the radical
    let (d, k) = x.radical();
    let c = ExactScalar { order: x.order, coeffs: x.coeffs.clone(), radical: 1, k: 0 };
    let unit_part = |s: &ExactScalar| -> Option<(Rat, Rat)> {
        let m = s.minimal();
        let nz: Vec<usize> = (0..m.coeffs.len()).filter(|&j| !m.coeffs[j].is_zero()).collect();
        if nz.len() != 1 {
            // general element; search for a root of unity u with s/u rational
            let n = if m.order % 2 == 1 { 2 * m.order } else { m.order };
            for j in 0..n {
                let z = Rat::new(BigInt::from(j), BigInt::from(n));
                let q = s.mul(&ExactScalar::root_of_unity(&z).conj());
                if let Some(r) = q.to_rat() {
                    if r.is_positive() {
                        return Some((r, z));
                    }
                }
            }
            return None;
        }
        let j = nz[0];
        let r = m.coeffs[j].clone();
        let z = Rat::new(BigInt::from(j), BigInt::from(m.order));
        if r.is_positive() {
            Some((r, z))
        } else {
            Some((-r, frac(&(z + Rat::new(BigInt::one(), BigInt::from(2))))))
        }
    };
    match unit_part(&c) {
        Some((r, z)) => {
            // value = r·e(z)·d^{−k/2}; as r/d·√d when k = 1
            let mut s = String::new();
            if k == 1 {
                let coef = r / int(d as i64);
                if !coef.is_one() {
                    s.push_str(&fmt_rat(&coef));
                    s.push('·');
                }
                s.push_str(&format!("√{d}"));
            } else {
                s.push_str(&fmt_rat(&r));
            }
            if !z.is_zero() {
                s.push_str(&format!("·e({})", fmt_rat(&z)));
            }
            s
        }
        None => x.render(),
    }
}

/// Plain `a+bi` form of a cyclotomic integer combination when the order
/// divides 4; otherwise the exact rendering.
pub fn gaussian_form(x: &ExactScalar) -> String {
    let c = x.canonical();
    let (re, im) = match c.order {
        1 => (c.coeffs[0].clone(), Rat::zero()),
        4 => (c.coeffs[0].clone(), c.coeffs[1].clone()),
        _ => return x.render(),
    };
    match (re.is_zero(), im.is_zero()) {
        (_, true) => fmt_rat(&re),
        (true, false) => format!("{}i", coef_str(&im)),
        _ => {
            let sign = if im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", fmt_rat(&re), sign, coef_str(&im.abs()))
        }
    }
}

fn coef_str(q: &Rat) -> String {
    if q.is_one() {
        String::new()
    } else if *q == int(-1) {
        "-".into()
    } else {
        fmt_rat(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn e(a: i64, b: i64) -> ExactScalar {
        ExactScalar::root_of_unity(&rat(a, b))
    }

    #[test]
    fn cyclotomic_polys() {
        let p12: Vec<i64> = cyclotomic_poly(12).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(p12, vec![1, 0, -1, 0, 1]);
        let p9: Vec<i64> = cyclotomic_poly(9).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(p9, vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(euler_phi(40), 16);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(e(0, 1), ExactScalar::one());
        let i = e(1, 4);
        assert_eq!(i.order(), 4);
        assert_eq!(i.mul(&i), ExactScalar::from_rat(int(-1)));
        assert_eq!(e(1, 8).mul(&e(1, 8)), i);
        assert_eq!(e(1, 3).conj(), e(2, 3));
        // e(1/6) lives in ℚ(ζ₃)
        assert_eq!(e(1, 6).order(), 3);
        assert_eq!(e(1, 2), ExactScalar::from_rat(int(-1)));
        assert_eq!(e(1, 2).order(), 1);
    }

    #[test]
    fn radicals_fold() {
        let h = ExactScalar::inv_sqrt(2);
        assert_eq!(h.mul(&h), ExactScalar::from_rat(rat(1, 2)));
        assert_eq!(ExactScalar::inv_sqrt(8).radical(), (2, 1));
        assert_eq!(ExactScalar::inv_sqrt(4), ExactScalar::from_rat(rat(1, 2)));
        // (1+i)/√2 = e(1/8)
        let one_i = ExactScalar::from_cyclic_ints(4, &[1, 1]);
        assert_eq!(one_i.mul(&h), e(1, 8));
        assert!(one_i.mul(&h).sub(&e(1, 8)).is_zero() || one_i.mul(&h).sub(&e(1, 8)).canonical().is_zero());
        // √3·√3 = 3 and mixed sums
        let s3 = ExactScalar::sqrt(3);
        assert_eq!(s3.mul(&s3), ExactScalar::from_rat(int(3)));
        let mixed = ExactScalar::sqrt(2).add(&ExactScalar::sqrt(3));
        let sq = mixed.mul(&mixed);
        let expect = ExactScalar::from_rat(int(5)).add(&ExactScalar::sqrt(6).scale(&int(2)));
        assert_eq!(sq, expect);
    }

    #[test]
    fn gauss_sums_are_square_roots() {
        for d in [2u64, 3, 5, 6, 7, 10, 11, 13, 15] {
            let r = sqrt_cyclotomic(d).unwrap();
            assert_eq!(r.mul(&r), ExactScalar::from_rat(int(d as i64)), "d = {d}");
            let b = r.embed(80);
            assert!(b.re.contains_zero() == false);
            assert!((b.re.mid_f64() - (d as f64).sqrt()).abs() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn embedding_encloses() {
        let b = e(1, 8).embed(53);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.re.mid_f64() - h).abs() < 1e-15 && b.re.width() < 1e-15);
        let diff = ExactScalar::from_cyclic_ints(4, &[1, 1]).mul(&ExactScalar::inv_sqrt(2)).sub(&e(1, 8));
        let d = diff.embed(53);
        assert!(d.re.contains_zero() && d.im.contains_zero());
        let one = ExactScalar::one().embed(53);
        assert!(one.re.contains_rat(&int(1)) && one.im.contains_zero());
    }

    #[test]
    fn canonical_and_pretty() {
        let x = e(1, 8).mul(&ExactScalar::sqrt(2));
        assert_eq!(pretty(&x), "√2·e(1/8)");
        assert_eq!(gaussian_form(&x), "1+i");
        assert_eq!(x.canonical().order(), 4);
        assert_eq!(e(3, 8).as_root_of_unity(), Some(rat(3, 8)));
        assert_eq!(ExactScalar::from_rat(int(2)).as_root_of_unity(), None);
    }

    #[test]
    fn overflow_policy() {
        let a = e(1, 1009);
        let b = e(1, 1013);
        set_order_bound(10_000);
        let r = a.checked_mul(&b);
        set_order_bound(DEFAULT_ORDER_BOUND);
        assert!(matches!(r, Err(Error::Overflow(_))));
    }
}
