//! Fixed-point ball arithmetic with rigorous error radii.
//!
//! A [`Ball`] at precision `p` is the interval `[(m − r)·2^{−p}, (m + r)·2^{−p}]`
//! with integer midpoint `m` and radius `r ≥ 0`. Every operation rounds
//! its midpoint and widens the radius so that the true result stays
//! enclosed. Errors are absolute, which suits the evaluation of
//! exponentially decaying q-series.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rat;

#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} ± {:.3e}", self.mid_f64(), self.rad_f64())
    }
}

/// `round(n / 2^k)`.
fn shr_round(n: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return n.clone();
    }
    let half = BigInt::one() << (k - 1);
    (n + half) >> k
}

/// `ceil(n / 2^k)` for `n ≥ 0`.
fn shr_ceil(n: &BigInt, k: u32) -> BigInt {
    let d = BigInt::one() << k;
    n.div_ceil(&d)
}

fn scale_pow2(x: f64, e: i64) -> f64 {
    // split so intermediate powers stay finite
    let mut x = x;
    let mut e = e;
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball { mid: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn one(prec: u32) -> Ball {
        Ball { mid: BigInt::one() << prec, rad: BigInt::zero(), prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Ball {
        Ball { mid: BigInt::from(n) << prec, rad: BigInt::zero(), prec }
    }

    pub fn from_rat(q: &Rat, prec: u32) -> Ball {
        let num = q.numer() << prec;
        let (quo, rem) = num.div_mod_floor(q.denom());
        if rem.is_zero() {
            Ball { mid: quo, rad: BigInt::zero(), prec }
        } else {
            Ball { mid: quo, rad: BigInt::one(), prec }
        }
    }

    /// Ball `[lo, hi]` from rational endpoints.
    pub fn from_bounds(lo: &Rat, hi: &Rat, prec: u32) -> Ball {
        let a = Ball::from_rat(lo, prec);
        let b = Ball::from_rat(hi, prec);
        let mid = (&a.mid + &b.mid) >> 1;
        let rad = (&b.mid - &a.mid).abs().div_ceil(&BigInt::from(2)) + BigInt::from(2);
        Ball { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_f64(&self) -> f64 {
        scale_pow2(self.mid.to_f64().unwrap_or(f64::NAN), -(self.prec as i64))
    }

    pub fn rad_f64(&self) -> f64 {
        scale_pow2(self.rad.to_f64().unwrap_or(f64::INFINITY), -(self.prec as i64))
    }

    /// Upper bound for `|x|` over the ball (rounded up).
    pub fn abs_upper(&self) -> f64 {
        let n = self.mid.abs() + &self.rad;
        let v = scale_pow2(n.to_f64().unwrap_or(f64::INFINITY), -(self.prec as i64));
        v * (1.0 + 1e-15) + f64::MIN_POSITIVE
    }

    /// Lower bound for `x` over the ball (rounded down).
    pub fn lower(&self) -> f64 {
        let n = &self.mid - &self.rad;
        let v = scale_pow2(n.to_f64().unwrap_or(f64::NEG_INFINITY), -(self.prec as i64));
        v - v.abs() * 1e-15 - f64::MIN_POSITIVE
    }

    pub fn upper(&self) -> f64 {
        -self.neg().lower()
    }

    /// Width `2r·2^{−p}` (rounded up).
    pub fn width(&self) -> f64 {
        2.0 * self.rad_f64() * (1.0 + 1e-15)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        -&self.mid > self.rad
    }

    /// Same midpoint, radius enlarged by an upper bound of `|e|`.
    pub fn widen(&self, e: &Ball) -> Ball {
        let e = e.with_prec(self.prec);
        Ball { mid: self.mid.clone(), rad: &self.rad + e.mid.abs() + &e.rad + BigInt::one(), prec: self.prec }
    }

    /// `max(self, o)` as an upper-bound enclosure.
    pub fn max_upper(&self, o: &Ball) -> Ball {
        let a = &self.mid + &self.rad;
        let o = o.with_prec(self.prec);
        let b = &o.mid + &o.rad;
        let top = if a > b { a } else { b };
        Ball { mid: top, rad: BigInt::zero(), prec: self.prec }
    }

    /// True iff the rational `q` lies in the ball.
    pub fn contains_rat(&self, q: &Rat) -> bool {
        // |q·2^p − m| ≤ r  ⟺  |q.num·2^p − m·q.den| ≤ r·q.den
        let lhs = (q.numer() << self.prec) - &self.mid * q.denom();
        lhs.abs() <= &self.rad * q.denom()
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Ball) -> bool {
        assert_eq!(self.prec, other.prec);
        (&other.mid - &self.mid).abs() + &other.rad <= self.rad
    }

    /// Re-expresses the ball at another precision (enclosure preserved).
    pub fn with_prec(&self, prec: u32) -> Ball {
        if prec >= self.prec {
            let s = prec - self.prec;
            Ball { mid: &self.mid << s, rad: &self.rad << s, prec }
        } else {
            let s = self.prec - prec;
            Ball { mid: shr_round(&self.mid, s), rad: shr_ceil(&self.rad, s) + 1, prec }
        }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        assert_eq!(self.prec, o.prec);
        Ball { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let prod = &self.mid * &o.mid;
        let mid = shr_round(&prod, p);
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let mut rad = shr_ceil(&err, p);
        if !(prod - (&mid << p)).is_zero() {
            rad += 1;
        }
        Ball { mid, rad, prec: p }
    }

    pub fn mul_int(&self, k: i64) -> Ball {
        Ball { mid: &self.mid * k, rad: &self.rad * k.unsigned_abs(), prec: self.prec }
    }

    pub fn div_int(&self, k: i64) -> Ball {
        assert!(k != 0);
        let (q, r) = self.mid.div_mod_floor(&BigInt::from(k));
        let extra = if r.is_zero() { 0 } else { 1 };
        Ball { mid: q, rad: self.rad.div_ceil(&BigInt::from(k.unsigned_abs())) + extra, prec: self.prec }
    }

    pub fn mul_rat(&self, q: &Rat) -> Ball {
        let num = q.numer();
        let den = q.denom();
        let m = &self.mid * num;
        let (quo, rem) = m.div_mod_floor(den);
        let extra = if rem.is_zero() { 0 } else { 1 };
        let rad = (&self.rad * num.abs()).div_ceil(den) + extra;
        Ball { mid: quo, rad, prec: self.prec }
    }

    /// Multiplication by `2^{−k}`.
    pub fn shr(&self, k: u32) -> Ball {
        Ball { mid: shr_round(&self.mid, k), rad: shr_ceil(&self.rad, k) + 1, prec: self.prec }
    }

    /// `1/x`; `None` if the ball contains zero.
    pub fn recip(&self) -> Option<Ball> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec;
        let m = &self.mid;
        let am = m.abs();
        let num = BigInt::one() << (2 * p);
        let (q, rem) = num.div_mod_floor(m);
        let mut rad = BigInt::zero();
        if !rem.is_zero() {
            rad += 1;
        }
        if !self.rad.is_zero() {
            // |1/x − 1/m| ≤ r / (|m|(|m| − r)) in value units
            let denom = &am * (&am - &self.rad);
            rad += (&self.rad << (2 * p)).div_ceil(&denom);
        }
        Some(Ball { mid: q, rad, prec: p })
    }

    pub fn div(&self, o: &Ball) -> Option<Ball> {
        Some(self.mul(&o.recip()?))
    }

    /// Square root; for balls reaching below zero the result encloses
    /// `[0, √hi]`. `None` if the ball is entirely negative.
    pub fn sqrt(&self) -> Option<Ball> {
        let p = self.prec;
        let lo = &self.mid - &self.rad;
        let hi = &self.mid + &self.rad;
        if hi.is_negative() {
            return None;
        }
        if lo.sign() != Sign::Plus {
            let s = (&hi << p).sqrt() + 1;
            return Some(Ball { mid: &s >> 1, rad: (&s >> 1) + 1, prec: p });
        }
        let mid = (&self.mid << p).sqrt();
        // √(m·2^p) is the midpoint in ulps; error r·2^p/(√lo + √m) + 1
        let slo = (&lo << p).sqrt();
        let denom = &slo + &mid;
        let rad = if denom.is_zero() { hi.clone() } else { (&self.rad << p).div_ceil(&denom) + 2 };
        Some(Ball { mid, rad, prec: p })
    }

    /// `e^x`.
    pub fn exp(&self) -> Ball {
        let p = self.prec;
        // halve until |x| ≤ 1/2
        let bound = self.mid.abs() + &self.rad;
        let mut k = 0u32;
        while (&bound >> k) > (BigInt::one() << (p - 1)) {
            k += 1;
        }
        let guard = k + 8;
        let wp = p + guard;
        let z = self.with_prec(wp).shr(k);
        let mut sum = Ball::one(wp);
        let mut term = Ball::one(wp);
        let mut n = 1i64;
        loop {
            term = term.mul(&z).div_int(n);
            sum = sum.add(&term);
            n += 1;
            if term.mid.abs() + &term.rad <= BigInt::one() {
                break;
            }
        }
        sum.rad += 2;
        for _ in 0..k {
            sum = sum.mul(&sum);
        }
        sum.with_prec(p)
    }

    pub fn pi(prec: u32) -> Ball {
        PI_CACHE.with(|c| {
            if let Some(b) = c.borrow().get(&prec) {
                return b.clone();
            }
            let b = compute_pi(prec);
            c.borrow_mut().insert(prec, b.clone());
            b
        })
    }
}

thread_local! {
    static PI_CACHE: RefCell<HashMap<u32, Ball>> = RefCell::new(HashMap::new());
}

/// `atan(1/k)·2^wp` by its alternating series, with an error bound in ulps.
fn atan_inv(k: u64, wp: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << wp;
    let k2 = BigInt::from(k * k);
    let mut power = &one / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    let mut terms = 0u64;
    while !power.is_zero() {
        let t = &power / BigInt::from(2 * n + 1);
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        power /= &k2;
        n += 1;
        terms += 1;
    }
    // each truncated division costs < 2 ulps; the tail is < 1 ulp
    (sum, BigInt::from(2 * terms + 2))
}

fn compute_pi(prec: u32) -> Ball {
    let wp = prec + 16;
    let (a, ea) = atan_inv(5, wp);
    let (b, eb) = atan_inv(239, wp);
    let mid = (a * 16) - (b * 4);
    let rad = ea * 16 + eb * 4;
    Ball { mid, rad, prec: wp }.with_prec(prec)
}

/// Complex ball `re + i·im`.
#[derive(Clone, PartialEq, Eq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl fmt::Debug for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})i", self.re, self.im)
    }
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        assert_eq!(re.prec, im.prec);
        CBall { re, im }
    }

    pub fn zero(prec: u32) -> CBall {
        CBall::new(Ball::zero(prec), Ball::zero(prec))
    }

    pub fn one(prec: u32) -> CBall {
        CBall::new(Ball::one(prec), Ball::zero(prec))
    }

    pub fn i(prec: u32) -> CBall {
        CBall::new(Ball::zero(prec), Ball::one(prec))
    }

    pub fn from_rats(re: &Rat, im: &Rat, prec: u32) -> CBall {
        CBall::new(Ball::from_rat(re, prec), Ball::from_rat(im, prec))
    }

    pub fn from_real(re: Ball) -> CBall {
        let p = re.prec;
        CBall::new(re, Ball::zero(p))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CBall {
        CBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CBall {
        CBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        CBall::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn mul_real(&self, r: &Ball) -> CBall {
        CBall::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_rat(&self, q: &Rat) -> CBall {
        CBall::new(self.re.mul_rat(q), self.im.mul_rat(q))
    }

    pub fn mul_i(&self) -> CBall {
        CBall::new(self.im.neg(), self.re.clone())
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn recip(&self) -> Option<CBall> {
        let n = self.norm_sqr().recip()?;
        Some(self.conj().mul_real(&n))
    }

    pub fn div(&self, o: &CBall) -> Option<CBall> {
        Some(self.mul(&o.recip()?))
    }

    pub fn pow(&self, mut k: u64) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::one(self.prec());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents through the reciprocal.
    pub fn powi(&self, k: i64) -> Option<CBall> {
        if k >= 0 {
            Some(self.pow(k as u64))
        } else {
            self.recip().map(|r| r.pow(k.unsigned_abs()))
        }
    }

    /// Upper bound of `|z|`.
    pub fn abs_upper(&self) -> f64 {
        let r = self.re.abs_upper();
        let i = self.im.abs_upper();
        (r * r + i * i).sqrt() * (1.0 + 1e-15)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// `e^z`.
    pub fn exp(&self) -> CBall {
        let p = self.prec();
        let mag = self.re.exp();
        CBall::new(Ball::zero(p), self.im.clone()).exp_imag().mul_real(&mag)
    }

    /// `e^{iy}` for the imaginary part `y` of `self` (real part ignored).
    fn exp_imag(&self) -> CBall {
        let p = self.prec();
        let wp = p + 16;
        let y = self.im.with_prec(wp);
        let two_pi = Ball::pi(wp).mul_int(2);
        // reduce y modulo 2π
        let k = (y.mid_f64() / y_two_pi_f64()).round() as i64;
        let y = y.sub(&two_pi.mul_int(k));
        // halve three times so |y| ≤ 1/2
        let z = y.shr(3);
        let mut sum = CBall::one(wp);
        let mut term = CBall::one(wp);
        let iz = CBall::new(Ball::zero(wp), z);
        let mut n = 1i64;
        loop {
            let t = term.mul(&iz);
            term = CBall::new(t.re.div_int(n), t.im.div_int(n));
            sum = sum.add(&term);
            n += 1;
            let small = |b: &Ball| b.mid.abs() + &b.rad <= BigInt::one();
            if small(&term.re) && small(&term.im) {
                break;
            }
        }
        sum.re.rad += 2;
        sum.im.rad += 2;
        for _ in 0..3 {
            sum = sum.mul(&sum);
        }
        CBall::new(sum.re.with_prec(p), sum.im.with_prec(p))
    }

    /// `e(q) = e^{2πiq}` for rational `q`.
    pub fn e_rat(q: &Rat, prec: u32) -> CBall {
        let wp = prec + 8;
        let y = Ball::pi(wp).mul_int(2).mul_rat(&crate::arith::frac(q));
        let z = CBall::new(Ball::zero(wp), y).exp_imag();
        CBall::new(z.re.with_prec(prec), z.im.with_prec(prec))
    }

    /// Principal square root; `None` when the ball meets the branch cut.
    pub fn sqrt(&self) -> Option<CBall> {
        let p = self.prec();
        let r = self.norm_sqr().sqrt()?;
        let half = |b: Ball| b.shr(1);
        let s = half(r.add(&self.re)).sqrt()?;
        let t = half(r.sub(&self.re)).sqrt()?;
        if self.im.is_positive() {
            Some(CBall::new(s, t))
        } else if self.im.is_negative() {
            Some(CBall::new(s, t.neg()))
        } else if self.re.is_positive() {
            // t is tiny: widen it to cover both signs
            let t = Ball { mid: BigInt::zero(), rad: t.mid.abs() + &t.rad, prec: p };
            Some(CBall::new(s, t))
        } else {
            None
        }
    }
}

fn y_two_pi_f64() -> f64 {
    2.0 * std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn pi_enclosure() {
        let p = Ball::pi(200);
        assert!((p.mid_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.width() < 1e-55);
        // 355/113 is not π
        assert!(!p.contains_rat(&rat(355, 113)));
    }

    #[test]
    fn exp_and_e() {
        let e1 = Ball::one(120).exp();
        assert!((e1.mid_f64() - std::f64::consts::E).abs() < 1e-15);
        let z = Ball::from_int(-40, 120).exp();
        assert!((z.mid_f64() / (-40f64).exp() - 1.0).abs() < 1e-12);
        let i = CBall::e_rat(&rat(1, 4), 100);
        assert!(i.re.contains_zero());
        assert!(i.im.contains_rat(&int(1)));
        let m = CBall::e_rat(&rat(1, 2), 100);
        assert!(m.re.contains_rat(&int(-1)));
    }

    #[test]
    fn recip_and_sqrt() {
        let x = Ball::from_rat(&rat(3, 7), 100);
        assert!(x.recip().unwrap().contains_rat(&rat(7, 3)));
        let s = Ball::from_int(2, 100).sqrt().unwrap();
        assert!((s.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.mul(&s).contains_rat(&int(2)));
        // √i = e(1/8)
        let r = CBall::i(100).sqrt().unwrap();
        let e8 = CBall::e_rat(&rat(1, 8), 100);
        assert!(r.sub(&e8).abs_upper() < 1e-25);
        assert!(CBall::from_rats(&int(-1), &int(0), 100).sqrt().is_none());
    }

    #[test]
    fn division_encloses() {
        let a = CBall::from_rats(&int(1), &int(1), 90);
        let q = CBall::one(90).div(&a).unwrap();
        assert!(q.re.contains_rat(&rat(1, 2)));
        assert!(q.im.contains_rat(&rat(-1, 2)));
    }
}
