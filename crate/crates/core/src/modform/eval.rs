//! Rigorous evaluation of truncated expansions at points of the Siegel or
//! Hermitian half-space.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{int, Rat};
use crate::error::{Error, Result};
use crate::field::{KElem, QuadField};
use crate::interval::{Ball, CBall};
use crate::lattice::Case;
use crate::matrix::QMatrix;

use super::{QExpansion, TailModel};

/// A point `τ = X + iY` with rational entries (row-major `n × n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpacePoint {
    pub n: usize,
    pub re: Vec<Rat>,
    pub im: Vec<Rat>,
}

impl HalfSpacePoint {
    pub fn scalar(re: Rat, im: Rat) -> HalfSpacePoint {
        HalfSpacePoint { n: 1, re: vec![re], im: vec![im] }
    }

    /// `i·diag(ys)`.
    pub fn diag_imag(ys: &[Rat]) -> HalfSpacePoint {
        let n = ys.len();
        let mut im = vec![Rat::zero(); n * n];
        for (i, y) in ys.iter().enumerate() {
            im[i * n + i] = y.clone();
        }
        HalfSpacePoint { n, re: vec![Rat::zero(); n * n], im }
    }

    pub fn is_purely_imaginary(&self) -> bool {
        self.re.iter().all(|x| x.is_zero())
    }

    /// Real symmetric form with the eigenvalues of `Im τ` (of
    /// `(τ − τ*)/2i` in the unitary case, realified to size `2n`).
    pub fn imaginary_form(&self, case: Case) -> Result<QMatrix> {
        let n = self.n;
        let at = |v: &[Rat], i: usize, j: usize| v[i * n + j].clone();
        match case {
            Case::Orthogonal => {
                for i in 0..n {
                    for j in 0..n {
                        if at(&self.re, i, j) != at(&self.re, j, i) || at(&self.im, i, j) != at(&self.im, j, i) {
                            return Err(Error::NotInHalfSpace("τ must be symmetric".into()));
                        }
                    }
                }
                Ok(QMatrix::from_rows((0..n).map(|i| (0..n).map(|j| at(&self.im, i, j)).collect()).collect()))
            }
            Case::Unitary => {
                // Y = A + iB with A = (Im τ + Im τᵗ)/2, B = −(Re τ − Re τᵗ)/2
                let half = Rat::new(1.into(), 2.into());
                let mut m = QMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    for j in 0..n {
                        let a = (at(&self.im, i, j) + at(&self.im, j, i)) * &half;
                        let b = -(at(&self.re, i, j) - at(&self.re, j, i)) * &half;
                        m[(i, j)] = a.clone();
                        m[(n + i, n + j)] = a;
                        m[(i, n + j)] = -b.clone();
                        m[(n + i, j)] = b;
                    }
                }
                Ok(m)
            }
        }
    }

    /// Checks membership and returns a positive lower bound for the
    /// smallest eigenvalue of the imaginary part.
    pub fn check(&self, case: Case) -> Result<Rat> {
        if self.re.len() != self.n * self.n || self.im.len() != self.n * self.n {
            return Err(Error::SizeMismatch("τ has the wrong number of entries".into()));
        }
        let y = self.imaginary_form(case)?;
        let (p, _, _) = y.inertia();
        if p != y.rows() {
            return Err(Error::NotInHalfSpace("imaginary part is not positive definite".into()));
        }
        let g = gershgorin_lower(&y);
        let t = Rat::one() / y.inverse().unwrap().trace();
        Ok(if g > t { g } else { t })
    }

    pub fn to_balls(&self, prec: u32) -> Vec<CBall> {
        self.re.iter().zip(&self.im).map(|(a, b)| CBall::from_rats(a, b, prec)).collect()
    }
}

/// `min_i (a_ii − Σ_{j≠i} |a_ij|)`.
pub fn gershgorin_lower(a: &QMatrix) -> Rat {
    (0..a.rows())
        .map(|i| {
            let off: Rat = (0..a.cols()).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            &a[(i, i)] - off
        })
        .min()
        .unwrap_or_else(Rat::zero)
}

/// Ball version of the lower eigenvalue bound for a point given by balls.
fn gershgorin_balls(tau: &[CBall], n: usize, case: Case) -> Option<f64> {
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (diag, off) = match case {
            Case::Orthogonal => {
                let d = tau[i * n + i].im.lower();
                let off: f64 = (0..n).filter(|&j| j != i).map(|j| tau[i * n + j].im.abs_upper()).sum();
                (d, off)
            }
            Case::Unitary => {
                // Hermitian Y_ij = (τ_ij − conj τ_ji)/2i
                let d = tau[i * n + i].im.lower();
                let off: f64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| tau[i * n + j].sub(&tau[j * n + i].conj()).abs_upper() / 2.0)
                    .sum();
                (d, off)
            }
        };
        best = best.min(diag - off * (1.0 + 1e-12));
    }
    let best = best.max(cholesky_lower(tau, n, case).unwrap_or(0.0));
    if best > 0.0 {
        Some(best)
    } else {
        None
    }
}

/// `1/tr(Y⁻¹)` via a ball Cholesky factorization of the (realified)
/// imaginary part; `None` when positivity cannot be certified.
fn cholesky_lower(tau: &[CBall], n: usize, case: Case) -> Option<f64> {
    let prec = tau.first()?.prec();
    let (m, y): (usize, Vec<Ball>) = match case {
        Case::Orthogonal => (n, tau.iter().map(|z| z.im.clone()).collect()),
        Case::Unitary => {
            let h: Vec<CBall> = (0..n * n)
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    // (τ_ij − conj τ_ji)/2i
                    let d = tau[i * n + j].sub(&tau[j * n + i].conj());
                    CBall::new(d.im.div_int(2), d.re.neg().div_int(2))
                })
                .collect();
            let m = 2 * n;
            let mut y = vec![Ball::zero(prec); m * m];
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (&h[i * n + j].re, &h[i * n + j].im);
                    y[i * m + j] = a.clone();
                    y[(i + n) * m + j + n] = a.clone();
                    y[i * m + j + n] = b.neg();
                    y[(i + n) * m + j] = b.clone();
                }
            }
            (m, y)
        }
    };
    let mut l = vec![Ball::zero(prec); m * m];
    for j in 0..m {
        let mut d = y[j * m + j].clone();
        for k in 0..j {
            d = d.sub(&l[j * m + k].mul(&l[j * m + k]));
        }
        if !d.is_positive() {
            return None;
        }
        let ljj = d.sqrt()?;
        for i in j + 1..m {
            let mut s = y[i * m + j].clone();
            for k in 0..j {
                s = s.sub(&l[i * m + k].mul(&l[j * m + k]));
            }
            l[i * m + j] = s.div(&ljj)?;
        }
        l[j * m + j] = ljj;
    }
    // tr(Y⁻¹) = ‖L⁻¹‖_F², columns of L⁻¹ by forward substitution
    let mut tr = Ball::zero(prec);
    for c in 0..m {
        let mut x = vec![Ball::zero(prec); m];
        for i in c..m {
            let mut s = if i == c { Ball::one(prec) } else { Ball::zero(prec) };
            for k in c..i {
                s = s.sub(&l[i * m + k].mul(&x[k]));
            }
            x[i] = s.div(&l[i * m + i])?;
            tr = tr.add(&x[i].mul(&x[i]));
        }
    }
    let v = tr.recip()?.lower();
    (v > 0.0).then_some(v)
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Truncated sums, one per component.
    pub values: Vec<CBall>,
    /// Bound for the modulus of every component's tail; `None` if unknown.
    pub tail: Option<Ball>,
}

impl Evaluation {
    /// Values widened by the tail bound.
    pub fn enclosures(&self) -> Option<Vec<CBall>> {
        let t = self.tail.as_ref()?;
        Some(self.values.iter().map(|v| CBall::new(v.re.widen(t), v.im.widen(t))).collect())
    }
}

/// Embedding of `K` into `ℂ` as balls.
pub(crate) fn kelem_ball(x: &KElem, field: Option<&QuadField>, prec: u32) -> CBall {
    match field {
        None => CBall::from_rats(&x.a, &Rat::zero(), prec),
        Some(f) => {
            if x.b.is_zero() {
                return CBall::from_rats(&x.a, &Rat::zero(), prec);
            }
            let (re, im2) = f.omega_embedding();
            let im = Ball::from_rat(&im2, prec).sqrt().expect("positive");
            let w = CBall::new(Ball::from_rat(&re, prec), im);
            CBall::from_rats(&x.a, &Rat::zero(), prec).add(&w.mul_rat(&x.b))
        }
    }
}

pub fn evaluate(f: &QExpansion, tau: &HalfSpacePoint, prec: u32) -> Result<Evaluation> {
    if tau.n != f.genus {
        return Err(Error::SizeMismatch(format!("τ has size {} but the expansion has genus {}", tau.n, f.genus)));
    }
    let y = tau.check(f.case)?;
    evaluate_balls(f, &tau.to_balls(prec), Some(&y), prec)
}

/// Evaluation at a point given by balls; `y_lower` overrides the
/// eigenvalue bound computed from the balls.
pub(crate) fn evaluate_balls(f: &QExpansion, tau: &[CBall], y_lower: Option<&Rat>, prec: u32) -> Result<Evaluation> {
    let n = f.genus;
    let y = match y_lower {
        Some(y) => y.clone(),
        None => {
            let v = gershgorin_balls(tau, n, f.case)
                .ok_or_else(|| Error::NotInHalfSpace("cannot certify that the point lies in the half-space".into()))?;
            Rat::from_float(v * (1.0 - 1e-12)).unwrap()
        }
    };
    let wp = prec + 16;
    let tau: Vec<CBall> = tau.iter().map(|z| CBall::new(z.re.with_prec(wp), z.im.with_prec(wp))).collect();
    let lambda = match f.case {
        Case::Orthogonal => 1,
        Case::Unitary => 2,
    };
    let two_pi_l = Ball::pi(wp).mul_int(2 * lambda);
    let mut by_comp: Vec<Vec<(&super::CoeffKey, &Rat)>> = vec![Vec::new(); f.components()];
    for (k, c) in f.iter() {
        by_comp[f.component_index(&k.mu)].push((k, c));
    }
    let field = f.field;
    let values: Vec<CBall> = by_comp
        .par_iter()
        .map(|recs| {
            let mut acc = CBall::zero(wp);
            for (k, c) in recs {
                // z = tr(Tτ) = Σ T_ij τ_ji
                let mut z = CBall::zero(wp);
                for i in 0..n {
                    for j in 0..n {
                        let t = k.entry(i, j);
                        if t.is_zero() {
                            continue;
                        }
                        z = z.add(&kelem_ball(t, field.as_ref(), wp).mul(&tau[j * n + i]));
                    }
                }
                // e(λz) = exp(2πiλz)
                let w = CBall::new(z.im.mul(&two_pi_l).neg(), z.re.mul(&two_pi_l));
                acc = acc.add(&w.exp().mul_rat(c));
            }
            CBall::new(acc.re.with_prec(prec), acc.im.with_prec(prec))
        })
        .collect();
    let tail = tail_bound(f, &y, prec);
    Ok(Evaluation { values, tail })
}

/// Bound for the tail `Σ_{tr T > B} |c(T, μ) e(tr(λTτ))|` given a lower
/// bound `y` for the eigenvalues of `Im τ`.
pub fn tail_bound(f: &QExpansion, y: &Rat, prec: u32) -> Option<Ball> {
    let wp = prec + 16;
    let yb = Ball::from_rat(y, wp);
    let two_pi = Ball::pi(wp).mul_int(2);
    match &f.tail {
        TailModel::None => None,
        TailModel::Linear => {
            // Σ_{N > B} N·r^N = r^{B+1}((B+1) − B·r)/(1 − r)², r = e^{−2πy}
            let b = f.truncation.floor();
            let r = yb.mul(&two_pi).neg().exp();
            let b1 = Ball::from_rat(&(&b + Rat::one()), wp);
            let big_b = Ball::from_rat(&b, wp);
            let rb1 = r_pow(&r, &(&b + Rat::one()), wp);
            let num = rb1.mul(&b1.sub(&big_b.mul(&r)));
            let one_r = Ball::one(wp).sub(&r);
            let t = num.div(&one_r.mul(&one_r))?;
            Some(t.with_prec(prec))
        }
        TailModel::Theta { lambda, pivots } => {
            let sigmas = [(1, 4), (1, 2), (3, 4), (7, 8), (15, 16), (31, 32)];
            let mut best: Option<Ball> = None;
            for (a, d) in sigmas {
                let s = Rat::new(a.into(), d.into());
                let one_s = Rat::one() - &s;
                let mut prod = Ball::one(wp);
                for q in pivots {
                    let v = Ball::from_rat(&(y * &one_s * q), wp);
                    let term = Ball::one(wp).add(&v.sqrt()?.recip()?);
                    prod = prod.mul(&term);
                }
                let mut p_n = Ball::one(wp);
                for _ in 0..f.genus {
                    p_n = p_n.mul(&prod);
                }
                let expo = Ball::from_rat(&(y * &s * int(*lambda as i64) * &f.truncation), wp).mul(&two_pi).neg().exp();
                let t = expo.mul(&p_n);
                if best.as_ref().is_none_or(|b| t.upper() < b.upper()) {
                    best = Some(t);
                }
            }
            best.map(|b| b.with_prec(prec))
        }
    }
}

fn r_pow(r: &Ball, e: &Rat, wp: u32) -> Ball {
    let k: u64 = e.to_integer().try_into().unwrap_or(0);
    let mut acc = Ball::one(wp);
    let mut base = r.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        k >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cycles::theta_expansion;
    use crate::lattice::standard;
    use crate::modform::CoeffKey;

    #[test]
    fn trivial_cases() {
        let f = QExpansion::new(1, int(0), Case::Orthogonal, None, "x", 2, int(3));
        let e = evaluate(&f, &HalfSpacePoint::scalar(int(0), int(1)), 64).unwrap();
        assert!(e.values.iter().all(|v| v.contains_zero()));
        let mut g = f.clone();
        g.set(CoeffKey::new(vec![KElem::zero()], vec![0]), int(1)).unwrap();
        let e = evaluate(&g, &HalfSpacePoint::scalar(rat(1, 3), int(2)), 64).unwrap();
        assert!(e.values[0].re.contains_rat(&int(1)) && e.values[0].im.contains_zero());
        assert!(matches!(evaluate(&g, &HalfSpacePoint::scalar(int(0), int(-1)), 64), Err(Error::NotInHalfSpace(_))));
    }

    #[test]
    fn e8_at_i() {
        let f = theta_expansion(&standard::e8(), 1, &int(12)).unwrap();
        let e = evaluate(&f, &HalfSpacePoint::scalar(int(0), int(1)), 128).unwrap();
        let v = e.values[0].re.mid_f64();
        let x = (-2.0 * std::f64::consts::PI).exp();
        let sigma3 = |n: u64| (1..=n).filter(|d| n % d == 0).map(|d| (d * d * d) as f64).sum::<f64>();
        let approx = 1.0 + (1..=12).map(|n| 240.0 * sigma3(n) * x.powi(n as i32)).sum::<f64>();
        assert!((v - approx).abs() < 1e-9);
        assert!(e.tail.unwrap().upper() < 1e-15);
    }

    #[test]
    fn monotone_in_truncation() {
        let f = theta_expansion(&standard::a(2), 1, &int(12)).unwrap();
        let tau = HalfSpacePoint::scalar(rat(1, 3), rat(1, 2));
        let small = evaluate(&f.truncate(&int(6)), &tau, 96).unwrap();
        let big = evaluate(&f, &tau, 96).unwrap();
        let t = small.tail.clone().unwrap().upper();
        for (a, b) in small.values.iter().zip(&big.values) {
            assert!(a.sub(b).abs_upper() <= t);
        }
    }

    #[test]
    fn hermitian_point_checks() {
        let p = HalfSpacePoint { n: 2, re: vec![int(0), int(1), int(-1), int(0)], im: vec![int(2), int(0), int(0), int(2)] };
        // Y = [[2, i], [−i, 2]] is positive definite
        assert!(p.check(Case::Unitary).is_ok());
        assert!(matches!(p.check(Case::Orthogonal), Err(Error::NotInHalfSpace(_))));
        let q = HalfSpacePoint { n: 2, re: vec![int(0), int(3), int(-3), int(0)], im: vec![int(2), int(0), int(0), int(2)] };
        assert!(matches!(q.check(Case::Unitary), Err(Error::NotInHalfSpace(_))));
    }
}
