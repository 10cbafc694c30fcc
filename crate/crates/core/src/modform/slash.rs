//! Checks of `F(Mτ) = φ(τ)^{2k} ρ(M) F(τ)` along generator words.
//!
//! Words made of `n(B)` letters are checked exactly on coefficients. All
//! other words are checked numerically with balls at each sample point;
//! a sample passes only if the certified defect bound is below `tol`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{frac, Rat};
use crate::cyclotomic::ExactScalar;
use crate::error::{Error, Result};
use crate::field::{KElem, QuadField};
use crate::interval::CBall;
use crate::lattice::{Case, Lattice};
use crate::weil::{generator_block, Generator, GroupWord, WeilRep};

use super::eval::{evaluate_balls, kelem_ball};
use super::{HalfSpacePoint, QExpansion};

#[derive(Debug, Clone)]
pub struct SlashSample {
    pub point: HalfSpacePoint,
    /// Certified upper bound of `max_ν |F(Mτ)_ν − (φ^{2k}ρ(M)F(τ))_ν|`.
    pub defect: f64,
}

#[derive(Debug, Clone)]
pub struct SlashReport {
    /// True when the check ran on coefficients without numerics.
    pub exact: bool,
    /// Coefficients violating the exact check.
    pub mismatches: usize,
    pub samples: Vec<SlashSample>,
    pub max_defect: f64,
    pub tol: f64,
    pub pass: bool,
}

type CMat = Vec<CBall>;

fn cmat_mul(a: &CMat, b: &CMat, n: usize, prec: u32) -> CMat {
    let mut out = vec![CBall::zero(prec); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = CBall::zero(prec);
            for k in 0..n {
                s = s.add(&a[i * n + k].mul(&b[k * n + j]));
            }
            out[i * n + j] = s;
        }
    }
    out
}

/// Inverse and determinant by Gauss–Jordan elimination with pivoting on
/// the largest midpoint.
fn cmat_inv_det(a: &CMat, n: usize, prec: u32) -> Option<(CMat, CBall)> {
    let mut m = a.clone();
    let mut inv: CMat = (0..n * n).map(|k| if k / n == k % n { CBall::one(prec) } else { CBall::zero(prec) }).collect();
    let mut det = CBall::one(prec);
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| {
            let fx = m[x * n + c].abs_upper();
            let fy = m[y * n + c].abs_upper();
            fx.partial_cmp(&fy).unwrap()
        })?;
        if m[p * n + c].contains_zero() {
            return None;
        }
        if p != c {
            for j in 0..n {
                m.swap(p * n + j, c * n + j);
                inv.swap(p * n + j, c * n + j);
            }
            det = det.neg();
        }
        let piv = m[c * n + c].clone();
        det = det.mul(&piv);
        let r = piv.recip()?;
        for j in 0..n {
            m[c * n + j] = m[c * n + j].mul(&r);
            inv[c * n + j] = inv[c * n + j].mul(&r);
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = m[i * n + c].clone();
            if f.contains_zero() && f.abs_upper() == 0.0 {
                continue;
            }
            for j in 0..n {
                let t = f.mul(&m[c * n + j]);
                m[i * n + j] = m[i * n + j].sub(&t);
                let t = f.mul(&inv[c * n + j]);
                inv[i * n + j] = inv[i * n + j].sub(&t);
            }
        }
    }
    Some((inv, det))
}

/// `(Aτ + B)(Cτ + D)^{-1}` and `det(Cτ + D)` for a `2n × 2n` matrix.
fn act(m: &[Vec<KElem>], tau: &CMat, n: usize, field: Option<&QuadField>, prec: u32) -> Option<(CMat, CBall)> {
    let blk = |r0: usize, c0: usize| -> CMat {
        (0..n * n).map(|k| kelem_ball(&m[r0 + k / n][c0 + k % n], field, prec)).collect()
    };
    let (a, b, c, d) = (blk(0, 0), blk(0, n), blk(n, 0), blk(n, n));
    let top: CMat = cmat_mul(&a, tau, n, prec).iter().zip(&b).map(|(x, y)| x.add(y)).collect();
    let bot: CMat = cmat_mul(&c, tau, n, prec).iter().zip(&d).map(|(x, y)| x.add(y)).collect();
    let (inv, det) = cmat_inv_det(&bot, n, prec)?;
    Some((cmat_mul(&top, &inv, n, prec), det))
}

/// `φ_g(τ)` for one letter, when it does not depend on a branch choice
/// beyond the fixed conventions (`√(−1) = i`, principal `√τ` in genus one).
fn letter_phi(g: &Generator, tau: &CMat, n: usize, pure_imag: bool, field: Option<&QuadField>, prec: u32) -> Result<CBall> {
    match g {
        Generator::N(_) => Ok(CBall::one(prec)),
        Generator::M(_) => {
            // φ² = det(A*)^{-1}; only ±1 occur in the orthogonal case
            let blk = generator_block(g, n, field);
            let dk: Vec<Vec<KElem>> = (0..n).map(|i| blk[n + i][n..].to_vec()).collect();
            let dd: CMat = dk.iter().flatten().map(|x| kelem_ball(x, field, prec)).collect();
            let (_, det) = cmat_inv_det(&dd, n, prec).ok_or_else(|| Error::InvalidGenerator("singular m(A)".into()))?;
            if det.re.is_positive() {
                Ok(CBall::one(prec))
            } else {
                Ok(CBall::i(prec))
            }
        }
        Generator::S => {
            if n == 1 {
                return tau[0].sqrt().ok_or_else(|| Error::BranchAmbiguity("√τ meets the branch cut".into()));
            }
            if !pure_imag {
                return Err(Error::BranchAmbiguity("√det τ is only fixed at purely imaginary τ for genus > 1".into()));
            }
            // τ = iY: √det τ = e(n/8)·√det Y
            let y: CMat = tau.iter().map(|z| CBall::from_real(z.im.clone())).collect();
            let (_, det) = cmat_inv_det(&y, n, prec).ok_or_else(|| Error::NotInHalfSpace("singular Im τ".into()))?;
            let s = det.re.sqrt().ok_or_else(|| Error::NotInHalfSpace("Im τ not positive".into()))?;
            Ok(CBall::e_rat(&Rat::new((n as i64).into(), 8.into()), prec).mul_real(&s))
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn slash_check(
    f: &QExpansion,
    w: &GroupWord,
    k: &Rat,
    lattice: &Lattice,
    samples: &[HalfSpacePoint],
    tol: f64,
    prec: u32,
) -> Result<SlashReport> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Parse("tolerance must be positive".into()));
    }
    if w.genus != f.genus {
        return Err(Error::SizeMismatch(format!("word of genus {} for an expansion of genus {}", w.genus, f.genus)));
    }
    if w.case != f.case || lattice.case() != f.case {
        return Err(Error::WrongCase("word, lattice and expansion must share the case".into()));
    }
    let rho = WeilRep::new(lattice, w.genus)?;
    if rho.group().order() != f.classes {
        return Err(Error::SizeMismatch("expansion classes do not match the lattice".into()));
    }
    let field = lattice.field().copied();
    w.validate(field.as_ref())?;
    let two_k = k * Rat::from_integer(2.into());
    if !two_k.is_integer() {
        return Err(Error::BranchAmbiguity("weight must be integral or half-integral".into()));
    }
    let half_integral = two_k.to_integer().is_odd();
    if half_integral && f.case == Case::Unitary {
        return Err(Error::BranchAmbiguity("half-integral weight on a unitary group".into()));
    }
    if half_integral && w.genus > 1 && w.len() > 1 {
        return Err(Error::BranchAmbiguity("half-integral weight in genus > 1 is checked on single generators only".into()));
    }
    if w.letters.iter().all(|g| matches!(g, Generator::N(_))) {
        return exact_translation_check(f, w, &rho, field.as_ref(), tol);
    }
    let n = w.genus;
    let mat = w.matrix(field.as_ref());
    let wm = rho.word_matrix(w)?;
    let dim = wm.dim();
    let wp = prec + 16;
    let entries: Vec<CBall> = (0..dim * dim).map(|idx| wm.entry(idx / dim, idx % dim).embed(wp)).collect();
    let mut out = Vec::new();
    for s in samples {
        if s.n != n {
            return Err(Error::SizeMismatch("sample point has the wrong size".into()));
        }
        let y = s.check(f.case)?;
        let tau = s.to_balls(wp);
        let (tau2, det) = act(&mat, &tau, n, field.as_ref(), wp)
            .ok_or_else(|| Error::NotInHalfSpace("Cτ + D is not invertible".into()))?;
        // weight factor φ(τ)^{2k}
        let factor = if half_integral {
            let mut phi = CBall::one(wp);
            let mut cur = tau.clone();
            let pure = s.is_purely_imaginary();
            for g in w.letters.iter().rev() {
                phi = phi.mul(&letter_phi(g, &cur, n, pure, field.as_ref(), wp)?);
                let blk = generator_block(g, n, field.as_ref());
                cur = act(&blk, &cur, n, field.as_ref(), wp).ok_or_else(|| Error::NotInHalfSpace("Cτ + D is not invertible".into()))?.0;
            }
            let e = (&two_k - Rat::one()) / Rat::from_integer(2.into());
            pow_int(&det, &e)?.mul(&phi)
        } else {
            pow_int(&det, k)?
        };
        let lhs = evaluate_balls(f, &tau2, None, wp)?;
        let rhs = evaluate_balls(f, &tau, Some(&y), wp)?;
        let defect = match (lhs.enclosures(), rhs.enclosures()) {
            (Some(l), Some(r)) => {
                let mut worst: f64 = 0.0;
                for nu in 0..dim {
                    let mut acc = CBall::zero(wp);
                    for (mu, rv) in r.iter().enumerate() {
                        let m = &entries[nu * dim + mu];
                        if m.contains_zero() && m.abs_upper() == 0.0 {
                            continue;
                        }
                        acc = acc.add(&m.mul(rv));
                    }
                    let d = l[nu].sub(&factor.mul(&acc));
                    worst = worst.max(d.abs_upper());
                }
                worst
            }
            _ => f64::INFINITY,
        };
        out.push(SlashSample { point: s.clone(), defect });
    }
    let max_defect = out.iter().map(|s| s.defect).fold(0.0, f64::max);
    Ok(SlashReport { exact: false, mismatches: 0, pass: max_defect < tol, samples: out, max_defect, tol })
}

fn pow_int(z: &CBall, e: &Rat) -> Result<CBall> {
    let k: i64 = e.to_integer().try_into().map_err(|_| Error::Overflow("weight too large".into()))?;
    z.powi(k).ok_or_else(|| Error::NotInHalfSpace("det(Cτ + D) not invertible".into()))
}

/// `F(τ + B) = ρ(n(B))F(τ)` coefficient by coefficient: the phase
/// `e(tr(λTB))` must equal the diagonal entry of `ρ(n(B))` at `μ`.
fn exact_translation_check(f: &QExpansion, w: &GroupWord, rho: &WeilRep, field: Option<&QuadField>, tol: f64) -> Result<SlashReport> {
    let n = w.genus;
    let mut b = vec![KElem::zero(); n * n];
    for g in &w.letters {
        if let Generator::N(m) = g {
            for i in 0..n {
                for j in 0..n {
                    b[i * n + j] = b[i * n + j].add(&KElem::new(Rat::from_integer(m[i][j][0].into()), Rat::from_integer(m[i][j][1].into())));
                }
            }
        }
    }
    let bm: Vec<Vec<[i64; 2]>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = &b[i * n + j];
                    [x.a.to_integer().try_into().unwrap_or(0), x.b.to_integer().try_into().unwrap_or(0)]
                })
                .collect()
        })
        .collect();
    let m = rho.generator_matrix(&Generator::N(bm))?;
    let lambda = match f.case {
        Case::Orthogonal => Rat::one(),
        Case::Unitary => Rat::from_integer(2.into()),
    };
    let mul = |x: &KElem, y: &KElem| match field {
        Some(fl) => fl.mul(x, y),
        None => KElem::from_rat(&x.a * &y.a),
    };
    let mut mismatches = 0;
    for (key, _) in f.iter() {
        let mut tr = KElem::zero();
        for i in 0..n {
            for j in 0..n {
                tr = tr.add(&mul(key.entry(i, j), &b[j * n + i]));
            }
        }
        debug_assert!(tr.b.is_zero());
        let phase = ExactScalar::root_of_unity(&frac(&(&tr.a * &lambda)));
        let idx = rho.tuple_index(&key.mu);
        if m.entry(idx, idx) != phase {
            mismatches += 1;
        }
    }
    let defect = if mismatches == 0 { 0.0 } else { f64::INFINITY };
    Ok(SlashReport { exact: true, mismatches, samples: Vec::new(), max_defect: defect, tol, pass: mismatches == 0 && defect < tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::cycles::{theta_expansion, theta_weight};
    use crate::lattice::standard;
    use crate::modform::CoeffKey;

    fn points() -> Vec<HalfSpacePoint> {
        vec![
            HalfSpacePoint::scalar(int(0), int(1)),
            HalfSpacePoint::scalar(int(1), int(1)),
            HalfSpacePoint::scalar(rat(-1, 2), rat(3, 2)),
        ]
    }

    #[test]
    fn e8_and_a1() {
        let e8 = standard::e8();
        let f = theta_expansion(&e8, 1, &int(30)).unwrap();
        let r = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "S"), &int(4), &e8, &points()[..1], 1e-8, 96).unwrap();
        assert!(r.pass, "{r:?}");
        let a1 = standard::a(1);
        let f = theta_expansion(&a1, 1, &int(30)).unwrap();
        let r = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "T"), &rat(1, 2), &a1, &points(), 1e-6, 96).unwrap();
        assert!(r.exact && r.pass && r.max_defect == 0.0);
        let r = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "S"), &rat(1, 2), &a1, &points(), 1e-6, 96).unwrap();
        assert!(r.pass, "{r:?}");
        let r = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "STSZ"), &rat(1, 2), &a1, &points(), 1e-6, 96).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn perturbed_fails() {
        let a2 = standard::a(2);
        let mut f = theta_expansion(&a2, 1, &int(24)).unwrap();
        let key = CoeffKey::new(vec![KElem::from_rat(int(1))], vec![0]);
        let c = f.get(&key);
        f.set(key, c + int(1)).unwrap();
        let r = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "S"), &int(1), &a2, &points(), 1e-6, 96).unwrap();
        assert!(!r.pass);
        let r = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "T"), &int(1), &a2, &points(), 1e-6, 96).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn genus_two_generators() {
        let a2 = standard::a(2);
        let f = theta_expansion(&a2, 2, &int(10)).unwrap();
        let pts = vec![HalfSpacePoint::diag_imag(&[int(1), int(1)]), HalfSpacePoint::diag_imag(&[int(1), rat(3, 2)])];
        let s = GroupWord::new(2, Case::Orthogonal, vec![Generator::S]);
        let r = slash_check(&f, &s, &theta_weight(&a2), &a2, &pts, 1e-6, 96).unwrap();
        assert!(r.pass, "{r:?}");
        let nb = GroupWord::new(2, Case::Orthogonal, vec![Generator::n_int(&[vec![1, 1], vec![1, 0]])]);
        assert!(slash_check(&f, &nb, &int(1), &a2, &pts, 1e-6, 96).unwrap().pass);
        let m = GroupWord::new(2, Case::Orthogonal, vec![Generator::m_int(&[vec![1, 1], vec![0, 1]])]);
        let p = HalfSpacePoint { n: 2, re: vec![rat(1, 5), rat(1, 7), rat(1, 7), int(0)], im: vec![int(2), rat(1, 3), rat(1, 3), int(2)] };
        let r = slash_check(&f, &m, &int(1), &a2, &[p], 1e-6, 96).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn branch_refusal() {
        let a1 = standard::a(1);
        let f = theta_expansion(&a1, 2, &int(2)).unwrap();
        let w = GroupWord::new(2, Case::Orthogonal, vec![Generator::S, Generator::S]);
        let pts = vec![HalfSpacePoint::diag_imag(&[int(1), int(1)])];
        assert!(matches!(slash_check(&f, &w, &rat(1, 2), &a1, &pts, 1e-6, 64), Err(Error::BranchAmbiguity(_))));
    }

    #[test]
    fn unitary_theta() {
        let l = standard::ok_scaled(-4, 1);
        let f = theta_expansion(&l, 1, &int(16)).unwrap();
        let k = theta_weight(&l);
        for w in ["S", "T", "ST"] {
            let r = slash_check(&f, &GroupWord::sl2(Case::Unitary, w), &k, &l, &points(), 1e-6, 96).unwrap();
            assert!(r.pass, "{w}: {r:?}");
        }
        let u = GroupWord::new(1, Case::Unitary, vec![Generator::M(vec![vec![[0, 1]]])]);
        let r = slash_check(&f, &u, &k, &l, &points(), 1e-6, 96).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
