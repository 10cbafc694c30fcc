//! Witt index of a rational quadratic form.
//!
//! Local solubility at rank 3 and 4 is decided by Hilbert symbols and the
//! Hasse invariant; rank ≥ 5 indefinite forms are isotropic by Meyer's
//! theorem. Isotropic vectors are found by a bounded meet-in-the-middle
//! search on a diagonalized form and then split off as hyperbolic planes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor, squarefree_core, Rat};
use crate::error::{Error, Result};
use crate::lattice::Signature;
use crate::matrix::{integer_kernel, lll_reduce, QMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittStatus {
    /// The index is exact.
    Certified,
    /// Local conditions allow a further isotropic vector but none was found
    /// within the search budget; the index is a lower bound.
    Inconclusive,
}

/// The place certifying that the remaining form is anisotropic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    /// `"inf"` or a prime.
    pub place: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittReport {
    pub rank: usize,
    pub signature: Signature,
    pub witt_index: usize,
    /// First isotropic vector found (primitive, integral).
    pub witness: Option<Vec<Rat>>,
    /// Basis of a totally isotropic subspace of dimension `witt_index`.
    pub isotropic_basis: Vec<Vec<Rat>>,
    pub status: WittStatus,
    pub obstruction: Option<Obstruction>,
}

/// Heights tried by the blind witness search before and after the
/// constructive solver.
const HEIGHTS_FIRST: [i64; 2] = [10, 30];
const HEIGHTS_LAST: [i64; 2] = [100, 300];
/// Largest `max(|x|, |y|)` tried when splitting off a binary value.
const SPLIT_HEIGHT: i64 = 24;
/// Vectors scanned by the direct box search in form coordinates.
const BOX_BUDGET: u64 = 200_000;
/// Largest half-table of the meet-in-the-middle search.
const TABLE_BUDGET: u64 = 4_000_000;

pub fn witt_index(form: &QMatrix) -> Result<WittReport> {
    if !form.is_square() || !form.is_symmetric() {
        return Err(Error::DegenerateForm("form must be a symmetric square matrix".into()));
    }
    if form.rows() > 0 && form.det().is_zero() {
        return Err(Error::DegenerateForm("form has zero determinant".into()));
    }
    let (p, n, _) = if form.rows() == 0 { (0, 0, 0) } else { form.inertia() };
    let signature = Signature { positive: p, negative: n };
    let mut basis = Vec::new();
    let mut status = WittStatus::Certified;
    let mut obstruction = None;
    // current form and the map from its coordinates to the original ones
    let mut a = form.clone();
    let mut embed = QMatrix::identity(form.rows());
    loop {
        if a.rows() == 0 {
            break;
        }
        match find_isotropic(&a)? {
            Found::Vector(v) => {
                let v_orig = QMatrix::from_rows(vec![v.clone()]).mul(&embed).row(0).to_vec();
                basis.push(primitive(&v_orig));
                if a.rows() == 2 {
                    break;
                }
                let (b, e) = split_hyperbolic(&a, &v);
                embed = e.mul(&embed);
                a = b;
            }
            Found::Anisotropic(o) => {
                obstruction = Some(o);
                break;
            }
            Found::Unknown => {
                status = WittStatus::Inconclusive;
                break;
            }
        }
    }
    Ok(WittReport {
        rank: form.rows(),
        signature,
        witt_index: basis.len(),
        witness: basis.first().cloned(),
        isotropic_basis: basis,
        status,
        obstruction,
    })
}

enum Found {
    Vector(Vec<Rat>),
    Anisotropic(Obstruction),
    Unknown,
}

/// Given isotropic `v`, returns the form on the orthogonal complement of a
/// hyperbolic plane through `v` and a reduced integral basis of that
/// complement (as rows).
fn split_hyperbolic(a: &QMatrix, v: &[Rat]) -> (QMatrix, QMatrix) {
    let av = a.mul_vec(v);
    let k = av.iter().position(|c| !c.is_zero()).expect("non-degenerate");
    // the plane is span(v, w) with w = e_k − c·v, so its complement is
    // {x : vᵗAx = 0, (Ax)_k = 0}
    let cons: Vec<Vec<BigInt>> = [av, a.row(k).to_vec()].iter().map(|r| integral_row(r)).collect();
    let basis = lll_reduce(integer_kernel(&cons, a.rows()));
    let comp = QMatrix::from_rows(basis.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect());
    let b = comp.mul(a).mul(&comp.transpose());
    (b, comp)
}

fn integral_row(r: &[Rat]) -> Vec<BigInt> {
    let den = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    r.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect()
}

/// Scales to an integral primitive vector with positive leading entry.
fn primitive(v: &[Rat]) -> Vec<Rat> {
    let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = ints.iter().find(|c| !c.is_zero()).map(|c| if c.is_negative() { -1 } else { 1 }).unwrap_or(1);
    ints.iter().map(|c| Rat::from_integer(c * BigInt::from(sign) / &g)).collect()
}

/// Diagonal form `Σ a_i z_i²` with squarefree integer `a_i` and the map
/// back: `x = Σ z_i·rows_i`.
struct Diagonal {
    a: Vec<i64>,
    rows: Vec<Vec<Rat>>,
}

fn diagonalize(form: &QMatrix) -> Result<Diagonal> {
    let (p, d) = form.congruence_diagonalize().ok_or_else(|| Error::DegenerateForm("zero determinant".into()))?;
    let mut a = Vec::new();
    let mut rows = Vec::new();
    for (i, di) in d.iter().enumerate() {
        // d = num/den = (num·den)/den²; num·den = core·s²
        let nd = di.numer() * di.denom();
        let nd = nd.to_i64().ok_or_else(|| Error::Overflow("diagonal entry exceeds 64 bits".into()))?;
        let core = squarefree_core(nd);
        let s2 = nd / core;
        let s = (s2 as f64).sqrt().round() as i64;
        debug_assert_eq!(s * s, s2);
        // x = z·p_i·den/s gives Q = d·(den/s)²·z² = core·z²
        let k = Rat::new(di.denom().clone(), BigInt::from(s));
        a.push(core);
        rows.push(p.row(i).iter().map(|c| c * &k).collect());
    }
    Ok(Diagonal { a, rows })
}

fn find_isotropic(form: &QMatrix) -> Result<Found> {
    let n = form.rows();
    let (p, q, _) = form.inertia();
    if p == 0 || q == 0 {
        return Ok(Found::Anisotropic(Obstruction { place: "inf".into(), detail: "definite form".into() }));
    }
    if n > 2 {
        if let Some(x) = box_search(form) {
            return Ok(Found::Vector(x));
        }
    }
    let diag = diagonalize(form)?;
    let a = &diag.a;
    // choose the subform to search in
    if n == 2 {
        return Ok(binary(form));
    }
    let subset: Vec<usize> = if n <= 4 {
        if let Some(o) = local_obstruction(a) {
            return Ok(Found::Anisotropic(o));
        }
        (0..n).collect()
    } else {
        search_subset(a)
    };
    let sub: Vec<i64> = subset.iter().map(|&i| a[i]).collect();
    let z = search(&sub, &HEIGHTS_FIRST)
        .map(|z| z.into_iter().map(i128::from).collect())
        .or_else(|| construct(&sub, 0))
        .or_else(|| search(&sub, &HEIGHTS_LAST).map(|z| z.into_iter().map(i128::from).collect()));
    match z {
        Some(z) => {
            let mut x = vec![Rat::zero(); n];
            for (zi, &i) in z.iter().zip(&subset) {
                if *zi != 0 {
                    let zr = Rat::from_integer(BigInt::from(*zi));
                    for (xj, r) in x.iter_mut().zip(&diag.rows[i]) {
                        *xj += r * &zr;
                    }
                }
            }
            debug_assert!(form.bilinear(&x, &x).is_zero());
            Ok(Found::Vector(x))
        }
        None => Ok(Found::Unknown),
    }
}

/// Indefinite binary form `ax² + 2bxy + cy²`: isotropic iff `b² − ac` is a
/// rational square.
fn binary(form: &QMatrix) -> Found {
    let r = integral_row(&[form[(0, 0)].clone(), form[(0, 1)].clone(), form[(1, 1)].clone()]);
    let (a, b, c) = (&r[0], &r[1], &r[2]);
    let d = b * b - a * c;
    let s = d.sqrt();
    if &s * &s == d {
        let v = if a.is_zero() { vec![BigInt::one(), BigInt::zero()] } else { vec![&s - b, a.clone()] };
        return Found::Vector(v.into_iter().map(Rat::from_integer).collect());
    }
    let place = match d.to_u64().filter(|&x| x < 1 << 40) {
        Some(x) => odd_valuation_prime(x as i128).to_string(),
        None => {
            // trial division; a non-square cofactor hides a prime of odd valuation
            let mut m = d.clone();
            let mut found = None;
            let mut p = 2u64;
            while p < 1 << 20 && found.is_none() {
                let bp = BigInt::from(p);
                let mut e = 0;
                while (&m % &bp).is_zero() {
                    m /= &bp;
                    e += 1;
                }
                if e % 2 == 1 {
                    found = Some(p.to_string());
                }
                p += 1;
            }
            found.unwrap_or_else(|| format!("p | {m}"))
        }
    };
    Found::Anisotropic(Obstruction { place: place.clone(), detail: format!("-det = {d} is not a square in Q_{place}") })
}

/// Isotropic vector of smallest sup-norm in the largest box `[−H, H]^n`
/// with at most `BOX_BUDGET` points, searched in the given coordinates;
/// ties go to the lexicographically largest vector.
fn box_search(form: &QMatrix) -> Option<Vec<Rat>> {
    let n = form.rows();
    let den = (0..n).flat_map(|i| form.row(i).iter()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let g: Vec<Vec<i128>> = (0..n)
        .map(|i| form.row(i).iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer().to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    if g.iter().flatten().any(|c| c.unsigned_abs() > 1 << 40) {
        return None;
    }
    let mut h = 1i64;
    while ((2 * h + 3) as u64).checked_pow(n as u32).is_some_and(|v| v <= BOX_BUDGET) {
        h += 1;
    }
    let mut x = vec![h; n];
    let mut best: Option<(i64, Vec<i64>)> = None;
    loop {
        // first nonzero coordinate positive
        if x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            let sup = x.iter().map(|c| c.abs()).max().unwrap_or(0);
            if best.as_ref().is_none_or(|(b, _)| sup < *b) {
                let mut q = 0i128;
                for i in 0..n {
                    let mut row = 0i128;
                    for j in 0..n {
                        row += g[i][j] * x[j] as i128;
                    }
                    q += row * x[i] as i128;
                }
                if q == 0 {
                    best = Some((sup, x.clone()));
                    if sup == 1 {
                        break;
                    }
                }
            }
        }
        // descending lexicographic order, last coordinate fastest
        let mut i = n;
        while i > 0 && x[i - 1] == -h {
            x[i - 1] = h;
            i -= 1;
        }
        if i == 0 {
            break;
        }
        x[i - 1] -= 1;
    }
    best.map(|(_, v)| v.into_iter().map(|c| Rat::from_integer(c.into())).collect())
}

/// A small locally isotropic subform, falling back to five mixed-sign
/// coefficients (isotropic by Meyer's theorem).
fn search_subset(a: &[i64]) -> Vec<usize> {
    let n = a.len();
    let mut best: Option<(i128, Vec<usize>)> = None;
    for size in 2..=4usize {
        for s in subsets(n, size) {
            let sub: Vec<i64> = s.iter().map(|&i| a[i]).collect();
            if sub.iter().all(|&x| x > 0) || sub.iter().all(|&x| x < 0) {
                continue;
            }
            let ok = if size == 2 { sub[0] == -sub[1] } else { local_obstruction(&sub).is_none() };
            if ok {
                let h: i128 = sub.iter().map(|&x| (x as i128).abs()).product();
                if best.as_ref().is_none_or(|(b, _)| h < *b) {
                    best = Some((h, s));
                }
            }
        }
        if best.is_some() {
            return best.unwrap().1;
        }
    }
    let pos: Vec<usize> = (0..n).filter(|&i| a[i] > 0).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| a[i] < 0).collect();
    let mut pick = vec![pos[0], neg[0]];
    let rest: Vec<usize> = (0..n).filter(|i| !pick.contains(i)).take(3).collect();
    pick.extend(rest);
    pick.sort();
    pick
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Coordinate order 0, 1, −1, 2, −2, …
fn coord(i: i64) -> i64 {
    if i % 2 == 1 {
        (i + 1) / 2
    } else {
        -(i / 2)
    }
}

/// Meet-in-the-middle search for a nonzero `z` with `Σ a_i z_i² = 0`.
fn search(a: &[i64], heights: &[i64]) -> Option<Vec<i64>> {
    let n = a.len();
    let left = n.div_ceil(2);
    for &h in heights {
        let side = (2 * h + 1) as u64;
        if side.pow(left as u32) > TABLE_BUDGET {
            break;
        }
        let mut table: HashMap<i128, Vec<i64>> = HashMap::new();
        let mut found = None;
        for_box(left, h, &mut |z| {
            let v: i128 = z.iter().zip(a).map(|(&zi, &ai)| ai as i128 * (zi as i128).pow(2)).sum();
            if v == 0 && z.iter().any(|&c| c != 0) {
                found = Some(z.to_vec());
                return false;
            }
            table.entry(v).or_insert_with(|| z.to_vec());
            true
        });
        if let Some(mut z) = found {
            z.resize(n, 0);
            return Some(z);
        }
        for_box(n - left, h, &mut |z| {
            if z.iter().all(|&c| c == 0) {
                return true;
            }
            let v: i128 = z.iter().zip(&a[left..]).map(|(&zi, &ai)| ai as i128 * (zi as i128).pow(2)).sum();
            if let Some(l) = table.get(&-v) {
                let mut full = l.clone();
                full.extend_from_slice(z);
                found = Some(full);
                return false;
            }
            true
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Explicit zero of a locally isotropic diagonal form with squarefree
/// coefficients: Legendre descent in rank 3; in higher rank a value
/// `t = a_0x² + a_1y²` is split off so that `(a_2, …, t)` stays locally
/// isotropic, and the smaller form is solved recursively.
fn construct(a: &[i64], depth: usize) -> Option<Vec<i128>> {
    let n = a.len();
    if depth > 8 || a.iter().all(|&x| x > 0) || a.iter().all(|&x| x < 0) {
        return None;
    }
    match n {
        0 | 1 => None,
        2 => (a[0] == -a[1]).then(|| vec![1, 1]),
        3 => ternary(a[0] as i128, a[1] as i128, a[2] as i128),
        _ => {
            for h in 1..=SPLIT_HEIGHT {
                for (x, y) in ring(h) {
                    let t = a[0] as i128 * (x * x) as i128 + a[1] as i128 * (y * y) as i128;
                    if t == 0 {
                        let mut z = vec![0i128; n];
                        (z[0], z[1]) = (x as i128, y as i128);
                        return Some(z);
                    }
                    let Ok(t64) = i64::try_from(t) else { continue };
                    let core = squarefree_core(t64);
                    let s = isqrt_exact(t64 / core)?;
                    let mut rest: Vec<i64> = a[2..].to_vec();
                    rest.push(core);
                    if !locally_isotropic(&rest) {
                        continue;
                    }
                    let Some(w) = construct(&rest, depth + 1) else { continue };
                    // Σ_{i≥2} a_i w_i² = −core·v² = −t·(v/s)²
                    let v = w[n - 2];
                    let mut z = Vec::with_capacity(n);
                    z.push((x as i128).checked_mul(v)?);
                    z.push((y as i128).checked_mul(v)?);
                    for &wi in &w[..n - 2] {
                        z.push(wi.checked_mul(s as i128)?);
                    }
                    return Some(reduce_gcd(z));
                }
            }
            None
        }
    }
}

/// Pairs with `max(|x|, |y|) = h`, `x ≥ 0`.
fn ring(h: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for y in -h..=h {
        out.push((h, y));
    }
    for x in 0..h {
        out.push((x, h));
        out.push((x, -h));
    }
    out
}

fn isqrt_exact(n: i64) -> Option<i64> {
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == n)
}

fn locally_isotropic(a: &[i64]) -> bool {
    if a.iter().all(|&x| x > 0) || a.iter().all(|&x| x < 0) {
        return false;
    }
    match a.len() {
        0 | 1 => false,
        2 => a[0] == -a[1],
        3 | 4 => local_obstruction(a).is_none(),
        _ => true,
    }
}

fn reduce_gcd(z: Vec<i128>) -> Vec<i128> {
    let g = z.iter().fold(0i128, |g, &c| g.gcd(&c));
    if g > 1 {
        z.into_iter().map(|c| c / g).collect()
    } else {
        z
    }
}

/// `a = α²·a'` with `a'` squarefree.
fn square_split(a: i128) -> Option<(i128, i128)> {
    let u = u64::try_from(a.unsigned_abs()).ok()?;
    let (mut alpha, mut core) = (1i128, a.signum());
    for (p, e) in factor(u) {
        alpha *= (p as i128).pow(e / 2);
        if e % 2 == 1 {
            core *= p as i128;
        }
    }
    Some((alpha, core))
}

/// Zero of `a x² + b y² + c z²` for squarefree nonzero `a, b, c`.
fn ternary(a: i128, b: i128, c: i128) -> Option<Vec<i128>> {
    if a == -b {
        return Some(vec![1, 1, 0]);
    }
    if a == -c {
        return Some(vec![1, 0, 1]);
    }
    if b == -c {
        return Some(vec![0, 1, 1]);
    }
    // (−ac)X² + (−bc)Y² = (cz)²
    let (alpha, ap) = square_split(a.checked_mul(-c)?)?;
    let (beta, bp) = square_split(b.checked_mul(-c)?)?;
    let (x, y, z) = legendre_descent(ap, bp, 0)?;
    let v = vec![x.checked_mul(beta)?.checked_mul(c)?, y.checked_mul(alpha)?.checked_mul(c)?, z.checked_mul(alpha)?.checked_mul(beta)?];
    Some(reduce_gcd(v))
}

/// Nontrivial `(X, Y, Z)` with `aX² + bY² = Z²`, `a, b` squarefree.
fn legendre_descent(a: i128, b: i128, depth: usize) -> Option<(i128, i128, i128)> {
    if depth > 128 {
        return None;
    }
    if a == 1 {
        return Some((1, 0, 1));
    }
    if b == 1 {
        return Some((0, 1, 1));
    }
    if a < 0 && b < 0 {
        return None;
    }
    if a == -b {
        return Some((1, 1, 0));
    }
    if a.abs() > b.abs() {
        let (y, x, z) = legendre_descent(b, a, depth + 1)?;
        return Some((x, y, z));
    }
    // |a| ≤ |b|, |b| ≥ 2: t² ≡ a (mod b), t² − a = b·k²·b′ with |b′| < |b|
    let nb = b.abs();
    let mut t = sqrt_mod_squarefree(a, nb)?;
    if 2 * t > nb {
        t -= nb;
    }
    let m = (t.checked_mul(t)? - a) / b;
    let (k, bp) = square_split(m)?;
    let (x, y, z) = legendre_descent(a, bp, depth + 1)?;
    // (Z + X√a)(t + √a) has norm b·(b′Yk)²
    let nx = z.checked_add(x.checked_mul(t)?)?;
    let ny = bp.checked_mul(y)?.checked_mul(k)?;
    let nz = z.checked_mul(t)?.checked_add(a.checked_mul(x)?)?;
    let g = nx.gcd(&ny).gcd(&nz);
    if g == 0 {
        return None;
    }
    Some((nx / g, ny / g, nz / g))
}

/// `t` with `t² ≡ a (mod n)` for squarefree `n`, by CRT over its primes.
fn sqrt_mod_squarefree(a: i128, n: i128) -> Option<i128> {
    let u = u64::try_from(n).ok()?;
    let (mut r, mut m) = (0i128, 1i128);
    for (p, _) in factor(u) {
        let p = p as i128;
        let s = sqrt_mod_prime(a.rem_euclid(p), p)?;
        // combine r mod m with s mod p
        let inv = mod_inverse(m.rem_euclid(p), p)?;
        let k = ((s - r).rem_euclid(p) * inv).rem_euclid(p);
        r += m * k;
        m *= p;
    }
    Some(r.rem_euclid(m))
}

fn mod_inverse(a: i128, p: i128) -> Option<i128> {
    let e = a.extended_gcd(&p);
    (e.gcd == 1).then(|| e.x.rem_euclid(p))
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Tonelli–Shanks; `p` prime below 2⁶³.
fn sqrt_mod_prime(a: i128, p: i128) -> Option<i128> {
    if p == 2 || a == 0 {
        return Some(a % p);
    }
    let (a, pu) = (a as u128, p as u128);
    if pow_mod(a, (pu - 1) / 2, pu) != 1 {
        return None;
    }
    let (mut q, mut s) = (pu - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while pow_mod(z, (pu - 1) / 2, pu) != pu - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, pu), pow_mod(a, q, pu), pow_mod(a, (q + 1) / 2, pu));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % pu;
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), pu);
        m = i;
        c = b * b % pu;
        t = t * c % pu;
        r = r * b % pu;
    }
    Some(r as i128)
}

/// Visits `[−h, h]^k` in the order of `coord`; stops when `f` returns false.
fn for_box(k: usize, h: i64, f: &mut dyn FnMut(&[i64]) -> bool) {
    let mut idx = vec![0i64; k];
    let mut z = vec![0i64; k];
    loop {
        for (zi, &ii) in z.iter_mut().zip(&idx) {
            *zi = coord(ii);
        }
        if !f(&z) {
            return;
        }
        // increment the last coordinate fastest
        let mut p = k;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] <= 2 * h {
                break;
            }
            idx[p] = 0;
        }
    }
}

fn odd_valuation_prime(d: i128) -> u64 {
    let d = d.unsigned_abs() as u64;
    factor(d).into_iter().find(|&(_, e)| e % 2 == 1).map(|(p, _)| p).expect("not a square")
}

/// `(a/p)` for an odd prime `p` not dividing `a`.
fn legendre(a: i128, p: u64) -> i32 {
    let p128 = p as i128;
    let mut base = a.rem_euclid(p128) as u128;
    let mut e = (p - 1) / 2;
    let mut r: u128 = 1;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn split_p(a: i128, p: u64) -> (u32, i128) {
    let mut a = a;
    let mut v = 0;
    while a % p as i128 == 0 {
        a /= p as i128;
        v += 1;
    }
    (v, a)
}

/// Hilbert symbol `(a, b)_p` for nonzero integers; `p = 0` is the real place.
pub fn hilbert(a: i128, b: i128, p: u64) -> i32 {
    if p == 0 {
        return if a < 0 && b < 0 { -1 } else { 1 };
    }
    let (al, u) = split_p(a, p);
    let (be, v) = split_p(b, p);
    if p == 2 {
        let eps = |x: i128| (((x - 1) / 2).rem_euclid(2)) as u32;
        let om = |x: i128| (((x * x - 1) / 8).rem_euclid(2)) as u32;
        let e = eps(u) * eps(v) + al * om(v) + be * om(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let eps = ((p - 1) / 2) as u32;
    let mut s = if (al * be * eps) % 2 == 0 { 1 } else { -1 };
    if be % 2 == 1 {
        s *= legendre(u, p);
    }
    if al % 2 == 1 {
        s *= legendre(v, p);
    }
    s
}

pub fn is_local_square(d: i128, p: u64) -> bool {
    if p == 0 {
        return d > 0;
    }
    let (v, u) = split_p(d, p);
    if v % 2 == 1 {
        return false;
    }
    if p == 2 {
        u.rem_euclid(8) == 1
    } else {
        legendre(u, p) == 1
    }
}

/// First place where the diagonal form `Σ a_i z_i²` (rank 3 or 4) is
/// anisotropic, if any.
fn local_obstruction(a: &[i64]) -> Option<Obstruction> {
    let n = a.len();
    let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    let d: i128 = a.iter().product();
    let mut places: Vec<u64> = vec![0, 2];
    for &x in &a {
        for (p, _) in factor(x.unsigned_abs() as u64) {
            if !places.contains(&p) {
                places.push(p);
            }
        }
    }
    places[1..].sort();
    for &p in &places {
        let mut eps = 1;
        for i in 0..n {
            for j in i + 1..n {
                eps *= hilbert(a[i], a[j], p);
            }
        }
        let iso = match n {
            3 => hilbert(-1, -d, p) == eps,
            4 => !is_local_square(d, p) || eps == hilbert(-1, -1, p),
            _ => true,
        };
        if !iso {
            let place = if p == 0 { "inf".to_string() } else { p.to_string() };
            let detail = format!("Hasse invariant {eps} and discriminant {d} leave the form anisotropic over Q_{place}");
            return Some(Obstruction { place, detail });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::lattice::standard;

    fn diag(d: &[i64]) -> QMatrix {
        QMatrix::diagonal(&d.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn large_binary() {
        let big = |x: i64| Rat::from_integer(BigInt::from(x) * BigInt::from(1_000_000_007i64));
        let iso = QMatrix::from_rows(vec![vec![big(1), Rat::zero()], vec![Rat::zero(), -big(4)]]);
        let r = witt_index(&iso).unwrap();
        assert_eq!(r.witt_index, 1);
        assert_eq!(r.witness, Some(vec![int(2), int(1)]));
        let aniso = QMatrix::from_rows(vec![vec![big(1), Rat::zero()], vec![Rat::zero(), -big(3)]]);
        let r = witt_index(&aniso).unwrap();
        assert_eq!(r.witt_index, 0);
        assert_eq!(r.obstruction.unwrap().place, "3");
    }

    #[test]
    fn examples() {
        let r = witt_index(&diag(&[2, -2, -2])).unwrap();
        assert_eq!(r.witt_index, 1);
        assert_eq!(r.witness, Some(vec![int(1), int(1), int(0)]));
        assert_eq!(witt_index(standard::e8().gram()).unwrap().witt_index, 0);
        let uu = standard::sum(&standard::hyperbolic(), &standard::hyperbolic());
        let r = witt_index(uu.gram()).unwrap();
        assert_eq!(r.witt_index, 2);
        assert_eq!(r.status, WittStatus::Certified);
        assert!(matches!(witt_index(&diag(&[1, 0])), Err(Error::DegenerateForm(_))));
    }

    #[test]
    fn hilbert_symbols() {
        assert_eq!(hilbert(-1, -1, 0), -1);
        assert_eq!(hilbert(-1, -1, 2), -1);
        assert_eq!(hilbert(-1, -1, 3), 1);
        assert_eq!(hilbert(2, 3, 3), -1);
        assert_eq!(hilbert(5, 2, 5), -1);
        assert_eq!(hilbert(2, 2, 2), 1);
        // product formula
        for a in [-7i128, -3, -1, 2, 3, 5, 6, 10] {
            for b in [-5i128, -2, -1, 3, 7, 15] {
                let mut prod = hilbert(a, b, 0);
                for p in [2u64, 3, 5, 7, 11, 13] {
                    prod *= hilbert(a, b, p);
                }
                assert_eq!(prod, 1, "({a},{b})");
            }
        }
    }

    #[test]
    fn anisotropic_certificates() {
        // x² + y² − 3z² is anisotropic at 2 and 3; the first place is reported
        let r = witt_index(&diag(&[1, 1, -3])).unwrap();
        assert_eq!(r.witt_index, 0);
        assert_eq!(r.obstruction.unwrap().place, "2");
        let r = witt_index(&diag(&[1, 2, -3])).unwrap();
        assert_eq!(r.witt_index, 1);
        // x² − 2y² is anisotropic at 2
        let r = witt_index(&diag(&[1, -2])).unwrap();
        assert_eq!(r.obstruction.unwrap().place, "2");
        // x² + y² + z² − 7w²: anisotropic at 2
        let r = witt_index(&diag(&[1, 1, 1, -7])).unwrap();
        assert_eq!(r.witt_index, 0);
        assert_eq!(r.obstruction.unwrap().place, "2");
    }

    #[test]
    fn constructive_solver() {
        let check = |a: &[i64]| {
            let z = construct(a, 0).unwrap_or_else(|| panic!("no zero for {a:?}"));
            assert!(z.iter().any(|&c| c != 0));
            assert_eq!(z.iter().zip(a).map(|(&zi, &ai)| ai as i128 * zi * zi).sum::<i128>(), 0, "{a:?}");
        };
        for a in [&[1, 1, -2][..], &[3, 5, -2], &[7, 2, -1], &[-1009, 1013, 2], &[1, 1, 1, -14], &[1, 1, 1, 1, -7], &[5, 13, -3, -101, 7, 2]] {
            if locally_isotropic(a) {
                check(a);
            }
        }
        assert!(!locally_isotropic(&[7, 11, -1]));
        // exhaustive over small squarefree coefficients
        let mut n = 0;
        let sf: Vec<i64> = (-30..=30).filter(|&x| x != 0 && squarefree_core(x) == x).collect();
        for &a in &sf {
            for &b in &sf {
                for &c in &sf {
                    if a.abs() <= b.abs() && b.abs() <= c.abs() && locally_isotropic(&[a, b, c]) {
                        check(&[a, b, c]);
                        n += 1;
                    }
                }
            }
        }
        assert!(n > 500);
        assert!(construct(&[1, 1, -3], 0).is_none());
    }

    #[test]
    fn meyer_rank_five() {
        let r = witt_index(&diag(&[1, 1, 1, 1, -7])).unwrap();
        assert!(r.witt_index >= 1);
        let w = r.witness.unwrap();
        assert!(diag(&[1, 1, 1, 1, -7]).bilinear(&w, &w).is_zero());
        let r = witt_index(&diag(&[1, 1, 1, -1, -1, -1])).unwrap();
        assert_eq!(r.witt_index, 3);
        for v in &r.isotropic_basis {
            for u in &r.isotropic_basis {
                assert!(diag(&[1, 1, 1, -1, -1, -1]).bilinear(u, v).is_zero());
            }
        }
    }

    #[test]
    fn non_diagonal() {
        let g = QMatrix::from_i64(&[vec![2, 1, 0], vec![1, -2, 1], vec![0, 1, 4]]);
        let r = witt_index(&g).unwrap();
        if let Some(w) = &r.witness {
            assert!(g.bilinear(w, w).is_zero());
        }
        assert_eq!(r.status, WittStatus::Certified);
    }
}
