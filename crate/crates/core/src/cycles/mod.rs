//! Special-cycle index sets on definite lattices, intersection matrices,
//! orthogonal complements, rational isotropy and cusp incidence.
//!
//! Vectors are coordinate vectors in the ℤ-basis of `L` (the trace-form
//! basis `b_1, ωb_1, …` in the unitary case). A tuple `x = (x_1, …, x_r)`
//! has intersection matrix `T = (½⟨x_j, x_i⟩)_{ij}`, which is Hermitian over
//! `K` in the unitary case.

pub mod enumerate;
pub mod witt;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{int, isqrt_u128, Rat};
use crate::discriminant::DiscriminantGroup;
use crate::error::{Error, Result};
use crate::field::{KElem, QuadField};
use crate::lattice::{Case, Lattice, Signature};
use crate::matrix::QMatrix;
use crate::modform::{is_psd, CoeffKey, QExpansion, TailModel};

use enumerate::{found_to_rat, residues, Found, ShortVectors};

pub use witt::{witt_index, Obstruction, WittReport, WittStatus};

/// An `r`-tuple of vectors of `V`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TupleVector {
    pub x: Vec<Vec<Rat>>,
}

impl TupleVector {
    pub fn new(x: Vec<Vec<Rat>>) -> TupleVector {
        TupleVector { x }
    }

    pub fn from_i64(x: &[Vec<i64>]) -> TupleVector {
        TupleVector { x: x.iter().map(|v| v.iter().map(|&c| int(c)).collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `x ↦ xA`: the `k`-th new vector is `Σ_i A_ik x_i`.
    pub fn act(&self, a: &[Vec<KElem>], lattice: &Lattice) -> TupleVector {
        let r = self.x.len();
        let m = lattice.z_rank();
        let w = lattice.omega_action();
        let mut out = vec![vec![Rat::zero(); m]; r];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..r {
                let c = &a[i][k];
                let xi = &self.x[i];
                for (t, v) in o.iter_mut().enumerate() {
                    *v += &c.a * &xi[t];
                }
                if !c.b.is_zero() {
                    let wx = w.as_ref().expect("ω only in the unitary case").mul_vec(xi);
                    for (t, v) in o.iter_mut().enumerate() {
                        *v += &c.b * &wx[t];
                    }
                }
            }
        }
        TupleVector { x: out }
    }
}

/// `T = ½(⟨x_j, x_i⟩)`, stored row-major `r × r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntersectionMatrix {
    pub r: usize,
    pub t: Vec<KElem>,
}

impl IntersectionMatrix {
    pub fn new(rows: Vec<Vec<KElem>>) -> IntersectionMatrix {
        let r = rows.len();
        IntersectionMatrix { r, t: rows.into_iter().flatten().collect() }
    }

    pub fn from_rats(rows: Vec<Vec<Rat>>) -> IntersectionMatrix {
        Self::new(rows.into_iter().map(|r| r.into_iter().map(KElem::from_rat).collect()).collect())
    }

    pub fn scalar(q: Rat) -> IntersectionMatrix {
        Self::from_rats(vec![vec![q]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &KElem {
        &self.t[i * self.r + j]
    }

    pub fn rows(&self) -> Vec<Vec<KElem>> {
        self.t.chunks(self.r.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn trace(&self) -> Rat {
        (0..self.r).map(|i| self.entry(i, i).a.clone()).sum()
    }

    /// `A*·T·A` (`Aᵗ·T·A` over ℚ).
    pub fn transform(&self, a: &[Vec<KElem>], field: Option<&QuadField>) -> IntersectionMatrix {
        let r = self.r;
        let mul = |x: &KElem, y: &KElem| match field {
            Some(f) => f.mul(x, y),
            None => KElem::from_rat(&x.a * &y.a),
        };
        let conj = |x: &KElem| match field {
            Some(f) => f.conj(x),
            None => x.clone(),
        };
        let mut out = vec![vec![KElem::zero(); r]; r];
        for (k, row) in out.iter_mut().enumerate() {
            for (l, o) in row.iter_mut().enumerate() {
                let mut acc = KElem::zero();
                for i in 0..r {
                    for j in 0..r {
                        acc = acc.add(&mul(&mul(&conj(&a[i][k]), self.entry(i, j)), &a[j][l]));
                    }
                }
                *o = acc;
            }
        }
        IntersectionMatrix::new(out)
    }

    /// Coefficient key of `T` at the class tuple `mu`.
    pub fn key(&self, mu: &[usize]) -> CoeffKey {
        CoeffKey::new(self.t.clone(), mu.to_vec())
    }
}

pub fn intersection_matrix(lattice: &Lattice, x: &TupleVector) -> IntersectionMatrix {
    let r = x.len();
    let half = Rat::new(1.into(), 2.into());
    let mut rows = vec![vec![KElem::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            rows[i][j] = lattice.herm(&x.x[j], &x.x[i]).scale(&half);
        }
    }
    IntersectionMatrix::new(rows)
}

/// Everything the tuple enumeration needs about a positive definite lattice.
struct Enumerator<'a> {
    lattice: &'a Lattice,
    group: DiscriminantGroup,
    sv: ShortVectors,
    e: u64,
    /// `G·W`, with `W` the action of `ω` (unitary case).
    gw: Option<Vec<Vec<i128>>>,
    field: Option<QuadField>,
}

impl<'a> Enumerator<'a> {
    fn new(lattice: &'a Lattice) -> Result<Enumerator<'a>> {
        if !lattice.is_positive_definite() {
            return Err(Error::IndefiniteLattice(format!(
                "representation numbers need a definite lattice; signature is {}",
                lattice.z_signature()
            )));
        }
        let group = lattice.discriminant_group();
        let e = group.exponent();
        let sv = ShortVectors::new(lattice.gram(), e)?;
        let gw = lattice.omega_action().map(|w| {
            let p = lattice.gram().mul(&w);
            (0..p.rows()).map(|i| (0..p.cols()).map(|j| p[(i, j)].to_integer().to_i128().expect("small")).collect()).collect()
        });
        Ok(Enumerator { lattice, group, sv, e, gw, field: lattice.field().copied() })
    }

    fn lambda(&self) -> Rat {
        match self.lattice.case() {
            Case::Orthogonal => int(1),
            Case::Unitary => int(2),
        }
    }

    /// Trace-form `Q` of a vector whose intersection entry is `t`.
    fn qtr(&self, t: &Rat) -> Rat {
        t * self.lambda()
    }

    fn check_t(&self, t: &IntersectionMatrix, mu: &[usize]) -> Result<()> {
        if t.t.len() != t.r * t.r || mu.len() != t.r {
            return Err(Error::SizeMismatch(format!("T is {}×{} but μ has {} entries", t.r, t.r, mu.len())));
        }
        if mu.iter().any(|&m| m >= self.group.order()) {
            return Err(Error::SizeMismatch(format!("class index out of range 0..{}", self.group.order())));
        }
        if !is_psd(&t.t, t.r, self.lattice.case(), self.field.as_ref()) {
            return Err(Error::NotPosDef("T is not symmetric (Hermitian) positive semi-definite".into()));
        }
        Ok(())
    }

    fn shell(&self, mu: usize, t: &Rat) -> Result<Vec<Found>> {
        let res = residues(&self.group.lift(mu), self.e);
        self.sv.shell(&res, &self.qtr(t))
    }

    /// Integer targets `y_jᵗG y_i` (and `y_jᵗGW y_i`) for `i < j`.
    fn pair_targets(&self, t: &IntersectionMatrix) -> Option<Vec<Vec<(i128, i128)>>> {
        let e2 = Rat::from_integer(BigInt::from(self.e * self.e));
        let r = t.r;
        let mut out = vec![vec![(0i128, 0i128); r]; r];
        for i in 0..r {
            for j in i + 1..r {
                // ⟨x_j, x_i⟩ = 2·T_ij
                let h = t.entry(i, j).scale(&int(2));
                let (p, p2) = match &self.field {
                    None => {
                        if !h.is_rational() {
                            return None;
                        }
                        (h.a.clone(), Rat::zero())
                    }
                    Some(f) => {
                        let tr = f.trace(&h);
                        let tr2 = f.trace(&f.mul(&f.conj(&f.omega()), &h));
                        (tr, tr2)
                    }
                };
                let p = &p * &e2;
                let p2 = &p2 * &e2;
                if !p.is_integer() || !p2.is_integer() {
                    return None;
                }
                out[i][j] = (p.to_integer().to_i128()?, p2.to_integer().to_i128()?);
            }
        }
        Some(out)
    }

    fn pair_ok(&self, a: &[i64], b: &[i64], target: (i128, i128)) -> bool {
        if self.sv.pair(a, b) != target.0 {
            return false;
        }
        match &self.gw {
            None => true,
            Some(gw) => {
                let mut s = 0i128;
                for (i, &ai) in a.iter().enumerate() {
                    if ai == 0 {
                        continue;
                    }
                    let r: i128 = gw[i].iter().zip(b).map(|(g, &bj)| g * bj as i128).sum();
                    s += ai as i128 * r;
                }
                s == target.1
            }
        }
    }

    /// Shells per row of `T` and the pairing targets; `None` when no tuple
    /// can exist.
    fn prepare(&self, t: &IntersectionMatrix, mu: &[usize]) -> Result<Option<(Vec<Vec<Found>>, Vec<Vec<(i128, i128)>>)>> {
        self.check_t(t, mu)?;
        let Some(targets) = self.pair_targets(t) else { return Ok(None) };
        let mut shells = Vec::with_capacity(t.r);
        for i in 0..t.r {
            let s = self.shell(mu[i], &t.entry(i, i).a)?;
            if s.is_empty() {
                return Ok(None);
            }
            shells.push(s);
        }
        Ok(Some((shells, targets)))
    }
}

fn backtrack<'s, F: FnMut(&[&'s Found])>(
    en: &Enumerator<'_>,
    shells: &'s [Vec<Found>],
    targets: &[Vec<(i128, i128)>],
    chosen: &mut Vec<&'s Found>,
    f: &mut F,
) {
    let j = chosen.len();
    if j == shells.len() {
        f(chosen);
        return;
    }
    for cand in &shells[j] {
        if (0..j).all(|i| en.pair_ok(&cand.y, &chosen[i].y, targets[i][j])) {
            chosen.push(cand);
            backtrack(en, shells, targets, chosen, f);
            chosen.pop();
        }
    }
}

/// The index set `L_{T,μ} = {x ∈ μ + Lʳ : Q(x) = T}`, sorted
/// lexicographically by coordinates.
pub fn enumerate_reps(lattice: &Lattice, t: &IntersectionMatrix, mu: &[usize]) -> Result<Vec<TupleVector>> {
    let en = Enumerator::new(lattice)?;
    let Some((shells, targets)) = en.prepare(t, mu)? else { return Ok(Vec::new()) };
    let e = en.e;
    let mut out: Vec<TupleVector> = if shells.is_empty() {
        vec![TupleVector::new(Vec::new())]
    } else {
        shells[0]
            .par_iter()
            .map(|first| {
                let mut acc = Vec::new();
                let mut chosen = vec![first];
                backtrack(&en, &shells, &targets, &mut chosen, &mut |c| {
                    acc.push(TupleVector::new(c.iter().map(|f| found_to_rat(&f.y, e)).collect()))
                });
                acc
            })
            .flatten()
            .collect()
    };
    out.sort();
    Ok(out)
}

/// `|L_{T,μ}|`, counted without building the tuples.
pub fn rep_number(lattice: &Lattice, t: &IntersectionMatrix, mu: &[usize]) -> Result<u64> {
    let en = Enumerator::new(lattice)?;
    if t.r == 1 {
        en.check_t(t, mu)?;
        let res = residues(&en.group.lift(mu[0]), en.e);
        return en.sv.count_shell(&res, &en.qtr(&t.entry(0, 0).a));
    }
    let Some((shells, targets)) = en.prepare(t, mu)? else { return Ok(0) };
    if shells.is_empty() {
        return Ok(1);
    }
    Ok(shells[0]
        .par_iter()
        .map(|first| {
            let mut n = 0u64;
            let mut chosen = vec![first];
            backtrack(&en, &shells, &targets, &mut chosen, &mut |_| n += 1);
            n
        })
        .sum())
}

/// Weight of the theta series: `rank/2` over ℤ, `rank_K` in the unitary case.
pub fn theta_weight(lattice: &Lattice) -> Rat {
    match lattice.case() {
        Case::Orthogonal => Rat::new(BigInt::from(lattice.z_rank()), 2.into()),
        Case::Unitary => int(lattice.rank() as i64),
    }
}

/// Genus-`n` theta expansion `Σ_{T,μ} |L_{T,μ}| q^T e_μ` for `tr T ≤ bound`.
pub fn theta_expansion(lattice: &Lattice, genus: usize, bound: &Rat) -> Result<QExpansion> {
    if genus == 0 {
        return Err(Error::SizeMismatch("genus must be positive".into()));
    }
    let en = Enumerator::new(lattice)?;
    let classes = en.group.order();
    let mut f = QExpansion::new(genus, theta_weight(lattice), lattice.case(), en.field, &lattice.hash(), classes, bound.clone());
    let pivots = lattice.gram().square_completion().expect("positive definite");
    f.tail = TailModel::Theta {
        lambda: if en.field.is_some() { 2 } else { 1 },
        pivots: (0..pivots.rows()).map(|i| pivots[(i, i)].clone()).collect(),
    };
    if bound < &Rat::zero() {
        return Ok(f);
    }
    let scale = Rat::new(1.into(), BigInt::from(2 * en.e * en.e)) / en.lambda();
    if genus == 1 {
        // only norms matter: count without storing vectors
        for mu in 0..classes {
            let res = residues(&en.group.lift(mu), en.e);
            let h = en.sv.norm_histogram(&res, &en.qtr(bound), 1)?;
            for (norm, &c) in h.iter().enumerate() {
                if c > 0 {
                    let t = Rat::from_integer(BigInt::from(norm)) * &scale;
                    f.set(CoeffKey::new(vec![KElem::from_rat(t)], vec![mu]), Rat::from_integer(BigInt::from(c)))?;
                }
            }
        }
        return Ok(f);
    }
    // all vectors of L* with intersection value ≤ bound, per class
    let per_class: Vec<Vec<Found>> = (0..classes)
        .map(|mu| {
            let res = residues(&en.group.lift(mu), en.e);
            en.sv.collect(&res, &en.qtr(bound))
        })
        .collect::<Result<_>>()?;
    let t_of = |a: &Found, b: &Found| -> KElem {
        // entry ½⟨x_b, x_a⟩
        let p = Rat::from_integer(BigInt::from(en.sv.pair(&b.y, &a.y)));
        match (&en.field, &en.gw) {
            (Some(fl), Some(gw)) => {
                let mut p2 = 0i128;
                for (i, &bi) in b.y.iter().enumerate() {
                    if bi != 0 {
                        let r: i128 = gw[i].iter().zip(&a.y).map(|(g, &aj)| g * aj as i128).sum();
                        p2 += bi as i128 * r;
                    }
                }
                let p2 = Rat::from_integer(BigInt::from(p2));
                let (t, n) = (int(fl.omega_trace()), int(fl.omega_norm()));
                let den = int(4) * &n - &t * &t;
                let two = int(2);
                let ha = (&two * &n * &p - &t * &p2) / &den;
                let hb = (&two * &p2 - &t * &p) / &den;
                // h is scaled by 2e²; T = h/2
                let s = Rat::new(1.into(), BigInt::from(2 * en.e * en.e));
                KElem::new(ha * &s, hb * &s)
            }
            _ => KElem::from_rat(p * &scale),
        }
    };
    // (class, vector) pairs sorted by norm, so the recursion can stop early
    let mut flat: Vec<(usize, &Found)> = per_class.iter().enumerate().flat_map(|(c, v)| v.iter().map(move |f| (c, f))).collect();
    flat.sort_by_key(|(_, f)| f.norm);
    let limit = (bound * Rat::from_integer(BigInt::from(2 * en.e * en.e)) * en.lambda()).floor().to_integer().to_i128().unwrap_or(i128::MAX);
    let partial: Vec<BTreeMap<CoeffKey, u64>> = (0..flat.len())
        .into_par_iter()
        .map(|first| {
            let mut acc = BTreeMap::new();
            let mut chosen = vec![first];
            theta_rec(&flat, limit, genus, &mut chosen, flat[first].1.norm, &t_of, &mut acc);
            acc
        })
        .collect();
    let mut total: BTreeMap<CoeffKey, u64> = BTreeMap::new();
    for p in partial {
        for (k, v) in p {
            *total.entry(k).or_insert(0) += v;
        }
    }
    for (k, v) in total {
        f.set(k, int(v as i64))?;
    }
    Ok(f)
}

fn theta_rec<F: Fn(&Found, &Found) -> KElem>(
    flat: &[(usize, &Found)],
    limit: i128,
    genus: usize,
    chosen: &mut Vec<usize>,
    used: i128,
    t_of: &F,
    acc: &mut BTreeMap<CoeffKey, u64>,
) {
    if chosen.len() == genus {
        let mut t = Vec::with_capacity(genus * genus);
        for &i in chosen.iter() {
            for &j in chosen.iter() {
                t.push(t_of(flat[i].1, flat[j].1));
            }
        }
        let mu = chosen.iter().map(|&i| flat[i].0).collect();
        *acc.entry(CoeffKey::new(t, mu)).or_insert(0) += 1;
        return;
    }
    for k in 0..flat.len() {
        let next = used + flat[k].1.norm;
        if next > limit {
            break;
        }
        chosen.push(k);
        theta_rec(flat, limit, genus, chosen, next, t_of, acc);
        chosen.pop();
    }
}

/// `r(x)`: the dimension of the `K`-span of the tuple.
pub fn span_rank(lattice: &Lattice, x: &TupleVector) -> usize {
    let rows = span_rows(lattice, x);
    if rows.is_empty() {
        return 0;
    }
    let r = QMatrix::from_rows(rows).rank();
    match lattice.case() {
        Case::Orthogonal => r,
        Case::Unitary => r / 2,
    }
}

/// Rows spanning the ℚ-span of the `K`-span of `x` (`x_i` and `ωx_i`).
fn span_rows(lattice: &Lattice, x: &TupleVector) -> Vec<Vec<Rat>> {
    let mut rows = x.x.clone();
    if let Some(w) = lattice.omega_action() {
        rows.extend(x.x.iter().map(|v| w.mul_vec(v)));
    }
    rows
}

/// Gram data of `V_x = ⟨x⟩^⊥`.
#[derive(Debug, Clone)]
pub struct ComplementForm {
    /// ℚ-basis of `V_x` in coordinates of `L`.
    pub basis: Vec<Vec<Rat>>,
    /// `(b_i, b_j)` on that basis.
    pub gram: QMatrix,
    /// `K`-basis and Hermitian Gram (unitary case).
    pub hermitian: Option<(Vec<Vec<Rat>>, Vec<Vec<KElem>>)>,
    pub signature: Signature,
}

pub fn complement_form(lattice: &Lattice, x: &TupleVector) -> Result<ComplementForm> {
    let g = lattice.gram();
    let rows = span_rows(lattice, x);
    // the span must be positive definite
    let indep = independent_rows(&rows);
    if !indep.is_empty() {
        let b = QMatrix::from_rows(indep.clone());
        let sg = b.mul(g).mul(&b.transpose());
        let (p, _, _) = sg.inertia();
        if p != indep.len() {
            return Err(Error::NotPosDefSpan("the span of x is not positive definite".into()));
        }
    }
    let basis = if rows.is_empty() {
        (0..g.rows()).map(|i| (0..g.rows()).map(|j| if i == j { int(1) } else { Rat::zero() }).collect()).collect()
    } else {
        let a = QMatrix::from_rows(rows).mul(g);
        a.nullspace()
    };
    let gram = if basis.is_empty() {
        QMatrix::zeros(0, 0)
    } else {
        let b = QMatrix::from_rows(basis.clone());
        b.mul(g).mul(&b.transpose())
    };
    let (p, n, _) = if basis.is_empty() { (0, 0, 0) } else { gram.inertia() };
    let (hermitian, signature) = match lattice.case() {
        Case::Orthogonal => (None, Signature { positive: p, negative: n }),
        Case::Unitary => {
            let w = lattice.omega_action().unwrap();
            let mut kb: Vec<Vec<Rat>> = Vec::new();
            let mut span: Vec<Vec<Rat>> = Vec::new();
            for v in &basis {
                let mut trial = span.clone();
                trial.push(v.clone());
                if QMatrix::from_rows(trial.clone()).rank() > span.len() {
                    trial.push(w.mul_vec(v));
                    span = trial;
                    kb.push(v.clone());
                }
            }
            let h: Vec<Vec<KElem>> = kb.iter().map(|u| kb.iter().map(|v| lattice.herm(u, v)).collect()).collect();
            (Some((kb, h)), Signature { positive: p / 2, negative: n / 2 })
        }
    };
    Ok(ComplementForm { basis, gram, hermitian, signature })
}

fn independent_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for r in rows {
        let mut trial = out.clone();
        trial.push(r.clone());
        if QMatrix::from_rows(trial.clone()).rank() > out.len() {
            out = trial;
        }
    }
    out
}

/// Whether the isotropic subspace spanned by `j` lies in `V_x`, i.e.
/// `⟨j, x_i⟩ = 0` for every basis vector `j` and every `i`.
pub fn cusp_incidence(lattice: &Lattice, j: &[Vec<Rat>], x: &TupleVector) -> Result<bool> {
    let m = lattice.z_rank();
    if j.iter().chain(&x.x).any(|v| v.len() != m) {
        return Err(Error::SizeMismatch(format!("vectors must have {m} coordinates")));
    }
    for a in j {
        for b in j {
            if !lattice.herm(a, b).is_zero() {
                return Err(Error::NotIsotropic("J is not totally isotropic".into()));
            }
        }
    }
    Ok(j.iter().all(|a| x.x.iter().all(|xi| lattice.herm(a, xi).is_zero())))
}

/// Naive box scan for `L_{T,μ}`: every coordinate `y_k ≡ e·lift_k (mod e)`
/// with `|y_k| ≤ e·√(2Q·(G⁻¹)_kk)` is tried, then tuples are filtered.
pub fn brute_force_reps(lattice: &Lattice, t: &IntersectionMatrix, mu: &[usize]) -> Result<Vec<TupleVector>> {
    if !lattice.is_positive_definite() {
        return Err(Error::IndefiniteLattice("box scan needs a definite lattice".into()));
    }
    let group = lattice.discriminant_group();
    let e = group.exponent() as i128;
    let g = lattice.gram();
    let ginv = g.inverse().unwrap();
    let m = g.rows();
    let lambda = if lattice.case() == Case::Unitary { int(2) } else { int(1) };
    let mut shells: Vec<Vec<Vec<Rat>>> = Vec::new();
    for i in 0..t.r {
        let target = &t.entry(i, i).a * &lambda;
        let lift = group.lift(mu[i]);
        let res = residues(&lift, e as u64);
        let bounds: Vec<i128> = (0..m)
            .map(|k| {
                let b = Rat::from_integer(BigInt::from(e * e)) * int(2) * &target * &ginv[(k, k)];
                let b = b.floor().to_integer().to_u128().unwrap_or(0);
                isqrt_u128(b) as i128
            })
            .collect();
        let mut found = Vec::new();
        let mut y = vec![0i128; m];
        box_scan(0, &bounds, &res, e, &mut y, &mut |y| {
            let x: Vec<Rat> = y.iter().map(|&v| Rat::new(BigInt::from(v), BigInt::from(e))).collect();
            if lattice.q(&x) == target {
                found.push(x);
            }
        });
        shells.push(found);
    }
    let mut out = Vec::new();
    let mut cur: Vec<Vec<Rat>> = Vec::new();
    tuples(&shells, &mut cur, &mut |c| {
        let tv = TupleVector::new(c.to_vec());
        if &intersection_matrix(lattice, &tv) == t {
            out.push(tv);
        }
    });
    out.sort();
    Ok(out)
}

fn box_scan<F: FnMut(&[i128])>(k: usize, bounds: &[i128], res: &[i128], e: i128, y: &mut Vec<i128>, f: &mut F) {
    if k == bounds.len() {
        f(y);
        return;
    }
    let lo = -bounds[k];
    let mut v = lo + (res[k] - lo).rem_euclid(e);
    while v <= bounds[k] {
        y[k] = v;
        box_scan(k + 1, bounds, res, e, y, f);
        v += e;
    }
}

fn tuples<F: FnMut(&[Vec<Rat>])>(shells: &[Vec<Vec<Rat>>], cur: &mut Vec<Vec<Rat>>, f: &mut F) {
    if cur.len() == shells.len() {
        f(cur);
        return;
    }
    for v in &shells[cur.len()] {
        cur.push(v.clone());
        tuples(shells, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lattice::standard;

    fn t1(q: Rat) -> IntersectionMatrix {
        IntersectionMatrix::scalar(q)
    }

    #[test]
    fn intersection_matrix_examples() {
        let a2 = standard::a(2);
        let x = TupleVector::from_i64(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(intersection_matrix(&a2, &x), IntersectionMatrix::from_rats(vec![vec![int(1), rat(-1, 2)], vec![rat(-1, 2), int(1)]]));
        let z2 = standard::diag(&[2, 2]);
        let x = TupleVector::from_i64(&[vec![1, 0], vec![0, 3]]);
        assert_eq!(intersection_matrix(&z2, &x), IntersectionMatrix::from_rats(vec![vec![int(1), int(0)], vec![int(0), int(9)]]));
    }

    #[test]
    fn small_rep_numbers() {
        let a1 = standard::a(1);
        let v = enumerate_reps(&a1, &t1(int(1)), &[0]).unwrap();
        assert_eq!(v, vec![TupleVector::from_i64(&[vec![-1]]), TupleVector::from_i64(&[vec![1]])]);
        let half = a1.discriminant_group().reduce(&[rat(1, 2)]);
        let v = enumerate_reps(&a1, &t1(rat(1, 4)), &[half]).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].x[0], vec![rat(1, 2)]);
        assert_eq!(rep_number(&standard::a(2), &t1(int(1)), &[0]).unwrap(), 6);
        assert_eq!(rep_number(&standard::e8(), &t1(int(1)), &[0]).unwrap(), 240);
        assert_eq!(rep_number(&a1, &t1(int(0)), &[0]).unwrap(), 1);
        assert_eq!(rep_number(&a1, &t1(int(0)), &[half]).unwrap(), 0);
    }

    #[test]
    fn errors() {
        let u = standard::hyperbolic();
        assert!(matches!(rep_number(&u, &t1(int(1)), &[0]), Err(Error::IndefiniteLattice(_))));
        let a1 = standard::a(1);
        assert!(matches!(rep_number(&a1, &t1(int(-1)), &[0]), Err(Error::NotPosDef(_))));
        let t = IntersectionMatrix::from_rats(vec![vec![int(1), int(2)], vec![int(2), int(1)]]);
        assert!(matches!(rep_number(&standard::a(2), &t, &[0, 0]), Err(Error::NotPosDef(_))));
    }

    #[test]
    fn genus_two_against_box_scan() {
        let a2 = standard::a(2);
        let t = IntersectionMatrix::from_rats(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]]);
        let fast = enumerate_reps(&a2, &t, &[0, 0]).unwrap();
        let slow = brute_force_reps(&a2, &t, &[0, 0]).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast.len(), 6 * 2);
        assert_eq!(rep_number(&a2, &t, &[0, 0]).unwrap(), 12);
    }

    #[test]
    fn theta_genus_one() {
        let f = theta_expansion(&standard::e8(), 1, &int(2)).unwrap();
        assert_eq!(f.series(0), vec![(int(0), int(1)), (int(1), int(240)), (int(2), int(2160))]);
        let a1 = standard::a(1);
        let f = theta_expansion(&a1, 1, &int(1)).unwrap();
        let half = a1.discriminant_group().reduce(&[rat(1, 2)]);
        assert_eq!(f.series(0), vec![(int(0), int(1)), (int(1), int(2))]);
        assert_eq!(f.series(half), vec![(rat(1, 4), int(2))]);
    }

    #[test]
    fn theta_genus_two_consistent() {
        let a2 = standard::a(2);
        let f = theta_expansion(&a2, 2, &int(2)).unwrap();
        for (k, c) in f.iter() {
            let t = IntersectionMatrix { r: 2, t: k.t.clone() };
            assert_eq!(int(rep_number(&a2, &t, &k.mu).unwrap() as i64), *c);
        }
        let t = IntersectionMatrix::from_rats(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]]);
        assert_eq!(f.get(&t.key(&[0, 0])), int(12));
    }

    #[test]
    fn unitary_theta_is_trace_theta() {
        // O_K for ℚ(i) with x·ȳ: the trace form is ℤ² with Gram 2·I
        let l = standard::ok_scaled(-4, 1);
        let f = theta_expansion(&l, 1, &int(2)).unwrap();
        // T = ½⟨x,x⟩; norms 1 and 2 occur 4 times each
        assert_eq!(f.series(0), vec![(int(0), int(1)), (rat(1, 2), int(4)), (int(1), int(4)), (int(2), int(4))]);
        let t = IntersectionMatrix::scalar(rat(1, 2));
        let v = enumerate_reps(&l, &t, &[0]).unwrap();
        assert_eq!(v.len(), 4);
        // Hermitian genus 2 agrees with the count
        let f2 = theta_expansion(&l, 2, &int(1)).unwrap();
        for (k, c) in f2.iter() {
            let t = IntersectionMatrix { r: 2, t: k.t.clone() };
            assert_eq!(int(rep_number(&l, &t, &k.mu).unwrap() as i64), *c, "{k:?}");
            let slow = brute_force_reps(&l, &t, &k.mu).unwrap();
            assert_eq!(int(slow.len() as i64), *c);
        }
    }

    #[test]
    fn span_and_complement() {
        let l = standard::diag(&[2, -2, -2]);
        let x = TupleVector::from_i64(&[vec![1, 0, 0]]);
        assert_eq!(span_rank(&l, &x), 1);
        assert_eq!(span_rank(&l, &TupleVector::from_i64(&[vec![1, 0, 0], vec![2, 0, 0]])), 1);
        assert_eq!(span_rank(&l, &TupleVector::new(vec![])), 0);
        let c = complement_form(&l, &x).unwrap();
        assert_eq!(c.signature, Signature { positive: 0, negative: 2 });
        let c = complement_form(&l, &TupleVector::new(vec![])).unwrap();
        assert_eq!(&c.gram, l.gram());
        let bad = TupleVector::from_i64(&[vec![0, 1, 0]]);
        assert!(matches!(complement_form(&l, &bad), Err(Error::NotPosDefSpan(_))));
        // U ⊕ A1, x in A1: complement still contains the hyperbolic plane
        let ua = standard::sum(&standard::hyperbolic(), &standard::a(1));
        let c = complement_form(&ua, &TupleVector::from_i64(&[vec![0, 0, 1]])).unwrap();
        assert_eq!(c.signature, Signature { positive: 1, negative: 1 });
        let e = vec![int(1), int(0), int(0)];
        assert!(cusp_incidence(&ua, &[e.clone()], &TupleVector::from_i64(&[vec![0, 0, 1]])).unwrap());
        assert!(!cusp_incidence(&ua, &[e.clone()], &TupleVector::from_i64(&[vec![0, 1, 1]])).unwrap());
        assert!(cusp_incidence(&ua, &[e.clone()], &TupleVector::new(vec![])).unwrap());
        assert!(matches!(
            cusp_incidence(&ua, &[vec![int(1), int(1), int(0)]], &TupleVector::new(vec![])),
            Err(Error::NotIsotropic(_))
        ));
    }

    #[test]
    fn unitary_complement() {
        let l = standard::hermitian_diag(-4, &[1, 1, -1]);
        let x = TupleVector::from_i64(&[vec![1, 0, 0, 0, 0, 0]]);
        assert_eq!(span_rank(&l, &x), 1);
        let c = complement_form(&l, &x).unwrap();
        assert_eq!(c.signature, Signature { positive: 1, negative: 1 });
        let (kb, h) = c.hermitian.unwrap();
        assert_eq!(kb.len(), 2);
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn gl_equivariance_small() {
        let a2 = standard::a(2);
        let t = IntersectionMatrix::from_rats(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]]);
        let a = vec![vec![KElem::from_rat(int(1)), KElem::from_rat(int(1))], vec![KElem::zero(), KElem::from_rat(int(1))]];
        let t2 = t.transform(&a, None);
        assert_eq!(rep_number(&a2, &t, &[0, 0]).unwrap(), rep_number(&a2, &t2, &[0, 0]).unwrap());
        for x in enumerate_reps(&a2, &t, &[0, 0]).unwrap() {
            assert_eq!(intersection_matrix(&a2, &x.act(&a, &a2)), t2);
        }
    }
}
