//! Weil representations `ρ_{L,r}` on `ℂ[(L*/L)^r]`.
//!
//! Tuples `μ = (μ_1, …, μ_r)` are indexed by `Σ μ_i·|D|^{r−i}` (`μ_1` most
//! significant), i.e. lexicographically in elementary-divisor coordinates.
//!
//! Vectors and matrix columns are stored over `ℤ[x]/(x^N − 1)`, mapped onto
//! `ℤ[ζ_N]`, with a common scale `|D|^{−s/2}`. Every generator matrix is of
//! that shape, so products stay exact with machine integers; coefficient
//! growth is tracked and reported as [`Error::Overflow`].
//!
//! Conventions for the branch and normalization choices:
//! * orthogonal `ρ(S)` carries `e(−r·sig/8)`, `sig = b⁺ − b⁻`;
//! * orthogonal `ρ(m(A))` carries `√(det A)^{−sig}` with `√−1 = i`;
//! * unitary `ρ(m(A))` carries `(det A)^{−m}`, `m` the `O_K`-rank;
//! * unitary `ρ(w_r)` uses the kernel `e(−Σ_i (μ_i, ν_i))` of the trace
//!   form and the prefactor `γ^r`, with `γ` from [`unitary_weil_index`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{factor, lcm_u64, squarefree_split, Rat};
use crate::cyclotomic::{cyclotomic_poly, ExactScalar};
use crate::discriminant::DiscriminantGroup;
use crate::error::{Error, Result};
use crate::field::{KElem, QuadField};
use crate::lattice::{Case, Lattice};

/// Square matrix over `O_K` with entries `a + b·ω` stored as `[a, b]`
/// (`b = 0` for integer matrices).
pub type OMatrix = Vec<Vec<[i64; 2]>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// `m(A)`, `A ∈ GL_r(ℤ)` or `GL_r(O_K)`.
    M(OMatrix),
    /// `n(B)`, `B` symmetric or Hermitian.
    N(OMatrix),
    /// `w̃_r` (called `S` for `r = 1`).
    S,
}

impl Generator {
    pub fn t(q: i64) -> Generator {
        Generator::N(vec![vec![[q, 0]]])
    }

    pub fn m_int(a: &[Vec<i64>]) -> Generator {
        Generator::M(int_omatrix(a))
    }

    pub fn n_int(b: &[Vec<i64>]) -> Generator {
        Generator::N(int_omatrix(b))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Generator::M(_) => "m",
            Generator::N(_) => "n",
            Generator::S => "S",
        }
    }
}

pub fn int_omatrix(a: &[Vec<i64>]) -> OMatrix {
    a.iter().map(|r| r.iter().map(|&x| [x, 0]).collect()).collect()
}

pub fn identity_omatrix(r: usize) -> OMatrix {
    (0..r).map(|i| (0..r).map(|j| [(i == j) as i64, 0]).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord {
    pub genus: usize,
    pub case: Case,
    pub letters: Vec<Generator>,
}

#[derive(Serialize, Deserialize)]
struct LetterDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    payload: Option<Value>,
}

impl GroupWord {
    pub fn new(genus: usize, case: Case, letters: Vec<Generator>) -> GroupWord {
        GroupWord { genus, case, letters }
    }

    pub fn empty(genus: usize, case: Case) -> GroupWord {
        Self::new(genus, case, Vec::new())
    }

    /// Word in `S` and `T = n(1)` given as a string such as `"STST"`;
    /// `t` stands for `T^{-1}` and `Z` for `m(−1)`.
    pub fn sl2(case: Case, letters: &str) -> GroupWord {
        let gens = letters
            .chars()
            .map(|c| match c {
                'S' => Generator::S,
                'T' => Generator::t(1),
                't' => Generator::t(-1),
                'Z' => Generator::m_int(&[vec![-1]]),
                _ => panic!("unknown SL2 letter {c}"),
            })
            .collect();
        Self::new(1, case, gens)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self::new(self.genus, self.case, letters)
    }

    pub fn repeat(&self, k: usize) -> GroupWord {
        let mut letters = Vec::new();
        for _ in 0..k {
            letters.extend(self.letters.iter().cloned());
        }
        Self::new(self.genus, self.case, letters)
    }

    /// Reads a word document: a JSON list of `{kind, payload}` records.
    pub fn parse(text: &str, case: Case, genus: usize) -> Result<GroupWord> {
        let recs: Vec<LetterDoc> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut letters = Vec::new();
        for rec in recs {
            let g = match rec.kind.as_str() {
                "S" | "w" => Generator::S,
                "m" | "n" => {
                    let p = rec.payload.ok_or_else(|| Error::Parse("letter needs a payload".into()))?;
                    let m = parse_payload(&p, case)?;
                    if rec.kind == "m" {
                        Generator::M(m)
                    } else {
                        Generator::N(m)
                    }
                }
                k => return Err(Error::Parse(format!("unknown letter kind {k:?}"))),
            };
            letters.push(g);
        }
        Ok(GroupWord::new(genus, case, letters))
    }

    pub fn to_doc(&self) -> String {
        let recs: Vec<LetterDoc> = self
            .letters
            .iter()
            .map(|g| LetterDoc {
                kind: g.kind().into(),
                payload: match g {
                    Generator::S => None,
                    Generator::M(m) | Generator::N(m) => Some(payload_value(m, self.case)),
                },
            })
            .collect();
        serde_json::to_string(&recs).expect("serializes")
    }

    /// Checks sizes, case compatibility and generator conditions.
    pub fn validate(&self, field: Option<&QuadField>) -> Result<()> {
        let r = self.genus;
        for g in &self.letters {
            let m = match g {
                Generator::S => continue,
                Generator::M(m) | Generator::N(m) => m,
            };
            if m.len() != r || m.iter().any(|row| row.len() != r) {
                return Err(Error::SizeMismatch(format!("{} payload must be {r}×{r}", g.kind())));
            }
            let unitary = self.case == Case::Unitary;
            if !unitary && m.iter().flatten().any(|e| e[1] != 0) {
                return Err(Error::WrongCase("ω-entries in an orthogonal word".into()));
            }
            let f = if unitary {
                Some(*field.ok_or_else(|| Error::WrongCase("unitary word needs a field".into()))?)
            } else {
                None
            };
            match g {
                Generator::M(a) => {
                    let det = odet(a, f.as_ref());
                    let ok = match &f {
                        None => det.is_rational() && (det.a == Rat::from_integer(1.into()) || det.a == Rat::from_integer((-1).into())),
                        Some(f) => f.is_unit(&det),
                    };
                    if !ok {
                        return Err(Error::InvalidGenerator(format!("m(A) needs an invertible A, det = {det}")));
                    }
                }
                Generator::N(b) => {
                    for i in 0..r {
                        for j in 0..r {
                            let bij = to_kelem(b[i][j]);
                            let bji = to_kelem(b[j][i]);
                            let want = match &f {
                                None => bij,
                                Some(f) => f.conj(&bij),
                            };
                            if bji != want {
                                return Err(Error::InvalidGenerator("n(B) needs B symmetric (Hermitian)".into()));
                            }
                        }
                    }
                }
                Generator::S => {}
            }
        }
        Ok(())
    }

    /// The underlying `2r × 2r` matrix over `O_K`, as the product of
    /// the letter matrices.
    pub fn matrix(&self, field: Option<&QuadField>) -> Vec<Vec<KElem>> {
        let r = self.genus;
        let mut acc = kidentity(2 * r);
        for g in &self.letters {
            acc = kmul(&acc, &generator_block(g, r, field), field);
        }
        acc
    }
}

fn parse_payload(v: &Value, case: Case) -> Result<OMatrix> {
    let bad = || Error::Parse("payload must be a square matrix".into());
    let rows = v.as_array().ok_or_else(bad)?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|e| match (case, e) {
                    (_, Value::Number(n)) => n.as_i64().map(|a| [a, 0]).ok_or_else(bad),
                    (Case::Unitary, Value::Array(p)) if p.len() == 2 => {
                        let a = p[0].as_i64().ok_or_else(bad)?;
                        let b = p[1].as_i64().ok_or_else(bad)?;
                        Ok([a, b])
                    }
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect()
}

fn payload_value(m: &OMatrix, case: Case) -> Value {
    Value::Array(
        m.iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|e| match case {
                            Case::Orthogonal => Value::from(e[0]),
                            Case::Unitary => Value::Array(vec![Value::from(e[0]), Value::from(e[1])]),
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn to_kelem(e: [i64; 2]) -> KElem {
    KElem::new(Rat::from_integer(e[0].into()), Rat::from_integer(e[1].into()))
}

fn kmul_elem(x: &KElem, y: &KElem, f: Option<&QuadField>) -> KElem {
    match f {
        Some(f) => f.mul(x, y),
        None => KElem::from_rat(&x.a * &y.a),
    }
}

fn kidentity(n: usize) -> Vec<Vec<KElem>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { KElem::one() } else { KElem::zero() }).collect()).collect()
}

fn kmul(a: &[Vec<KElem>], b: &[Vec<KElem>], f: Option<&QuadField>) -> Vec<Vec<KElem>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(KElem::zero(), |acc, k| acc.add(&kmul_elem(&a[i][k], &b[k][j], f))))
                .collect()
        })
        .collect()
}

/// Determinant over `O_K` by cofactor expansion (small `r` only).
fn kdet(a: &[Vec<KElem>], f: Option<&QuadField>) -> KElem {
    let n = a.len();
    if n == 0 {
        return KElem::one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = KElem::zero();
    for j in 0..n {
        let minor: Vec<Vec<KElem>> = (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| a[i][c].clone()).collect()).collect();
        let term = kmul_elem(&a[0][j], &kdet(&minor, f), f);
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn odet(a: &OMatrix, f: Option<&QuadField>) -> KElem {
    let k: Vec<Vec<KElem>> = a.iter().map(|r| r.iter().map(|&e| to_kelem(e)).collect()).collect();
    kdet(&k, f)
}

/// Inverse over `O_K` of a matrix with unit determinant.
fn kinverse(a: &[Vec<KElem>], f: Option<&QuadField>) -> Vec<Vec<KElem>> {
    let n = a.len();
    let det = kdet(a, f);
    let dinv = match f {
        Some(f) => f.inv(&det).expect("unit determinant"),
        None => KElem::from_rat(Rat::from_integer(1.into()) / &det.a),
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj(A)_{ij} = (−1)^{i+j} det(minor_{ji})
                    let minor: Vec<Vec<KElem>> =
                        (0..n).filter(|&r| r != j).map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect()).collect();
                    let c = kdet(&minor, f);
                    let c = if (i + j) % 2 == 0 { c } else { c.neg() };
                    kmul_elem(&c, &dinv, f)
                })
                .collect()
        })
        .collect()
}

fn kconj_transpose(a: &[Vec<KElem>], f: Option<&QuadField>) -> Vec<Vec<KElem>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match f {
                    Some(f) => f.conj(&a[j][i]),
                    None => a[j][i].clone(),
                })
                .collect()
        })
        .collect()
}

/// `2r × 2r` matrix of a generator.
pub fn generator_block(g: &Generator, r: usize, f: Option<&QuadField>) -> Vec<Vec<KElem>> {
    let mut m = vec![vec![KElem::zero(); 2 * r]; 2 * r];
    match g {
        Generator::M(a) => {
            let ak: Vec<Vec<KElem>> = a.iter().map(|row| row.iter().map(|&e| to_kelem(e)).collect()).collect();
            let d = kinverse(&kconj_transpose(&ak, f), f);
            for i in 0..r {
                for j in 0..r {
                    m[i][j] = ak[i][j].clone();
                    m[r + i][r + j] = d[i][j].clone();
                }
            }
        }
        Generator::N(b) => {
            for i in 0..r {
                m[i][i] = KElem::one();
                m[r + i][r + i] = KElem::one();
                for j in 0..r {
                    m[i][r + j] = to_kelem(b[i][j]);
                }
            }
        }
        Generator::S => {
            for i in 0..r {
                m[i][r + i] = KElem::from_rat(Rat::from_integer((-1).into()));
                m[r + i][i] = KElem::one();
            }
        }
    }
    m
}

/// A vector of `ℂ[(L*/L)^r]` with coordinates in `ℤ[ζ_N]`, scaled by `|D|^{−s/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycVec {
    n: usize,
    data: Vec<i64>,
    s: u32,
    /// Upper bound for the ℓ¹ norm of any coordinate.
    bound: u64,
}

impl CycVec {
    pub fn dim(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn scale_power(&self) -> u32 {
        self.s
    }

    fn entry(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_zero_entry(&self, i: usize) -> bool {
        self.entry(i).iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> CycVec {
        CycVec { data: self.data.iter().map(|c| -c).collect(), ..self.clone() }
    }
}

const BOUND_LIMIT: u64 = 1 << 61;

/// `out[(j + e) mod N] += c·inp[j]`.
#[inline]
fn rot_add(out: &mut [i64], inp: &[i64], e: usize, c: i64) {
    let n = inp.len();
    let e = e % n;
    let (head, tail) = inp.split_at(n - e);
    for (o, x) in out[e..].iter_mut().zip(head) {
        *o += c * x;
    }
    for (o, x) in out[..e].iter_mut().zip(tail) {
        *o += c * x;
    }
}

/// Explicit Weil matrix, stored by columns.
#[derive(Debug, Clone)]
pub struct WeilMatrix {
    cols: Vec<CycVec>,
    n: usize,
    disc: u64,
}

impl WeilMatrix {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Cyclotomic order `N` of the internal coefficient ring.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry in row `i`, column `j`; column `j` is the image of `e_j`.
    pub fn entry(&self, i: usize, j: usize) -> ExactScalar {
        let c = &self.cols[j];
        let poly: Vec<Rat> = c.entry(i).iter().map(|&x| Rat::from_integer(x.into())).collect();
        ExactScalar::from_poly(self.n as u64, poly, self.disc, (c.s % 2) as u8).scale(&self.scale_rat(c.s))
    }

    fn scale_rat(&self, s: u32) -> Rat {
        // |D|^{-s/2} = |D|^{-⌊s/2⌋}·|D|^{-(s mod 2)/2}
        Rat::new(1.into(), BigInt::from(self.disc).pow(s / 2))
    }

    pub fn column(&self, j: usize) -> &CycVec {
        &self.cols[j]
    }
}

/// Precomputed data for `ρ_{L,r}`.
#[derive(Debug, Clone)]
pub struct WeilRep {
    lattice: Lattice,
    group: DiscriminantGroup,
    genus: usize,
    dsize: usize,
    dim: usize,
    n: usize,
    /// `b_exp[μ·|D| + ν]`: exponent of `ζ_N` in `e(−b(μ, ν))`.
    b_exp: Vec<u32>,
    /// Exponent of `ζ_N` in `e(q(μ))`.
    q_exp: Vec<u32>,
    /// Exponent of the `ρ(S)` prefactor root of unity.
    s_phase: u32,
    /// `√|D| = sq·√d` with `√d` in `ℤ[ζ_N]` (present for odd genus).
    sqrt_disc: Option<(i64, Vec<i64>)>,
    /// Exponent `e(−sig/4)` for `det A = −1` (orthogonal).
    neg_det_phase: u32,
}

impl WeilRep {
    pub fn new(lattice: &Lattice, genus: usize) -> Result<WeilRep> {
        let gamma = match lattice.case() {
            Case::Orthogonal => None,
            Case::Unitary => Some(unitary_weil_index(lattice)?),
        };
        Self::build(lattice, genus, gamma)
    }

    /// Unitary representation with an explicitly supplied Weil index `γ`
    /// (a rational `z` with `γ = e(z)`, `8z ∈ ℤ`).
    pub fn with_gamma(lattice: &Lattice, genus: usize, gamma: &Rat) -> Result<WeilRep> {
        if lattice.case() != Case::Unitary {
            return Err(Error::WrongCase("γ applies only to unitary lattices".into()));
        }
        Self::build(lattice, genus, Some(gamma.clone()))
    }

    fn build(lattice: &Lattice, genus: usize, gamma: Option<Rat>) -> Result<WeilRep> {
        if genus == 0 {
            return Err(Error::SizeMismatch("genus must be positive".into()));
        }
        let group = lattice.discriminant_group();
        let dsize = group.order();
        let dim = dsize.checked_pow(genus as u32).filter(|&d| d <= 1 << 16).ok_or_else(|| {
            Error::Overflow(format!("|D|^r = {dsize}^{genus} is too large for explicit matrices"))
        })?;
        let e = group.exponent();
        let mut n = lcm_u64(2 * e, 8);
        if let Some(f) = lattice.field() {
            n = lcm_u64(n, unit_order(f));
        }
        let (sq, core) = squarefree_split(dsize as u64);
        if genus % 2 == 1 && core > 1 {
            n = lcm_u64(n, sqrt_order(core));
        }
        if let Some(g) = &gamma {
            n = lcm_u64(n, g.denom().to_u64().unwrap_or(1));
        }
        let nn = n as usize;
        let mut b_exp = vec![0u32; dsize * dsize];
        for x in 0..dsize {
            for y in 0..dsize {
                let b = group.b_num(x, y) as usize * (nn / e as usize);
                b_exp[x * dsize + y] = ((nn - b % nn) % nn) as u32;
            }
        }
        let q_exp = (0..dsize).map(|x| (group.q_num(x) as usize * (nn / (2 * e as usize))) as u32).collect();
        let sig = lattice.z_signature().index();
        let eighth = nn / 8;
        let s_phase = match &gamma {
            None => ((-(genus as i64) * sig).rem_euclid(8) as usize * eighth) as u32,
            Some(g) => {
                let z = g * Rat::from_integer(BigInt::from(genus as i64 * nn as i64));
                if !z.is_integer() {
                    return Err(Error::NoConsistentIndex("γ is not an 8th root of unity".into()));
                }
                z.to_integer().mod_floor(&BigInt::from(nn)).to_u32().expect("small")
            }
        };
        let neg_det_phase = ((-sig).rem_euclid(4) as usize * (nn / 4)) as u32;
        let sqrt_disc = if genus % 2 == 1 {
            Some((sq as i64, if core > 1 { sqrt_poly(core, nn) } else { unit_poly(nn) }))
        } else {
            None
        };
        Ok(WeilRep {
            lattice: lattice.clone(),
            group,
            genus,
            dsize,
            dim,
            n: nn,
            b_exp,
            q_exp,
            s_phase,
            sqrt_disc,
            neg_det_phase,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Components `(μ_1, …, μ_r)` of a tuple index.
    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.genus];
        for i in (0..self.genus).rev() {
            t[i] = idx % self.dsize;
            idx /= self.dsize;
        }
        t
    }

    pub fn tuple_index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &m| acc * self.dsize + m)
    }

    pub fn basis(&self, i: usize) -> CycVec {
        let mut data = vec![0i64; self.dim * self.n];
        data[i * self.n] = 1;
        CycVec { n: self.n, data, s: 0, bound: 1 }
    }

    fn check_word(&self, w: &GroupWord) -> Result<()> {
        if w.case != self.lattice.case() {
            return Err(Error::WrongCase(format!("{} word on a {} lattice", w.case.as_str(), self.lattice.case().as_str())));
        }
        if w.genus != self.genus {
            return Err(Error::SizeMismatch(format!("word of genus {} for ρ of genus {}", w.genus, self.genus)));
        }
        w.validate(self.lattice.field())
    }

    /// `ρ(g)·v`.
    pub fn apply(&self, g: &Generator, v: &CycVec) -> Result<CycVec> {
        match g {
            Generator::S => self.apply_s(v),
            Generator::N(b) => Ok(self.apply_n(b, v)),
            Generator::M(a) => Ok(self.apply_m(a, v)),
        }
    }

    /// `ρ(w)·v` for a word `w = g_1 ⋯ g_k` (rightmost letter first).
    pub fn apply_word(&self, w: &GroupWord, v: &CycVec) -> Result<CycVec> {
        self.check_word(w)?;
        let mut cur = v.clone();
        for g in w.letters.iter().rev() {
            cur = self.apply(g, &cur)?;
        }
        Ok(cur)
    }

    fn apply_s(&self, v: &CycVec) -> Result<CycVec> {
        let n = self.n;
        let d = self.dsize;
        let new_bound = (0..self.genus).try_fold(v.bound, |b, _| b.checked_mul(d as u64).filter(|&x| x < BOUND_LIMIT));
        let Some(bound) = new_bound else {
            return Err(Error::Overflow("coefficient growth exceeds 64-bit range".into()));
        };
        // transform one tuple coordinate at a time; the kernel factorizes
        let mut cur = v.data.clone();
        for axis in 0..self.genus {
            let stride = d.pow((self.genus - 1 - axis) as u32);
            let mut out = vec![0i64; cur.len()];
            for base in 0..self.dim {
                if (base / stride) % d != 0 {
                    continue;
                }
                for mu in 0..d {
                    let src = (base + mu * stride) * n;
                    let inp = &cur[src..src + n];
                    if inp.iter().all(|&c| c == 0) {
                        continue;
                    }
                    for nu in 0..d {
                        let dst = (base + nu * stride) * n;
                        rot_add(&mut out[dst..dst + n], inp, self.b_exp[mu * d + nu] as usize, 1);
                    }
                }
            }
            cur = out;
        }
        if self.s_phase != 0 {
            let mut out = vec![0i64; cur.len()];
            for i in 0..self.dim {
                rot_add(&mut out[i * n..(i + 1) * n], &cur[i * n..(i + 1) * n], self.s_phase as usize, 1);
            }
            cur = out;
        }
        Ok(CycVec { n, data: cur, s: v.s + self.genus as u32, bound })
    }

    /// Exponent of `ζ_N` in the `ρ(n(B))` eigenvalue at tuple `t`.
    fn n_phase(&self, b: &OMatrix, t: &[usize]) -> usize {
        let n = self.n;
        let e = self.group.exponent() as usize;
        let mut acc = 0usize;
        for i in 0..self.genus {
            let bii = b[i][i][0].rem_euclid(n as i64) as usize;
            acc += bii * self.q_exp[t[i]] as usize;
            for j in i + 1..self.genus {
                // tr_{K/ℚ}⟨B_ji·μ_j, μ_i⟩, which is B_ij·b(μ_i, μ_j) for integer B
                let bj = self.group.mul_ok(t[j], &to_kelem(b[j][i]));
                acc += self.group.b_num(bj, t[i]) as usize * (n / e);
            }
            acc %= n;
        }
        acc % n
    }

    fn apply_n(&self, b: &OMatrix, v: &CycVec) -> CycVec {
        let n = self.n;
        let mut out = vec![0i64; v.data.len()];
        for idx in 0..self.dim {
            if v.is_zero_entry(idx) {
                continue;
            }
            let ph = self.n_phase(b, &self.tuple(idx));
            rot_add(&mut out[idx * n..(idx + 1) * n], v.entry(idx), ph, 1);
        }
        CycVec { n, data: out, s: v.s, bound: v.bound }
    }

    fn apply_m(&self, a: &OMatrix, v: &CycVec) -> CycVec {
        let n = self.n;
        let f = self.lattice.field();
        let ak: Vec<Vec<KElem>> = a.iter().map(|row| row.iter().map(|&e| to_kelem(e)).collect()).collect();
        let det = kdet(&ak, f);
        let inv = kinverse(&ak, f);
        let phase = match f {
            None => {
                if det.a.is_negative() {
                    self.neg_det_phase as usize
                } else {
                    0
                }
            }
            Some(field) => {
                let (k, w) = field.unit_angle(&det).expect("unit determinant");
                // (det A)^{−m}, det A = e(k/w)
                let m = self.lattice.rank() as i64;
                ((-(k as i64) * m).rem_euclid(w as i64) as usize) * (n / w as usize)
            }
        };
        // (μA^{-1})_j = Σ_i μ_i·(A^{-1})_{ij}
        let r = self.genus;
        let act: Vec<Vec<Vec<usize>>> = (0..r)
            .map(|i| (0..r).map(|j| (0..self.dsize).map(|mu| self.group.mul_ok(mu, &inv[i][j])).collect()).collect())
            .collect();
        let mut out = vec![0i64; v.data.len()];
        for idx in 0..self.dim {
            if v.is_zero_entry(idx) {
                continue;
            }
            let t = self.tuple(idx);
            let img: Vec<usize> = (0..r).map(|j| (0..r).fold(0, |acc, i| self.group.add(acc, act[i][j][t[i]]))).collect();
            let dst = self.tuple_index(&img);
            rot_add(&mut out[dst * n..(dst + 1) * n], v.entry(idx), phase, 1);
        }
        CycVec { n, data: out, s: v.s, bound: v.bound }
    }

    pub fn generator_matrix(&self, g: &Generator) -> Result<WeilMatrix> {
        self.word_matrix(&GroupWord::new(self.genus, self.lattice.case(), vec![g.clone()]))
    }

    /// Explicit matrix of `ρ(w)`, columns computed in parallel.
    pub fn word_matrix(&self, w: &GroupWord) -> Result<WeilMatrix> {
        self.check_word(w)?;
        let cols = (0..self.dim).into_par_iter().map(|j| self.apply_word(w, &self.basis(j))).collect::<Result<Vec<_>>>()?;
        Ok(WeilMatrix { cols, n: self.n, disc: self.dsize as u64 })
    }

    /// Coordinates reduced modulo `Φ_N` after clearing the scale against
    /// a partner scale: returns `Σ data·|D|^{t/2}` in canonical form.
    fn normalized(&self, v: &CycVec, t: u32) -> Result<Vec<i128>> {
        let n = self.n;
        let whole = BigInt::from(self.dsize).pow(t / 2).to_i128().ok_or_else(|| Error::Overflow("scale".into()))?;
        let phi: Vec<i128> = cyclotomic_poly(n as u64).iter().map(|c| c.to_i128().expect("small")).collect();
        let deg = phi.len() - 1;
        let mut out = Vec::with_capacity(self.dim * deg);
        for i in 0..self.dim {
            let mut p: Vec<i128> = v.entry(i).iter().map(|&c| c as i128 * whole).collect();
            if t % 2 == 1 {
                let (sq, root) = self.sqrt_disc.as_ref().ok_or_else(|| {
                    Error::Overflow("odd scale difference needs √|D| (odd genus only)".into())
                })?;
                let mut q = vec![0i128; n];
                for (j, &c) in p.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (k, &rk) in root.iter().enumerate() {
                        if rk != 0 {
                            q[(j + k) % n] += c * rk as i128 * *sq as i128;
                        }
                    }
                }
                p = q;
            }
            for k in (deg..n).rev() {
                let c = p[k];
                if c == 0 {
                    continue;
                }
                p[k] = 0;
                for (j, &pj) in phi.iter().enumerate().take(deg) {
                    p[k - deg + j] -= c * pj;
                }
            }
            p.truncate(deg);
            out.extend(p);
        }
        Ok(out)
    }

    /// Exact equality of two vectors of this representation.
    pub fn vec_eq(&self, a: &CycVec, b: &CycVec) -> Result<bool> {
        Ok(self.normalized(a, b.s)? == self.normalized(b, a.s)?)
    }

    /// `ρ(w1) = ρ(w2)`, checked column by column.
    pub fn words_equal(&self, w1: &GroupWord, w2: &GroupWord) -> Result<bool> {
        self.check_word(w1)?;
        self.check_word(w2)?;
        let res: Result<Vec<bool>> = (0..self.dim)
            .into_par_iter()
            .map(|j| {
                let e = self.basis(j);
                self.vec_eq(&self.apply_word(w1, &e)?, &self.apply_word(w2, &e)?)
            })
            .collect();
        Ok(res?.into_iter().all(|b| b))
    }

    /// `a = ±b` for two matrices of this representation.
    pub fn matrices_equal(&self, a: &WeilMatrix, b: &WeilMatrix, negate: bool) -> Result<bool> {
        if a.dim() != self.dim || b.dim() != self.dim {
            return Err(Error::SizeMismatch("matrix of another representation".into()));
        }
        let res: Result<Vec<bool>> = (0..self.dim)
            .into_par_iter()
            .map(|j| {
                let y = if negate { b.cols[j].neg() } else { b.cols[j].clone() };
                self.vec_eq(&a.cols[j], &y)
            })
            .collect();
        Ok(res?.into_iter().all(|b| b))
    }

    /// If `ρ(w)` is a scalar matrix `c·I`, returns `c`.
    pub fn word_scalar(&self, w: &GroupWord) -> Result<Option<ExactScalar>> {
        let m = self.word_matrix(w)?;
        let s = m.cols[0].s;
        if m.cols.iter().any(|c| c.s != s) {
            return Ok(None);
        }
        let deg = self.normalized(&m.cols[0], 0)?.len() / self.dim;
        let c0 = self.normalized(&m.cols[0], 0)?[..deg].to_vec();
        for (j, col) in m.cols.iter().enumerate() {
            let v = self.normalized(col, 0)?;
            for i in 0..self.dim {
                let x = &v[i * deg..(i + 1) * deg];
                let ok = if i == j { x == c0.as_slice() } else { x.iter().all(|&c| c == 0) };
                if !ok {
                    return Ok(None);
                }
            }
        }
        Ok(Some(m.entry(0, 0)))
    }

    /// Exact check of `M*·M = I`.
    pub fn is_unitary(&self, m: &WeilMatrix) -> Result<bool> {
        let n = self.n;
        let dim = m.dim();
        // sparse support of each column: (row, [(exp, coef)])
        let sparse: Vec<Vec<(usize, Vec<(usize, i64)>)>> = m
            .cols
            .iter()
            .map(|c| {
                (0..dim)
                    .filter(|&i| !c.is_zero_entry(i))
                    .map(|i| (i, c.entry(i).iter().enumerate().filter(|(_, &x)| x != 0).map(|(e, &x)| (e, x)).collect()))
                    .collect()
            })
            .collect();
        let scale = m.cols.first().map_or(0, |c| c.s);
        if m.cols.iter().any(|c| c.s != scale) {
            return Ok(false);
        }
        // M*M has scale |D|^{−s}; compare against |D|^{s}·I
        let target = BigInt::from(self.dsize).pow(scale).to_i64().ok_or_else(|| Error::Overflow("scale".into()))?;
        let phi: Vec<i64> = cyclotomic_poly(n as u64).iter().map(|c| c.to_i64().expect("small")).collect();
        let ok = (0..dim).into_par_iter().all(|i| {
            let mut dense = vec![vec![0i64; n]; dim];
            let mut row_of: Vec<Option<&Vec<(usize, i64)>>> = vec![None; dim];
            for (r, e) in &sparse[i] {
                row_of[*r] = Some(e);
            }
            for (j, col) in sparse.iter().enumerate() {
                for (r, ej) in col {
                    let Some(ei) = row_of[*r] else { continue };
                    for &(a, x) in ei {
                        for &(b, y) in ej {
                            // conj(ζ^a)·ζ^b
                            dense[j][(b + n - a) % n] += x * y;
                        }
                    }
                }
            }
            dense.iter_mut().enumerate().all(|(j, p)| {
                let mut want = vec![0i64; n];
                if i == j {
                    want[0] = target;
                }
                reduce_i64(p, &phi) == reduce_i64(&mut want, &phi)
            })
        });
        Ok(ok)
    }
}

fn reduce_i64(p: &mut [i64], phi: &[i64]) -> Vec<i64> {
    let deg = phi.len() - 1;
    let mut q = p.to_vec();
    for k in (deg..q.len()).rev() {
        let c = q[k];
        if c == 0 {
            continue;
        }
        q[k] = 0;
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            q[k - deg + j] -= c * pj;
        }
    }
    q.truncate(deg);
    q
}

fn unit_order(f: &QuadField) -> u64 {
    match f.d() {
        -1 => 4,
        -3 => 6,
        _ => 2,
    }
}

/// Order of the cyclotomic field holding `√d` as a Gauss-sum combination.
fn sqrt_order(d: u64) -> u64 {
    factor(d).iter().fold(1, |acc, &(p, _)| {
        let o = if p == 2 {
            8
        } else if p % 4 == 1 {
            p
        } else {
            4 * p
        };
        lcm_u64(acc, o)
    })
}

fn unit_poly(n: usize) -> Vec<i64> {
    let mut p = vec![0; n];
    p[0] = 1;
    p
}

/// `√d` (squarefree `d`) as integer coefficients of `ζ_N^j`, `j < N`.
fn sqrt_poly(d: u64, n: usize) -> Vec<i64> {
    let mut acc = unit_poly(n);
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    out[(i + j) % n] += x * y;
                }
            }
        }
        out
    };
    for (p, _) in factor(d) {
        let mut r = vec![0i64; n];
        if p == 2 {
            r[n / 8] += 1;
            r[7 * n / 8] += 1;
        } else {
            let step = n / p as usize;
            for a in 1..p {
                r[a as usize * step] += legendre(a, p);
            }
            if p % 4 == 3 {
                // √p = −i·g_p
                let mut mi = vec![0i64; n];
                mi[3 * n / 4] = 1;
                r = mul(&r, &mi);
            }
        }
        acc = mul(&acc, &r);
    }
    acc
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
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `ρ_{L,r}(g)` for a single generator.
pub fn weil_generator_matrix(lattice: &Lattice, r: usize, g: &Generator) -> Result<WeilMatrix> {
    WeilRep::new(lattice, r)?.generator_matrix(g)
}

/// `ρ_{L,r}(w)` as the ordered product of the generator matrices.
pub fn weil_word_matrix(lattice: &Lattice, w: &GroupWord) -> Result<WeilMatrix> {
    WeilRep::new(lattice, w.genus)?.word_matrix(w)
}

/// Gauss-sum check `Σ_μ e(q(μ)) = √|D|·e(sig/8)`.
#[derive(Debug, Clone)]
pub struct Milgram {
    pub gauss_sum: ExactScalar,
    pub expected: ExactScalar,
    pub signature: i64,
    pub order: usize,
    pub holds: bool,
}

pub fn milgram(lattice: &Lattice) -> Milgram {
    let group = lattice.discriminant_group();
    let hist = group.gauss_sum_histogram();
    let m = hist.len() as u64;
    let coeffs: Vec<Rat> = hist.iter().map(|&c| Rat::from_integer(c.into())).collect();
    let gauss_sum = ExactScalar::from_poly(m, coeffs, 1, 0);
    let signature = lattice.z_signature().index();
    let order = group.order();
    let expected = ExactScalar::sqrt(order as u64).mul(&ExactScalar::root_of_unity(&Rat::new(signature.into(), 8.into())));
    let holds = gauss_sum == expected;
    Milgram { gauss_sum, expected, signature, order, holds }
}

/// The Weil index `γ = e(z)` of a unitary lattice, returned as `z ∈ [0, 1)`:
/// the unique 8th root of unity for which `γ·|D|^{−1/2}·(e(−(μ,ν)))` equals
/// the orthogonal `ρ(S)` of the trace form.
pub fn unitary_weil_index(lattice: &Lattice) -> Result<Rat> {
    let tf = lattice.trace_form()?;
    let orth = WeilRep::build(&tf, 1, None)?;
    let target = orth.generator_matrix(&Generator::S)?;
    for j in 0..8 {
        let z = Rat::new(j.into(), 8.into());
        if check_weil_index_against(lattice, &z, &target)? {
            return Ok(z);
        }
    }
    Err(Error::NoConsistentIndex("no 8th root of unity matches the trace-form ρ(S)".into()))
}

/// Verifies a candidate Weil index `γ = e(z)` against the trace form.
pub fn check_weil_index(lattice: &Lattice, z: &Rat) -> Result<()> {
    let tf = lattice.trace_form()?;
    let target = WeilRep::build(&tf, 1, None)?.generator_matrix(&Generator::S)?;
    if check_weil_index_against(lattice, z, &target)? {
        Ok(())
    } else {
        Err(Error::NoConsistentIndex(format!("γ = e({}) does not reproduce the trace-form ρ(S)", crate::arith::fmt_rat(z))))
    }
}

fn check_weil_index_against(lattice: &Lattice, z: &Rat, target: &WeilMatrix) -> Result<bool> {
    if !(z * Rat::from_integer(8.into())).is_integer() {
        return Ok(false);
    }
    let rep = WeilRep::build(lattice, 1, Some(z.clone()))?;
    let m = rep.generator_matrix(&Generator::S)?;
    for j in 0..m.dim() {
        for i in 0..m.dim() {
            if m.entry(i, j) != target.entry(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Factorization of an `SL₂(ℤ)` matrix into `S` and powers of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Factorization {
    pub word: GroupWord,
    /// Sign `ε` with `φ(τ) = ε·√(cτ + d)` (principal branch) for the
    /// metaplectic element obtained by composing the letter lifts,
    /// evaluated at `τ = i`.
    pub lift_sign: i8,
}

/// Nearest-integer continued-fraction factorization `M = T^{q_1} S T^{q_2} S ⋯`.
pub fn factor_sl2(m: [[i64; 2]; 2]) -> Result<Sl2Factorization> {
    let [[a, b], [c, d]] = m;
    if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
        return Err(Error::NotUnimodular(format!("det {:?} ≠ 1", m)));
    }
    let (mut a, mut b, mut c, mut d) = (a as i128, b as i128, c as i128, d as i128);
    let mut letters = Vec::new();
    while c != 0 {
        // round(a/c)
        let q = (2 * a + c.signum() * c).div_euclid(2 * c);
        let q = if (a - q * c).abs() * 2 > c.abs() { q + 1 } else { q };
        if q != 0 {
            letters.push(Generator::t(q as i64));
        }
        let (a1, b1) = (a - q * c, b - q * d);
        letters.push(Generator::S);
        // S^{-1}·[[a1, b1], [c, d]] = [[c, d], [−a1, −b1]]
        (a, b, c, d) = (c, d, -a1, -b1);
    }
    // remaining ±[[1, b'], [0, 1]]
    if a == 1 {
        if b != 0 {
            letters.push(Generator::t(b as i64));
        }
    } else {
        // −T^{−b} with −I = S²
        letters.push(Generator::S);
        letters.push(Generator::S);
        if b != 0 {
            letters.push(Generator::t(-b as i64));
        }
        let _ = d;
    }
    let word = GroupWord::new(1, Case::Orthogonal, letters);
    let lift_sign = sl2_lift_sign(&word);
    Ok(Sl2Factorization { word, lift_sign })
}

/// Product of the `SL₂` letter matrices.
pub fn sl2_word_matrix(w: &GroupWord) -> [[i128; 2]; 2] {
    let mut acc = [[1i128, 0], [0, 1]];
    for g in &w.letters {
        let m = match g {
            Generator::S => [[0, -1], [1, 0]],
            Generator::N(b) => [[1, b[0][0][0] as i128], [0, 1]],
            Generator::M(a) => {
                let x = a[0][0][0] as i128;
                [[x, 0], [0, x]]
            }
        };
        acc = [
            [acc[0][0] * m[0][0] + acc[0][1] * m[1][0], acc[0][0] * m[0][1] + acc[0][1] * m[1][1]],
            [acc[1][0] * m[0][0] + acc[1][1] * m[1][0], acc[1][0] * m[0][1] + acc[1][1] * m[1][1]],
        ];
    }
    acc
}

fn csqrt(z: (f64, f64)) -> (f64, f64) {
    let r = (z.0 * z.0 + z.1 * z.1).sqrt();
    let re = ((r + z.0) / 2.0).sqrt();
    let im = ((r - z.0) / 2.0).sqrt().copysign(z.1);
    (re, im)
}

fn cmul(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// Sign of the composed letter lifts relative to the principal `√(cτ+d)` at `τ = i`.
fn sl2_lift_sign(w: &GroupWord) -> i8 {
    // compose right to left: φ_{gh}(τ) = φ_g(hτ)·φ_h(τ)
    let mut tau = (0.0f64, 1.0f64);
    let mut phi = (1.0f64, 0.0f64);
    for g in w.letters.iter().rev() {
        match g {
            Generator::S => {
                phi = cmul(phi, csqrt(tau));
                let n = tau.0 * tau.0 + tau.1 * tau.1;
                tau = (-tau.0 / n, tau.1 / n);
            }
            Generator::N(b) => tau.0 += b[0][0][0] as f64,
            Generator::M(a) => {
                // m(−1): φ = √det A = i
                if a[0][0][0] < 0 {
                    phi = cmul(phi, (0.0, 1.0));
                }
            }
        }
    }
    let m = sl2_word_matrix(w);
    let principal = csqrt((m[1][1] as f64, m[1][0] as f64));
    if (phi.0 - principal.0).abs() + (phi.1 - principal.1).abs() < 1e-6 * (1.0 + principal.0.abs() + principal.1.abs()) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::lattice::standard;

    fn e(a: i64, b: i64) -> ExactScalar {
        ExactScalar::root_of_unity(&rat(a, b))
    }

    #[test]
    fn a1_t_and_s() {
        let a1 = standard::a(1);
        let t = weil_generator_matrix(&a1, 1, &Generator::t(1)).unwrap();
        assert_eq!(t.entry(0, 0), ExactScalar::one());
        assert_eq!(t.entry(1, 1), e(1, 4));
        assert!(t.entry(0, 1).is_zero());
        let s = weil_generator_matrix(&a1, 1, &Generator::S).unwrap();
        let c = e(-1, 8).mul(&ExactScalar::inv_sqrt(2));
        assert_eq!(s.entry(0, 0), c);
        assert_eq!(s.entry(1, 0), c);
        assert_eq!(s.entry(1, 1), c.neg());
        let id = weil_generator_matrix(&a1, 1, &Generator::t(0)).unwrap();
        assert_eq!(id.entry(1, 1), ExactScalar::one());
    }

    #[test]
    fn s_fourth_power_scalar_and_relation() {
        for l in [standard::a(1), standard::a(2), standard::diag(&[2, -4]), standard::d(4)] {
            let rep = WeilRep::new(&l, 1).unwrap();
            let s4 = GroupWord::sl2(Case::Orthogonal, "SSSS");
            let c = rep.word_scalar(&s4).unwrap().expect("ρ(S)^4 is scalar");
            assert!(c.as_root_of_unity().is_some());
            assert!(rep
                .words_equal(&GroupWord::sl2(Case::Orthogonal, "STSTST"), &GroupWord::sl2(Case::Orthogonal, "SS"))
                .unwrap());
            assert!(rep.words_equal(&GroupWord::sl2(Case::Orthogonal, "SS"), &GroupWord::sl2(Case::Orthogonal, "Z")).unwrap());
            assert!(!rep.words_equal(&GroupWord::sl2(Case::Orthogonal, "ST"), &GroupWord::sl2(Case::Orthogonal, "TS")).unwrap()
                || rep.group().order() == 1);
        }
    }

    #[test]
    fn genus_two_s_matches_dense_kernel() {
        let l = standard::a(2);
        let rep = WeilRep::new(&l, 2).unwrap();
        let s = rep.generator_matrix(&Generator::S).unwrap();
        let g = rep.group();
        let pre = e(-2 * 2, 8).scale(&rat(1, 3));
        for i in 0..rep.dim() {
            for j in 0..rep.dim() {
                let (mu, nu) = (rep.tuple(j), rep.tuple(i));
                let z = -(g.b(mu[0], nu[0]) + g.b(mu[1], nu[1]));
                assert_eq!(s.entry(i, j), pre.mul(&ExactScalar::root_of_unity(&z)));
            }
        }
        assert!(rep.is_unitary(&s).unwrap());
    }

    #[test]
    fn genus_two_relations() {
        let l = standard::a(1);
        let rep = WeilRep::new(&l, 2).unwrap();
        let c = Case::Orthogonal;
        let s = Generator::S;
        let t = Generator::n_int(&[vec![1, 0], vec![0, 1]]);
        let st3 = GroupWord::new(2, c, (0..3).flat_map(|_| [s.clone(), t.clone()]).collect());
        let s2 = GroupWord::new(2, c, vec![s.clone(), s.clone()]);
        assert!(rep.words_equal(&st3, &s2).unwrap());
        let b1 = Generator::n_int(&[vec![1, 2], vec![2, -1]]);
        let b2 = Generator::n_int(&[vec![0, 1], vec![1, 3]]);
        let b12 = Generator::n_int(&[vec![1, 3], vec![3, 2]]);
        assert!(rep.words_equal(&GroupWord::new(2, c, vec![b1, b2]), &GroupWord::new(2, c, vec![b12])).unwrap());
        let a1 = vec![vec![1, 1], vec![0, 1]];
        let a2 = vec![vec![2, 1], vec![1, 1]];
        let a12 = vec![vec![3, 2], vec![1, 1]];
        assert!(rep
            .words_equal(
                &GroupWord::new(2, c, vec![Generator::m_int(&a1), Generator::m_int(&a2)]),
                &GroupWord::new(2, c, vec![Generator::m_int(&a12)])
            )
            .unwrap());
    }

    #[test]
    fn milgram_small() {
        let m = milgram(&standard::a(1));
        assert!(m.holds);
        assert_eq!(m.gauss_sum, ExactScalar::from_cyclic_ints(4, &[1, 1]));
        for l in [standard::a(2), standard::e8(), standard::hyperbolic(), standard::diag(&[2, -2])] {
            assert!(milgram(&l).holds);
        }
    }

    #[test]
    fn unitary_index_and_restriction() {
        let l = standard::ok_scaled(-1, 1);
        let z = unitary_weil_index(&l).unwrap();
        // trace form [[2,0],[0,2]] has signature 2
        assert_eq!(z, rat(6, 8));
        assert!(check_weil_index(&l, &z).is_ok());
        let bad = &z + rat(1, 8);
        assert!(matches!(check_weil_index(&l, &bad), Err(Error::NoConsistentIndex(_))));
        let u = WeilRep::new(&l, 1).unwrap();
        let o = WeilRep::new(&l.trace_form().unwrap(), 1).unwrap();
        for w in ["STS", "SSTt", "Z", "STSTST"] {
            let mu = u.word_matrix(&GroupWord::sl2(Case::Unitary, w)).unwrap();
            let mo = o.word_matrix(&GroupWord::sl2(Case::Orthogonal, w)).unwrap();
            for i in 0..mu.dim() {
                for j in 0..mu.dim() {
                    assert_eq!(mu.entry(i, j), mo.entry(i, j), "word {w}");
                }
            }
        }
        // scalar unit i acts by i^{−1} on O_{ℚ(i)}
        let mi = u.generator_matrix(&Generator::M(vec![vec![[0, 1]]])).unwrap();
        assert!(u.is_unitary(&mi).unwrap());
    }

    #[test]
    fn factor_sl2_examples() {
        assert!(factor_sl2([[1, 0], [0, 1]]).unwrap().word.is_empty());
        assert_eq!(factor_sl2([[1, 1], [0, 1]]).unwrap().word.letters, vec![Generator::t(1)]);
        assert_eq!(factor_sl2([[0, -1], [1, 0]]).unwrap().word.letters, vec![Generator::S]);
        assert!(matches!(factor_sl2([[2, 0], [0, 1]]), Err(Error::NotUnimodular(_))));
        for m in [[[2, 3], [1, 2]], [[-1, 0], [0, -1]], [[5, -7], [-7, 10]], [[-3, 1], [-7, 2]]] {
            let f = factor_sl2(m).unwrap();
            let p = sl2_word_matrix(&f.word);
            assert_eq!(p, [[m[0][0] as i128, m[0][1] as i128], [m[1][0] as i128, m[1][1] as i128]]);
        }
    }

    #[test]
    fn word_doc_round_trip() {
        let w = GroupWord::new(
            2,
            Case::Orthogonal,
            vec![Generator::S, Generator::n_int(&[vec![1, 0], vec![0, 2]]), Generator::m_int(&[vec![0, 1], vec![1, 0]])],
        );
        let doc = w.to_doc();
        assert_eq!(GroupWord::parse(&doc, Case::Orthogonal, 2).unwrap(), w);
        let bad = GroupWord::new(2, Case::Orthogonal, vec![Generator::n_int(&[vec![1, 1], vec![0, 1]])]);
        assert!(matches!(bad.validate(None), Err(Error::InvalidGenerator(_))));
        let wrong = GroupWord::new(2, Case::Orthogonal, vec![Generator::n_int(&[vec![1]])]);
        assert!(matches!(wrong.validate(None), Err(Error::SizeMismatch(_))));
        let _ = int(0);
    }
}
