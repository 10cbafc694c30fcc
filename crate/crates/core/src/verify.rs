//! The property suites behind `weilform verify`.
//!
//! Every suite draws from a ChaCha stream seeded by [`VerifyConfig::seed`]
//! and reports in a fixed order, so the rendered report depends only on
//! the configuration and never on scheduling or thread count.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{frac, int, rat, Rat};
use crate::cycles::{
    brute_force_reps, enumerate_reps, intersection_matrix, rep_number, theta_expansion, witt_index, IntersectionMatrix,
    TupleVector, WittStatus,
};
use crate::cyclotomic::ExactScalar;
use crate::eisenstein::{hurwitz, hurwitz_dirichlet, kronecker_hurwitz, reduced_forms, zagier_coeffs};
use crate::error::Result;
use crate::field::KElem;
use crate::interval::CBall;
use crate::lattice::{standard, Case, Lattice};
use crate::matrix::QMatrix;
use crate::modform::{evaluate, slash_check, CoeffKey, HalfSpacePoint, QExpansion, TailModel};
use crate::weil::{factor_sl2, milgram, sl2_word_matrix, unitary_weil_index, Generator, GroupWord, WeilRep};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Working precision (bits) of the numerical suites.
    pub precision: u32,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20240601, precision: 96, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Informational lines (counts, chosen truncations, …).
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> SuiteOutcome {
        SuiteOutcome { name, checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {} ({e})", what(), e.name()));
                None
            }
        }
    }

    fn absorb(&mut self, o: SuiteOutcome) {
        self.checks += o.checks;
        self.failures.extend(o.failures);
        self.notes.extend(o.notes);
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suites: Vec<SuiteOutcome>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let verdict = if s.pass() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {} ({} checks, {} failures)", s.name, s.checks, s.failures.len());
            for n in &s.notes {
                let _ = writeln!(out, "  note: {n}");
            }
            for f in s.failures.iter().take(20) {
                let _ = writeln!(out, "  fail: {f}");
            }
            if s.failures.len() > 20 {
                let _ = writeln!(out, "  fail: … {} more", s.failures.len() - 20);
            }
        }
        let _ = writeln!(out, "overall {}", if self.all_pass() { "PASS" } else { "FAIL" });
        out
    }
}

/// Suite names in report order.
pub const SUITES: [&str; 13] = [
    "lattice",
    "exact-field",
    "milgram",
    "weil-relations",
    "factor-sl2",
    "case2-restriction",
    "enumeration",
    "cycles-invariants",
    "witt",
    "theta-modularity",
    "evaluation",
    "hurwitz",
    "serialization",
];

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteOutcome> {
    Some(match name {
        "lattice" => lattice_suite(cfg),
        "exact-field" => exact_field_suite(cfg),
        "milgram" => milgram_suite(cfg),
        "weil-relations" => weil_relations_suite(cfg),
        "factor-sl2" => factor_sl2_suite(cfg),
        "case2-restriction" => case2_restriction_suite(cfg),
        "enumeration" => enumeration_suite(cfg),
        "cycles-invariants" => cycles_invariants_suite(cfg),
        "witt" => witt_suite(cfg),
        "theta-modularity" => theta_modularity_suite(cfg),
        "evaluation" => evaluation_suite(cfg),
        "hurwitz" => hurwitz_suite(cfg),
        "serialization" => serialization_suite(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> VerifyReport {
    VerifyReport { suites: SUITES.iter().map(|s| run_suite(s, cfg).expect("known suite")).collect() }
}

fn rng(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

// ---------------------------------------------------------------------------
// corpora

/// Random even nondegenerate lattice of rank `m`: diagonal entries in
/// `±{2, 4}` (positive if `definite`), off-diagonal entries in `[−2, 2]`.
pub fn random_even_lattice<R: Rng>(r: &mut R, m: usize, definite: bool, max_disc: u64) -> Lattice {
    loop {
        let mut rows = vec![vec![0i64; m]; m];
        for i in 0..m {
            let d = 2 * r.gen_range(1..=2);
            rows[i][i] = if definite || r.gen_bool(0.5) { d } else { -d };
            for j in 0..i {
                let v = r.gen_range(-2..=2);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let g = QMatrix::from_i64(&rows);
        let det = g.det();
        if det.is_zero() || det.abs() > int(max_disc as i64) {
            continue;
        }
        if definite && g.inertia().0 != m {
            continue;
        }
        if let Ok(l) = Lattice::orthogonal(g) {
            return l;
        }
    }
}

/// Named corpus: the standard lattices plus `n_random` random ones of rank ≤ 4.
pub fn corpus(cfg: &VerifyConfig, n_random: usize) -> Vec<(String, Lattice)> {
    let a1 = standard::a(1);
    let u = standard::hyperbolic();
    let mut out = vec![
        ("A1".to_string(), a1.clone()),
        ("A2".into(), standard::a(2)),
        ("A3".into(), standard::a(3)),
        ("D4".into(), standard::d(4)),
        ("E8".into(), standard::e8()),
        ("U".into(), u.clone()),
        ("U+A1".into(), standard::sum(&u, &a1)),
        ("A1(-1)+A1".into(), standard::sum(&standard::rescale(&a1, -1), &a1)),
    ];
    let mut r = rng(cfg, 1);
    for k in 0..n_random {
        let m = 1 + k % 4;
        let l = random_even_lattice(&mut r, m, false, 64);
        out.push((format!("rand{k}[{}]", gram_label(&l)), l));
    }
    out
}

/// Positive definite corpus of rank ≤ 4 for enumeration.
pub fn definite_corpus(cfg: &VerifyConfig, n_random: usize) -> Vec<(String, Lattice)> {
    let mut out = vec![
        ("A1".to_string(), standard::a(1)),
        ("A2".into(), standard::a(2)),
        ("A3".into(), standard::a(3)),
        ("D4".into(), standard::d(4)),
        ("A1+A1".into(), standard::diag(&[2, 2])),
        ("diag(2,4)".into(), standard::diag(&[2, 4])),
    ];
    let mut r = rng(cfg, 2);
    for k in 0..n_random {
        let m = 1 + k % 4;
        let l = random_even_lattice(&mut r, m, true, 32);
        out.push((format!("pd{k}[{}]", gram_label(&l)), l));
    }
    out
}

pub fn hermitian_corpus() -> Vec<(String, Lattice)> {
    vec![
        ("O(Q(i))".to_string(), standard::ok_scaled(-4, 1)),
        ("O(Q(i))<2>".into(), standard::ok_scaled(-4, 2)),
        ("O(Q(sqrt-3))".into(), standard::ok_scaled(-3, 1)),
        ("O(Q(sqrt-3))^2".into(), standard::hermitian_diag(-3, &[1, 1])),
        ("O(Q(sqrt-7))".into(), standard::ok_scaled(-7, 1)),
        ("O(Q(i))+O(Q(i))<-1>".into(), standard::hermitian_diag(-4, &[1, -1])),
    ]
}

fn gram_label(l: &Lattice) -> String {
    let g = l.gram();
    let rows: Vec<String> = (0..g.rows())
        .map(|i| (0..g.cols()).map(|j| g[(i, j)].to_string()).collect::<Vec<_>>().join(","))
        .collect();
    rows.join(";")
}

fn random_vec<R: Rng>(r: &mut R, m: usize, b: i64) -> Vec<Rat> {
    (0..m).map(|_| int(r.gen_range(-b..=b))).collect()
}

/// Random `A ∈ GL_r(ℤ)` with entries bounded by `bound`.
fn random_gl<R: Rng>(r: &mut R, n: usize, bound: i64, det_one: bool) -> Vec<Vec<i64>> {
    loop {
        let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..r.gen_range(0..6) {
            if n == 1 {
                break;
            }
            let i = r.gen_range(0..n);
            let j = (i + r.gen_range(1..n)) % n;
            let c = r.gen_range(-1..=1);
            for row in a.iter_mut() {
                row[j] += c * row[i];
            }
        }
        if !det_one && r.gen_bool(0.5) {
            for row in a.iter_mut() {
                row[0] = -row[0];
            }
        }
        if r.gen_bool(0.3) && n > 1 {
            for row in a.iter_mut() {
                row.swap(0, 1);
                if det_one {
                    row[0] = -row[0];
                }
            }
        }
        if a.iter().flatten().all(|x| x.abs() <= bound) {
            return a;
        }
    }
}

fn random_sym<R: Rng>(r: &mut R, n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = r.gen_range(-b..=b);
            s[i][j] = v;
            s[j][i] = v;
        }
    }
    s
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn det_i64(a: &[Vec<i64>]) -> i64 {
    let q = QMatrix::from_i64(a).det();
    q.to_integer().try_into().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// lattice-core

pub fn lattice_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("lattice");
    let mut r = rng(cfg, 10);
    let mut lats = corpus(cfg, 10);
    lats.extend(hermitian_corpus());
    for (name, l) in &lats {
        let g = l.gram();
        let m = g.rows();
        let grp = l.discriminant_group();
        // duality
        s.check(g.mul(&l.dual_transition()) == QMatrix::identity(m), || format!("{name}: G·G⁻¹ ≠ I"));
        // |L*/L| = |det|
        s.check(int(grp.order() as i64) == g.det().abs(), || format!("{name}: |L*/L| ≠ |det G|"));
        // well-definedness of q on cosets
        for _ in 0..1000 / lats.len() + 1 {
            let mu = r.gen_range(0..grp.order());
            let v = random_vec(&mut r, m, 3);
            let x: Vec<Rat> = grp.lift(mu).iter().zip(&v).map(|(a, b)| a + b).collect();
            s.check(grp.reduce(&x) == mu && frac(&l.q(&x)) == grp.q(mu), || format!("{name}: q not well defined at class {mu}"));
        }
        // trace form carries the same group with q
        if l.case() == Case::Unitary {
            let tf = l.trace_form().unwrap();
            let tg = tf.discriminant_group();
            s.check(tg.order() == grp.order(), || format!("{name}: trace-form group order differs"));
            for mu in 0..grp.order() {
                let nu = tg.reduce(&grp.lift(mu));
                s.check(tg.q(nu) == grp.q(mu), || format!("{name}: trace form q differs at {mu}"));
            }
        } else {
            // evenness is stable under unimodular base change
            let u = random_gl(&mut r, m, 3, false);
            let uq = QMatrix::from_i64(&u);
            let ug = uq.mul(g).mul(&uq.transpose());
            s.check(Lattice::orthogonal(ug).is_ok(), || format!("{name}: U·G·Uᵗ not even"));
        }
    }
    // odd forms are rejected
    s.check(Lattice::from_i64(&[vec![1]]).is_err(), || "odd form accepted".into());
    s
}

// ---------------------------------------------------------------------------
// exact-field

pub fn exact_field_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("exact-field");
    let mut r = rng(cfg, 11);
    let rand_rat = |r: &mut ChaCha8Rng| rat(r.gen_range(-50..=50), r.gen_range(1..=24));
    for _ in 0..1000 {
        let (z1, z2) = (rand_rat(&mut r), rand_rat(&mut r));
        let (a, b) = (ExactScalar::root_of_unity(&z1), ExactScalar::root_of_unity(&z2));
        s.check(a.mul(&b) == ExactScalar::root_of_unity(&(&z1 + &z2)), || format!("e({z1})e({z2}) ≠ e(sum)"));
        s.check(a.conj() == ExactScalar::root_of_unity(&-&z1), || format!("conj e({z1}) ≠ e(−z)"));
    }
    let rand_scalar = |r: &mut ChaCha8Rng| {
        let n = [1u64, 3, 4, 5, 8, 12, 24][r.gen_range(0..7)];
        let c: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        let x = ExactScalar::from_cyclic_ints(n, &c);
        if r.gen_bool(0.4) {
            x.mul(&ExactScalar::inv_sqrt([2u64, 3, 5, 7][r.gen_range(0..4)]))
        } else {
            x
        }
    };
    for _ in 0..200 {
        let (a, b) = (rand_scalar(&mut r), rand_scalar(&mut r));
        let p = 80;
        let prod = a.embed(p).mul(&b.embed(p));
        let ab = a.mul(&b).embed(p);
        s.check(prod.sub(&ab).contains_zero(), || format!("embed(ab) misses embed(a)·embed(b) for {a}, {b}"));
        // canonical equality agrees with separation of enclosures
        let d = a.sub(&b);
        if a == b {
            s.check(d.is_zero() && d.embed(128).contains_zero(), || format!("{a} = {b} but difference not enclosing 0"));
        } else {
            let sep = [64u32, 128, 256, 512].iter().any(|&p| !d.embed(p).contains_zero());
            s.check(sep, || format!("{a} ≠ {b} but enclosures never separate"));
        }
        let c = a.add(&b).sub(&b);
        s.check(c == a, || format!("(a+b)−b ≠ a for {a}"));
    }
    s
}

// ---------------------------------------------------------------------------
// weil-rep

pub fn milgram_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("milgram");
    let lats = corpus(cfg, 12);
    let results: Vec<(String, bool)> = lats.par_iter().map(|(n, l)| (n.clone(), milgram(l).holds)).collect();
    for (n, ok) in results {
        s.check(ok, || format!("{n}: Gauss sum ≠ √|D|·e(sig/8)"));
    }
    s.notes.push(format!("{} lattices", lats.len()));
    s
}

fn same_matrix(rep: &WeilRep, w1: &GroupWord, w2: &GroupWord) -> Result<bool> {
    rep.words_equal(w1, w2)
}

pub fn weil_relations_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("weil-relations");
    let mut lats: Vec<(String, Lattice)> =
        corpus(cfg, 12).into_iter().filter(|(_, l)| l.discriminant_group().order() <= 25).collect();
    let mut r = rng(cfg, 12);
    lats.push(("U(5)".into(), Lattice::from_i64(&[vec![0, 5], vec![5, 0]]).unwrap()));
    lats.push(("A2+A2".into(), standard::sum(&standard::a(2), &standard::a(2))));
    let seeds: Vec<u64> = lats.iter().map(|_| r.gen()).collect();
    let o = Case::Orthogonal;
    let rows: Vec<SuiteOutcome> = lats
        .par_iter()
        .zip(seeds)
        .map(|((name, l), seed)| {
            let mut s = SuiteOutcome::new("weil-relations");
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let sig = l.z_signature().index();
            for genus in [1usize, 2] {
                if genus == 2 && l.discriminant_group().order() > 25 {
                    continue;
                }
                let Some(rep) = s.result(WeilRep::new(l, genus), || format!("{name}: ρ")) else { continue };
                let nid = |k: i64| Generator::n_int(&(0..genus).map(|i| (0..genus).map(|j| if i == j { k } else { 0 }).collect()).collect::<Vec<_>>());
                let st3 = GroupWord::new(genus, o, (0..3).flat_map(|_| [Generator::S, nid(1)]).collect());
                let s2 = GroupWord::new(genus, o, vec![Generator::S, Generator::S]);
                let ok = same_matrix(&rep, &st3, &s2);
                s.check(matches!(ok, Ok(true)), || format!("{name} r={genus}: ρ((ST)³) ≠ ρ(S²)"));
                let s4 = GroupWord::new(genus, o, vec![Generator::S; 4]);
                let sc = rep.word_scalar(&s4);
                s.check(
                    matches!(&sc, Ok(Some(c)) if c.as_root_of_unity().is_some_and(|z| (z * int(8)).is_integer())),
                    || format!("{name} r={genus}: ρ(S)⁴ is not an 8th-root scalar"),
                );
                // n(B) additivity
                for _ in 0..2 {
                    let (b1, b2) = (random_sym(&mut r, genus, 3), random_sym(&mut r, genus, 3));
                    let b12: Vec<Vec<i64>> = (0..genus).map(|i| (0..genus).map(|j| b1[i][j] + b2[i][j]).collect()).collect();
                    let lhs = GroupWord::new(genus, o, vec![Generator::n_int(&b1), Generator::n_int(&b2)]);
                    let rhs = GroupWord::new(genus, o, vec![Generator::n_int(&b12)]);
                    s.check(matches!(rep.words_equal(&lhs, &rhs), Ok(true)), || format!("{name} r={genus}: n(B)n(B′) ≠ n(B+B′)"));
                }
                // m(A) multiplicativity, det +1, and the det −1 branch rule
                for det_one in [true, false] {
                    let a1 = random_gl(&mut r, genus, 3, det_one);
                    let a2 = random_gl(&mut r, genus, 3, det_one);
                    let a12 = mat_mul(&a1, &a2);
                    let lhs = GroupWord::new(genus, o, vec![Generator::m_int(&a1), Generator::m_int(&a2)]);
                    let rhs = GroupWord::new(genus, o, vec![Generator::m_int(&a12)]);
                    let (d1, d2) = (det_i64(&a1), det_i64(&a2));
                    // √(det)^{−sig} per factor with √−1 = i: both det −1 gives (−1)^{sig}
                    let c = if d1 == -1 && d2 == -1 && sig.rem_euclid(2) == 1 { -1 } else { 1 };
                    let ok = match (rep.word_matrix(&lhs), rep.word_matrix(&rhs)) {
                        (Ok(m1), Ok(m2)) => matches!(rep.matrices_equal(&m1, &m2, c == -1), Ok(true)),
                        _ => false,
                    };
                    s.check(ok, || format!("{name} r={genus}: m(A)m(A′) vs m(AA′), dets {d1},{d2}"));
                }
                // unitarity of every generator
                let gens = vec![Generator::S, Generator::n_int(&random_sym(&mut r, genus, 2)), Generator::m_int(&random_gl(&mut r, genus, 3, false))];
                for g in gens {
                    let ok = rep.generator_matrix(&g).and_then(|m| rep.is_unitary(&m));
                    s.check(matches!(ok, Ok(true)), || format!("{name} r={genus}: ρ({}) not unitary", g.kind()));
                }
            }
            s
        })
        .collect();
    for o in rows {
        s.absorb(o);
    }
    // unitarity up to |D| ≤ 100 in genus one
    let mut big = rng(cfg, 13);
    for k in 0..6 {
        let l = random_even_lattice(&mut big, 2 + k % 3, false, 100);
        let name = format!("u{k}[{}]", gram_label(&l));
        if let Some(rep) = s.result(WeilRep::new(&l, 1), || format!("{name}: ρ")) {
            for g in [Generator::S, Generator::t(1), Generator::M(vec![vec![[-1, 0]]])] {
                let ok = rep.generator_matrix(&g).and_then(|m| rep.is_unitary(&m));
                s.check(matches!(ok, Ok(true)), || format!("{name}: ρ({}) not unitary", g.kind()));
            }
        }
    }
    s.notes.push(format!("{} lattices with |D| ≤ 25", lats.len()));
    s
}

pub fn factor_sl2_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("factor-sl2");
    let mut r = rng(cfg, 14);
    let mut done = 0;
    while done < 1000 {
        let a: i64 = r.gen_range(-1_000_000..=1_000_000);
        let c: i64 = r.gen_range(-1_000_000..=1_000_000);
        let g = a.extended_gcd(&c);
        if g.gcd != 1 {
            continue;
        }
        // a·x + c·y = 1 ⇒ [[a, −y], [c, x]]
        let (b, d) = (-g.y, g.x);
        if b.abs() > 1_000_000 || d.abs() > 1_000_000 {
            continue;
        }
        done += 1;
        let m = [[a, b], [c, d]];
        let ok = factor_sl2(m).map(|f| sl2_word_matrix(&f.word) == [[a as i128, b as i128], [c as i128, d as i128]]);
        s.check(matches!(ok, Ok(true)), || format!("factor_sl2 fails on {m:?}"));
    }
    s
}

fn sl2_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in alphabet {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn case2_restriction_suite(_cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("case2-restriction");
    let mut words = sl2_words(&['S', 'T'], 6);
    words.extend(sl2_words(&['S', 'T', 't', 'Z'], 3));
    words.sort();
    words.dedup();
    let lats = hermitian_corpus();
    let rows: Vec<SuiteOutcome> = lats
        .par_iter()
        .map(|(name, l)| {
            let mut s = SuiteOutcome::new("case2-restriction");
            let Some(z) = s.result(unitary_weil_index(l), || format!("{name}: γ")) else { return s };
            s.notes.push(format!("{name}: γ = e({})", crate::arith::fmt_rat(&z)));
            let Some(u) = s.result(WeilRep::with_gamma(l, 1, &z), || format!("{name}: unitary ρ")) else { return s };
            let tf = l.trace_form().unwrap();
            let Some(o) = s.result(WeilRep::new(&tf, 1), || format!("{name}: trace-form ρ")) else { return s };
            for w in &words {
                let mu = u.word_matrix(&GroupWord::sl2(Case::Unitary, w));
                let mo = o.word_matrix(&GroupWord::sl2(Case::Orthogonal, w));
                let ok = match (mu, mo) {
                    (Ok(a), Ok(b)) => (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.entry(i, j) == b.entry(i, j))),
                    _ => false,
                };
                s.check(ok, || format!("{name}: word {w} differs from the trace form"));
            }
            s
        })
        .collect();
    for o in rows {
        s.absorb(o);
    }
    s.notes.push(format!("{} words per lattice", words.len()));
    s
}

// ---------------------------------------------------------------------------
// cycles

/// Vectors of `½·x·x = 1, 2` in the coordinate model `ℤ⁸ ∪ (ℤ+½)⁸` of `E₈`
/// (even coordinate sum), scanning `|x_i| ≤ 2`.
pub fn e8_coordinate_counts() -> (u64, u64) {
    let (mut n1, mut n2) = (0u64, 0u64);
    // doubled coordinates: all even or all odd, |2x_i| ≤ 4, Σ x_i even
    for half in [false, true] {
        let vals: Vec<i64> = if half { vec![-3, -1, 1, 3] } else { vec![-4, -2, 0, 2, 4] };
        let k = vals.len();
        for code in 0..k.pow(8) {
            let mut c = code;
            let (mut sum, mut norm) = (0i64, 0i64);
            for _ in 0..8 {
                let v = vals[c % k];
                c /= k;
                sum += v;
                norm += v * v;
            }
            // Σ x_i = sum/2 must be even; ½·Σ x_i² = norm/8
            if sum % 4 != 0 {
                continue;
            }
            match norm {
                8 => n1 += 1,
                16 => n2 += 1,
                _ => {}
            }
        }
    }
    (n1, n2)
}

pub fn enumeration_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("enumeration");
    let lats = definite_corpus(cfg, 8);
    let seeds: Vec<u64> = {
        let mut r = rng(cfg, 15);
        lats.iter().map(|_| r.gen()).collect()
    };
    let rows: Vec<SuiteOutcome> = lats
        .par_iter()
        .zip(seeds)
        .map(|((name, l), seed)| {
            let mut s = SuiteOutcome::new("enumeration");
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let grp = l.discriminant_group();
            let mut shells: BTreeMap<(usize, Rat), Vec<Vec<Rat>>> = BTreeMap::new();
            // genus one: every T ≤ 6 in q(μ) + ℤ
            for mu in 0..grp.order() {
                let mut t = grp.q(mu);
                while t <= int(6) {
                    let tm = IntersectionMatrix::scalar(t.clone());
                    let a = enumerate_reps(l, &tm, &[mu]);
                    let b = brute_force_reps(l, &tm, &[mu]);
                    match (a, b) {
                        (Ok(a), Ok(b)) => {
                            s.check(a == b, || format!("{name}: T={t}, μ={mu}: {} vs box scan {}", a.len(), b.len()));
                            shells.insert((mu, t.clone()), b.into_iter().map(|x| x.x[0].clone()).collect());
                        }
                        (a, b) => s.check(false, || format!("{name}: T={t}, μ={mu}: {:?} / {:?}", a.err(), b.err())),
                    }
                    t += int(1);
                }
            }
            // genus two: T from pairs of shell vectors, tr T ≤ 6
            let keys: Vec<&(usize, Rat)> = shells.keys().filter(|(_, t)| !t.is_zero()).collect();
            for _ in 0..6 {
                if keys.is_empty() {
                    break;
                }
                let k1 = keys[r.gen_range(0..keys.len())];
                let k2 = keys[r.gen_range(0..keys.len())];
                if &k1.1 + &k2.1 > int(6) {
                    continue;
                }
                let (v1, v2) = (&shells[k1], &shells[k2]);
                if v1.is_empty() || v2.is_empty() {
                    continue;
                }
                let x = TupleVector::new(vec![v1[r.gen_range(0..v1.len())].clone(), v2[r.gen_range(0..v2.len())].clone()]);
                let t = intersection_matrix(l, &x);
                let mu = [k1.0, k2.0];
                match (enumerate_reps(l, &t, &mu), brute_force_reps(l, &t, &mu)) {
                    (Ok(a), Ok(b)) => s.check(a == b && !a.is_empty(), || format!("{name}: genus-2 T={:?}: {} vs {}", t.rows(), a.len(), b.len())),
                    _ => s.check(false, || format!("{name}: genus-2 enumeration error")),
                }
                // a non-represented off-diagonal perturbation gives empty sets on both sides
                let mut rows = t.rows();
                rows[0][1] = rows[0][1].add(&KElem::from_rat(rat(1, 7)));
                rows[1][0] = rows[1][0].add(&KElem::from_rat(rat(1, 7)));
                let tp = IntersectionMatrix::new(rows);
                if let (Ok(a), Ok(b)) = (enumerate_reps(l, &tp, &mu), brute_force_reps(l, &tp, &mu)) {
                    s.check(a.is_empty() && b.is_empty(), || format!("{name}: perturbed T represented"));
                }
            }
            s
        })
        .collect();
    for o in rows {
        s.absorb(o);
    }
    let e8 = standard::e8();
    let (o1, o2) = e8_coordinate_counts();
    for (q, oracle) in [(1, o1), (2, o2)] {
        let n = rep_number(&e8, &IntersectionMatrix::scalar(int(q)), &[0]).unwrap_or(0);
        s.check(n == oracle, || format!("E8: Q={q} gives {n}, coordinate model {oracle}"));
        s.notes.push(format!("E8 Q={q}: {n} (coordinate model {oracle})"));
    }
    s.notes.push(format!("{} definite lattices", lats.len()));
    s
}

fn tuple_class_action(grp: &crate::discriminant::DiscriminantGroup, mu: &[usize], a: &[Vec<i64>]) -> Vec<usize> {
    let r = mu.len();
    (0..r)
        .map(|j| {
            let mut acc = 0usize;
            for i in 0..r {
                acc = grp.add(acc, grp.scale(mu[i], a[i][j]));
            }
            acc
        })
        .collect()
}

pub fn cycles_invariants_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("cycles-invariants");
    let lats = definite_corpus(cfg, 8);
    let mut r = rng(cfg, 16);
    // instances drawn up front so the parallel part is order independent
    struct Inst {
        li: usize,
        x: TupleVector,
        a: Vec<Vec<i64>>,
        bs: Vec<Vec<Vec<i64>>>,
    }
    let mut insts = Vec::new();
    while insts.len() < 200 {
        let li = r.gen_range(0..lats.len());
        let l = &lats[li].1;
        let grp = l.discriminant_group();
        let genus = r.gen_range(1..=2usize);
        let x: Vec<Vec<Rat>> = (0..genus)
            .map(|_| {
                let mu = r.gen_range(0..grp.order());
                grp.lift(mu).iter().zip(random_vec(&mut r, l.rank(), 1)).map(|(a, b)| a + b).collect()
            })
            .collect();
        let x = TupleVector::new(x);
        if intersection_matrix(l, &x).trace() > int(8) {
            continue;
        }
        let a = random_gl(&mut r, genus, 3, false);
        let bs = (0..3).map(|_| random_sym(&mut r, genus, 3)).collect();
        insts.push(Inst { li, x, a, bs });
    }
    let rows: Vec<SuiteOutcome> = insts
        .par_iter()
        .enumerate()
        .map(|(k, inst)| {
            let mut s = SuiteOutcome::new("cycles-invariants");
            let (name, l) = (&lats[inst.li].0, &lats[inst.li].1);
            let grp = l.discriminant_group();
            let t = intersection_matrix(l, &inst.x);
            let mu: Vec<usize> = inst.x.x.iter().map(|v| grp.reduce(v)).collect();
            let ak: Vec<Vec<KElem>> = inst.a.iter().map(|row| row.iter().map(|&v| KElem::from_rat(int(v))).collect()).collect();
            let t2 = t.transform(&ak, None);
            let mu2 = tuple_class_action(&grp, &mu, &inst.a);
            let (n1, n2) = (rep_number(l, &t, &mu), rep_number(l, &t2, &mu2));
            s.check(matches!((&n1, &n2), (Ok(a), Ok(b)) if a == b && *a > 0), || {
                format!("#{k} {name}: r(T,μ) = {n1:?} but r(AᵗTA, μA) = {n2:?}")
            });
            // n(B) congruence on every enumerated tuple
            if let Ok(xs) = enumerate_reps(l, &t, &mu) {
                for b in &inst.bs {
                    let n = b.len();
                    let mut expect = Rat::zero();
                    for i in 0..n {
                        expect += grp.q(mu[i]) * int(b[i][i]);
                        for j in i + 1..n {
                            expect += grp.b(mu[i], mu[j]) * int(b[i][j]);
                        }
                    }
                    let ok = xs.iter().all(|x| {
                        let q = intersection_matrix(l, x);
                        let mut tr = Rat::zero();
                        for i in 0..n {
                            for j in 0..n {
                                tr += &q.entry(i, j).a * int(b[j][i]);
                            }
                        }
                        (tr - &expect).is_integer()
                    });
                    s.check(ok, || format!("#{k} {name}: tr(Q(x)B) ≢ tr(Q(μ)B)"));
                }
            }
            s
        })
        .collect();
    for o in rows {
        s.absorb(o);
    }
    s.notes.push("200 random instances".into());
    s
}

pub fn witt_forms(cfg: &VerifyConfig) -> Vec<(String, QMatrix, &'static str)> {
    let mut r = rng(cfg, 17);
    let mut out = Vec::new();
    for k in 0..10 {
        let l = random_even_lattice(&mut r, 1 + k % 6, true, 1 << 20);
        let g = if k % 2 == 0 { l.gram().clone() } else { l.gram().scale(&int(-1)) };
        out.push((format!("definite{k}"), g, "definite"));
    }
    for k in 0..10 {
        let l = random_even_lattice(&mut r, 1 + k % 4, false, 1 << 20);
        let g = standard::hyperbolic().gram().direct_sum(l.gram());
        out.push((format!("hyp{k}"), g, "hyperbolic"));
    }
    for k in 0..20 {
        let m = 5 + k % 2;
        let l = loop {
            let l = random_even_lattice(&mut r, m, false, 1 << 30);
            if !l.z_signature().is_definite() {
                break l;
            }
        };
        out.push((format!("meyer{k}"), l.gram().clone(), "meyer"));
    }
    for k in 0..10 {
        let l = loop {
            let l = random_even_lattice(&mut r, 2 + k % 3, false, 1 << 20);
            if !l.z_signature().is_definite() {
                break l;
            }
        };
        out.push((format!("small{k}"), l.gram().clone(), "small"));
    }
    out
}

pub fn witt_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("witt");
    let forms = witt_forms(cfg);
    let rows: Vec<SuiteOutcome> = forms
        .par_iter()
        .map(|(name, g, kind)| {
            let mut s = SuiteOutcome::new("witt");
            let Some(rep) = s.result(witt_index(g), || format!("{name}")) else { return s };
            for v in rep.isotropic_basis.iter() {
                s.check(g.bilinear(v, v).is_zero() && v.iter().any(|c| !c.is_zero()), || format!("{name}: witness not isotropic"));
            }
            if rep.isotropic_basis.len() >= 2 {
                // totally isotropic: pairwise orthogonal too
                let b = &rep.isotropic_basis;
                let ok = (0..b.len()).all(|i| (0..b.len()).all(|j| g.bilinear(&b[i], &b[j]).is_zero()));
                s.check(ok, || format!("{name}: basis not totally isotropic"));
            }
            s.check(rep.witness.as_ref() == rep.isotropic_basis.first(), || format!("{name}: witness is not the first basis vector"));
            let (p, n) = (rep.signature.positive, rep.signature.negative);
            s.check(rep.witt_index <= p.min(n), || format!("{name}: index above min(p, n)"));
            s.check(rep.status == WittStatus::Certified, || format!("{name}: inconclusive"));
            match *kind {
                "definite" => s.check(rep.witt_index == 0 && rep.obstruction.as_ref().is_some_and(|o| o.place == "inf"), || format!("{name}: definite form misjudged")),
                "hyperbolic" => s.check(rep.witt_index >= 1 && rep.witness.is_some(), || format!("{name}: U-summand without witness")),
                "meyer" => s.check(rep.witt_index >= 1 && rep.witness.is_some(), || format!("{name}: indefinite rank ≥ 5 without witness")),
                _ => {}
            }
            if rep.rank <= 4 && rep.witt_index < rep.rank / 2 {
                // remaining anisotropic part must be certified by a named place
                s.check(rep.obstruction.is_some(), || format!("{name}: anisotropic verdict without a place"));
            }
            s
        })
        .collect();
    for o in rows {
        s.absorb(o);
    }
    // index is additive over a hyperbolic plane
    let mut r = rng(cfg, 18);
    for k in 0..8 {
        let l = random_even_lattice(&mut r, 1 + k % 4, false, 1 << 16);
        let g = l.gram().clone();
        let gu = standard::hyperbolic().gram().direct_sum(&g);
        match (witt_index(&g), witt_index(&gu)) {
            (Ok(a), Ok(b)) => s.check(b.witt_index == a.witt_index + 1, || format!("add{k}: index(U⊕X) = {} vs {}", b.witt_index, a.witt_index)),
            _ => s.check(false, || format!("add{k}: error")),
        }
    }
    s.notes.push(format!("{} forms", forms.len()));
    s
}

// ---------------------------------------------------------------------------
// modform

fn theta_tail_skeleton(l: &Lattice, bound: &Rat) -> QExpansion {
    let mut f = QExpansion::new(1, int(1), l.case(), l.field().copied(), &l.hash(), 1, bound.clone());
    let q = l.gram().square_completion().expect("definite");
    f.tail = TailModel::Theta {
        lambda: if l.case() == Case::Unitary { 2 } else { 1 },
        pivots: (0..q.rows()).map(|i| q[(i, i)].clone()).collect(),
    };
    f
}

/// Smallest integral truncation whose tail bound at `y` is below `target`.
pub fn truncation_for(l: &Lattice, y: &Rat, target: f64, prec: u32) -> Option<i64> {
    (1..=200).find(|&b| {
        crate::modform::tail_bound(&theta_tail_skeleton(l, &int(b)), y, prec).is_some_and(|t| t.upper() < target)
    })
}

pub fn default_samples() -> Vec<HalfSpacePoint> {
    vec![
        HalfSpacePoint::scalar(int(0), int(1)),
        HalfSpacePoint::scalar(int(1), int(1)),
        HalfSpacePoint::scalar(rat(-1, 2), rat(3, 2)),
    ]
}

pub fn theta_modularity_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("theta-modularity");
    let lats = vec![
        ("A1", standard::a(1)),
        ("A2", standard::a(2)),
        ("D4", standard::d(4)),
        ("E8", standard::e8()),
        ("O(Q(i))", standard::ok_scaled(-4, 1)),
    ];
    let samples = default_samples();
    // smallest imaginary part among the samples and their images under S
    let y_min = rat(2, 5);
    for (name, l) in &lats {
        let Some(b) = truncation_for(l, &y_min, cfg.tol / 1000.0, cfg.precision) else {
            s.check(false, || format!("{name}: no truncation reaches the tolerance"));
            continue;
        };
        let Some(f) = s.result(theta_expansion(l, 1, &int(b)), || format!("{name}: theta")) else { continue };
        s.notes.push(format!("{name}: truncation {b}, {} coefficients", f.len()));
        let k = crate::cycles::theta_weight(l);
        for w in ["S", "T"] {
            let word = GroupWord::sl2(l.case(), w);
            match slash_check(&f, &word, &k, l, &samples, cfg.tol, cfg.precision) {
                Ok(rep) => {
                    s.check(rep.pass, || format!("{name} {w}: defect {:e}", rep.max_defect));
                    if w == "T" {
                        s.check(rep.exact && rep.mismatches == 0, || format!("{name} T: exact check failed"));
                    }
                }
                Err(e) => s.check(false, || format!("{name} {w}: {}", e.name())),
            }
        }
    }
    // negative control: a perturbed coefficient must fail under S
    let a2 = standard::a(2);
    if let Ok(mut f) = theta_expansion(&a2, 1, &int(24)) {
        let key = CoeffKey::new(vec![KElem::from_rat(int(1))], vec![0]);
        let c = f.get(&key);
        let _ = f.set(key, c + int(1));
        let rep = slash_check(&f, &GroupWord::sl2(Case::Orthogonal, "S"), &int(1), &a2, &samples, cfg.tol, cfg.precision);
        s.check(rep.is_ok_and(|r| !r.pass), || "perturbed A2 theta passes under S".into());
    }
    s
}

pub fn evaluation_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("evaluation");
    let e8 = standard::e8();
    if let Some(f) = s.result(theta_expansion(&e8, 1, &int(20)), || "E8 theta".into()) {
        // classical E₈ theta: 1 + 240 Σ σ₃(n) qⁿ
        let ok = (0..=20).all(|n| {
            let sig3: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
            let want = if n == 0 { 1 } else { 240 * sig3 };
            f.get(&CoeffKey::new(vec![KElem::from_rat(int(n))], vec![0])) == int(want)
        });
        s.check(ok && f.len() == 21, || "E8 theta differs from 1 + 240Σσ₃(n)qⁿ".into());
        match evaluate(&f, &HalfSpacePoint::scalar(int(0), int(1)), cfg.precision.max(128)) {
            Ok(ev) => {
                s.check(ev.tail.as_ref().is_some_and(|t| t.upper() < 1e-20), || "E8 tail at i not below 1e-20".into());
                let x = (-2.0 * std::f64::consts::PI).exp();
                let approx: f64 = f.iter().map(|(k, c)| crate::arith::to_i64(c).unwrap() as f64 * x.powi(crate::arith::to_i64(&k.trace()).unwrap() as i32)).sum();
                s.check((ev.values[0].re.mid_f64() - approx).abs() < 1e-9 * approx, || "E8 at i off".into());
                // Θ_{E₈}(i) = E₄(i) = 3Γ(1/4)⁸/(2π)⁶
                let gamma_quarter = 3.625_609_908_221_908_f64;
                let e4i = 3.0 * gamma_quarter.powi(8) / (2.0 * std::f64::consts::PI).powi(6);
                s.check((ev.values[0].re.mid_f64() - e4i).abs() < 1e-9 * e4i, || "E8 at i differs from E4(i)".into());
            }
            Err(e) => s.check(false, || format!("E8 evaluate: {}", e.name())),
        }
    }
    // monotonicity in truncation
    let mut r = rng(cfg, 19);
    for (name, l) in [("A2", standard::a(2)), ("D4", standard::d(4)), ("A1", standard::a(1))] {
        let Ok(big) = theta_expansion(&l, 1, &int(16)) else { continue };
        for _ in 0..3 {
            let tau = HalfSpacePoint::scalar(rat(r.gen_range(-6..=6), 12), rat(r.gen_range(4..=12), 12));
            for b in [4, 8] {
                let small = big.truncate(&int(b));
                match (evaluate(&small, &tau, cfg.precision), evaluate(&big, &tau, cfg.precision)) {
                    (Ok(a), Ok(c)) => {
                        let t = a.tail.clone().map(|t| t.upper()).unwrap_or(f64::INFINITY);
                        let ok = a.values.iter().zip(&c.values).all(|(x, y)| x.sub(y).abs_upper() <= t);
                        s.check(ok, || format!("{name}: truncation {b} not within its tail bound"));
                    }
                    _ => s.check(false, || format!("{name}: evaluation failed")),
                }
            }
        }
    }
    // genus-two and unitary transformation checks on generators
    let a2 = standard::a(2);
    if let Ok(f) = theta_expansion(&a2, 2, &int(10)) {
        let pts = vec![HalfSpacePoint::diag_imag(&[int(1), int(1)]), HalfSpacePoint::diag_imag(&[int(1), rat(3, 2)])];
        let w = GroupWord::new(2, Case::Orthogonal, vec![Generator::S]);
        let rep = slash_check(&f, &w, &int(1), &a2, &pts, cfg.tol, cfg.precision);
        s.check(rep.is_ok_and(|r| r.pass), || "A2 genus-2 theta fails under w₂".into());
        let w = GroupWord::new(2, Case::Orthogonal, vec![Generator::n_int(&[vec![1, 1], vec![1, 0]])]);
        let rep = slash_check(&f, &w, &int(1), &a2, &pts, cfg.tol, cfg.precision);
        s.check(rep.is_ok_and(|r| r.pass && r.exact), || "A2 genus-2 theta fails under n(B)".into());
    }
    let zero = QExpansion::new(1, int(0), Case::Orthogonal, None, "zero", 1, int(5));
    let ev = evaluate(&zero, &HalfSpacePoint::scalar(int(0), int(1)), 64);
    s.check(ev.is_ok_and(|e| e.values.iter().all(CBall::contains_zero)), || "zero expansion not zero".into());
    s
}

pub fn hurwitz_suite(_cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("hurwitz");
    let wrong: Vec<u64> = (0..=200u64).into_par_iter().filter(|&n| hurwitz(n) != hurwitz_dirichlet(n)).collect();
    s.checks += 201;
    s.failures.extend(wrong.iter().map(|n| format!("H({n}) differs from the class number formula")));
    let bad: Vec<u64> = (1..=10_000u64)
        .into_par_iter()
        .filter(|&n| {
            let h = hurwitz(n);
            let support = if n % 4 == 1 || n % 4 == 2 { h.is_zero() } else { h.is_positive() };
            let den = (h * int(12)).is_integer();
            !(support && den)
        })
        .collect();
    s.checks += 10_000;
    s.failures.extend(bad.iter().take(10).map(|n| format!("H({n}) violates support/denominator")));
    for n in 1..=20 {
        let (l, r) = kronecker_hurwitz(n);
        s.check(l == r, || format!("class number relation fails at n = {n}"));
    }
    s.check(reduced_forms(-3).is_ok_and(|v| v == vec![(1, 1, 1)]), || "reduced forms of −3".into());
    s.check(reduced_forms(-23).is_ok_and(|v| v.len() == 3), || "reduced forms of −23".into());
    s.check(reduced_forms(-5).is_err(), || "−5 accepted as discriminant".into());
    match zagier_coeffs(100) {
        Ok(f) => {
            let ok = (0..=100).all(|n| f.get(&CoeffKey::new(vec![KElem::from_rat(int(n))], vec![0])) == hurwitz_dirichlet(n as u64));
            s.check(ok && f.mock, || "Zagier coefficients differ from the oracle".into());
        }
        Err(e) => s.check(false, || format!("zagier: {}", e.name())),
    }
    s
}

pub fn serialization_suite(_cfg: &VerifyConfig) -> SuiteOutcome {
    let mut s = SuiteOutcome::new("serialization");
    let mut fs = Vec::new();
    if let Ok(f) = theta_expansion(&standard::e8(), 1, &int(6)) {
        fs.push(f);
    }
    if let Ok(f) = theta_expansion(&standard::a(2), 2, &int(4)) {
        fs.push(f);
    }
    if let Ok(f) = theta_expansion(&standard::ok_scaled(-3, 1), 2, &int(3)) {
        fs.push(f);
    }
    if let Ok(f) = zagier_coeffs(30) {
        fs.push(f);
    }
    fs.push(QExpansion::new(2, int(2), Case::Orthogonal, None, "empty", 1, int(0)));
    for f in &fs {
        let doc = f.serialize();
        match QExpansion::deserialize(&doc) {
            Ok(g) => s.check(g.serialize() == doc && g.len() == f.len(), || "round trip changed the document".into()),
            Err(e) => s.check(false, || format!("round trip: {}", e.name())),
        }
        // without records nothing can contradict the genus line
        if f.len() == 0 {
            continue;
        }
        let bad = doc.replacen(&format!("genus {}", f.genus), &format!("genus {}", f.genus + 1), 1);
        s.check(QExpansion::deserialize(&bad).is_err(), || "genus mismatch accepted".into());
    }
    let l = standard::d(4);
    s.check(Lattice::load(&l.save()).is_ok_and(|m| m == l), || "lattice round trip".into());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_model_counts() {
        assert_eq!(e8_coordinate_counts(), (240, 2160));
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = VerifyConfig::default();
        for name in ["lattice", "milgram", "factor-sl2", "hurwitz", "serialization"] {
            let o = run_suite(name, &cfg).unwrap();
            assert!(o.pass(), "{name}: {:?}", o.failures);
        }
        assert!(run_suite("nope", &cfg).is_none());
    }

    #[test]
    fn render_is_stable() {
        let r = VerifyReport { suites: vec![SuiteOutcome { name: "x", checks: 2, failures: vec!["bad".into()], notes: vec!["n".into()] }] };
        assert_eq!(r.render(), "FAIL x (2 checks, 1 failures)\n  note: n\n  fail: bad\noverall FAIL\n");
    }
}
