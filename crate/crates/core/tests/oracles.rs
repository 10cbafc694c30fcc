//! Values frozen from independent closed formulas.

use weilform::arith::{int, rat};
use weilform::cycles::{rep_number, theta_expansion, witt_index, IntersectionMatrix};
use weilform::eisenstein::hurwitz;
use weilform::lattice::standard;
use weilform::modform::CoeffKey;
use weilform::weil::milgram;
use weilform::{ExactScalar, Generator, KElem, Lattice, QMatrix, WeilRep};

fn theta_coeffs(l: &Lattice, bound: i64) -> Vec<i64> {
    let f = theta_expansion(l, 1, &int(bound)).unwrap();
    (0..=bound)
        .map(|n| {
            let c = f.get(&CoeffKey::new(vec![KElem::from_rat(int(n))], vec![0]));
            i64::try_from(c.to_integer()).unwrap()
        })
        .collect()
}

fn sigma(n: i64, k: u32, odd_only: bool) -> i64 {
    (1..=n).filter(|d| n % d == 0 && (!odd_only || d % 2 == 1)).map(|d| d.pow(k)).sum()
}

#[test]
fn e8_theta_is_eisenstein() {
    // θ_{E8} = E4 = 1 + 240 Σ σ₃(n) qⁿ
    let c = theta_coeffs(&standard::e8(), 6);
    for n in 1..=6 {
        assert_eq!(c[n as usize], 240 * sigma(n, 3, false), "n = {n}");
    }
}

#[test]
fn d4_theta_counts() {
    // r_{D4}(n) = 24 σ₁^{odd}(n)
    let c = theta_coeffs(&standard::d(4), 8);
    assert_eq!(c[..6], [1, 24, 24, 96, 24, 144]);
    for n in 1..=8 {
        assert_eq!(c[n as usize], 24 * sigma(n, 1, true));
    }
}

#[test]
fn a2_theta_counts() {
    // r_{A2}(n) = 6 Σ_{d | n} χ_{−3}(d)
    let chi = |d: i64| [0, 1, -1][(d % 3) as usize];
    let c = theta_coeffs(&standard::a(2), 13);
    for n in 1..=13i64 {
        let want = 6 * (1..=n).filter(|d| n % d == 0).map(chi).sum::<i64>();
        assert_eq!(c[n as usize], want, "n = {n}");
    }
}

#[test]
fn hurwitz_table() {
    let table = [
        (3, rat(1, 3)),
        (4, rat(1, 2)),
        (7, int(1)),
        (8, int(1)),
        (11, int(1)),
        (12, rat(4, 3)),
        (15, int(2)),
        (16, rat(3, 2)),
        (19, int(1)),
        (20, int(2)),
        (23, int(3)),
        (24, int(2)),
        (27, rat(4, 3)),
        (28, int(2)),
    ];
    for (n, h) in table {
        assert_eq!(hurwitz(n), h, "H({n})");
    }
    for n in [1, 2, 5, 6, 9, 10, 13, 14] {
        assert_eq!(hurwitz(n), int(0));
    }
}

#[test]
fn a1_generators() {
    let rep = WeilRep::new(&standard::a(1), 1).unwrap();
    let t = rep.generator_matrix(&Generator::t(1)).unwrap();
    assert_eq!(t.entry(0, 0), ExactScalar::one());
    assert_eq!(t.entry(1, 1), ExactScalar::root_of_unity(&rat(1, 4)));
    assert!(t.entry(0, 1).is_zero() && t.entry(1, 0).is_zero());
    // ρ(S) = e(−1/8)/√2 · [[1, 1], [1, −1]]
    let s = rep.generator_matrix(&Generator::S).unwrap();
    let c = ExactScalar::root_of_unity(&rat(-1, 8)).mul(&ExactScalar::inv_sqrt(2));
    assert_eq!(s.entry(0, 0), c);
    assert_eq!(s.entry(0, 1), c);
    assert_eq!(s.entry(1, 1), c.neg());
}

#[test]
fn milgram_values() {
    for (l, order, sig) in [(standard::a(1), 2, 1), (standard::a(2), 3, 2), (standard::d(4), 4, 4), (standard::e8(), 1, 8), (standard::hyperbolic(), 1, 0)] {
        let m = milgram(&l);
        assert!(m.holds);
        assert_eq!((m.order, m.signature), (order, sig));
        assert_eq!(m.expected, ExactScalar::sqrt(order as u64).mul(&ExactScalar::root_of_unity(&rat(sig, 8))));
    }
}

#[test]
fn genus_two_a1() {
    // A1 = ℤ with Q(x) = x²: T = [[1, ±1], [±1, 1]] forces y = ±x = ±1, and
    // an orthogonal pair of norm-one vectors does not exist in rank one
    let l = standard::a(1);
    let tm = |rows: [[i64; 2]; 2]| IntersectionMatrix::from_rats(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect());
    assert_eq!(rep_number(&l, &tm([[1, 0], [0, 1]]), &[0, 0]).unwrap(), 0);
    assert_eq!(rep_number(&l, &tm([[1, 1], [1, 1]]), &[0, 0]).unwrap(), 2);
    assert_eq!(rep_number(&l, &tm([[1, -1], [-1, 1]]), &[0, 0]).unwrap(), 2);
}

#[test]
fn witt_of_standard_forms() {
    // U ⊕ U ⊕ U: index 3; E8: anisotropic; U ⊕ A1 ⊕ A1(−1): index 2
    let u = standard::hyperbolic();
    let uuu = standard::sum(&standard::sum(&u, &u), &u);
    assert_eq!(witt_index(uuu.gram()).unwrap().witt_index, 3);
    assert_eq!(witt_index(standard::e8().gram()).unwrap().witt_index, 0);
    let g = standard::sum(&u, &standard::diag(&[2, -2]));
    assert_eq!(witt_index(g.gram()).unwrap().witt_index, 2);
    // x² + y² − 3z² is anisotropic (at 3)
    let r = witt_index(&QMatrix::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -3]])).unwrap();
    assert_eq!(r.witt_index, 0);
}
