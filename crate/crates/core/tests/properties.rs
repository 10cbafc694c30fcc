use proptest::prelude::*;

use weilform::arith::{int, rat, Rat};
use weilform::cycles::{brute_force_reps, enumerate_reps, theta_expansion, witt_index, IntersectionMatrix, WittStatus};
use weilform::eisenstein::{hurwitz, hurwitz_dirichlet};
use weilform::weil::{factor_sl2, milgram};
use weilform::{Case, ExactScalar, Generator, GroupWord, Lattice, QExpansion, QMatrix, WeilRep};

/// Even symmetric Gram matrices of rank `m` with small entries, nondegenerate.
fn even_gram(m: usize, definite: bool) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let diag = prop::collection::vec(prop_oneof![Just(2i64), Just(4), Just(-2), Just(-4)], m);
    let off = prop::collection::vec(-1i64..=1, m * (m - 1) / 2);
    (diag, off)
        .prop_map(move |(d, o)| {
            let mut g = vec![vec![0i64; m]; m];
            let mut k = 0;
            for i in 0..m {
                g[i][i] = if definite { d[i].abs() } else { d[i] };
                for j in 0..i {
                    g[i][j] = o[k];
                    g[j][i] = o[k];
                    k += 1;
                }
            }
            g
        })
        .prop_filter("nondegenerate", move |g| {
            let q = QMatrix::from_i64(g);
            q.det() != int(0) && (!definite || q.inertia().0 == m)
        })
}

fn lattice(m: usize, definite: bool) -> impl Strategy<Value = Lattice> {
    even_gram(m, definite).prop_map(|g| Lattice::from_i64(&g).unwrap())
}

fn any_lattice() -> impl Strategy<Value = Lattice> {
    (1usize..=3).prop_flat_map(|m| lattice(m, false))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn milgram_holds(l in any_lattice()) {
        prop_assert!(milgram(&l).holds);
    }

    #[test]
    fn weil_relations_genus_one(l in any_lattice(), k in -3i64..=3) {
        let rep = WeilRep::new(&l, 1).unwrap();
        let o = Case::Orthogonal;
        // T^k T^{-k} = 1 and (ST)^3 = S^2
        let w = GroupWord::new(1, o, vec![Generator::t(k), Generator::t(-k)]);
        prop_assert!(rep.words_equal(&w, &GroupWord::empty(1, o)).unwrap());
        prop_assert!(rep.words_equal(&GroupWord::sl2(o, "STSTST"), &GroupWord::sl2(o, "SS")).unwrap());
        let s = rep.generator_matrix(&Generator::S).unwrap();
        prop_assert!(rep.is_unitary(&s).unwrap());
        // S^2 acts as μ ↦ −μ up to the scalar e(−sig/4)
        let z = rep.word_scalar(&GroupWord::sl2(o, "SSSS")).unwrap();
        prop_assert!(z.is_some_and(|c| c.as_root_of_unity().is_some()));
    }

    #[test]
    fn sl2_factorization_round_trip(a in -40i64..=40, c in -40i64..=40) {
        prop_assume!(ext_gcd(a, c).0.abs() == 1);
        // complete (a, c) to a matrix of determinant one
        let (g, x, y) = ext_gcd(a, c);
        prop_assert_eq!(g.abs(), 1);
        let (b, d) = (-y * g, x * g);
        let f = factor_sl2([[a, b], [c, d]]).unwrap();
        let m = f.word.matrix(None);
        let ints: Vec<Vec<Rat>> = m.iter().map(|r| r.iter().map(|e| e.a.clone()).collect()).collect();
        prop_assert_eq!(ints, vec![vec![int(a), int(b)], vec![int(c), int(d)]]);
    }

    #[test]
    fn exact_scalar_field_laws(x in prop::collection::vec(-5i64..=5, 4), y in prop::collection::vec(-5i64..=5, 6), z in -5i64..=5) {
        let a = ExactScalar::from_cyclic_ints(8, &x);
        let b = ExactScalar::from_cyclic_ints(12, &y);
        let c = ExactScalar::from_rat(int(z)).mul(&ExactScalar::sqrt(2));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.conj().conj(), a.clone());
        // |a|² is real, and rational once a is
        let n = a.mul(&a.conj());
        prop_assert_eq!(n.conj(), n.clone());
        let r = ExactScalar::from_rat(int(z));
        prop_assert_eq!(r.mul(&r.conj()).to_rat(), Some(int(z * z)));
    }

    #[test]
    fn hurwitz_matches_class_number_formula(n in 0u64..3000) {
        prop_assert_eq!(hurwitz(n), hurwitz_dirichlet(n));
    }

    #[test]
    fn witt_witnesses_are_isotropic(g in (2usize..=5).prop_flat_map(|m| even_gram(m, false))) {
        let q = QMatrix::from_i64(&g);
        let r = witt_index(&q).unwrap();
        let (p, n) = (r.signature.positive, r.signature.negative);
        prop_assert!(r.witt_index <= p.min(n));
        for v in &r.isotropic_basis {
            prop_assert_eq!(q.bilinear(v, v), int(0));
        }
        if r.status == WittStatus::Certified && r.rank >= 5 && p > 0 && n > 0 {
            prop_assert!(r.witt_index >= 1);
        }
    }

    #[test]
    fn enumeration_equals_box_scan(l in (1usize..=3).prop_flat_map(|m| lattice(m, true)), num in 1i64..=4) {
        let order = l.discriminant_group().order();
        let t = IntersectionMatrix::scalar(rat(num, 2));
        for mu in 0..order.min(4) {
            let mut a = enumerate_reps(&l, &t, &[mu]).unwrap();
            let mut b = brute_force_reps(&l, &t, &[mu]).unwrap();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn theta_documents_round_trip(l in (1usize..=2).prop_flat_map(|m| lattice(m, true)), genus in 1usize..=2) {
        let f = theta_expansion(&l, genus, &int(3)).unwrap();
        let doc = f.serialize();
        let g = QExpansion::deserialize(&doc).unwrap();
        prop_assert_eq!(g.serialize(), doc);
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}
