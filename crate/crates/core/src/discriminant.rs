//! The discriminant group `L*/L` with its `ℚ/ℤ`-valued quadratic and
//! bilinear forms.
//!
//! Elements are indexed by their coordinates `(a_1, …, a_k)`, `0 ≤ a_i < d_i`,
//! with respect to the nontrivial elementary divisors `d_1 | … | d_k`; the
//! index is mixed radix with `a_1` most significant, so index order is
//! lexicographic in coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::Rat;
use crate::field::KElem;
use crate::lattice::{Case, Lattice};
use crate::matrix::smith_normal_form;

#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    divisors: Vec<u64>,
    /// Lift of the i-th generator in ℤ-coordinates of `L`.
    gens: Vec<Vec<Rat>>,
    /// Rows of `U` for the nontrivial factors; `a_i = (U·G·x)_i mod d_i`.
    reduce_rows: Vec<Vec<BigInt>>,
    gram: crate::matrix::QMatrix,
    exponent: u64,
    /// `2e·Q(g_i)` and `e·(g_i, g_j)` as integers (`e` the exponent).
    q_gen: Vec<i64>,
    b_gen: Vec<Vec<i64>>,
    /// Image of each generator under multiplication by `ω` (unitary case).
    omega_images: Option<Vec<usize>>,
    case: Case,
}

impl DiscriminantGroup {
    pub fn new(lattice: &Lattice) -> DiscriminantGroup {
        let gram = lattice.gram().clone();
        let n = gram.rows();
        let g_int: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| gram[(i, j)].numer().clone()).collect()).collect();
        let snf = smith_normal_form(&g_int);
        let mut divisors = Vec::new();
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        let mut reduce_rows = Vec::new();
        for (i, d) in snf.diag.iter().enumerate() {
            let d = d.to_u64().expect("elementary divisor fits u64");
            if d == 1 {
                continue;
            }
            divisors.push(d);
            // column i of V divided by d
            gens.push((0..n).map(|r| Rat::new(snf.v[r][i].clone(), BigInt::from(d))).collect());
            reduce_rows.push(snf.u[i].clone());
        }
        let exponent = divisors.last().copied().unwrap_or(1);
        let e = Rat::from_integer(BigInt::from(exponent));
        let k = gens.len();
        let q_gen = gens
            .iter()
            .map(|g| {
                let v = (gram.bilinear(g, g) * &e).to_integer();
                v.mod_floor(&BigInt::from(2 * exponent)).to_i64().expect("small")
            })
            .collect();
        let b_gen = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let v = gram.bilinear(&gens[i], &gens[j]) * &e;
                        debug_assert!(v.is_integer());
                        v.to_integer().mod_floor(&BigInt::from(exponent)).to_i64().expect("small")
                    })
                    .collect()
            })
            .collect();
        let mut group = DiscriminantGroup {
            divisors,
            gens,
            reduce_rows,
            gram,
            exponent,
            q_gen,
            b_gen,
            omega_images: None,
            case: lattice.case(),
        };
        if let Some(w) = lattice.omega_action() {
            let imgs = (0..k).map(|i| group.reduce(&w.mul_vec(&group.gens[i]))).collect();
            group.omega_images = Some(imgs);
        }
        group
    }

    pub fn case(&self) -> Case {
        self.case
    }

    /// Nontrivial elementary divisors `d_1 | d_2 | …`.
    pub fn elementary_divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn order(&self) -> usize {
        self.divisors.iter().product::<u64>() as usize
    }

    /// Exponent of the group (largest elementary divisor).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        let mut c = vec![0; self.divisors.len()];
        for i in (0..self.divisors.len()).rev() {
            let d = self.divisors[i] as usize;
            c[i] = (idx % d) as u64;
            idx /= d;
        }
        c
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.divisors)
            .fold(0usize, |acc, (&a, &d)| acc * d as usize + (a % d) as usize)
    }

    /// Representative in `L*` (ℤ-coordinates of `L`), with coordinates in `[0, d_i)`.
    pub fn lift(&self, idx: usize) -> Vec<Rat> {
        let c = self.coords(idx);
        let n = self.gram.rows();
        let mut x = vec![Rat::zero(); n];
        for (a, g) in c.iter().zip(&self.gens) {
            if *a == 0 {
                continue;
            }
            let a = Rat::from_integer(BigInt::from(*a));
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += &a * gi;
            }
        }
        x
    }

    /// Class of a vector of `L*`. Panics if `x ∉ L*`.
    pub fn reduce(&self, x: &[Rat]) -> usize {
        let gx = self.gram.mul_vec(x);
        let gx: Vec<BigInt> = gx
            .iter()
            .map(|v| {
                assert!(v.is_integer(), "vector is not in the dual lattice");
                v.to_integer()
            })
            .collect();
        let coords: Vec<u64> = self
            .reduce_rows
            .iter()
            .zip(&self.divisors)
            .map(|(row, &d)| {
                let s: BigInt = row.iter().zip(&gx).map(|(a, b)| a * b).sum();
                s.mod_floor(&BigInt::from(d)).to_u64().expect("small")
            })
            .collect();
        self.index(&coords)
    }

    /// True iff `x ∈ L*`.
    pub fn in_dual(&self, x: &[Rat]) -> bool {
        self.gram.mul_vec(x).iter().all(|v| v.is_integer())
    }

    /// `q(μ) = Q(lift μ) mod 1`, as the integer `2e·q(μ) mod 2e`.
    pub fn q_num(&self, idx: usize) -> u64 {
        let c = self.coords(idx);
        let two_e = 2 * self.exponent as i128;
        let mut acc: i128 = 0;
        for i in 0..c.len() {
            let ai = c[i] as i128;
            acc += ai * ai * self.q_gen[i] as i128;
            for j in i + 1..c.len() {
                // 2e·(a_i a_j (g_i, g_j)) = 2·a_i a_j·(e·b_ij)
                acc += 2 * ai * c[j] as i128 * self.b_gen[i][j] as i128;
            }
        }
        acc.rem_euclid(two_e) as u64
    }

    /// `q(μ) ∈ [0, 1)`.
    pub fn q(&self, idx: usize) -> Rat {
        Rat::new(BigInt::from(self.q_num(idx)), BigInt::from(2 * self.exponent))
    }

    /// `b(μ, ν) = (lift μ, lift ν) mod 1`, as the integer `e·b mod e`.
    pub fn b_num(&self, x: usize, y: usize) -> u64 {
        let cx = self.coords(x);
        let cy = self.coords(y);
        let e = self.exponent as i128;
        let mut acc: i128 = 0;
        for i in 0..cx.len() {
            if cx[i] == 0 {
                continue;
            }
            for j in 0..cy.len() {
                acc += cx[i] as i128 * cy[j] as i128 * self.b_gen[i][j] as i128;
            }
        }
        acc.rem_euclid(e) as u64
    }

    pub fn b(&self, x: usize, y: usize) -> Rat {
        Rat::new(BigInt::from(self.b_num(x, y)), BigInt::from(self.exponent))
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let cx = self.coords(x);
        let cy = self.coords(y);
        let c: Vec<u64> = cx.iter().zip(&cy).zip(&self.divisors).map(|((a, b), d)| (a + b) % d).collect();
        self.index(&c)
    }

    pub fn neg(&self, x: usize) -> usize {
        let c: Vec<u64> = self.coords(x).iter().zip(&self.divisors).map(|(a, d)| (d - a) % d).collect();
        self.index(&c)
    }

    pub fn scale(&self, x: usize, k: i64) -> usize {
        let c: Vec<u64> = self
            .coords(x)
            .iter()
            .zip(&self.divisors)
            .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect();
        self.index(&c)
    }

    /// Action of `a + b·ω ∈ O_K` (unitary case); integer `k` acts by scaling.
    pub fn mul_ok(&self, x: usize, k: &KElem) -> usize {
        let a = k.a.to_integer().to_i64().expect("integral O_K element");
        let b = k.b.to_integer().to_i64().expect("integral O_K element");
        let mut out = self.scale(x, a);
        if b != 0 {
            let imgs = self.omega_images.as_ref().expect("ω acts only in the unitary case");
            let c = self.coords(x);
            let mut wx = 0;
            for (i, &ci) in c.iter().enumerate() {
                if ci != 0 {
                    wx = self.add(wx, self.scale(imgs[i], ci as i64));
                }
            }
            out = self.add(out, self.scale(wx, b));
        }
        out
    }

    /// Gauss sum `Σ_μ e(q(μ))` as a sum of roots of unity: the returned
    /// vector counts how many `μ` have `2e·q(μ) = j`.
    pub fn gauss_sum_histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; 2 * self.exponent as usize];
        for idx in 0..self.order() {
            h[self.q_num(idx) as usize] += 1;
        }
        h
    }
}

impl Lattice {
    pub fn discriminant_group(&self) -> DiscriminantGroup {
        DiscriminantGroup::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lattice::standard::*;

    #[test]
    fn a1_group() {
        let g = a(1).discriminant_group();
        assert_eq!(g.elementary_divisors(), &[2]);
        assert_eq!(g.q(1), rat(1, 4));
        assert_eq!(g.q(0), rat(0, 1));
        assert_eq!(g.b(1, 1), rat(1, 2));
    }

    #[test]
    fn unimodular_and_unitary() {
        assert_eq!(e8().discriminant_group().order(), 1);
        let g = ok_scaled(-1, 1).discriminant_group();
        assert_eq!(g.elementary_divisors(), &[2, 2]);
        // ω = i acts on L*/L (Z/2)^2 by swapping the two factors up to sign
        let moved: Vec<usize> = (0..4).map(|x| g.mul_ok(x, &KElem::new(rat(0, 1), rat(1, 1)))).collect();
        let mut sorted = moved.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn order_is_determinant() {
        for l in [a(2), a(3), d(4), d(5), hyperbolic(), diag(&[2, -4, 6])] {
            let g = l.discriminant_group();
            assert_eq!(Rat::from_integer(BigInt::from(g.order() as u64)), crate::arith::int(1) * l.det().abs());
        }
    }

    #[test]
    fn reduce_inverts_lift() {
        let l = diag(&[2, 4, 6]);
        let g = l.discriminant_group();
        for i in 0..g.order() {
            assert_eq!(g.reduce(&g.lift(i)), i);
        }
    }

    use num_traits::Signed;
}
