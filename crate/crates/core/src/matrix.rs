//! Dense exact matrices over the rationals and the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rat;

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(crate::arith::fmt_rat).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `uᵗ · self · v`.
    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: &Rat) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Row echelon form by Gaussian elimination; returns the reduced matrix,
    /// the pivot columns and the determinant sign/scale factor.
    fn echelon(&self) -> (QMatrix, Vec<usize>, Rat) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = Rat::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
                det = -det;
            }
            let piv = m[(r, c)].clone();
            det *= &piv;
            for j in c..m.cols {
                let v = &m[(r, j)] / &piv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, det)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let (_, piv, det) = self.echelon();
        if piv.len() < self.rows {
            Rat::zero()
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (e, piv, _) = aug.echelon();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = e[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (e, piv, _) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = -e[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = b` if a solution exists.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (e, piv, _) = aug.echelon();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &pc) in piv.iter().enumerate() {
            x[pc] = e[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Congruence diagonalization of a symmetric matrix: returns `(P, d)`
    /// with `P · self · Pᵗ = diag(d)`. Zero pivots are repaired by
    /// adding a row with a nonzero off-diagonal entry; `None` if singular.
    pub fn congruence_diagonalize(&self) -> Option<(QMatrix, Vec<Rat>)> {
        assert!(self.is_symmetric());
        let n = self.rows;
        let mut a = self.clone();
        let mut p = Self::identity(n);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                    a.swap_rows(k, i);
                    a.swap_cols(k, i);
                    p.swap_rows(k, i);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    // row_k += row_j, col_k += col_j: new diagonal is 2·a_kj
                    a.add_row(k, j, &Rat::one());
                    a.add_col(k, j, &Rat::one());
                    p.add_row(k, j, &Rat::one());
                } else {
                    return None;
                }
            }
            let piv = a[(k, k)].clone();
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = -(&a[(i, k)] / &piv);
                a.add_row(i, k, &f);
                a.add_col(i, k, &f);
                p.add_row(i, k, &f);
            }
        }
        let d = (0..n).map(|i| a[(i, i)].clone()).collect();
        Some((p, d))
    }

    /// row_i += f · row_j
    pub fn add_row(&mut self, i: usize, j: usize, f: &Rat) {
        for c in 0..self.cols {
            let v = &self[(j, c)] * f;
            self[(i, c)] += v;
        }
    }

    /// col_i += f · col_j
    pub fn add_col(&mut self, i: usize, j: usize, f: &Rat) {
        for r in 0..self.rows {
            let v = &self[(r, j)] * f;
            self[(r, i)] += v;
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Exact signature `(b⁺, b⁻, zero)` by congruence diagonalization.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let n = self.rows;
        let mut a = self.clone();
        let mut pos = 0;
        let mut neg = 0;
        let mut k = 0;
        let mut zero = 0;
        // reduce the active block [k..n) until exhausted
        while k < n {
            if a[(k, k)].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                    a.swap_rows(k, i);
                    a.swap_cols(k, i);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    a.add_row(k, j, &Rat::one());
                    a.add_col(k, j, &Rat::one());
                } else {
                    // row k is zero inside the active block
                    zero += 1;
                    k += 1;
                    continue;
                }
            }
            let piv = a[(k, k)].clone();
            if piv.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = -(&a[(i, k)] / &piv);
                a.add_row(i, k, &f);
                a.add_col(i, k, &f);
            }
            k += 1;
        }
        (pos, neg, zero)
    }

    /// Pivot data for `xᵗ·self·x = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²`
    /// (Cholesky without square roots). Requires positive definiteness.
    pub fn square_completion(&self) -> Option<QMatrix> {
        assert!(self.is_symmetric());
        let n = self.rows;
        let mut q = self.clone();
        for i in 0..n {
            if !q[(i, i)].is_positive() {
                return None;
            }
            for j in i + 1..n {
                q[(j, i)] = q[(i, j)].clone();
                let v = &q[(i, j)] / &q[(i, i)];
                q[(i, j)] = v;
            }
            for k in i + 1..n {
                for l in k..n {
                    let v = &q[(k, i)] * &q[(i, l)];
                    q[(k, l)] -= v;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                q[(i, j)] = Rat::zero();
            }
        }
        Some(q)
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &QMatrix) -> QMatrix {
        let (a, b) = (self.rows, other.rows);
        let mut m = Self::zeros(a + b, self.cols + other.cols);
        for i in 0..a {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..b {
            for j in 0..other.cols {
                m[(a + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form of an integer matrix: `u · a · v = diag(d)` with
/// `d_1 | d_2 | …`, `d_i ≥ 0`, and `u`, `v` unimodular.
pub struct Smith {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Smith {
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    let mut s: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = int_identity(n);
    let mut v = int_identity(m);
    let mut t = 0;
    while t < n.min(m) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                if !s[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        for row in s.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = true;
        // clear column t
        for i in t + 1..n {
            if s[i][t].is_zero() {
                continue;
            }
            let q = s[i][t].div_floor(&s[t][t]);
            for j in 0..m {
                let x = &q * &s[t][j];
                s[i][j] -= x;
            }
            for j in 0..n {
                let x = &q * &u[t][j];
                u[i][j] -= x;
            }
            if !s[i][t].is_zero() {
                done = false;
            }
        }
        // clear row t
        for j in t + 1..m {
            if s[t][j].is_zero() {
                continue;
            }
            let q = s[t][j].div_floor(&s[t][t]);
            for i in 0..n {
                let x = &q * &s[i][t];
                s[i][j] -= x;
            }
            for i in 0..m {
                let x = &q * &v[i][t];
                v[i][j] -= x;
            }
            if !s[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility: pivot must divide the rest of the block
        let mut fixed = true;
        'outer: for i in t + 1..n {
            for j in t + 1..m {
                if !(&s[i][j] % &s[t][t]).is_zero() {
                    // row_t += row_i, then the loop re-reduces
                    for c in 0..m {
                        let x = s[i][c].clone();
                        s[t][c] += x;
                    }
                    for c in 0..n {
                        let x = u[i][c].clone();
                        u[t][c] += x;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            if s[t][t].is_negative() {
                for c in 0..m {
                    s[t][c] = -s[t][c].clone();
                }
                for c in 0..n {
                    u[t][c] = -u[t][c].clone();
                }
            }
            t += 1;
        }
    }
    let diag = (0..n.min(m)).map(|i| s[i][i].clone()).collect();
    Smith { u, v, diag }
}

fn int_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// ℤ-basis of `{x ∈ ℤ^m : a·x = 0}` for an integer matrix `a` with `m` columns.
pub fn integer_kernel(a: &[Vec<BigInt>], m: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return int_identity(m);
    }
    let s = smith_normal_form(a);
    let r = s.diag.iter().filter(|d| !d.is_zero()).count();
    // columns r.. of v span the kernel
    (r..m).map(|j| (0..m).map(|i| s.v[i][j].clone()).collect()).collect()
}

/// LLL reduction (δ = 3/4) of linearly independent integer rows under the
/// standard inner product; exact rational Gram–Schmidt.
pub fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let dot = |x: &[Rat], y: &[Rat]| -> Rat { x.iter().zip(y).map(|(p, q)| p * q).sum() };
    let to_q = |v: &[BigInt]| -> Vec<Rat> { v.iter().map(|x| Rat::from_integer(x.clone())).collect() };
    let gso = |b: &[Vec<BigInt>]| -> (Vec<Vec<Rat>>, Vec<Rat>, Vec<Vec<Rat>>) {
        let mut bs: Vec<Vec<Rat>> = Vec::with_capacity(b.len());
        let mut norms = Vec::with_capacity(b.len());
        let mut mu = vec![vec![Rat::zero(); b.len()]; b.len()];
        for i in 0..b.len() {
            let bi = to_q(&b[i]);
            let mut v = bi.clone();
            for j in 0..i {
                mu[i][j] = dot(&bi, &bs[j]) / &norms[j];
                for (vk, sk) in v.iter_mut().zip(&bs[j]) {
                    *vk -= &mu[i][j] * sk;
                }
            }
            norms.push(dot(&v, &v));
            bs.push(v);
        }
        (bs, norms, mu)
    };
    let delta = Rat::new(3.into(), 4.into());
    let mut k = 1;
    let (_, mut norms, mut mu) = gso(&b);
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if !q.is_zero() {
                let q = q.to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                (_, norms, mu) = gso(&b);
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (_, norms, mu) = gso(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn imul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        (0..a.len())
            .map(|i| {
                (0..b[0].len())
                    .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn kernel_and_lll() {
        let a = big(&[&[3, 5, 7, 11]]);
        let k = lll_reduce(integer_kernel(&a, 4));
        assert_eq!(k.len(), 3);
        for v in &k {
            let s: BigInt = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
            assert!(v.iter().all(|x| x.abs() <= BigInt::from(3)), "{v:?}");
        }
        // unimodular change of a skewed basis reduces to the identity up to signs
        let b = lll_reduce(big(&[&[1, 0, 0], &[1000, 1, 0], &[-7, 2001, 1]]));
        for v in &b {
            assert_eq!(v.iter().map(|x| x.abs()).sum::<BigInt>(), BigInt::one());
        }
    }

    #[test]
    fn smith_of_a2_and_d4() {
        for (m, expect) in [
            (big(&[&[2, -1], &[-1, 2]]), vec![1, 3]),
            (big(&[&[2, 0], &[0, 2]]), vec![2, 2]),
            (big(&[&[2, -1, 0, 0], &[-1, 2, -1, -1], &[0, -1, 2, 0], &[0, -1, 0, 2]]), vec![1, 1, 2, 2]),
            (big(&[&[4, 6], &[6, 4]]), vec![2, 10]),
        ] {
            let s = smith_normal_form(&m);
            let d: Vec<i64> = s.diag.iter().map(|x| i64::try_from(x).unwrap()).collect();
            assert_eq!(d, expect);
            let prod = imul(&imul(&s.u, &m), &s.v);
            for i in 0..prod.len() {
                for j in 0..prod.len() {
                    let want = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                    assert_eq!(prod[i][j], want);
                }
            }
        }
    }

    #[test]
    fn inverse_and_det() {
        let a = QMatrix::from_i64(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(a.det(), int(3));
        let inv = a.inverse().unwrap();
        assert_eq!(inv[(0, 0)], rat(2, 3));
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        assert_eq!(QMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).inertia(), (1, 1, 0));
        assert_eq!(QMatrix::from_i64(&[vec![2, 0, 0], vec![0, -2, 0], vec![0, 0, -2]]).inertia(), (1, 2, 0));
        assert_eq!(QMatrix::from_i64(&[vec![1, 1], vec![1, 1]]).inertia(), (1, 0, 1));
    }

    #[test]
    fn congruence_diagonalization_is_congruent() {
        let a = QMatrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 2], vec![0, 2, 0]]);
        assert!(a.congruence_diagonalize().is_none());
        let a = QMatrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 2], vec![0, 2, 3]]);
        let (p, d) = a.congruence_diagonalize().unwrap();
        assert_eq!(p.mul(&a).mul(&p.transpose()), QMatrix::diagonal(&d));
    }

    #[test]
    fn nullspace_is_kernel() {
        let a = QMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn square_completion_reproduces_form() {
        let a = QMatrix::from_i64(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        let q = a.square_completion().unwrap();
        let x = [int(1), int(-2), int(3)];
        let mut total = Rat::zero();
        for i in 0..3 {
            let mut s = x[i].clone();
            for j in i + 1..3 {
                s += &q[(i, j)] * &x[j];
            }
            total += &q[(i, i)] * &s * &s;
        }
        assert_eq!(total, a.bilinear(&x, &x));
    }
}
