//! Even lattices given by Gram matrices, in the orthogonal case (ℤ-lattices)
//! and the unitary case (Hermitian `O_K`-lattices), with their document
//! format.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{fmt_rat, int, parse_rat, Rat};
use crate::error::{Error, Result};
use crate::field::{KElem, QuadField};
use crate::matrix::QMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// ℤ-lattice with a symmetric bilinear form.
    Orthogonal,
    /// `O_K`-lattice with a Hermitian form, `K` imaginary quadratic.
    Unitary,
}

impl Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Case::Orthogonal => "orthogonal",
            Case::Unitary => "unitary",
        }
    }

    pub fn parse(s: &str) -> Result<Case> {
        match s {
            "orthogonal" => Ok(Case::Orthogonal),
            "unitary" => Ok(Case::Unitary),
            other => Err(Error::Parse(format!("unknown case {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }

    /// `b⁺ − b⁻`.
    pub fn index(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn is_definite(&self) -> bool {
        self.positive == 0 || self.negative == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// Serialized lattice document. Field order is fixed so that saving a
/// loaded document reproduces it up to whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_disc: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram_h: Option<Vec<Vec<[String; 2]>>>,
}

/// A validated even, non-degenerate lattice.
///
/// In the unitary case `gram` is the Gram matrix of the trace form
/// `(x, y) = tr_{K/ℚ}⟨x, y⟩` in the ℤ-basis `b_1, ω·b_1, b_2, ω·b_2, …`;
/// every discriminant computation runs through it.
#[derive(Debug, Clone)]
pub struct Lattice {
    case: Case,
    gram: QMatrix,
    field: Option<QuadField>,
    gram_h: Option<Vec<Vec<KElem>>>,
    doc: LatticeDoc,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.case == other.case && self.gram == other.gram && self.gram_h == other.gram_h && self.field == other.field
    }
}

impl Lattice {
    /// Orthogonal lattice from a rational Gram matrix.
    pub fn orthogonal(gram: QMatrix) -> Result<Lattice> {
        let doc = LatticeDoc {
            case: Case::Orthogonal.as_str().into(),
            field_disc: None,
            gram: Some(gram.to_rows().iter().map(|r| r.iter().map(fmt_rat).collect()).collect()),
            gram_h: None,
        };
        Self::from_doc(doc)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Lattice> {
        Self::orthogonal(QMatrix::from_i64(rows))
    }

    /// Hermitian lattice; `gram_h[i][j] = ⟨b_i, b_j⟩`, linear in the first slot.
    pub fn unitary(field_disc: i64, gram_h: Vec<Vec<KElem>>) -> Result<Lattice> {
        let doc = LatticeDoc {
            case: Case::Unitary.as_str().into(),
            field_disc: Some(field_disc),
            gram: None,
            gram_h: Some(
                gram_h
                    .iter()
                    .map(|r| r.iter().map(|x| [fmt_rat(&x.a), fmt_rat(&x.b)]).collect())
                    .collect(),
            ),
        };
        Self::from_doc(doc)
    }

    pub fn load(text: &str) -> Result<Lattice> {
        let doc: LatticeDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn save(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("lattice document serializes")
    }

    pub fn doc(&self) -> &LatticeDoc {
        &self.doc
    }

    /// Short content hash of the canonical document.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(&self.doc).expect("serializes");
        let digest = Sha256::digest(compact.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_doc(doc: LatticeDoc) -> Result<Lattice> {
        let case = Case::parse(&doc.case)?;
        let parse_matrix = |rows: &Vec<Vec<String>>| -> Result<QMatrix> {
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse("gram must be a nonempty square matrix".into()));
            }
            let m = rows.iter().map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            Ok(QMatrix::from_rows(m))
        };
        match case {
            Case::Orthogonal => {
                if doc.field_disc.is_some() || doc.gram_h.is_some() {
                    return Err(Error::Parse("orthogonal lattice takes only `gram`".into()));
                }
                let gram = parse_matrix(doc.gram.as_ref().ok_or_else(|| Error::Parse("missing gram".into()))?)?;
                if !gram.is_symmetric() {
                    return Err(Error::Parse("gram is not symmetric".into()));
                }
                check_even(&gram)?;
                if gram.det().is_zero() {
                    return Err(Error::Degenerate("zero determinant".into()));
                }
                Ok(Lattice { case, gram, field: None, gram_h: None, doc })
            }
            Case::Unitary => {
                let disc = doc.field_disc.ok_or_else(|| Error::Parse("unitary lattice needs field_disc".into()))?;
                let field = QuadField::new(disc)?;
                let rows = doc.gram_h.as_ref().ok_or_else(|| Error::Parse("unitary lattice needs gram_h".into()))?;
                let n = rows.len();
                if n == 0 || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse("gram_h must be a nonempty square matrix".into()));
                }
                let h: Vec<Vec<KElem>> = rows
                    .iter()
                    .map(|r| r.iter().map(|[a, b]| Ok(KElem::new(parse_rat(a)?, parse_rat(b)?))).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                for i in 0..n {
                    for j in 0..n {
                        if h[j][i] != field.conj(&h[i][j]) {
                            return Err(Error::Parse(format!("gram_h is not Hermitian at ({i},{j})")));
                        }
                    }
                }
                let gram = hermitian_trace_form(&field, &h);
                if let Some(g) = &doc.gram {
                    if parse_matrix(g)? != gram {
                        return Err(Error::Parse("gram does not match the trace form of gram_h".into()));
                    }
                }
                check_even(&gram)?;
                if gram.det().is_zero() {
                    return Err(Error::Degenerate("zero determinant".into()));
                }
                Ok(Lattice { case, gram, field: Some(field), gram_h: Some(h), doc })
            }
        }
    }

    pub fn case(&self) -> Case {
        self.case
    }

    /// Gram matrix of the underlying ℤ-lattice (trace form in the unitary case).
    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn field(&self) -> Option<&QuadField> {
        self.field.as_ref()
    }

    pub fn gram_h(&self) -> Option<&Vec<Vec<KElem>>> {
        self.gram_h.as_ref()
    }

    /// Rank of the underlying ℤ-lattice.
    pub fn z_rank(&self) -> usize {
        self.gram.rows()
    }

    /// Rank over `O_K` (equal to `z_rank` in the orthogonal case).
    pub fn rank(&self) -> usize {
        match self.case {
            Case::Orthogonal => self.gram.rows(),
            Case::Unitary => self.gram.rows() / 2,
        }
    }

    pub fn det(&self) -> Rat {
        self.gram.det()
    }

    /// Basis of `L*` in the basis of `L`: the inverse Gram matrix.
    pub fn dual_transition(&self) -> QMatrix {
        self.gram.inverse().expect("non-degenerate by construction")
    }

    /// Signature of the real form. In the unitary case this is the
    /// Hermitian signature (half of the trace-form signature).
    pub fn signature(&self) -> Signature {
        let (p, n, z) = self.gram.inertia();
        debug_assert_eq!(z, 0);
        match self.case {
            Case::Orthogonal => Signature { positive: p, negative: n },
            Case::Unitary => Signature { positive: p / 2, negative: n / 2 },
        }
    }

    /// Signature of the underlying rational quadratic form.
    pub fn z_signature(&self) -> Signature {
        let (p, n, _) = self.gram.inertia();
        Signature { positive: p, negative: n }
    }

    pub fn is_positive_definite(&self) -> bool {
        let s = self.z_signature();
        s.negative == 0
    }

    /// Restriction of scalars `(x, y) = tr_{K/ℚ}⟨x, y⟩` as an orthogonal lattice.
    pub fn trace_form(&self) -> Result<Lattice> {
        match self.case {
            Case::Orthogonal => Err(Error::WrongCase("trace_form needs a unitary lattice".into())),
            Case::Unitary => Lattice::orthogonal(self.gram.clone()),
        }
    }

    /// `Q(x) = ½·(x, x)` for a coordinate vector in the ℤ-basis.
    pub fn q(&self, x: &[Rat]) -> Rat {
        self.gram.bilinear(x, x) / int(2)
    }

    /// `(x, y)` of the underlying ℤ-lattice.
    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.gram.bilinear(x, y)
    }

    /// Integer matrix of multiplication by `ω` on ℤ-coordinates (unitary case).
    pub fn omega_action(&self) -> Option<QMatrix> {
        let f = self.field?;
        let m = self.rank();
        let mut w = QMatrix::zeros(2 * m, 2 * m);
        // ω·(a + cω) = −n·c + (a + t·c)·ω
        for i in 0..m {
            w[(2 * i + 1, 2 * i)] = Rat::one();
            w[(2 * i, 2 * i + 1)] = int(-f.omega_norm());
            w[(2 * i + 1, 2 * i + 1)] = int(f.omega_trace());
        }
        Some(w)
    }

    /// ℤ-coordinates to `K`-coordinates (unitary case).
    pub fn to_k_coords(&self, x: &[Rat]) -> Vec<KElem> {
        x.chunks(2).map(|c| KElem::new(c[0].clone(), c[1].clone())).collect()
    }

    pub fn from_k_coords(&self, x: &[KElem]) -> Vec<Rat> {
        x.iter().flat_map(|k| [k.a.clone(), k.b.clone()]).collect()
    }

    /// Hermitian pairing `⟨x, y⟩ ∈ K` of ℤ-coordinate vectors (unitary case);
    /// in the orthogonal case the bilinear form as a rational `KElem`.
    pub fn herm(&self, x: &[Rat], y: &[Rat]) -> KElem {
        match (&self.field, &self.gram_h) {
            (Some(f), Some(h)) => {
                let xk = self.to_k_coords(x);
                let yk = self.to_k_coords(y);
                let mut acc = KElem::zero();
                for (i, xi) in xk.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in yk.iter().enumerate() {
                        if yj.is_zero() {
                            continue;
                        }
                        acc = acc.add(&f.mul(&f.mul(xi, &h[i][j]), &f.conj(yj)));
                    }
                }
                acc
            }
            _ => KElem::from_rat(self.pair(x, y)),
        }
    }
}

/// Trace-form Gram for the basis `b_1, ωb_1, b_2, ωb_2, …`.
pub(crate) fn hermitian_trace_form(f: &QuadField, h: &[Vec<KElem>]) -> QMatrix {
    let m = h.len();
    let units = [KElem::one(), f.omega()];
    let mut g = QMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            for (s, u) in units.iter().enumerate() {
                for (t, v) in units.iter().enumerate() {
                    let val = f.mul(&f.mul(u, &h[i][j]), &f.conj(v));
                    g[(2 * i + s, 2 * j + t)] = f.trace(&val);
                }
            }
        }
    }
    g
}

fn check_even(gram: &QMatrix) -> Result<()> {
    if !gram.is_integral() {
        return Err(Error::NotEven("pairing is not integral".into()));
    }
    for i in 0..gram.rows() {
        if !(gram[(i, i)].numer() % 2u32).is_zero() {
            return Err(Error::NotEven(format!("Q(b_{}) = {}/2 is not integral", i + 1, gram[(i, i)])));
        }
    }
    Ok(())
}

/// Standard lattices used by examples, tests and the verification suite.
pub mod standard {
    use super::*;

    pub fn a(n: usize) -> Lattice {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
            .collect();
        Lattice::from_i64(&rows).expect("A_n is even")
    }

    pub fn d(n: usize) -> Lattice {
        assert!(n >= 3);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for i in 0..n - 2 {
            rows[i][i + 1] = -1;
            rows[i + 1][i] = -1;
        }
        rows[n - 3][n - 1] = -1;
        rows[n - 1][n - 3] = -1;
        Lattice::from_i64(&rows).expect("D_n is even")
    }

    pub fn e8() -> Lattice {
        let mut rows = vec![vec![0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        // Bourbaki labelling: 1-3-4-5-6-7-8 chain, 2 attached to 4
        for (i, j) in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)] {
            rows[i][j] = -1;
            rows[j][i] = -1;
        }
        Lattice::from_i64(&rows).expect("E_8 is even")
    }

    pub fn hyperbolic() -> Lattice {
        Lattice::from_i64(&[vec![0, 1], vec![1, 0]]).expect("U is even")
    }

    /// Orthogonal sum of Gram matrices.
    pub fn sum(a: &Lattice, b: &Lattice) -> Lattice {
        Lattice::orthogonal(a.gram().direct_sum(b.gram())).expect("sum of even lattices")
    }

    /// The lattice with the form multiplied by `s`.
    pub fn rescale(l: &Lattice, s: i64) -> Lattice {
        Lattice::orthogonal(l.gram().scale(&int(s))).expect("rescaled even lattice")
    }

    pub fn diag(entries: &[i64]) -> Lattice {
        let rows: Vec<Vec<i64>> = (0..entries.len())
            .map(|i| (0..entries.len()).map(|j| if i == j { entries[i] } else { 0 }).collect())
            .collect();
        Lattice::from_i64(&rows).expect("even diagonal")
    }

    /// `O_K` with `⟨x, y⟩ = s·x·ȳ`.
    pub fn ok_scaled(field_disc: i64, s: i64) -> Lattice {
        Lattice::unitary(field_disc, vec![vec![KElem::from_rat(int(s))]]).expect("even Hermitian lattice")
    }

    /// Hermitian diagonal lattice `⊕ O_K·s_i`.
    pub fn hermitian_diag(field_disc: i64, s: &[i64]) -> Lattice {
        let n = s.len();
        let h = (0..n)
            .map(|i| (0..n).map(|j| if i == j { KElem::from_rat(int(s[i])) } else { KElem::zero() }).collect())
            .collect();
        Lattice::unitary(field_disc, h).expect("even Hermitian lattice")
    }
}

pub fn is_positive(q: &Rat) -> bool {
    q.is_positive()
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::arith::rat;

    #[test]
    fn load_examples() {
        let a1 = Lattice::load(r#"{"case":"orthogonal","gram":[["2"]]}"#).unwrap();
        assert_eq!(a1.rank(), 1);
        let a2 = Lattice::load(r#"{"case":"orthogonal","gram":[["2","1"],["1","2"]]}"#).unwrap();
        assert_eq!(a2.det(), int(3));
        let bad = Lattice::load(r#"{"case":"orthogonal","gram":[["1"]]}"#);
        assert!(matches!(bad, Err(Error::NotEven(_))));
        let deg = Lattice::load(r#"{"case":"orthogonal","gram":[["2","2"],["2","2"]]}"#);
        assert!(matches!(deg, Err(Error::Degenerate(_))));
        assert!(matches!(Lattice::load("{"), Err(Error::Parse(_))));
        assert!(matches!(Lattice::load(r#"{"case":"orthogonal","gram":[["2","1"]]}"#), Err(Error::Parse(_))));
        assert!(matches!(Lattice::load(r#"{"case":"orthogonal","gram":[["1/2"]]}"#), Err(Error::NotEven(_))));
    }

    #[test]
    fn document_roundtrip() {
        let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        for text in [
            r#"{"case":"orthogonal","gram":[["2","-1"],["-1","4/2"]]}"#,
            r#"{ "case": "unitary", "field_disc": -3, "gram_h": [[["2","0"],["1","0"]],[["1","0"],["2","0"]]] }"#,
            r#"{"case":"unitary","field_disc":-1,"gram":[["2","0"],["0","2"]],"gram_h":[[["1","0"]]]}"#,
        ] {
            let l = Lattice::load(text).unwrap();
            assert_eq!(strip(&l.save()), strip(text));
        }
    }

    #[test]
    fn duals() {
        assert_eq!(a(1).dual_transition(), QMatrix::from_rows(vec![vec![rat(1, 2)]]));
        let e = e8();
        assert_eq!(e.det(), int(1));
        assert!(e.dual_transition().is_integral());
        assert_eq!(hyperbolic().dual_transition(), QMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        for l in [a(3), d(4), e8(), hyperbolic()] {
            assert_eq!(l.gram().mul(&l.dual_transition()), QMatrix::identity(l.z_rank()));
        }
    }

    #[test]
    fn signatures() {
        assert_eq!(a(2).signature(), Signature { positive: 2, negative: 0 });
        assert_eq!(hyperbolic().signature(), Signature { positive: 1, negative: 1 });
        assert_eq!(diag(&[2, -2, -2]).signature(), Signature { positive: 1, negative: 2 });
        assert_eq!(e8().signature().positive, 8);
    }

    #[test]
    fn trace_forms() {
        let gi = ok_scaled(-1, 1);
        assert_eq!(gi.trace_form().unwrap().gram(), &QMatrix::from_i64(&[vec![2, 0], vec![0, 2]]));
        let eis = ok_scaled(-3, 1);
        assert_eq!(eis.trace_form().unwrap().gram(), &QMatrix::from_i64(&[vec![2, 1], vec![1, 2]]));
        assert!(matches!(a(1).trace_form(), Err(Error::WrongCase(_))));
        assert_eq!(gi.signature(), Signature { positive: 1, negative: 0 });
        let x = [int(1), int(1)];
        // ⟨1+i, 1+i⟩ = 2
        assert_eq!(gi.herm(&x, &x), KElem::from_rat(int(2)));
    }

    #[test]
    fn non_hermitian_rejected() {
        let h = vec![vec![KElem::from_rat(int(1)), KElem::new(int(0), int(1))], vec![KElem::new(int(0), int(1)), KElem::from_rat(int(1))]];
        assert!(matches!(Lattice::unitary(-1, h), Err(Error::Parse(_))));
    }
}
