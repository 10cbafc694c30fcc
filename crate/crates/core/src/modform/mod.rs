//! Vector-valued q-expansions: storage, text documents, numerical
//! evaluation and slash-action checks.
//!
//! A coefficient is indexed by a half-integral symmetric (Hermitian in the
//! unitary case) matrix `T` and a tuple `μ` of discriminant classes. Records
//! are kept sorted by `(tr T, T, μ)`, which is also the document order.

mod eval;
mod slash;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::arith::{fmt_rat, parse_rat, Rat};
use crate::error::{Error, Result};
use crate::field::{parse_kelem, KElem, QuadField};
use crate::lattice::Case;

pub use eval::{evaluate, gershgorin_lower, tail_bound, Evaluation, HalfSpacePoint};
pub use slash::{slash_check, SlashReport, SlashSample};

/// How the terms beyond the truncation are bounded during evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailModel {
    /// Theta series of a positive definite lattice: `lambda` scales the
    /// exponent (`e(tr(λTτ))`) and `pivots` are the square-completion pivots
    /// of the Gram matrix entering the Gaussian sum bound.
    Theta { lambda: u32, pivots: Vec<Rat> },
    /// Genus-one series with `|c(N)| ≤ N` for `N ≥ 1`.
    Linear,
    /// No bound known; every evaluation reports an infinite tail.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffKey {
    /// `T` row-major, `genus × genus`.
    pub t: Vec<KElem>,
    pub mu: Vec<usize>,
}

impl CoeffKey {
    pub fn new(t: Vec<KElem>, mu: Vec<usize>) -> CoeffKey {
        CoeffKey { t, mu }
    }

    pub fn genus(&self) -> usize {
        self.mu.len()
    }

    pub fn trace(&self) -> Rat {
        let n = self.mu.len();
        (0..n).map(|i| self.t[i * n + i].a.clone()).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> &KElem {
        &self.t[i * self.mu.len() + j]
    }
}

impl Ord for CoeffKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.trace().cmp(&o.trace()).then_with(|| self.t.cmp(&o.t)).then_with(|| self.mu.cmp(&o.mu))
    }
}

impl PartialOrd for CoeffKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    pub genus: usize,
    pub weight: Rat,
    pub case: Case,
    /// Present in the unitary case.
    pub field: Option<QuadField>,
    pub lattice_hash: String,
    /// `|L*/L|`; every `μ` entry lies in `0..classes`.
    pub classes: usize,
    /// All coefficients with `tr T ≤ truncation` are stored.
    pub truncation: Rat,
    /// Holomorphic part of a mock modular form.
    pub mock: bool,
    pub tail: TailModel,
    coeffs: BTreeMap<CoeffKey, Rat>,
}

impl QExpansion {
    pub fn new(genus: usize, weight: Rat, case: Case, field: Option<QuadField>, lattice_hash: &str, classes: usize, truncation: Rat) -> QExpansion {
        QExpansion {
            genus,
            weight,
            case,
            field,
            lattice_hash: lattice_hash.to_string(),
            classes,
            truncation,
            mock: false,
            tail: TailModel::None,
            coeffs: BTreeMap::new(),
        }
    }

    /// Adds to a coefficient; zero results are dropped.
    pub fn add(&mut self, key: CoeffKey, c: Rat) -> Result<()> {
        self.check_key(&key)?;
        let entry = self.coeffs.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    pub fn set(&mut self, key: CoeffKey, c: Rat) -> Result<()> {
        self.check_key(&key)?;
        if c.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
        Ok(())
    }

    fn check_key(&self, key: &CoeffKey) -> Result<()> {
        let n = self.genus;
        if key.mu.len() != n || key.t.len() != n * n {
            return Err(Error::Format(format!("coefficient index of genus {} in a genus-{n} expansion", key.mu.len())));
        }
        if key.mu.iter().any(|&m| m >= self.classes) {
            return Err(Error::Format(format!("class index out of range 0..{}", self.classes)));
        }
        if key.trace() > self.truncation {
            return Err(Error::Format(format!("tr T = {} exceeds the truncation", fmt_rat(&key.trace()))));
        }
        if !is_psd(&key.t, n, self.case, self.field.as_ref()) {
            return Err(Error::Format("index matrix is not Hermitian positive semi-definite".into()));
        }
        Ok(())
    }

    pub fn get(&self, key: &CoeffKey) -> Rat {
        self.coeffs.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoeffKey, &Rat)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Genus-one coefficients of one component, as `(T, c)` pairs.
    pub fn series(&self, mu: usize) -> Vec<(Rat, Rat)> {
        self.coeffs.iter().filter(|(k, _)| k.mu == [mu]).map(|(k, v)| (k.t[0].a.clone(), v.clone())).collect()
    }

    /// Number of vector components, `classes^genus`.
    pub fn components(&self) -> usize {
        self.classes.pow(self.genus as u32)
    }

    /// Component index of a `μ` tuple, first entry most significant.
    pub fn component_index(&self, mu: &[usize]) -> usize {
        mu.iter().fold(0, |acc, &m| acc * self.classes + m)
    }

    /// Same expansion cut down to `tr T ≤ bound`.
    pub fn truncate(&self, bound: &Rat) -> QExpansion {
        let mut out = self.clone();
        out.truncation = bound.clone().min(self.truncation.clone());
        out.coeffs.retain(|k, _| &k.trace() <= bound);
        out
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        writeln!(s, "genus {}", self.genus).unwrap();
        writeln!(s, "weight {}", fmt_rat(&self.weight)).unwrap();
        match self.field {
            Some(f) => writeln!(s, "case {} {}", self.case.as_str(), f.discriminant()).unwrap(),
            None => writeln!(s, "case {}", self.case.as_str()).unwrap(),
        }
        writeln!(s, "lattice {}", self.lattice_hash).unwrap();
        writeln!(s, "classes {}", self.classes).unwrap();
        writeln!(s, "truncation {}", fmt_rat(&self.truncation)).unwrap();
        writeln!(s, "mock {}", self.mock).unwrap();
        match &self.tail {
            TailModel::Theta { lambda, pivots } => {
                let p: Vec<String> = pivots.iter().map(fmt_rat).collect();
                writeln!(s, "tail theta {} {}", lambda, p.join(" ")).unwrap()
            }
            TailModel::Linear => writeln!(s, "tail linear").unwrap(),
            TailModel::None => writeln!(s, "tail none").unwrap(),
        }
        writeln!(s, "records {}", self.coeffs.len()).unwrap();
        for (k, c) in &self.coeffs {
            let t: Vec<String> = k.t.iter().map(|x| x.to_string()).collect();
            let mu: Vec<String> = k.mu.iter().map(|m| m.to_string()).collect();
            writeln!(s, "{} ; {} ; {}", t.join(" "), mu.join(" "), fmt_rat(c)).unwrap();
        }
        s
    }

    pub fn deserialize(text: &str) -> Result<QExpansion> {
        let bad = |m: String| Error::Format(m);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut header = |name: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| bad(format!("missing header field {name}")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(name) {
                return Err(bad(format!("expected header field {name}, found {line:?}")));
            }
            Ok(parts.map(String::from).collect())
        };
        let one = |v: Vec<String>, name: &str| -> Result<String> {
            if v.len() != 1 {
                return Err(Error::Format(format!("header field {name} takes one value")));
            }
            Ok(v.into_iter().next().unwrap())
        };
        let genus: usize = one(header("genus")?, "genus")?.parse().map_err(|_| bad("bad genus".into()))?;
        if genus == 0 {
            return Err(bad("genus must be positive".into()));
        }
        let weight = parse_rat(&one(header("weight")?, "weight")?).map_err(|_| bad("bad weight".into()))?;
        let case_f = header("case")?;
        let case = Case::parse(case_f.first().map(String::as_str).unwrap_or("")).map_err(|e| bad(e.to_string()))?;
        let field = match (case, case_f.len()) {
            (Case::Orthogonal, 1) => None,
            (Case::Unitary, 2) => {
                let d: i64 = case_f[1].parse().map_err(|_| bad("bad field discriminant".into()))?;
                Some(QuadField::new(d).map_err(|e| bad(e.to_string()))?)
            }
            _ => return Err(bad("case line does not match the case".into())),
        };
        let lattice_hash = one(header("lattice")?, "lattice")?;
        let classes: usize = one(header("classes")?, "classes")?.parse().map_err(|_| bad("bad classes".into()))?;
        let truncation = parse_rat(&one(header("truncation")?, "truncation")?).map_err(|_| bad("bad truncation".into()))?;
        let mock = match one(header("mock")?, "mock")?.as_str() {
            "true" => true,
            "false" => false,
            other => return Err(bad(format!("bad mock flag {other:?}"))),
        };
        let tail_f = header("tail")?;
        let tail = match tail_f.first().map(String::as_str) {
            Some("theta") if tail_f.len() >= 2 => {
                let lambda: u32 = tail_f[1].parse().map_err(|_| bad("bad tail scale".into()))?;
                let pivots = tail_f[2..].iter().map(|p| parse_rat(p)).collect::<Result<Vec<_>>>().map_err(|_| bad("bad tail pivots".into()))?;
                if pivots.iter().any(|p| !p.is_positive()) {
                    return Err(bad("tail pivots must be positive".into()));
                }
                TailModel::Theta { lambda, pivots }
            }
            Some("linear") if tail_f.len() == 1 => TailModel::Linear,
            Some("none") if tail_f.len() == 1 => TailModel::None,
            _ => return Err(bad("bad tail model".into())),
        };
        let records: usize = one(header("records")?, "records")?.parse().map_err(|_| bad("bad record count".into()))?;
        let mut f = QExpansion::new(genus, weight, case, field, &lattice_hash, classes, truncation);
        f.mock = mock;
        f.tail = tail;
        let mut prev: Option<CoeffKey> = None;
        let mut count = 0;
        for line in lines {
            let parts: Vec<&str> = line.split(';').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad(format!("bad record {line:?}")));
            }
            let t = parts[0]
                .split_whitespace()
                .map(|x| if case == Case::Orthogonal { parse_rat(x).map(KElem::from_rat) } else { parse_kelem(x) })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| bad(e.to_string()))?;
            let mu = parts[1]
                .split_whitespace()
                .map(|m| m.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad(format!("bad class tuple in {line:?}")))?;
            let c = parse_rat(parts[2]).map_err(|e| bad(e.to_string()))?;
            if c.is_zero() {
                return Err(bad("zero coefficients are not stored".into()));
            }
            let key = CoeffKey::new(t, mu);
            if key.mu.len() != genus || key.t.len() != genus * genus {
                return Err(bad(format!("record {line:?} does not match genus {genus}")));
            }
            if let Some(p) = &prev {
                if p >= &key {
                    return Err(bad("records are not in canonical order".into()));
                }
            }
            f.set(key.clone(), c)?;
            prev = Some(key);
            count += 1;
        }
        if count != records {
            return Err(bad(format!("header announces {records} records, found {count}")));
        }
        Ok(f)
    }
}

/// Hermitian positive semi-definiteness of a row-major `n × n` matrix over
/// `K` (over `ℚ` in the orthogonal case).
pub fn is_psd(t: &[KElem], n: usize, case: Case, field: Option<&QuadField>) -> bool {
    let q = match psd_form(t, n, case, field) {
        Some(q) => q,
        None => return false,
    };
    let (_, neg, _) = q.inertia();
    neg == 0
}

/// Real symmetric form whose definiteness matches that of `t`.
fn psd_form(t: &[KElem], n: usize, case: Case, field: Option<&QuadField>) -> Option<crate::matrix::QMatrix> {
    match case {
        Case::Orthogonal => {
            if t.iter().any(|x| !x.is_rational()) {
                return None;
            }
            let q = crate::matrix::QMatrix::from_rows((0..n).map(|i| (0..n).map(|j| t[i * n + j].a.clone()).collect()).collect());
            if !q.is_symmetric() {
                return None;
            }
            Some(q)
        }
        Case::Unitary => {
            let f = field?;
            let rows: Vec<Vec<KElem>> = (0..n).map(|i| t[i * n..(i + 1) * n].to_vec()).collect();
            for i in 0..n {
                for j in 0..n {
                    if rows[i][j] != f.conj(&rows[j][i]) {
                        return None;
                    }
                }
            }
            Some(crate::lattice::hermitian_trace_form(f, &rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn sample() -> QExpansion {
        let mut f = QExpansion::new(1, int(4), Case::Orthogonal, None, "00ff", 1, int(2));
        f.set(CoeffKey::new(vec![KElem::zero()], vec![0]), int(1)).unwrap();
        f.set(CoeffKey::new(vec![KElem::from_rat(int(2))], vec![0]), int(2160)).unwrap();
        f.set(CoeffKey::new(vec![KElem::from_rat(int(1))], vec![0]), int(240)).unwrap();
        f.tail = TailModel::Theta { lambda: 1, pivots: vec![int(2), rat(3, 2)] };
        f
    }

    #[test]
    fn round_trip() {
        let f = sample();
        let doc = f.serialize();
        assert!(doc.contains("1 ; 0 ; 240\n2 ; 0 ; 2160"));
        let g = QExpansion::deserialize(&doc).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.serialize(), doc);
    }

    #[test]
    fn empty_and_errors() {
        let f = QExpansion::new(2, rat(1, 2), Case::Orthogonal, None, "ab", 2, int(0));
        let doc = f.serialize();
        assert_eq!(QExpansion::deserialize(&doc).unwrap().len(), 0);
        let bad = sample().serialize().replace("genus 1", "genus 2");
        assert!(matches!(QExpansion::deserialize(&bad), Err(Error::Format(_))));
        let bad = sample().serialize().replace("records 3", "records 4");
        assert!(matches!(QExpansion::deserialize(&bad), Err(Error::Format(_))));
        let mut f = sample();
        assert!(f.set(CoeffKey::new(vec![KElem::from_rat(int(3))], vec![0]), int(1)).is_err());
        assert!(f.set(CoeffKey::new(vec![KElem::from_rat(int(-1))], vec![0]), int(1)).is_err());
    }

    #[test]
    fn canonical_order() {
        let key = |t: [i64; 4], mu: [usize; 2]| CoeffKey::new(t.iter().map(|&v| KElem::from_rat(rat(v, 2))).collect(), mu.to_vec());
        let a = key([2, 1, 1, 2], [0, 0]);
        let b = key([2, -1, -1, 2], [0, 0]);
        let c = key([0, 0, 0, 4], [1, 0]);
        let mut v = vec![a.clone(), c.clone(), b.clone()];
        v.sort();
        assert_eq!(v, vec![c, b, a]);
    }
}
