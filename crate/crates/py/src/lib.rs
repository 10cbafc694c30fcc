//! Python bindings. Exact values cross the boundary as strings (`"1/3"`,
//! rendered cyclotomic scalars) so nothing is rounded on the way.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use weilform::arith::{fmt_rat, parse_rat, Rat};
use weilform::cycles::{self, IntersectionMatrix, WittStatus};
use weilform::lattice::standard;
use weilform::verify::{self, VerifyConfig};
use weilform::{eisenstein, weil, Case, GroupWord, KElem, QMatrix, WeilRep};

create_exception!(weilform, WeilformError, PyValueError, "Raised for any error of the core library; the message starts with the error name.");

fn err(e: weilform::Error) -> PyErr {
    WeilformError::new_err(e.to_string())
}

fn rat(s: &str) -> PyResult<Rat> {
    parse_rat(s).map_err(err)
}

fn rows(m: Vec<Vec<String>>) -> PyResult<Vec<Vec<Rat>>> {
    m.iter().map(|r| r.iter().map(|s| rat(s)).collect()).collect()
}

#[pyclass(frozen, skip_from_py_object, module = "weilform")]
#[derive(Clone)]
pub struct Lattice {
    inner: weilform::Lattice,
}

#[pymethods]
impl Lattice {
    /// Orthogonal lattice from a Gram matrix of rationals given as strings or ints.
    #[staticmethod]
    fn from_gram(gram: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Lattice> {
        let g: Vec<Vec<String>> = gram.iter().map(|r| r.iter().map(|x| x.str().map(|s| s.to_string())).collect::<PyResult<_>>()).collect::<PyResult<_>>()?;
        let q = QMatrix::from_rows(rows(g)?);
        Ok(Lattice { inner: weilform::Lattice::orthogonal(q).map_err(err)? })
    }

    /// Lattice from its JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Lattice> {
        Ok(Lattice { inner: weilform::Lattice::load(text).map_err(err)? })
    }

    /// `"A<n>"`, `"D<n>"`, `"E8"` or `"U"`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Lattice> {
        let n = |s: &str| s.parse::<usize>().ok().filter(|&k| k >= 1);
        let l = match name {
            "E8" => Some(standard::e8()),
            "U" => Some(standard::hyperbolic()),
            _ if name.starts_with('A') => n(&name[1..]).map(standard::a),
            _ if name.starts_with('D') => n(&name[1..]).filter(|&k| k >= 2).map(standard::d),
            _ => None,
        };
        l.map(|inner| Lattice { inner }).ok_or_else(|| PyValueError::new_err(format!("unknown lattice {name:?}")))
    }

    fn to_json(&self) -> String {
        self.inner.save()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn case(&self) -> &'static str {
        self.inner.case().as_str()
    }

    /// `(positive, negative)` over ℚ.
    #[getter]
    fn signature(&self) -> (usize, usize) {
        let s = self.inner.z_signature();
        (s.positive, s.negative)
    }

    #[getter]
    fn hash(&self) -> String {
        self.inner.hash()
    }

    #[getter]
    fn discriminant_order(&self) -> usize {
        self.inner.discriminant_group().order()
    }

    #[getter]
    fn elementary_divisors(&self) -> Vec<u64> {
        self.inner.discriminant_group().elementary_divisors().to_vec()
    }

    /// `q(μ) mod 1` for every class, in index order.
    fn class_norms(&self) -> Vec<String> {
        let g = self.inner.discriminant_group();
        (0..g.order()).map(|i| fmt_rat(&g.q(i))).collect()
    }

    fn __repr__(&self) -> String {
        format!("Lattice({}, rank {}, |D| = {})", self.inner.case().as_str(), self.inner.rank(), self.discriminant_order())
    }
}

/// `(gauss_sum, expected, holds)` for Milgram's formula.
#[pyfunction]
fn milgram(lattice: &Lattice) -> (String, String, bool) {
    let m = weil::milgram(&lattice.inner);
    (weilform::cyclotomic::gaussian_form(&m.gauss_sum), weilform::cyclotomic::pretty(&m.expected), m.holds)
}

/// Rendered entries of `ρ(w)`; `word` is a letter string over `STtZ`
/// (genus 1) or a JSON word document.
#[pyfunction]
#[pyo3(signature = (lattice, word, genus = 1))]
fn weil_matrix(py: Python<'_>, lattice: &Lattice, word: &str, genus: usize) -> PyResult<Vec<Vec<String>>> {
    let case = lattice.inner.case();
    let w = if word.trim_start().starts_with('[') {
        GroupWord::parse(word, case, genus).map_err(err)?
    } else if genus == 1 && word.chars().all(|c| "STtZ".contains(c)) {
        GroupWord::sl2(case, word)
    } else {
        return Err(PyValueError::new_err("word must be a JSON word document or, in genus 1, letters from STtZ"));
    };
    let l = lattice.inner.clone();
    py.detach(move || {
        let m = WeilRep::new(&l, genus)?.word_matrix(&w)?;
        Ok((0..m.dim()).map(|i| (0..m.dim()).map(|j| m.entry(i, j).render()).collect()).collect())
    })
    .map_err(err)
}

/// `|L_{T,μ}|` for an orthogonal positive definite lattice.
#[pyfunction]
fn rep_number(py: Python<'_>, lattice: &Lattice, t: Vec<Vec<String>>, mu: Vec<usize>) -> PyResult<u64> {
    if lattice.inner.case() != Case::Orthogonal {
        return Err(PyValueError::new_err("rep_number takes orthogonal lattices; use the CLI for Hermitian ones"));
    }
    let t = IntersectionMatrix::new(rows(t)?.into_iter().map(|r| r.into_iter().map(KElem::from_rat).collect()).collect());
    let l = lattice.inner.clone();
    py.detach(move || cycles::rep_number(&l, &t, &mu)).map_err(err)
}

/// Theta expansion document of genus `genus` up to trace `bound`.
#[pyfunction]
#[pyo3(signature = (lattice, bound, genus = 1))]
fn theta(py: Python<'_>, lattice: &Lattice, bound: &str, genus: usize) -> PyResult<String> {
    let b = rat(bound)?;
    let l = lattice.inner.clone();
    py.detach(move || cycles::theta_expansion(&l, genus, &b).map(|f| f.serialize())).map_err(err)
}

/// `H(n)` as a fraction string.
#[pyfunction]
fn hurwitz(n: u64) -> String {
    fmt_rat(&eisenstein::hurwitz(n))
}

/// Zagier's weight-3/2 expansion document up to `bound`.
#[pyfunction]
fn zagier(bound: i64) -> PyResult<String> {
    eisenstein::zagier_coeffs(bound).map(|f| f.serialize()).map_err(err)
}

/// `(index, isotropic_basis, certified)` for a rational Gram matrix.
#[pyfunction]
fn witt(gram: Vec<Vec<String>>) -> PyResult<(usize, Vec<Vec<String>>, bool)> {
    let r = cycles::witt_index(&QMatrix::from_rows(rows(gram)?)).map_err(err)?;
    let basis = r.isotropic_basis.iter().map(|v| v.iter().map(fmt_rat).collect()).collect();
    Ok((r.witt_index, basis, r.status == WittStatus::Certified))
}

/// Runs verification suites (all when `suites` is empty) on `threads`
/// workers; returns `(all_pass, report)`.
#[pyfunction]
#[pyo3(signature = (suites = Vec::new(), threads = 1))]
fn run_verify(py: Python<'_>, suites: Vec<String>, threads: usize) -> PyResult<(bool, String)> {
    let cfg = VerifyConfig::default();
    for s in &suites {
        if !verify::SUITES.contains(&s.as_str()) {
            return Err(PyValueError::new_err(format!("unknown suite {s:?}")));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py.detach(move || {
        pool.install(|| {
            if suites.is_empty() {
                verify::run_all(&cfg)
            } else {
                verify::VerifyReport { suites: suites.iter().filter_map(|s| verify::run_suite(s, &cfg)).collect() }
            }
        })
    });
    Ok((report.all_pass(), report.render()))
}

#[pymodule]
#[pyo3(name = "weilform")]
fn weilform_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WeilformError", m.py().get_type::<WeilformError>())?;
    m.add_class::<Lattice>()?;
    m.add_function(wrap_pyfunction!(milgram, m)?)?;
    m.add_function(wrap_pyfunction!(weil_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rep_number, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz, m)?)?;
    m.add_function(wrap_pyfunction!(zagier, m)?)?;
    m.add_function(wrap_pyfunction!(witt, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
