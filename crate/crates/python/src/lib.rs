//! Python bindings: chains, invariants, matrix factorizations, Hom
//! dimensions and verification reports.

use std::path::PathBuf;

use chainfact::chain::{numerics, ChainPolynomial, Degree, GradingGroup};
use chainfact::exactmath::{IntMatrix, Poly};
use chainfact::homcalc::{self, HomTable};
use chainfact::invariants;
use chainfact::mf::{MatrixFactorization, Ring, RingRef};
use chainfact::verify::{self, Cache, Format, VerificationReport, VerifyOptions};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: chainfact::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.to_string().into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn to_py_json<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn poly_coeffs(p: &Poly) -> PyResult<Vec<BigInt>> {
    p.to_integer_coeffs().ok_or_else(|| PyValueError::new_err("polynomial has non-integer coefficients"))
}

/// A chain polynomial `x1^a1 x2 + x2^a2 x3 + ... + xn^an`.
#[pyclass(name = "Chain", module = "chainfact_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChain {
    inner: ChainPolynomial,
    ring: RingRef,
}

impl PyChain {
    fn group(&self) -> &GradingGroup {
        self.ring.group()
    }

    /// Degree `sum_i expr[i] x_i + expr[n] f`; `None` is zero.
    fn degree(&self, expr: Option<Vec<i64>>) -> PyResult<Degree> {
        let n = self.inner.n();
        match expr {
            None => Ok(self.group().zero()),
            Some(e) if e.len() == n + 1 => Ok(self.group().canonicalize(&e)),
            Some(e) => Err(PyValueError::new_err(format!(
                "a degree needs {} coefficients (x1..x{n}, f), got {}",
                n + 1,
                e.len()
            ))),
        }
    }
}

#[pymethods]
impl PyChain {
    /// Accepts a list of exponents or a string such as `"2,2,2"`.
    #[new]
    fn new(exponents: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = if let Ok(s) = exponents.extract::<String>() {
            s.parse().map_err(err)?
        } else {
            ChainPolynomial::new(exponents.extract::<Vec<u32>>()?).map_err(err)?
        };
        let ring = Ring::new(&inner).map_err(err)?;
        Ok(PyChain { inner, ring })
    }

    #[getter]
    fn exponents(&self) -> Vec<u32> {
        self.inner.exponents().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Reduced Milnor number, the length of the exceptional collection.
    #[getter]
    fn mu(&self) -> i64 {
        numerics(&self.inner).mu_n()
    }

    /// Partial products `d_0 = 1, d_i = a_1 ... a_i`.
    #[getter]
    fn d(&self) -> Vec<i64> {
        numerics(&self.inner).d
    }

    /// Rational weights of `x_1..x_n` scaled to integers, with the degree of `f` last.
    #[getter]
    fn weights(&self) -> (Vec<i64>, i64) {
        (self.group().weights().to_vec(), self.group().f_weight())
    }

    /// `L_f` as an abstract group, e.g. `"Z^1 + Z/2"`.
    fn grading_group(&self) -> String {
        self.group().describe()
    }

    /// Weight of the degree `sum_i expr[i] x_i + expr[n] f`.
    fn weight(&self, expr: Vec<i64>) -> PyResult<i64> {
        Ok(self.group().weight(&self.degree(Some(expr))?))
    }

    /// Ascending coefficients of `phi_n`.
    fn phi(&self) -> PyResult<Vec<BigInt>> {
        Ok(invariants::phi(&self.inner).map_err(err)?.coeffs)
    }

    fn chi(&self) -> PyResult<Vec<Vec<BigInt>>> {
        Ok(matrix_rows(&invariants::chi(&self.inner).map_err(err)?.chi))
    }

    /// `M = (-1)^n chi^-1 chi^T`.
    fn serre_matrix(&self) -> PyResult<Vec<Vec<BigInt>>> {
        Ok(matrix_rows(&invariants::serre_matrix(&self.inner).map_err(err)?.m))
    }

    /// Ascending coefficients of `det(1 - tM)`.
    fn zeta(&self) -> PyResult<Vec<BigInt>> {
        poly_coeffs(&invariants::serre_matrix(&self.inner).map_err(err)?.big_phi)
    }

    /// `E_offset, ..., E_{offset + mu - 1}`.
    #[pyo3(signature = (offset = 0))]
    fn collection(&self, offset: i64) -> PyResult<Vec<PyMf>> {
        let (_, objs) = verify::build_collection(&self.ring, offset).map_err(err)?;
        Ok(objs.into_iter().map(|inner| PyMf { inner }).collect())
    }

    /// The collection object `E_i`.
    fn object(&self, i: i64) -> PyResult<PyMf> {
        let inner = verify::collection_recipe(&self.ring, i).build(&self.ring).map_err(err)?;
        Ok(PyMf { inner })
    }

    /// Trivial factorization `(1, f)` twisted by the given degree.
    #[pyo3(signature = (expr = None))]
    fn trivial(&self, expr: Option<Vec<i64>>) -> PyResult<PyMf> {
        Ok(PyMf { inner: MatrixFactorization::trivial(&self.ring, &self.degree(expr)?) })
    }

    /// Hom table of the collection as a dict with `chain`, `entries`, `window`.
    #[pyo3(signature = (offset = 0, margin = 3))]
    fn hom_table<'py>(&self, py: Python<'py>, offset: i64, margin: i64) -> PyResult<Bound<'py, PyAny>> {
        let table = py.detach(|| -> chainfact::Result<HomTable> {
            let (_, objs) = verify::build_collection(&self.ring, offset)?;
            HomTable::compute(&objs, margin)
        });
        to_py_json(py, &table.map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Chain({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A graded matrix factorization of a chain polynomial.
#[pyclass(name = "MatrixFactorization", module = "chainfact_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMf {
    inner: MatrixFactorization,
}

#[pymethods]
impl PyMf {
    /// Rank of each of the two free modules.
    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    /// Weights of the twists of `F0` and `F1`.
    #[getter]
    fn twist_weights(&self) -> (Vec<i64>, Vec<i64>) {
        let g = self.inner.ring().group();
        let w = |m: &chainfact::mf::GradedFreeModule| m.twists.iter().map(|t| g.weight(t)).collect();
        (w(self.inner.module0()), w(self.inner.module1()))
    }

    /// `T`: swaps the two modules and negates the maps.
    fn translate(&self) -> Self {
        PyMf { inner: self.inner.translate() }
    }

    /// `F(l)` for `l = sum_i expr[i] x_i + expr[n] f`.
    fn shift(&self, expr: Vec<i64>) -> PyResult<Self> {
        let g = self.inner.ring().group();
        let n = g.n();
        if expr.len() != n + 1 {
            return Err(PyValueError::new_err(format!("a degree needs {} coefficients", n + 1)));
        }
        Ok(PyMf { inner: self.inner.shift(&g.canonicalize(&expr)) })
    }

    /// Serre functor `T^n (-x1 - ... - xn)`.
    fn serre(&self) -> Self {
        PyMf { inner: self.inner.serre() }
    }

    /// Removes trivial summands by eliminating constant entries.
    fn reduce(&self) -> Self {
        PyMf { inner: self.inner.reduce() }
    }

    fn direct_sum(&self, other: &PyMf) -> PyResult<Self> {
        Ok(PyMf { inner: self.inner.direct_sum(&other.inner).map_err(err)? })
    }

    /// JSON text: twists plus sparse exponent-to-coefficient maps.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __eq__(&self, other: &PyMf) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("MatrixFactorization(size={})", self.inner.size())
    }
}

/// Result of a verification run.
#[pyclass(name = "Report", module = "chainfact_py", frozen, skip_from_py_object)]
struct PyReport {
    inner: VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn all_passed(&self) -> bool {
        self.inner.all_passed()
    }

    /// Check names with their status strings.
    #[getter]
    fn statuses(&self) -> Vec<(String, String)> {
        self.inner.checks.iter().map(|c| (c.name.clone(), c.status.as_str().to_string())).collect()
    }

    #[getter]
    fn euler(&self) -> Option<Vec<Vec<i64>>> {
        self.inner.euler.clone()
    }

    /// The whole report as nested dicts and lists.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py_json(py, &self.inner)
    }

    /// Renders as `json`, `csv` or `md`.
    #[pyo3(signature = (format = "json"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let f: Format = format.parse().map_err(err)?;
        verify::emit_report(&self.inner, f).map_err(err)
    }

    fn __repr__(&self) -> String {
        let failed = self.inner.failures().count();
        format!("Report({}, {} checks, {failed} failed)", self.inner.command, self.inner.checks.len())
    }
}

fn same_ring(a: &PyMf, b: &PyMf) -> PyResult<()> {
    if std::sync::Arc::ptr_eq(a.inner.ring(), b.inner.ring()) {
        Ok(())
    } else {
        Err(PyValueError::new_err("factorizations belong to different Chain objects"))
    }
}

/// `dim Hom(a, T^parity b(l))` with `l = sum_i expr[i] x_i + expr[n] f`.
#[pyfunction]
#[pyo3(signature = (a, b, expr = None, parity = 0))]
fn hom_dim(py: Python<'_>, a: &PyMf, b: &PyMf, expr: Option<Vec<i64>>, parity: u8) -> PyResult<usize> {
    same_ring(a, b)?;
    let g = a.inner.ring().group();
    let l = match expr {
        None => g.zero(),
        Some(e) if e.len() == g.n() + 1 => g.canonicalize(&e),
        Some(_) => return Err(PyValueError::new_err(format!("a degree needs {} coefficients", g.n() + 1))),
    };
    py.detach(|| homcalc::hom_dim(&a.inner, &b.inner, &l, parity)).map_err(err)
}

/// `dim Hom(a, T^p b)` for an integer translation degree `p`.
#[pyfunction]
fn hom_dim_p(py: Python<'_>, a: &PyMf, b: &PyMf, p: i64) -> PyResult<usize> {
    same_ring(a, b)?;
    py.detach(|| homcalc::hom_dim_p(&a.inner, &b.inner, p)).map_err(err)
}

/// Euler form `sum_p (-1)^p dim Hom(a, T^p b)`.
#[pyfunction]
fn euler_form(py: Python<'_>, a: &PyMf, b: &PyMf) -> PyResult<i64> {
    same_ring(a, b)?;
    py.detach(|| homcalc::euler_form(&a.inner, &b.inner)).map_err(err)
}

/// Full verification of the collection starting at `offset`.
#[pyfunction]
#[pyo3(signature = (chain, offset = 0, margin = 3, cache_dir = None))]
fn verify_chain(
    py: Python<'_>,
    chain: &PyChain,
    offset: i64,
    margin: i64,
    cache_dir: Option<PathBuf>,
) -> PyResult<PyReport> {
    let cache = cache_dir.map(Cache::new);
    let opts = VerifyOptions { margin, cache: cache.as_ref(), ..VerifyOptions::default() };
    let inner = py.detach(|| verify::verify_main_theorem(&chain.inner, offset, &opts)).map_err(err)?;
    Ok(PyReport { inner })
}

#[pyfunction]
fn verify_invariants(py: Python<'_>, chain: &PyChain) -> PyReport {
    PyReport { inner: py.detach(|| verify::verify_invariants(&chain.inner)) }
}

#[pyfunction]
#[pyo3(signature = (chain, offset = 0))]
fn verify_triangles(py: Python<'_>, chain: &PyChain, offset: i64) -> PyResult<PyReport> {
    let inner = py.detach(|| verify::verify_triangles(&chain.inner, offset, true)).map_err(err)?;
    Ok(PyReport { inner })
}

#[pyfunction]
fn verify_reduction(chain: &PyChain) -> PyReport {
    PyReport { inner: verify::verify_reduction(&chain.inner) }
}

#[pymodule]
fn chainfact_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChain>()?;
    m.add_class::<PyMf>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(hom_dim, m)?)?;
    m.add_function(wrap_pyfunction!(hom_dim_p, m)?)?;
    m.add_function(wrap_pyfunction!(euler_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify_chain, m)?)?;
    m.add_function(wrap_pyfunction!(verify_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(verify_triangles, m)?)?;
    m.add_function(wrap_pyfunction!(verify_reduction, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
