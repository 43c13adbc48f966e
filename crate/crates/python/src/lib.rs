//! Python bindings for prokit.

use std::sync::Arc;

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use prokit::analysis::{
    bounded_torsion_index, default_m_max, gm_profile, lipman_profile, weak_profile, Entry, Profile,
};
use prokit::complex::{cech_cohomology, cech_homology};
use prokit::harness::report::emit_report;
use prokit::harness::run::run_task;
use prokit::harness::suites::run_suite;
use prokit::harness::task::{parse_spec, Format};
use prokit::linalg::{hnf, snf, IntMatrix};
use prokit::module::FgModule;
use prokit::ring::{FiniteRing, RingElement};

create_exception!(prokit, ProkitError, PyException);

fn err(e: prokit::Error) -> PyErr {
    ProkitError::new_err(e.to_string())
}

type Rows = Vec<Vec<BigInt>>;

fn matrix(rows: Rows) -> PyResult<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(ProkitError::new_err("rows have different lengths"));
    }
    Ok(IntMatrix::from_rows(cols, &rows))
}

#[derive(FromPyObject)]
enum ElementArg {
    Int(BigInt),
    Coords(Vec<BigInt>),
}

#[pyclass(name = "Ring", module = "prokit", frozen, from_py_object)]
#[derive(Clone)]
struct PyRing {
    inner: Arc<FiniteRing>,
    x: Option<RingElement>,
}

impl PyRing {
    fn plain(r: FiniteRing) -> Self {
        PyRing { inner: Arc::new(r), x: None }
    }

    fn el(&self, a: ElementArg) -> PyResult<RingElement> {
        match a {
            ElementArg::Int(k) => Ok(self.inner.from_int(&k)),
            ElementArg::Coords(v) if v.len() == self.inner.rank() => Ok(self.inner.reduce(&v)),
            ElementArg::Coords(v) => Err(ProkitError::new_err(format!(
                "element has {} coordinates, ring has rank {}",
                v.len(),
                self.inner.rank()
            ))),
        }
    }

    fn els(&self, xs: Vec<ElementArg>) -> PyResult<Vec<RingElement>> {
        xs.into_iter().map(|a| self.el(a)).collect()
    }
}

#[pymethods]
impl PyRing {
    #[staticmethod]
    fn zmod(n: u64) -> PyResult<Self> {
        FiniteRing::zmod(n).map(Self::plain).map_err(err)
    }

    /// `∏_{N ≤ n_max} Z/2^N` with the distinguished element `x = (2, 2, ...)`.
    #[staticmethod]
    fn truncated_two_power(n_max: usize) -> PyResult<Self> {
        let t = FiniteRing::truncated_two_power(n_max).map_err(err)?;
        Ok(PyRing { inner: Arc::new(t.ring), x: Some(t.x) })
    }

    #[staticmethod]
    fn truncated_polynomial(q: u64, n: usize) -> PyResult<Self> {
        let t = FiniteRing::truncated_polynomial(q, n).map_err(err)?;
        Ok(PyRing { inner: Arc::new(t.ring), x: Some(t.x) })
    }

    #[staticmethod]
    fn polynomial_quotient(q: u64, coeffs: Vec<i64>) -> PyResult<Self> {
        let t = FiniteRing::polynomial_quotient(q, &coeffs).map_err(err)?;
        Ok(PyRing { inner: Arc::new(t.ring), x: Some(t.x) })
    }

    #[staticmethod]
    fn product(parts: Vec<PyRing>) -> Self {
        let rings: Vec<FiniteRing> = parts.iter().map(|p| (*p.inner).clone()).collect();
        Self::plain(FiniteRing::product(&rings))
    }

    #[getter]
    fn order(&self) -> BigInt {
        self.inner.order()
    }

    #[getter]
    fn factors(&self) -> Vec<BigInt> {
        self.inner.group().factors().to_vec()
    }

    #[getter]
    fn x(&self) -> Option<RingElement> {
        self.x.clone()
    }

    fn one(&self) -> RingElement {
        self.inner.one()
    }

    fn element(&self, a: ElementArg) -> PyResult<RingElement> {
        self.el(a)
    }

    fn add(&self, a: ElementArg, b: ElementArg) -> PyResult<RingElement> {
        Ok(self.inner.add(&self.el(a)?, &self.el(b)?))
    }

    fn mul(&self, a: ElementArg, b: ElementArg) -> PyResult<RingElement> {
        Ok(self.inner.mul(&self.el(a)?, &self.el(b)?))
    }

    fn pow(&self, a: ElementArg, k: u64) -> PyResult<RingElement> {
        Ok(self.inner.pow(&self.el(a)?, k))
    }

    fn is_unit(&self, a: ElementArg) -> PyResult<bool> {
        Ok(self.inner.is_unit(&self.el(a)?))
    }

    fn is_local(&self) -> bool {
        self.inner.is_local()
    }

    fn is_covering(&self, fs: Vec<ElementArg>) -> PyResult<bool> {
        Ok(self.inner.is_covering(&self.els(fs)?))
    }

    fn primitive_idempotents(&self) -> PyResult<Vec<RingElement>> {
        self.inner.primitive_idempotents().map_err(err)
    }

    /// Failed axioms, empty when the structure constants define a commutative ring.
    fn check_axioms(&self) -> Vec<String> {
        self.inner.check_axioms().iter().map(ToString::to_string).collect()
    }

    fn __repr__(&self) -> String {
        format!("Ring(factors={:?})", self.inner.group().factors())
    }
}

#[pyclass(name = "Module", module = "prokit", frozen, from_py_object)]
#[derive(Clone)]
struct PyModule_ {
    ring: PyRing,
    inner: FgModule,
}

impl PyModule_ {
    fn wrap(&self, m: FgModule) -> Self {
        PyModule_ { ring: self.ring.clone(), inner: m }
    }
}

#[pymethods]
impl PyModule_ {
    #[staticmethod]
    fn ring_module(ring: PyRing) -> Self {
        let inner = FgModule::ring_module(&ring.inner);
        PyModule_ { ring, inner }
    }

    #[staticmethod]
    fn free(ring: PyRing, rank: usize) -> Self {
        let inner = FgModule::free(&ring.inner, rank).module;
        PyModule_ { ring, inner }
    }

    /// `R/I` for the ideal generated by `gens`.
    #[staticmethod]
    fn cyclic(ring: PyRing, gens: Vec<ElementArg>) -> PyResult<Self> {
        let i = ring.inner.ideal(&ring.els(gens)?);
        let inner = FgModule::cyclic(&ring.inner, &i);
        Ok(PyModule_ { ring, inner })
    }

    #[staticmethod]
    fn ideal(ring: PyRing, gens: Vec<ElementArg>) -> PyResult<Self> {
        let r = FgModule::ring_module(&ring.inner);
        let span = r.ideal_image_of(&ring.els(gens)?);
        let inner = r.submodule_as_module(&span).module;
        Ok(PyModule_ { ring, inner })
    }

    #[staticmethod]
    fn direct_sum(parts: Vec<PyModule_>) -> PyResult<Self> {
        let first = parts.first().ok_or_else(|| ProkitError::new_err("empty direct sum"))?;
        let ring = first.ring.clone();
        let ms: Vec<FgModule> = parts.iter().map(|p| p.inner.clone()).collect();
        let inner = FgModule::direct_sum(&ms, &ring.inner).module;
        Ok(PyModule_ { ring, inner })
    }

    #[getter]
    fn ring(&self) -> PyRing {
        self.ring.clone()
    }

    #[getter]
    fn order(&self) -> BigInt {
        self.inner.order()
    }

    #[getter]
    fn factors(&self) -> Vec<BigInt> {
        self.inner.group().factors().to_vec()
    }

    fn matlis_dual(&self) -> Self {
        self.wrap(self.inner.matlis_dual())
    }

    fn hom(&self, target: &PyModule_) -> Self {
        self.wrap(self.inner.hom_module(&target.inner))
    }

    fn tensor(&self, other: &PyModule_) -> Self {
        self.wrap(self.inner.tensor_module(&other.inner))
    }

    fn check_axioms(&self) -> Vec<String> {
        self.inner.check_axioms()
    }

    fn cech_cohomology(&self, xs: Vec<ElementArg>, i: usize) -> PyResult<Self> {
        let xs = self.ring.els(xs)?;
        cech_cohomology(&xs, &self.inner, i).map(|m| self.wrap(m)).map_err(err)
    }

    fn cech_homology(&self, xs: Vec<ElementArg>, i: usize) -> PyResult<Self> {
        let xs = self.ring.els(xs)?;
        cech_homology(&xs, &self.inner, i).map(|m| self.wrap(m)).map_err(err)
    }

    /// `(c, chain)`: the stabilization index of `(0 :_M x^j)` and the orders along the way.
    fn bounded_torsion_index(&self, x: ElementArg) -> PyResult<(usize, Vec<BigInt>)> {
        let t = bounded_torsion_index(&self.inner, &self.ring.el(x)?);
        Ok((t.c, t.chain))
    }

    #[pyo3(signature = (kind, xs, n_max = 3, m_max = None, i_max = None))]
    fn profile(
        &self,
        kind: &str,
        xs: Vec<ElementArg>,
        n_max: u64,
        m_max: Option<u64>,
        i_max: Option<usize>,
    ) -> PyResult<PyProfile> {
        let xs = self.ring.els(xs)?;
        if n_max == 0 {
            return Err(ProkitError::new_err("n_max must be positive"));
        }
        let m_max = m_max.unwrap_or_else(|| default_m_max(&self.inner, xs.len(), n_max));
        let p = match kind {
            "lipman" => lipman_profile(&self.inner, &xs, n_max, m_max),
            "greenlees_may" => gm_profile(&self.inner, &xs, n_max, m_max),
            "weak" => {
                let i_max = i_max.unwrap_or(xs.len());
                if i_max == 0 || i_max > xs.len() {
                    return Err(ProkitError::new_err(format!("i_max must lie in 1..={}", xs.len())));
                }
                weak_profile(&self.inner, &xs, n_max, m_max, i_max)
            }
            other => return Err(ProkitError::new_err(format!("unknown profile kind {other:?}"))),
        };
        Ok(PyProfile { inner: p })
    }

    fn __repr__(&self) -> String {
        format!("Module(factors={:?})", self.inner.group().factors())
    }
}

#[pyclass(name = "Profile", module = "prokit", frozen)]
struct PyProfile {
    inner: Profile,
}

#[pymethods]
impl PyProfile {
    #[getter]
    fn n_max(&self) -> u64 {
        self.inner.n_max
    }

    #[getter]
    fn m_max(&self) -> u64 {
        self.inner.m_max
    }

    #[getter]
    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees.clone()
    }

    fn witness(&self, i: usize, n: u64) -> Option<u64> {
        self.inner.witness(i, n)
    }

    /// Rows by degree, `None` where the search bound was exhausted.
    fn table(&self) -> Vec<Vec<Option<u64>>> {
        self.inner
            .entries
            .iter()
            .map(|row| row.iter().map(Entry::witness).collect())
            .collect()
    }

    fn is_conclusive(&self) -> bool {
        self.inner.is_conclusive()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("profile serializes")
    }
}

/// `(D, U, V)` with `D = U·A·V` in Smith normal form.
#[pyfunction]
fn smith_normal_form(a: Rows) -> PyResult<(Rows, Rows, Rows)> {
    let (d, u, v) = snf(&matrix(a)?);
    Ok((d.row_vecs(), u.row_vecs(), v.row_vecs()))
}

/// `(H, U)` with `H = U·A` in row Hermite normal form.
#[pyfunction]
fn hermite_normal_form(a: Rows) -> PyResult<(Rows, Rows)> {
    let (h, u) = hnf(&matrix(a)?);
    Ok((h.row_vecs(), u.row_vecs()))
}

/// Runs a task file's text; returns `(exit_code, rendered_report)`.
#[pyfunction]
#[pyo3(signature = (text, format = "json", seed = None))]
fn run(py: Python<'_>, text: &str, format: &str, seed: Option<u64>) -> PyResult<(i32, String)> {
    let format = match format {
        "json" => Format::Json,
        "csv" => Format::Csv,
        "text" => Format::Text,
        other => return Err(ProkitError::new_err(format!("unknown format {other:?}"))),
    };
    let mut t = parse_spec(text).map_err(err)?;
    if seed.is_some() {
        t.seed = seed;
    }
    let report = py.detach(|| run_task(&t)).body();
    let out = String::from_utf8(emit_report(&report, format)).expect("reports are utf-8");
    Ok((report.exit_code(), out))
}

/// Runs a named randomized suite; returns `(passed, outcome_json)`.
#[pyfunction]
#[pyo3(signature = (name, seed = 0, count = None))]
fn suite(py: Python<'_>, name: &str, seed: u64, count: Option<usize>) -> PyResult<(bool, String)> {
    let o = py.detach(|| run_suite(name, seed, count)).map_err(err)?;
    Ok((o.passed(), serde_json::to_string(&o).expect("outcome serializes")))
}

#[pymodule(name = "prokit")]
pub fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ProkitError", m.py().get_type::<ProkitError>())?;
    m.add_class::<PyRing>()?;
    m.add_class::<PyModule_>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(suite, m)?)?;
    Ok(())
}
