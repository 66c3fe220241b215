//! Python bindings. Handles wrap memoizing, single-threaded caches, so every
//! class is `unsendable`.

use std::rc::Rc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use zhu_core::context::AlgebraContext;
use zhu_core::linalg::SparseVec;
use zhu_core::rational::{grade_string, parse_grade, parse_q, to_fraction_string, Grade, Q};
use zhu_core::report::IdentityReport;
use zhu_core::twisted::{self, verify_commutator, verify_twisted_jacobi, verify_weak_associativity, TwistedModule};
use zhu_core::zhu::ZhuAlgebra;

create_exception!(zhu_py, TruncationError, PyException, "A result depends on states beyond the truncation depth.");

fn err(e: zhu_core::Error) -> PyErr {
    match e {
        zhu_core::Error::Truncation { .. } | zhu_core::Error::DegreeCap { .. } => TruncationError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Q> {
    parse_q(&x.str()?.to_string()).map_err(err)
}

fn report_dict<'py>(py: Python<'py>, r: &IdentityReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("identity", &r.identity_name)?;
    d.set_item("instance", &r.instance)?;
    d.set_item("lhs", &r.lhs)?;
    d.set_item("rhs", &r.rhs)?;
    d.set_item("equal", r.equal)?;
    d.set_item("checked", r.checked)?;
    d.set_item("excluded", r.excluded)?;
    Ok(d)
}

/// A simple Lie algebra with a diagram automorphism and a nilpotent `e`.
#[pyclass(unsendable, name = "Algebra", module = "zhu_py")]
struct PyAlgebra {
    cx: Rc<AlgebraContext>,
}

#[pymethods]
impl PyAlgebra {
    #[new]
    #[pyo3(signature = (algebra, mu = "id", e = None))]
    fn new(algebra: &str, mu: &str, e: Option<&str>) -> PyResult<Self> {
        Ok(Self {
            cx: Rc::new(AlgebraContext::new(algebra, mu, e).map_err(err)?),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.cx.g.dim()
    }

    #[getter]
    fn order(&self) -> usize {
        self.cx.order()
    }

    #[getter]
    fn fixed_dim(&self) -> usize {
        self.cx.ab.fixed.len()
    }

    #[getter]
    fn dual_coxeter(&self) -> i64 {
        self.cx.dual_coxeter()
    }

    /// Adapted basis labels with their eigenvalue classes.
    fn basis(&self) -> Vec<(String, usize)> {
        (0..self.cx.ab.dim()).map(|a| (self.cx.ab.label(a).to_string(), self.cx.ab.class(a))).collect()
    }

    fn bracket(&self, x: &str, y: &str) -> PyResult<String> {
        let g = &self.cx.g;
        let (a, b) = (g.parse_element(x).map_err(err)?, g.parse_element(y).map_err(err)?);
        Ok(g.element_string(&g.bracket(&a, &b)))
    }

    fn form(&self, x: &str, y: &str) -> PyResult<String> {
        let g = &self.cx.g;
        let (a, b) = (g.parse_element(x).map_err(err)?, g.parse_element(y).map_err(err)?);
        Ok(to_fraction_string(&g.invariant_form(&a, &b)))
    }

    fn to_json(&self) -> String {
        self.cx.g.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Algebra({}, T = {}, e = {})", self.cx.g.type_label(), self.cx.order(), self.cx.g.element_string(&self.cx.aut.e))
    }
}

/// The truncated twisted Zhu algebra of `V_g(0, ℓ)`.
#[pyclass(unsendable, name = "Zhu", module = "zhu_py")]
struct PyZhu {
    cx: Rc<AlgebraContext>,
    z: ZhuAlgebra,
}

impl PyZhu {
    fn state(&self, s: &str) -> PyResult<SparseVec> {
        self.cx.parse_state(self.z.v(), s).map_err(err)
    }
}

#[pymethods]
impl PyZhu {
    #[new]
    #[pyo3(signature = (algebra, level, depth = None))]
    fn new(algebra: &PyAlgebra, level: &Bound<'_, PyAny>, depth: Option<i64>) -> PyResult<Self> {
        let z = ZhuAlgebra::new(algebra.cx.ab.clone(), rational(level)?, depth).map_err(err)?;
        Ok(Self { cx: algebra.cx.clone(), z })
    }

    #[getter]
    fn depth(&self) -> i64 {
        self.z.depth
    }

    /// Class of a state such as `e(-1)f(-1)1`.
    fn reduce(&self, u: &str) -> PyResult<String> {
        let c = self.z.reduce(&self.state(u)?).map_err(err)?;
        Ok(self.z.class_string(&c))
    }

    fn product(&self, u: &str, v: &str) -> PyResult<String> {
        let p = self.z.star(&self.state(u)?, &self.state(v)?).map_err(err)?;
        Ok(self.z.class_string(&self.z.reduce(&p).map_err(err)?))
    }

    /// `i(x)^k` for `x` in the fixed subalgebra.
    fn power_of_i(&self, x: &str, k: usize) -> PyResult<String> {
        let g = self.cx.adapted(x).map_err(err)?;
        let c = self.z.reduce(&self.z.i_vector(&g).map_err(err)?).map_err(err)?;
        Ok(self.z.class_string(&self.z.power(&c, k).map_err(err)?))
    }

    fn quotient_dims(&self) -> PyResult<Vec<usize>> {
        self.z.quotient_dims().map_err(err)
    }

    fn map_i_span_dims(&self, max_degree: usize) -> PyResult<Vec<(usize, usize, usize)>> {
        self.z.map_i_span_dims(max_degree).map_err(err)
    }

    fn verify_associativity<'py>(&self, py: Python<'py>, a: &str, b: &str, c: &str) -> PyResult<Bound<'py, PyDict>> {
        let r = self.z.verify_associativity(&self.state(a)?, &self.state(b)?, &self.state(c)?).map_err(err)?;
        report_dict(py, &r)
    }
}

/// A `σ`-twisted module `V(λ, ℓ)` or its simple quotient, truncated at `depth`.
#[pyclass(unsendable, name = "TwistedModule", module = "zhu_py")]
struct PyTwistedModule {
    cx: Rc<AlgebraContext>,
    tm: TwistedModule,
}

#[pymethods]
impl PyTwistedModule {
    #[new]
    #[pyo3(signature = (algebra, weight, level, depth = "2", simple = false, v_depth = 3))]
    fn new(algebra: &PyAlgebra, weight: Vec<i64>, level: &Bound<'_, PyAny>, depth: &str, simple: bool, v_depth: i64) -> PyResult<Self> {
        let level = rational(level)?;
        let depth = parse_grade(depth).map_err(err)?;
        let tm = if simple {
            TwistedModule::simple(&algebra.cx, &weight, &level, depth, v_depth)
        } else {
            TwistedModule::verma(&algebra.cx, &weight, &level, depth, v_depth)
        }
        .map_err(err)?;
        Ok(Self { cx: algebra.cx.clone(), tm })
    }

    fn graded_dims(&self) -> Vec<(String, usize)> {
        self.tm.graded_dims().into_iter().map(|(d, n)| (grade_string(d), n)).collect()
    }

    /// Runs `twisted-jacobi`, `commutator` or `weak-assoc` for `u, v` (states of `V`)
    /// on all module states up to `source_depth`.
    #[pyo3(signature = (identity, u, v, source_depth = "0", window = 2))]
    fn verify<'py>(&self, py: Python<'py>, identity: &str, u: &str, v: &str, source_depth: &str, window: i64) -> PyResult<Bound<'py, PyDict>> {
        let x = self.cx.parse_state(self.tm.v(), u).map_err(err)?;
        let y = self.cx.parse_state(self.tm.v(), v).map_err(err)?;
        let ws = self.tm.basis_states(parse_grade(source_depth).map_err(err)?);
        let r = match identity {
            "twisted-jacobi" => verify_twisted_jacobi(&self.tm, &x, &y, &ws, window),
            "commutator" => verify_commutator(&self.tm, &x, &y, &ws, window),
            "weak-assoc" => verify_weak_associativity(&self.tm, &x, &y, &ws, window),
            other => return Err(PyValueError::new_err(format!("unknown identity {other:?}"))),
        }
        .map_err(err)?;
        report_dict(py, &r)
    }

    /// Dimension of the lowest-weight space `Ω` in the top.
    fn omega_dim(&self) -> PyResult<usize> {
        Ok(self.tm.omega_subspace(Grade::from_integer(0)).map_err(err)?.dim())
    }
}

/// Weights with coordinates `<= bound` certified admissible at `level`.
#[pyfunction]
#[pyo3(signature = (algebra, level, depth = "1", bound = 2))]
fn classify(algebra: &PyAlgebra, level: &Bound<'_, PyAny>, depth: &str, bound: i64) -> PyResult<Vec<Vec<i64>>> {
    let depth = parse_grade(depth).map_err(err)?;
    let list = twisted::classify(&algebra.cx, &rational(level)?, depth, bound).map_err(err)?;
    Ok(twisted::admissible_weights(&list))
}

#[pymodule]
fn zhu_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyZhu>()?;
    m.add_class::<PyTwistedModule>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add("TruncationError", m.py().get_type::<TruncationError>())?;
    Ok(())
}
