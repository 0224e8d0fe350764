//! Python bindings.
//!
//! Small value types (`Phase`, `Group`, `CocycleSpec`) are native classes.
//! The heavier procedures take and return JSON strings in the same formats
//! the command-line tool reads and writes.

use majid_core::cocycle::{cocycle_counterexample, TableCochain3};
use majid_core::construct::{cartan_construction, standard_construction, CartanInput};
use majid_core::double::{abelian_counterexample, is_abelian_spec, majid_axiom_check};
use majid_core::resolution::{obstruction_check, verify_resolution};
use majid_core::rootdatum::{braiding_of_yd, build_yd_module, determine_a, verify_root_datum};
use majid_core::{classify, Budget, Diagram, Error, FinAbGroup, RootDatum};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::json;

create_exception!(majid, MajidError, PyException);
create_exception!(majid, BudgetError, MajidError);
create_exception!(majid, PreconditionError, MajidError);

fn err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::BudgetExceeded { .. } => BudgetError::new_err(msg),
        Error::InvalidInput(_)
        | Error::DimensionMismatch { .. }
        | Error::AsymmetricDiagram { .. }
        | Error::InvalidCartan(_) => PyValueError::new_err(msg),
        _ => PreconditionError::new_err(msg),
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn dump<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn budget(max_tuples: Option<u64>) -> Budget {
    Budget::new(max_tuples.unwrap_or(Budget::DEFAULT_TUPLES))
}

/// An element of Q/Z, stored as a reduced fraction in [0, 1).
#[pyclass(name = "Phase", frozen, skip_from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPhase(majid_core::Phase);

#[pymethods]
impl PyPhase {
    #[new]
    fn new(num: i64, den: u64) -> PyResult<Self> {
        if den == 0 {
            return Err(PyValueError::new_err("denominator must be positive"));
        }
        Ok(PyPhase(majid_core::Phase::new(num, den)))
    }

    #[getter]
    fn num(&self) -> u64 {
        self.0.num()
    }

    #[getter]
    fn den(&self) -> u64 {
        self.0.den()
    }

    fn order(&self) -> u64 {
        self.0.order()
    }

    fn __add__(&self, o: &PyPhase) -> PyPhase {
        PyPhase(self.0 + o.0)
    }

    fn __sub__(&self, o: &PyPhase) -> PyPhase {
        PyPhase(self.0 - o.0)
    }

    fn __neg__(&self) -> PyPhase {
        PyPhase(-self.0)
    }

    fn __mul__(&self, k: i64) -> PyPhase {
        PyPhase(self.0 * k)
    }

    fn __float__(&self) -> f64 {
        self.0.num() as f64 / self.0.den() as f64
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Phase({}, {})", self.0.num(), self.0.den())
    }
}

/// `Z_{m_1} x ... x Z_{m_n}`. Elements are tuples of exponents.
#[pyclass(name = "Group", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroup(FinAbGroup);

#[pymethods]
impl PyGroup {
    #[new]
    fn new(moduli: Vec<u64>) -> PyResult<Self> {
        FinAbGroup::new(moduli).map(PyGroup).map_err(err)
    }

    #[getter]
    fn moduli(&self) -> Vec<u64> {
        self.0.moduli().to_vec()
    }

    fn order(&self) -> u64 {
        self.0.order()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn exponent(&self) -> u64 {
        self.0.exponent()
    }

    fn is_invariant_factor(&self) -> bool {
        self.0.is_invariant_factor()
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        self.0.elements().map(|x| x.exps().to_vec()).collect()
    }

    fn mul(&self, x: Vec<i64>, y: Vec<i64>) -> PyResult<Vec<u64>> {
        let (x, y) = (self.0.elem(&x).map_err(err)?, self.0.elem(&y).map_err(err)?);
        Ok(self.0.mul(&x, &y).exps().to_vec())
    }

    fn __len__(&self) -> usize {
        self.0.order() as usize
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.0.moduli())
    }
}

/// Coefficient vector `a` of the normalized 3-cocycle Φ_a.
#[pyclass(name = "CocycleSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpec(majid_core::CocycleSpec);

#[pymethods]
impl PySpec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse(text).map(PySpec)
    }

    #[staticmethod]
    fn zero(group: &PyGroup) -> Self {
        PySpec(majid_core::CocycleSpec::zero(&group.0))
    }

    /// Every canonical spec on `group`, in a fixed order.
    #[staticmethod]
    fn enumerate(group: &PyGroup) -> Vec<PySpec> {
        majid_core::CocycleSpec::enumerate(&group.0)
            .map(PySpec)
            .collect()
    }

    #[staticmethod]
    fn count(group: &PyGroup) -> u128 {
        majid_core::CocycleSpec::count(&group.0)
    }

    fn to_json(&self) -> String {
        dump(&self.0)
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group().clone())
    }

    #[getter]
    fn a_l(&self) -> Vec<u64> {
        self.0.a_l().to_vec()
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn canonical(&self) -> PySpec {
        PySpec(self.0.canonical())
    }

    fn eval(&self, x: Vec<i64>, y: Vec<i64>, z: Vec<i64>) -> PyResult<PyPhase> {
        let g = self.0.group();
        let (x, y, z) = (
            g.elem(&x).map_err(err)?,
            g.elem(&y).map_err(err)?,
            g.elem(&z).map_err(err)?,
        );
        self.0.eval(&x, &y, &z).map(PyPhase).map_err(err)
    }

    /// Value table as JSON, last coordinate fastest.
    #[pyo3(signature = (budget=None))]
    fn tabulate(&self, budget: Option<u64>) -> PyResult<String> {
        let b = self::budget(budget);
        TableCochain3::tabulate(&self.0, &b)
            .map(|t| dump(&t))
            .map_err(err)
    }

    fn __eq__(&self, o: &PySpec) -> bool {
        self.0 == o.0
    }

    fn __repr__(&self) -> String {
        format!("CocycleSpec({})", dump(&self.0))
    }
}

/// Classifies a tabulated 3-cocycle. Returns the canonical spec.
#[pyfunction]
#[pyo3(signature = (table_json, budget=None))]
fn classify_table(table_json: &str, budget: Option<u64>) -> PyResult<PySpec> {
    let t: TableCochain3 = parse(table_json)?;
    classify(&t, &self::budget(budget)).map(PySpec).map_err(err)
}

/// Returns None for a cocycle, otherwise the failing tuple of elements.
#[pyfunction]
#[pyo3(signature = (table_json, budget=None))]
fn cocycle_counterexample_table(
    table_json: &str,
    budget: Option<u64>,
) -> PyResult<Option<Vec<Vec<u64>>>> {
    let t: TableCochain3 = parse(table_json)?;
    let hit = cocycle_counterexample(&t, &self::budget(budget)).map_err(err)?;
    Ok(hit.map(|h| h.iter().map(|x| x.exps().to_vec()).collect()))
}

/// Commutativity (formula and brute force) and the quasi-Hopf axioms.
#[pyfunction]
#[pyo3(signature = (spec, budget=None))]
fn double_check(spec: &PySpec, budget: Option<u64>) -> PyResult<String> {
    let b = self::budget(budget);
    let hit = abelian_counterexample(&spec.0, &b).map_err(err)?;
    let axioms = majid_axiom_check(&spec.0, &b).map_err(err)?;
    Ok(json!({
        "abelian": is_abelian_spec(&spec.0),
        "abelian_bruteforce": hit.is_none(),
        "axioms": axioms,
        "axioms_hold": axioms.all_pass(),
    })
    .to_string())
}

/// Resolution report for abelian specs, obstruction report otherwise.
#[pyfunction]
#[pyo3(signature = (spec, budget=None))]
fn resolve(spec: &PySpec, budget: Option<u64>) -> PyResult<String> {
    if spec.0.is_abelian() {
        verify_resolution(&spec.0, &self::budget(budget))
            .map(|r| dump(&r))
            .map_err(err)
    } else {
        obstruction_check(&spec.0).map(|r| dump(&r)).map_err(err)
    }
}

#[pyfunction]
#[pyo3(signature = (datum_json, require_connected=false))]
fn verify_datum(datum_json: &str, require_connected: bool) -> PyResult<String> {
    let d: RootDatum = parse(datum_json)?;
    Ok(dump(&verify_root_datum(&d, require_connected)))
}

/// The coefficient vector forced by a root datum, or None when the congruences fail.
#[pyfunction]
fn determine_cocycle(datum_json: &str) -> PyResult<Option<PySpec>> {
    let d: RootDatum = parse(datum_json)?;
    determine_a(&d).map(|a| a.map(PySpec)).map_err(err)
}

#[pyfunction]
fn yd_module(datum_json: &str) -> PyResult<String> {
    let d: RootDatum = parse(datum_json)?;
    let v = build_yd_module(&d).map_err(err)?;
    let braiding = braiding_of_yd(&v);
    Ok(json!({
        "module": v,
        "braiding": braiding,
        "roundtrip": &braiding == d.diagram(),
        "descends": v.descends(),
        "support_group": v.support_group(),
    })
    .to_string())
}

#[pyfunction]
fn construct_cartan(input_json: &str) -> PyResult<String> {
    let input: CartanInput = parse(input_json)?;
    cartan_construction(&input).map(|c| dump(&c)).map_err(err)
}

#[pyfunction]
fn construct_standard(diagram_json: &str) -> PyResult<String> {
    let d: Diagram = parse(diagram_json)?;
    standard_construction(&d).map(|c| dump(&c)).map_err(err)
}

#[pymodule]
fn majid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("MajidError", py.get_type::<MajidError>())?;
    m.add("BudgetError", py.get_type::<BudgetError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add_class::<PyPhase>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PySpec>()?;
    m.add_function(wrap_pyfunction!(classify_table, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle_counterexample_table, m)?)?;
    m.add_function(wrap_pyfunction!(double_check, m)?)?;
    m.add_function(wrap_pyfunction!(resolve, m)?)?;
    m.add_function(wrap_pyfunction!(verify_datum, m)?)?;
    m.add_function(wrap_pyfunction!(determine_cocycle, m)?)?;
    m.add_function(wrap_pyfunction!(yd_module, m)?)?;
    m.add_function(wrap_pyfunction!(construct_cartan, m)?)?;
    m.add_function(wrap_pyfunction!(construct_standard, m)?)?;
    Ok(())
}
