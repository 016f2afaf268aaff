//! Python bindings for the beltrami engine.
//!
//! The module mirrors the command-line surface: charts are built by name,
//! symbolic results come back as canonical display strings, and structured
//! reports (claims, finite-type evidence) arrive as plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use beltrami::finitetype::claims::{
    self, claim_ids, is_documented_discrepancy, run_claim, ClaimOptions, DOCUMENTED_DISCREPANCIES,
};
use beltrami::finitetype::{finite_type_analysis, AnalysisOptions, TypeVerdict};
use beltrami::frames::AnyVec;
use beltrami::geometry::{
    self, make_anchor_ring, make_sphere, make_tube, parse_exact_number, resolve_chart, ChartKind,
    FormKind, Orientation, SurfaceChart,
};
use beltrami::numeric::ChartEvaluator;
use beltrami::operator::{BeltramiOp, DEFAULT_BUDGET};
use beltrami::symexpr::{canonicalize, pole_order, specialize, Expr, Symbol};
use beltrami::EngineError;

fn engine_err(e: EngineError) -> PyErr {
    match e {
        EngineError::ParseError(_)
        | EngineError::InvalidArgument(_)
        | EngineError::UnknownClaim(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    match v {
        serde_json::Value::Null => Ok(py.None()),
        serde_json::Value::Bool(b) => b.into_py_any(py),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        serde_json::Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, item) in map {
                d.set_item(k, json_to_py(py, item)?)?;
            }
            d.into_py_any(py)
        }
    }
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    json_to_py(py, &v)
}

/// A parametric chart with optional exact parameter values pinned.
#[pyclass(module = "beltrami_py")]
struct Surface {
    chart: SurfaceChart,
}

impl Surface {
    fn display(&self, e: &Expr) -> PyResult<String> {
        let pinned = specialize(
            e,
            self.chart.params.radius.as_ref(),
            self.chart.params.kappa.as_ref(),
        )
        .map_err(engine_err)?;
        Ok(format!("{}", canonicalize(&pinned).map_err(engine_err)?))
    }

    fn set_radius(&mut self, radius: Option<&str>) -> PyResult<()> {
        if let Some(r) = radius {
            self.chart.params.radius = Some(parse_exact_number(r).map_err(engine_err)?);
        }
        Ok(())
    }

    fn evaluator(&self) -> PyResult<ChartEvaluator> {
        ChartEvaluator::new(&self.chart).map_err(engine_err)
    }

    fn vec_rows(&self, py: Python<'_>, iterates: &[AnyVec]) -> PyResult<Py<PyAny>> {
        let rows = PyList::empty(py);
        for (i, v) in iterates.iter().enumerate() {
            let row = PyDict::new(py);
            row.set_item("order", i + 1)?;
            match v {
                AnyVec::Frame(f) => {
                    row.set_item("basis", "frame")?;
                    let comps = [("t", &f.a_t), ("h", &f.a_h), ("b", &f.a_b)];
                    let mut worst = (0u8, 0u8);
                    for (name, e) in comps {
                        row.set_item(name, self.display(e)?)?;
                        worst.0 = worst.0.max(pole_order(e, Symbol::Delta).map_err(engine_err)?);
                        worst.1 = worst.1.max(pole_order(e, Symbol::CosPhi).map_err(engine_err)?);
                    }
                    row.set_item("pole_delta", worst.0)?;
                    row.set_item("pole_cos", worst.1)?;
                }
                AnyVec::Ambient(a) => {
                    row.set_item("basis", "ambient")?;
                    for (name, e) in [("x", &a.x), ("y", &a.y), ("z", &a.z)] {
                        row.set_item(name, self.display(e)?)?;
                    }
                }
            }
            rows.append(row)?;
        }
        rows.into_py_any(py)
    }
}

#[pymethods]
impl Surface {
    /// Tube of the given exact radius (default 1/3) around a generic spine.
    #[staticmethod]
    #[pyo3(signature = (radius=None))]
    fn tube(radius: Option<&str>) -> PyResult<Surface> {
        let mut s = Surface { chart: make_tube() };
        s.set_radius(radius)?;
        Ok(s)
    }

    /// Torus around a circular spine of curvature `kappa` (default 1).
    #[staticmethod]
    #[pyo3(signature = (kappa=None, radius=None))]
    fn anchor_ring(kappa: Option<&str>, radius: Option<&str>) -> PyResult<Surface> {
        let mut s = Surface {
            chart: make_anchor_ring(),
        };
        s.set_radius(radius)?;
        if let Some(k) = kappa {
            s.chart.params.kappa = Some(parse_exact_number(k).map_err(engine_err)?);
        }
        Ok(s)
    }

    /// Round sphere; `outward=True` flips the normal away from the center.
    #[staticmethod]
    #[pyo3(signature = (radius=None, outward=false))]
    fn sphere(radius: Option<&str>, outward: bool) -> PyResult<Surface> {
        let orientation = if outward {
            Orientation::Outward
        } else {
            Orientation::Inward
        };
        let mut s = Surface {
            chart: make_sphere(orientation),
        };
        s.set_radius(radius)?;
        Ok(s)
    }

    /// Any builtin chart name ("tube", "anchor-ring", "sphere",
    /// "sphere-outward") or a path to a chart document.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Surface> {
        Ok(Surface {
            chart: resolve_chart(name).map_err(engine_err)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.chart.kind.name()
    }

    /// Components of a fundamental form ("I", "II", or "III") as canonical
    /// strings, with pinned parameters substituted.
    fn form(&self, py: Python<'_>, which: &str) -> PyResult<Py<PyAny>> {
        let kind = match which {
            "I" => FormKind::First,
            "II" => FormKind::Second,
            "III" => FormKind::Third,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown form {other:?}: expected \"I\", \"II\", or \"III\""
                )))
            }
        };
        let form = match kind {
            FormKind::First => geometry::first_form(&self.chart),
            FormKind::Second => geometry::second_form(&self.chart),
            FormKind::Third => geometry::third_form(&self.chart),
        }
        .map_err(engine_err)?;
        let d = PyDict::new(py);
        d.set_item("g11", self.display(&form.g11)?)?;
        d.set_item("g12", self.display(&form.g12)?)?;
        d.set_item("g22", self.display(&form.g22)?)?;
        d.set_item("det", self.display(&form.det())?)?;
        d.into_py_any(py)
    }

    fn gauss_curvature(&self) -> PyResult<String> {
        self.display(&geometry::gauss_curvature(&self.chart).map_err(engine_err)?)
    }

    fn mean_curvature(&self) -> PyResult<String> {
        self.display(&geometry::mean_curvature(&self.chart).map_err(engine_err)?)
    }

    /// Gauss map components in the chart's natural basis.
    fn gauss_map(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let n = geometry::gauss_map(&self.chart).map_err(engine_err)?;
        let d = PyDict::new(py);
        match n {
            AnyVec::Frame(f) => {
                d.set_item("basis", "frame")?;
                d.set_item("t", self.display(&f.a_t)?)?;
                d.set_item("h", self.display(&f.a_h)?)?;
                d.set_item("b", self.display(&f.a_b)?)?;
            }
            AnyVec::Ambient(a) => {
                d.set_item("basis", "ambient")?;
                d.set_item("x", self.display(&a.x)?)?;
                d.set_item("y", self.display(&a.y)?)?;
                d.set_item("z", self.display(&a.z)?)?;
            }
        }
        d.into_py_any(py)
    }

    /// Iterated second-form Laplacian of the Gauss map: rows for orders
    /// 1..=k with component strings and pole orders.
    #[pyo3(signature = (k=1, budget=None))]
    fn laplace_gauss_map(&self, py: Python<'_>, k: usize, budget: Option<usize>) -> PyResult<Py<PyAny>> {
        let op = BeltramiOp::new(&self.chart, FormKind::Second)
            .map_err(engine_err)?
            .with_budget(budget.unwrap_or(DEFAULT_BUDGET));
        let n = geometry::gauss_map(&self.chart).map_err(engine_err)?;
        let iterates = op.iterate(&n, k).map_err(engine_err)?;
        self.vec_rows(py, &iterates)
    }

    /// Rank/residual/pole evidence for the finite-type question, as a dict.
    #[pyo3(signature = (k_max, seed=0, points=None, budget=None, numeric=true))]
    fn finite_type(
        &self,
        py: Python<'_>,
        k_max: usize,
        seed: u64,
        points: Option<usize>,
        budget: Option<usize>,
        numeric: bool,
    ) -> PyResult<Py<PyAny>> {
        let mut opts = AnalysisOptions::default();
        opts.seed = seed;
        opts.allow_numeric = numeric;
        if let Some(p) = points {
            opts.points = p;
        }
        if let Some(b) = budget {
            opts.budget = b;
        }
        let evidence = finite_type_analysis(&self.chart, k_max, &opts).map_err(engine_err)?;
        let verdict_text = match &evidence.verdict {
            TypeVerdict::FiniteTypeCandidate(k) => format!("FiniteTypeCandidate({k})"),
            TypeVerdict::InfiniteTypeEvidence => "InfiniteTypeEvidence".to_string(),
        };
        let row = to_py(py, &evidence)?;
        row.bind(py)
            .cast::<PyDict>()?
            .set_item("verdict_text", verdict_text)?;
        Ok(row)
    }

    fn position(&self, u: f64, phi: f64) -> PyResult<(f64, f64, f64)> {
        let p = self.evaluator()?.position(u, phi);
        Ok((p[0], p[1], p[2]))
    }

    fn normal(&self, u: f64, phi: f64) -> PyResult<(f64, f64, f64)> {
        let n = self.evaluator()?.normal(u, phi);
        Ok((n[0], n[1], n[2]))
    }

    fn gauss_curvature_at(&self, u: f64, phi: f64) -> PyResult<f64> {
        Ok(self.evaluator()?.gauss_curvature(u, phi))
    }

    fn __repr__(&self) -> String {
        let mut parts = vec![format!("Surface(kind={:?}", self.chart.kind.name())];
        if let Some(r) = &self.chart.params.radius {
            parts.push(format!("radius={r}"));
        }
        if let Some(k) = &self.chart.params.kappa {
            parts.push(format!("kappa={k}"));
        }
        if self.chart.kind == ChartKind::Sphere
            && self.chart.orientation == Orientation::Outward
        {
            parts.push("outward".to_string());
        }
        parts.join(", ") + ")"
    }
}

/// Runs registered formula checks and returns one dict per claim.
#[pyfunction]
#[pyo3(signature = (claims=None, seed=0, budget=None))]
fn verify(
    py: Python<'_>,
    claims: Option<Vec<String>>,
    seed: u64,
    budget: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let mut opts = ClaimOptions::default();
    opts.seed = seed;
    if let Some(b) = budget {
        opts.budget = b;
    }
    let reports = match claims {
        Some(ids) => {
            let mut out = Vec::with_capacity(ids.len());
            for id in &ids {
                out.push(run_claim(id, &opts).map_err(engine_err)?);
            }
            out
        }
        None => claims::claim_registry_run(&opts),
    };
    let list = PyList::empty(py);
    for r in &reports {
        list.append(to_py(py, r)?)?;
    }
    list.into_py_any(py)
}

/// All registered claim ids, in registry order.
#[pyfunction]
fn list_claims() -> Vec<&'static str> {
    claim_ids().to_vec()
}

/// Claim ids whose printed reference formula disagrees with the engine.
#[pyfunction]
fn documented_discrepancies() -> Vec<&'static str> {
    DOCUMENTED_DISCREPANCIES.to_vec()
}

#[pyfunction]
fn is_documented(claim_id: &str) -> bool {
    is_documented_discrepancy(claim_id)
}

/// Remainder audit of the ring recurrence at derivative orders (m, n).
#[pyfunction]
fn eq13_check(py: Python<'_>, m: u32, n: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &claims::eq13_check(m, n).map_err(engine_err)?)
}

/// Leading coefficients a_k of the ring iterate chain, as exact strings.
#[pyfunction]
#[pyo3(signature = (k_max, budget=None))]
fn ring_lead_sequence(k_max: u32, budget: Option<usize>) -> PyResult<Vec<String>> {
    let seq = claims::ring_lead_sequence(k_max, budget.unwrap_or(DEFAULT_BUDGET))
        .map_err(engine_err)?;
    Ok(seq.iter().map(|q| q.to_string()).collect())
}

#[pymodule]
fn beltrami_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Surface>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(list_claims, m)?)?;
    m.add_function(wrap_pyfunction!(documented_discrepancies, m)?)?;
    m.add_function(wrap_pyfunction!(is_documented, m)?)?;
    m.add_function(wrap_pyfunction!(eq13_check, m)?)?;
    m.add_function(wrap_pyfunction!(ring_lead_sequence, m)?)?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    Ok(())
}
