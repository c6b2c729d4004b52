//! Python bindings: polytopes and zonotopes from fixtures or raw data,
//! angle-vector evaluation under the builtin valuations, and the exact
//! combinatorial invariants (Whitney numbers, cocharacteristic polynomials,
//! ab-index spanning ranks).

use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use anglekit::angle::ConeAngleSpec;
use anglekit::error::Error;
use anglekit::vectors::{check_gram, AngleSystem, Side};
use anglekit::zonotope::{
    cocharacteristic, cocharacteristic_generic, flat_lattice, whitney_numbers,
    FlatOrientation, GeneratorConfiguration,
};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "interior" => Ok(Side::Interior),
        "exterior" => Ok(Side::Exterior),
        other => Err(PyValueError::new_err(format!(
            "side must be `interior` or `exterior`, got `{other}`"
        ))),
    }
}

/// A convex polytope with exact rational vertices.
#[pyclass]
struct Polytope {
    inner: Arc<anglekit::polytope::Polytope>,
}

#[pymethods]
impl Polytope {
    /// Builds from float vertices (converted exactly to rationals).
    #[new]
    fn new(vertices: Vec<Vec<f64>>) -> PyResult<Self> {
        let json = serde_json::json!({ "vertices": vertices });
        let p = anglekit::polytope::Polytope::from_json(&json).map_err(py_err)?;
        Ok(Polytope { inner: Arc::new(p) })
    }

    /// Builds a named fixture: "cube 3", "simplex 4", "cross 4", "ngon 6",
    /// "pyramid 3", "generic 3 5 1", "square", "hexagon".
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let f = anglekit::fixtures::fixture(name).map_err(py_err)?;
        Ok(Polytope { inner: Arc::new(f.polytope) })
    }

    /// Parses {"vertices": [["1/2", 1], ...]} with exact rational strings.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let json: serde_json::Value =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let p = anglekit::polytope::Polytope::from_json(&json).map_err(py_err)?;
        Ok(Polytope { inner: Arc::new(p) })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn is_belt_polytope(&self) -> bool {
        self.inner.is_belt_polytope()
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertices().len()
    }

    /// Interior or exterior angle vector under a builtin valuation name
    /// ("standard", "body", "point_limit") as a list of
    /// (value, stderr, exact) triples.
    #[pyo3(signature = (side = "interior", spec = "standard", samples = 200_000, seed = 0, workers = 1))]
    fn angle_vector(
        &self,
        side: &str,
        spec: &str,
        samples: u64,
        seed: u64,
        workers: usize,
    ) -> PyResult<Vec<(f64, f64, bool)>> {
        let side = parse_side(side)?;
        let system = self.system(spec, samples, seed, workers)?;
        Ok(system
            .angle_vector(side)
            .entries
            .iter()
            .map(|e| (e.value, e.stderr, e.exact))
            .collect())
    }

    /// Flag-angle vector as a list of (dimension set, value, stderr)
    /// triples, one per subset of face dimensions.
    #[pyo3(signature = (side = "interior", spec = "standard", samples = 200_000, seed = 0, workers = 1))]
    fn flag_angle_vector(
        &self,
        side: &str,
        spec: &str,
        samples: u64,
        seed: u64,
        workers: usize,
    ) -> PyResult<Vec<(Vec<usize>, f64, f64)>> {
        let side = parse_side(side)?;
        let system = self.system(spec, samples, seed, workers)?;
        Ok(system
            .flag_angle_vector(side)
            .entries
            .iter()
            .map(|(s, e)| (s.clone(), e.value, e.stderr))
            .collect())
    }

    /// Checks Gram's relation; returns (computed, sigma, pass).
    #[pyo3(signature = (spec = "standard", samples = 200_000, seed = 0, workers = 1))]
    fn gram_check(
        &self,
        spec: &str,
        samples: u64,
        seed: u64,
        workers: usize,
    ) -> PyResult<(f64, f64, bool)> {
        let spec = self.resolve_spec(spec)?;
        let report =
            check_gram(&spec, &self.inner, samples, seed, workers).map_err(py_err)?;
        let item = &report.items[0];
        Ok((item.computed, item.sigma, item.pass))
    }
}

impl Polytope {
    fn resolve_spec(&self, name: &str) -> PyResult<ConeAngleSpec> {
        anglekit::fixtures::angle_spec(name, self.inner.ambient_dim()).map_err(py_err)
    }

    fn system(
        &self,
        spec: &str,
        samples: u64,
        seed: u64,
        workers: usize,
    ) -> PyResult<AngleSystem> {
        let spec = self.resolve_spec(spec)?;
        AngleSystem::build(&spec, self.inner.clone(), samples, seed, workers).map_err(py_err)
    }
}

fn configuration_from(generators: Vec<Vec<f64>>) -> PyResult<GeneratorConfiguration> {
    let json = serde_json::json!({ "generators": generators });
    GeneratorConfiguration::from_json(&json).map_err(py_err)
}

/// Whitney numbers (second kind, first kind) of the lattice of flats of a
/// generator configuration.
#[pyfunction]
fn zonotope_whitney_numbers(generators: Vec<Vec<f64>>) -> PyResult<(Vec<i64>, Vec<i64>)> {
    let cfg = configuration_from(generators)?;
    let lattice = flat_lattice(&cfg, FlatOrientation::ByInclusion);
    Ok(whitney_numbers(&lattice))
}

/// Cocharacteristic polynomial coefficients (t^0 .. t^d) of the lattice of
/// flats of a configuration.
#[pyfunction]
fn zonotope_cocharacteristic(generators: Vec<Vec<f64>>) -> PyResult<Vec<i64>> {
    let cfg = configuration_from(generators)?;
    let lattice = flat_lattice(&cfg, FlatOrientation::ByInclusion);
    cocharacteristic(&lattice).map_err(py_err)
}

/// Cocharacteristic polynomial of d+j generic vectors via the recursion.
#[pyfunction]
fn generic_cocharacteristic(d: usize, j: usize) -> Vec<i64> {
    cocharacteristic_generic(d, j)
}

/// The zonotope of a configuration as a Polytope.
#[pyfunction]
fn zonotope(generators: Vec<Vec<f64>>) -> PyResult<Polytope> {
    let cfg = configuration_from(generators)?;
    let p = anglekit::zonotope::zonotope(&cfg).map_err(py_err)?;
    Ok(Polytope { inner: Arc::new(p) })
}

/// ab-index of the lattice of flats of a configuration, as {word: coeff}.
#[pyfunction]
fn zonotope_ab_index(generators: Vec<Vec<f64>>) -> PyResult<BTreeMap<String, i64>> {
    let cfg = configuration_from(generators)?;
    let lattice = flat_lattice(&cfg, FlatOrientation::ByInclusion);
    let psi = anglekit::abindex::ab_index(lattice.poset());
    Ok(psi.terms().iter().map(|(w, c)| (w.to_string(), *c)).collect())
}

/// Exact rank of the ab-index coefficient matrix of the {E, M∘E}^d family;
/// full spanning means the rank equals 2^d.
#[pyfunction]
fn ab_spanning_rank(d: usize) -> PyResult<(usize, usize)> {
    let exp = anglekit::abindex::spanning_experiment(d).map_err(py_err)?;
    Ok((exp.rank, exp.expected_rank))
}

#[pymodule]
fn anglekit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Polytope>()?;
    m.add_function(wrap_pyfunction!(zonotope, m)?)?;
    m.add_function(wrap_pyfunction!(zonotope_whitney_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(zonotope_cocharacteristic, m)?)?;
    m.add_function(wrap_pyfunction!(generic_cocharacteristic, m)?)?;
    m.add_function(wrap_pyfunction!(zonotope_ab_index, m)?)?;
    m.add_function(wrap_pyfunction!(ab_spanning_rank, m)?)?;
    Ok(())
}
