//! Python bindings for `latori`.

use std::sync::Arc;

use latori::catalog::{catalog_get, list};
use latori::classify::SearchOptions;
use latori::cohomology::CohomologyProfile;
use latori::format::LatticeFile;
use latori::lattice::{direct_sum, dual};
use latori::report::{classify_document, to_json};
use latori::{FiniteMatrixGroup, GLattice, IntMatrix, Mode, Status, Verdict, DEFAULT_ORDER_CAP};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: latori::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn mode(name: &str) -> PyResult<Mode> {
    match name {
        "strict" => Ok(Mode::Strict),
        "paper-literal" | "paper_literal" => Ok(Mode::PaperLiteral),
        other => Err(PyValueError::new_err(format!("unknown mode `{}`", other))),
    }
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Yes => "yes",
        Status::No => "no",
        Status::Unknown => "unknown",
    }
}

/// `[(subgroup element indices, group text)]`.
fn profile(p: CohomologyProfile) -> Vec<(Vec<usize>, String)> {
    p.entries.into_iter().map(|(h, g)| (h.members().to_vec(), g.to_string())).collect()
}

/// A lattice with a finite group action.
#[pyclass(name = "Lattice", frozen)]
struct PyLattice {
    inner: GLattice,
}

#[pymethods]
impl PyLattice {
    /// Natural lattice of the group generated by `generators` (square integer matrices).
    #[new]
    #[pyo3(signature = (generators, rank=None, cap=DEFAULT_ORDER_CAP))]
    fn new(generators: Vec<Vec<Vec<i64>>>, rank: Option<usize>, cap: usize) -> PyResult<Self> {
        let rank = rank.or_else(|| generators.first().map(Vec::len)).ok_or_else(|| {
            PyValueError::new_err("rank is required when there are no generators")
        })?;
        let mats: Vec<IntMatrix> = generators.iter().map(|g| IntMatrix::from_rows(g)).collect();
        if mats.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(PyValueError::new_err(format!("generators must be {}x{}", rank, rank)));
        }
        let group = FiniteMatrixGroup::close(rank, &mats, cap).map_err(err)?;
        Ok(PyLattice { inner: GLattice::natural(Arc::new(group)) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = LatticeFile::parse(text.as_bytes()).map_err(err)?;
        Ok(PyLattice { inner: file.to_lattice().map_err(err)? })
    }

    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        Ok(PyLattice { inner: catalog_get(name).map_err(err)?.character_lattice })
    }

    fn to_json(&self, name: &str) -> String {
        LatticeFile::from_lattice(name, &self.inner).to_json()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn group_order(&self) -> usize {
        self.inner.group().order()
    }

    fn generators(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.inner.generator_actions().iter().map(rows).collect()
    }

    fn dual(&self) -> Self {
        PyLattice { inner: dual(&self.inner) }
    }

    fn direct_sum(&self, other: &PyLattice) -> PyResult<Self> {
        Ok(PyLattice { inner: direct_sum(&self.inner, &other.inner).map_err(err)? })
    }

    fn h1_profile(&self) -> PyResult<Vec<(Vec<usize>, String)>> {
        Ok(profile(latori::h1_profile(&self.inner).map_err(err)?))
    }

    fn tate_minus1_profile(&self) -> PyResult<Vec<(Vec<usize>, String)>> {
        Ok(profile(latori::tate_minus1_profile(&self.inner).map_err(err)?))
    }

    #[pyo3(signature = (mode_name="strict"))]
    fn is_flabby(&self, mode_name: &str) -> PyResult<bool> {
        latori::is_flabby(&self.inner, mode(mode_name)?).map_err(err)
    }

    #[pyo3(signature = (mode_name="strict"))]
    fn is_coflabby(&self, mode_name: &str) -> PyResult<bool> {
        latori::is_coflabby(&self.inner, mode(mode_name)?).map_err(err)
    }

    /// Status of the permutation test: "yes", "no" or "unknown".
    fn is_permutation(&self) -> PyResult<&'static str> {
        self.verdict(latori::is_permutation)
    }

    fn is_stably_permutation(&self) -> PyResult<&'static str> {
        self.verdict(latori::is_stably_permutation)
    }

    fn is_invertible(&self) -> PyResult<&'static str> {
        self.verdict(latori::is_invertible)
    }

    fn flabby_class_trivial(&self) -> PyResult<&'static str> {
        self.verdict(latori::resolution::flabby_class_trivial)
    }

    /// Rationality level name, e.g. "StablyRational".
    #[pyo3(signature = (rank_bound=None, coeff_bound=3))]
    fn rationality(&self, rank_bound: Option<usize>, coeff_bound: usize) -> PyResult<String> {
        let options = SearchOptions { rank_bound, coeff_bound, ..SearchOptions::default() };
        Ok(latori::rationality_verdict(&self.inner, &options).map_err(err)?.level.to_string())
    }

    /// The full classification document as JSON.
    #[pyo3(signature = (name="lattice", mode_name="strict", rank_bound=None, coeff_bound=3))]
    fn classify_json(&self, name: &str, mode_name: &str, rank_bound: Option<usize>, coeff_bound: usize) -> PyResult<String> {
        let options = SearchOptions { rank_bound, coeff_bound, ..SearchOptions::default() };
        let doc = classify_document(name, &self.inner, mode(mode_name)?, &options).map_err(err)?;
        Ok(to_json(&doc))
    }

    fn flabby_resolution(&self) -> PyResult<PyResolution> {
        Ok(PyResolution { inner: latori::flabby_resolution(&self.inner).map_err(err)? })
    }

    fn __eq__(&self, other: &PyLattice) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Lattice(rank={}, group_order={})", self.inner.rank(), self.inner.group().order())
    }
}

impl PyLattice {
    fn verdict(&self, f: fn(&GLattice, &latori::SearchBounds) -> latori::Result<Verdict>) -> PyResult<&'static str> {
        let v = f(&self.inner, &latori::SearchBounds::default_for(&self.inner)).map_err(err)?;
        Ok(status(v.status))
    }
}

/// `0 → M → P → F → 0` with `P` permutation and `F` flabby.
#[pyclass(name = "Resolution", frozen)]
struct PyResolution {
    inner: latori::Resolution,
}

#[pymethods]
impl PyResolution {
    #[getter]
    fn middle(&self) -> PyLattice {
        PyLattice { inner: self.inner.middle.clone() }
    }

    #[getter]
    fn quotient(&self) -> PyLattice {
        PyLattice { inner: self.inner.quotient.clone() }
    }

    #[getter]
    fn embedding(&self) -> Vec<Vec<BigInt>> {
        rows(&self.inner.embedding)
    }

    #[getter]
    fn projection(&self) -> Vec<Vec<BigInt>> {
        rows(&self.inner.projection)
    }

    /// `[(subgroup element indices, multiplicity)]` of the permutation summands.
    #[getter]
    fn middle_description(&self) -> Vec<(Vec<usize>, usize)> {
        self.inner.middle_description.iter().map(|(h, k)| (h.members().to_vec(), *k)).collect()
    }

    fn verify(&self) -> bool {
        latori::verify_resolution(&self.inner)
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    list().iter().map(|d| d.name).collect()
}

/// Runs the command line on `args` (without the program name) and returns
/// `(exit code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let argv = std::iter::once("latori".to_string()).chain(args);
    let code = latori::cli::run_with(argv, &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule]
fn latori_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyResolution>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
