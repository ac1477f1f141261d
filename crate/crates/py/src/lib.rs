//! Python bindings: a thin scripting surface over the core pipeline —
//! FCIDUMP parsing, qubit accounting, singlet-sector Hamiltonians,
//! diagonalization, phase estimation, and gate counting.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use molpea_core::integrals::IntegralTable as CoreTable;
use molpea_core::mappings::{
    build_fci_matrix, build_s2_matrix, enumerate_determinants, jordan_wigner, project_singlet,
    qubit_requirements as core_qubit_requirements, MappingKind, PauliHamiltonian,
};
use molpea_core::oracle::diagonalize as core_diagonalize;
use molpea_core::pea::{self, PeaConfig};
use molpea_core::simulator::{expm_i_hermitian, StateVector};
use molpea_core::trotter;
use ndarray::prelude::*;

fn err(e: molpea_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<MappingKind> {
    kind.parse::<MappingKind>().map_err(err)
}

fn to_array(rows: Vec<Vec<f64>>) -> PyResult<Array2<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(Array2::from_shape_fn((n, n), |(i, j)| rows[i][j]))
}

fn to_rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// Parsed FCIDUMP integral table.
#[pyclass(name = "IntegralTable")]
struct PyIntegralTable {
    inner: CoreTable,
}

#[pymethods]
impl PyIntegralTable {
    /// Parse FCIDUMP text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: CoreTable::parse_fcidump(text).map_err(err)? })
    }

    /// Parse an FCIDUMP file from disk.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    #[getter]
    fn norb(&self) -> usize {
        self.inner.norb()
    }

    #[getter]
    fn nelec(&self) -> usize {
        self.inner.nelec()
    }

    #[getter]
    fn core_energy(&self) -> f64 {
        self.inner.core_energy()
    }

    fn one(&self, p: usize, q: usize) -> f64 {
        self.inner.one(p, q)
    }

    /// Two-electron integral (pq|rs) in chemists' notation.
    fn two(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.inner.two(p, q, r, s)
    }

    /// Hartree-Fock electronic energy of the lowest-orbital occupation.
    fn hf_energy(&self) -> PyResult<f64> {
        self.inner
            .hf_reference_energy(&self.inner.hf_occupation())
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "IntegralTable(norb={}, nelec={}, core_energy={})",
            self.inner.norb(),
            self.inner.nelec(),
            self.inner.core_energy()
        )
    }
}

/// Qubit requirements of a mapping: dict with kind, nqubits,
/// subspace_dimension.  `kind` is "direct", "compact", or "compact_singlet".
#[pyfunction]
fn qubit_requirements(py: Python<'_>, norb: usize, nelec: usize, kind: &str) -> PyResult<PyObject> {
    let spec = core_qubit_requirements(norb, nelec, parse_kind(kind)?).map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("kind", kind)?;
    dict.set_item("nqubits", spec.nqubits)?;
    dict.set_item("subspace_dimension", spec.subspace_dimension)?;
    Ok(dict.into())
}

/// Electronic Hamiltonian over the Sz = 0 determinants, optionally
/// projected onto the singlet subspace.  Returns a nested list.
#[pyfunction]
#[pyo3(signature = (table, singlet = true))]
fn hamiltonian_matrix(table: &PyIntegralTable, singlet: bool) -> PyResult<Vec<Vec<f64>>> {
    let t = &table.inner;
    if t.nelec() % 2 != 0 {
        return Err(PyValueError::new_err("closed-shell pipeline requires even NELEC"));
    }
    let half = t.nelec() / 2;
    let basis = enumerate_determinants(t.norb(), half, half).map_err(err)?;
    let h = build_fci_matrix(t, &basis).map_err(err)?;
    if !singlet {
        return Ok(to_rows(&h));
    }
    let s2 = build_s2_matrix(&basis).map_err(err)?;
    let (projected, _) = project_singlet(&h, &s2).map_err(err)?;
    Ok(to_rows(&projected))
}

/// Eigen-decomposition summary: (eigenvalues, ground_vector, gap).
#[pyfunction]
fn diagonalize(matrix: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let h = to_array(matrix)?;
    let spec = core_diagonalize(&h.view()).map_err(err)?;
    Ok((spec.eigenvalues.to_vec(), spec.ground.to_vec(), spec.gap))
}

/// Recursive phase estimation of the ground-state energy of a symmetric
/// matrix, starting from the first basis vector.  Returns a dict with
/// energy, phi, tau, and warning.
#[pyfunction]
#[pyo3(signature = (matrix, reference_energy, readout_bits = 4, iterations = 20))]
fn pea_ground_energy(
    py: Python<'_>,
    matrix: Vec<Vec<f64>>,
    reference_energy: f64,
    readout_bits: usize,
    iterations: usize,
) -> PyResult<PyObject> {
    let h = to_array(matrix)?;
    let spec = core_diagonalize(&h.view()).map_err(err)?;
    let mut cfg = PeaConfig::from_reference(reference_energy).map_err(err)?;
    cfg.readout_bits = readout_bits;
    cfg.iterations = iterations;
    let nsys = (usize::BITS - h.nrows().saturating_sub(1).leading_zeros()) as usize;
    let mut target = vec![Complex64::new(0.0, 0.0); 1 << nsys];
    for (i, &g) in spec.ground.iter().enumerate() {
        target[i] = Complex64::new(g, 0.0);
    }
    cfg.target_state = Some(target);
    let u = expm_i_hermitian(&h.view(), cfg.tau).map_err(err)?;
    let initial = StateVector::basis_state(nsys, 0).map_err(err)?;
    let trace = pea::recursive_pea(&u, &initial, &cfg).map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("energy", trace.energy)?;
    dict.set_item("phi", trace.phi)?;
    dict.set_item("tau", cfg.tau)?;
    dict.set_item("e_diagonalization", spec.eigenvalues[0])?;
    dict.set_item("warning", trace.warning)?;
    Ok(dict.into())
}

/// Jordan-Wigner Pauli terms as (coefficient, string) pairs.
#[pyfunction]
fn jordan_wigner_terms(table: &PyIntegralTable) -> Vec<(f64, String)> {
    let h = jordan_wigner(&table.inner);
    h.terms
        .iter()
        .map(|(c, s)| (*c, PauliHamiltonian::string_of(s)))
        .collect()
}

/// Gate report for an M-repetition Trotterized propagator as a dict.
#[pyfunction]
#[pyo3(signature = (table, m = 1))]
fn trotter_gate_report(py: Python<'_>, table: &PyIntegralTable, m: usize) -> PyResult<PyObject> {
    let h = jordan_wigner(&table.inner);
    let report = trotter::gate_count(&h, m).map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("term_count", report.term_count)?;
    dict.set_item("one_qubit_gates", report.one_qubit_gates)?;
    dict.set_item("two_qubit_gates", report.two_qubit_gates)?;
    dict.set_item("rotations", report.rotations)?;
    dict.set_item("m", report.m)?;
    dict.set_item("max_support", report.max_support)?;
    Ok(dict.into())
}

#[pymodule]
fn molpea(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIntegralTable>()?;
    m.add_function(wrap_pyfunction!(qubit_requirements, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(pea_ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(jordan_wigner_terms, m)?)?;
    m.add_function(wrap_pyfunction!(trotter_gate_report, m)?)?;
    Ok(())
}
