//! Simulated quantum computation of molecular ground-state energies.
//!
//! The pipeline: parse an FCIDUMP integral file, map the second-quantized
//! Hamiltonian onto qubits (compact determinant enumeration or direct
//! Jordan-Wigner encoding), prepare an approximate ground state (Hartree-Fock
//! or adiabatic evolution), and extract the energy eigenvalue with a
//! recursive phase estimation algorithm running on a dense statevector
//! simulator.  An exact-diagonalization oracle cross-checks every energy.

extern crate blas_src;

pub mod asp;
pub mod error;
pub mod integrals;
pub mod linalg;
pub mod mappings;
pub mod oracle;
pub mod pea;
pub mod simulator;
pub mod trotter;

pub use asp::{AspPath, AspTrace};
pub use error::{Error, Result};
pub use integrals::IntegralTable;
pub use mappings::{ConfigurationBasis, MappingKind, MappingSpec, Pauli, PauliHamiltonian};
pub use oracle::SpectralResult;
pub use pea::{PeaConfig, PeaMode, PeaTrace};
pub use simulator::{DenseUnitary, StateVector};
pub use trotter::{GateReport, PauliCircuit};

#[cfg(test)]
pub(crate) fn test_fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}
