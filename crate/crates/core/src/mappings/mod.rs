//! Qubit mappings for the molecular Hamiltonian: the compact mapping
//! (determinant enumeration, Slater-Condon FCI matrix, singlet projection)
//! and the direct mapping (Jordan-Wigner Pauli strings), together with the
//! qubit-requirement calculator for both.

mod basis;
mod fci;
mod jw;
mod qubits;
mod spin;

pub use basis::{enumerate_determinants, ConfigurationBasis};
pub use fci::{build_fci_matrix, build_fci_matrix_with_cap, DEFAULT_DIMENSION_CAP};
pub use jw::{jordan_wigner, Pauli, PauliHamiltonian};
pub use qubits::{qubit_requirements, MappingKind, MappingSpec};
pub use spin::{build_s2_matrix, project_singlet};
