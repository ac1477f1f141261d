//! First-order product-formula approximation of e^{iHτ} for the direct
//! mapping: Pauli-string circuit emission, dense reconstruction, error
//! measurement versus the repetition count M, and gate accounting.

use std::ops::Range;

use ndarray::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::mappings::{Pauli, PauliHamiltonian};
use crate::pea::{recursive_pea, PeaConfig, PeaTrace};
use crate::simulator::{expm_i_hermitian_complex, DenseUnitary, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "gate")]
pub enum Gate {
    Hadamard { q: usize },
    S { q: usize },
    SDag { q: usize },
    Cnot { control: usize, target: usize },
    Rz { q: usize, angle: f64 },
    GlobalPhase { angle: f64 },
}

impl Gate {
    pub fn format_line(&self) -> String {
        match self {
            Gate::Hadamard { q } => format!("h {q}"),
            Gate::S { q } => format!("s {q}"),
            Gate::SDag { q } => format!("sdg {q}"),
            Gate::Cnot { control, target } => format!("cx {control} {target}"),
            Gate::Rz { q, angle } => format!("rz {q} {angle:.16e}"),
            Gate::GlobalPhase { angle } => format!("gphase {angle:.16e}"),
        }
    }
}

/// Gate list implementing `[Π_X exp(i c_X P_X τ/M)]^M`, with per-term
/// segment metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliCircuit {
    pub nqubits: usize,
    pub gates: Vec<Gate>,
    /// (pauli string, gate range) per emitted term exponential.
    pub segments: Vec<(String, Range<usize>)>,
}

impl PauliCircuit {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.format_line());
            out.push('\n');
        }
        out
    }
}

/// Emit the circuit for one Trotter step repeated M times.  Terms appear
/// in the Hamiltonian's fixed sorted order.
pub fn trotter_step(h: &PauliHamiltonian, tau: f64, m: usize) -> Result<PauliCircuit> {
    if m < 1 {
        return Err(Error::Domain("repetition count M must be at least 1".into()));
    }
    let mut gates = Vec::new();
    let mut segments = Vec::new();
    for _rep in 0..m {
        for (coeff, string) in &h.terms {
            let start = gates.len();
            let theta = coeff * tau / m as f64;
            let support: Vec<usize> = (0..h.nqubits).filter(|&q| string[q] != Pauli::I).collect();
            if support.is_empty() {
                gates.push(Gate::GlobalPhase { angle: theta });
            } else {
                for &q in &support {
                    match string[q] {
                        Pauli::X => gates.push(Gate::Hadamard { q }),
                        Pauli::Y => {
                            gates.push(Gate::SDag { q });
                            gates.push(Gate::Hadamard { q });
                        }
                        _ => {}
                    }
                }
                for w in support.windows(2) {
                    gates.push(Gate::Cnot { control: w[0], target: w[1] });
                }
                let last = *support.last().unwrap();
                gates.push(Gate::Rz { q: last, angle: -2.0 * theta });
                for w in support.windows(2).rev() {
                    gates.push(Gate::Cnot { control: w[0], target: w[1] });
                }
                for &q in support.iter().rev() {
                    match string[q] {
                        Pauli::X => gates.push(Gate::Hadamard { q }),
                        Pauli::Y => {
                            gates.push(Gate::Hadamard { q });
                            gates.push(Gate::S { q });
                        }
                        _ => {}
                    }
                }
            }
            segments.push((PauliHamiltonian::string_of(string), start..gates.len()));
        }
    }
    Ok(PauliCircuit { nqubits: h.nqubits, gates, segments })
}

fn apply_gate(m: &mut Array2<Complex64>, nqubits: usize, gate: &Gate, control: Option<usize>) {
    let dim = m.nrows();
    let i = Complex64::new(0.0, 1.0);
    let controlled = |row: usize| control.map(|c| row >> c & 1 == 1).unwrap_or(true);
    match *gate {
        Gate::Hadamard { q } | Gate::S { q } | Gate::SDag { q } => {
            let g: [[Complex64; 2]; 2] = match gate {
                Gate::Hadamard { .. } => {
                    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    [[s, s], [s, -s]]
                }
                Gate::S { .. } => [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), i]],
                _ => [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), -i]],
            };
            for col in 0..m.ncols() {
                for base in 0..dim {
                    if base >> q & 1 == 1 {
                        continue;
                    }
                    let hi = base | 1 << q;
                    let (a, b) = (m[[base, col]], m[[hi, col]]);
                    m[[base, col]] = g[0][0] * a + g[0][1] * b;
                    m[[hi, col]] = g[1][0] * a + g[1][1] * b;
                }
            }
        }
        Gate::Cnot { control: c, target: t } => {
            for col in 0..m.ncols() {
                for base in 0..dim {
                    if base >> c & 1 == 1 && base >> t & 1 == 0 {
                        let other = base | 1 << t;
                        let tmp = m[[base, col]];
                        m[[base, col]] = m[[other, col]];
                        m[[other, col]] = tmp;
                    }
                }
            }
        }
        Gate::Rz { q, angle } => {
            let (lo, hi) = (
                Complex64::from_polar(1.0, -angle / 2.0),
                Complex64::from_polar(1.0, angle / 2.0),
            );
            for col in 0..m.ncols() {
                for row in 0..dim {
                    if !controlled(row) {
                        continue;
                    }
                    m[[row, col]] *= if row >> q & 1 == 0 { lo } else { hi };
                }
            }
        }
        Gate::GlobalPhase { angle } => {
            let z = Complex64::from_polar(1.0, angle);
            for col in 0..m.ncols() {
                for row in 0..dim {
                    if controlled(row) {
                        m[[row, col]] *= z;
                    }
                }
            }
        }
    }
    let _ = nqubits;
}

/// Dense matrix of the circuit.  With `controlled = true` the matrix gains
/// one extra high-order qubit and every rotation (Rz, global phase) is
/// promoted to its controlled version; the basis changes and CNOT ladders
/// cancel on the control-clear branch.
pub fn circuit_to_dense(circuit: &PauliCircuit, controlled: bool) -> Result<Array2<Complex64>> {
    let nq = circuit.nqubits + controlled as usize;
    if nq > 10 {
        return Err(Error::Capacity(format!(
            "dense circuit reconstruction on {nq} qubits refused"
        )));
    }
    let dim = 1usize << nq;
    let mut m = Array2::<Complex64>::eye(dim);
    let control = controlled.then_some(circuit.nqubits);
    for gate in &circuit.gates {
        let c = match gate {
            Gate::Rz { .. } | Gate::GlobalPhase { .. } => control,
            _ => None,
        };
        apply_gate(&mut m, nq, gate, c);
    }
    Ok(m)
}

/// Spectral-norm error ‖U_exact − U_circuit‖ of the M-repetition circuit.
pub fn trotter_error(h: &PauliHamiltonian, tau: f64, m: usize) -> Result<f64> {
    if h.nqubits > 10 {
        return Err(Error::Capacity(format!(
            "dense error measurement on {} qubits refused",
            h.nqubits
        )));
    }
    let circuit = trotter_step(h, tau, m)?;
    let approx = circuit_to_dense(&circuit, false)?;
    let dense = h.dense()?;
    let exact = expm_i_hermitian_complex(&dense.view(), tau)?;
    let diff = exact.matrix() - &approx;
    Ok(linalg::spectral_norm(&diff.view()))
}

/// Smallest power-of-two M whose error is within the threshold.
pub fn find_m(h: &PauliHamiltonian, tau: f64, threshold: f64) -> Result<(usize, f64)> {
    let mut m = 1usize;
    while m <= 1 << 20 {
        let err = trotter_error(h, tau, m)?;
        if err <= threshold {
            return Ok((m, err));
        }
        m *= 2;
    }
    Err(Error::Numerics(format!(
        "Trotter error did not reach {threshold:.1e} within M = 2^20"
    )))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateReport {
    pub term_count: usize,
    /// Non-identity qubit support of each Hamiltonian term.
    pub per_term_support: Vec<usize>,
    pub one_qubit_gates: usize,
    pub two_qubit_gates: usize,
    pub rotations: usize,
    pub m: usize,
    /// Largest per-term support including the PEA control qubit.
    pub max_support: usize,
}

/// Exact gate counts of the emitted circuit.  Terms touching more than
/// four system qubits contradict the direct mapping's locality and abort.
pub fn gate_count(h: &PauliHamiltonian, m: usize) -> Result<GateReport> {
    let per_term_support: Vec<usize> = (0..h.terms.len()).map(|i| h.weight(i)).collect();
    if let Some((i, &w)) = per_term_support.iter().enumerate().find(|&(_, &w)| w > 4) {
        return Err(Error::Encoding(format!(
            "term {} ({}) acts on {w} qubits; the direct-mapped Hamiltonian must stay \
             within 4",
            i,
            PauliHamiltonian::string_of(&h.terms[i].1)
        )));
    }
    let circuit = trotter_step(h, 1.0, m)?;
    let mut one_qubit_gates = 0;
    let mut two_qubit_gates = 0;
    let mut rotations = 0;
    for g in &circuit.gates {
        match g {
            Gate::Cnot { .. } => two_qubit_gates += 1,
            Gate::Rz { .. } => {
                one_qubit_gates += 1;
                rotations += 1;
            }
            Gate::GlobalPhase { .. } => rotations += 1,
            _ => one_qubit_gates += 1,
        }
    }
    Ok(GateReport {
        term_count: h.terms.len(),
        max_support: per_term_support.iter().copied().max().unwrap_or(0) + 1,
        per_term_support,
        one_qubit_gates,
        two_qubit_gates,
        rotations,
        m,
    })
}

/// Recursive PEA whose unitary is the Trotterized propagator, applied as
/// the dense matrix of the emitted circuit.
pub fn controlled_trotter_pea(
    h: &PauliHamiltonian,
    initial: &StateVector,
    cfg: &PeaConfig,
    m: usize,
) -> Result<PeaTrace> {
    let circuit = trotter_step(h, cfg.tau, m)?;
    let dense = circuit_to_dense(&circuit, false)?;
    let u = DenseUnitary::new(dense)?;
    recursive_pea(&u, initial, cfg)
}
