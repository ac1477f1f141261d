//! Jordan-Wigner transformation of the second-quantized Hamiltonian into
//! a sum of Pauli strings (direct mapping).

use std::collections::HashMap;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::IntegralTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Real-coefficient sum of Pauli strings over `nqubits` qubits.
///
/// Qubit layout: qubit `2p` is the alpha spin orbital of spatial orbital
/// `p`, qubit `2p + 1` its beta partner.  Strings are coalesced and sorted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    pub nqubits: usize,
    pub terms: Vec<(f64, Vec<Pauli>)>,
}

impl PauliHamiltonian {
    /// Number of non-identity factors in term `i`.
    pub fn weight(&self, i: usize) -> usize {
        self.terms[i].1.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn string_of(term: &[Pauli]) -> String {
        term.iter().map(|p| p.to_string()).collect()
    }

    /// Dense matrix reconstruction, little-endian qubit indexing
    /// (qubit q is bit q of the basis-state index).
    pub fn dense(&self) -> Result<Array2<Complex64>> {
        if self.nqubits > 12 {
            return Err(Error::Capacity(format!(
                "dense reconstruction of {} qubits refused",
                self.nqubits
            )));
        }
        let dim = 1usize << self.nqubits;
        let mut h = Array2::<Complex64>::zeros((dim, dim));
        for (coeff, string) in &self.terms {
            for col in 0..dim {
                let mut row = col;
                let mut amp = Complex64::new(*coeff, 0.0);
                for (q, p) in string.iter().enumerate() {
                    let bit = col >> q & 1;
                    match p {
                        Pauli::I => {}
                        Pauli::X => row ^= 1 << q,
                        Pauli::Y => {
                            row ^= 1 << q;
                            amp *= if bit == 0 {
                                Complex64::new(0.0, 1.0)
                            } else {
                                Complex64::new(0.0, -1.0)
                            };
                        }
                        Pauli::Z => {
                            if bit == 1 {
                                amp = -amp;
                            }
                        }
                    }
                }
                h[[row, col]] += amp;
            }
        }
        Ok(h)
    }
}

/// A Pauli string in symplectic form: coefficient times `X^x · Z^z`
/// (all X factors to the left of all Z factors).
type SymplecticTerm = ((u64, u64), Complex64);

fn multiply(a: SymplecticTerm, b: SymplecticTerm) -> SymplecticTerm {
    let ((x1, z1), c1) = a;
    let ((x2, z2), c2) = b;
    let mut c = c1 * c2;
    if (z1 & x2).count_ones() % 2 == 1 {
        c = -c;
    }
    ((x1 ^ x2, z1 ^ z2), c)
}

/// Ladder operator on qubit `j`: `(X_j ∓ X_j Z_j)/2` times the Z string on
/// lower qubits; `create` selects the dagger.
fn ladder(j: usize, create: bool) -> [SymplecticTerm; 2] {
    let x = 1u64 << j;
    let zlow = (1u64 << j) - 1;
    let half = Complex64::new(0.5, 0.0);
    let sign = if create { half } else { -half };
    [((x, zlow), half), ((x, zlow | x), sign)]
}

fn accumulate(acc: &mut HashMap<(u64, u64), Complex64>, coeff: f64, ops: &[[SymplecticTerm; 2]]) {
    let mut product: Vec<SymplecticTerm> = vec![((0, 0), Complex64::new(coeff, 0.0))];
    for op in ops {
        let mut next = Vec::with_capacity(product.len() * 2);
        for &p in &product {
            for &q in op {
                next.push(multiply(p, q));
            }
        }
        product = next;
    }
    for ((x, z), c) in product {
        *acc.entry((x, z)).or_insert(Complex64::new(0.0, 0.0)) += c;
    }
}

/// Map the molecular Hamiltonian onto 2·norb qubits.
pub fn jordan_wigner(t: &IntegralTable) -> PauliHamiltonian {
    let norb = t.norb();
    let nqubits = 2 * norb;
    assert!(nqubits <= 64, "qubit count exceeds symplectic mask width");
    let mut acc: HashMap<(u64, u64), Complex64> = HashMap::new();

    // Spin orbital (p, sigma) lives on qubit 2p + sigma.
    let so = |p: usize, sigma: usize| 2 * p + sigma;

    for p in 0..norb {
        for q in 0..norb {
            let h = t.one(p, q);
            if h == 0.0 {
                continue;
            }
            for sigma in 0..2 {
                accumulate(
                    &mut acc,
                    h,
                    &[ladder(so(p, sigma), true), ladder(so(q, sigma), false)],
                );
            }
        }
    }
    for p in 0..norb {
        for r in 0..norb {
            for q in 0..norb {
                for s in 0..norb {
                    let v = 0.5 * t.two(p, r, q, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            accumulate(
                                &mut acc,
                                v,
                                &[
                                    ladder(so(p, sigma), true),
                                    ladder(so(q, tau), true),
                                    ladder(so(s, tau), false),
                                    ladder(so(r, sigma), false),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }

    let mut terms: Vec<(f64, Vec<Pauli>)> = Vec::new();
    for ((x, z), c) in acc {
        debug_assert!(c.im.abs() < 1e-12, "imaginary residue {c}");
        // Convert X^x Z^z to per-qubit symbols; each Y contributes a
        // factor -i (from X·Z = -i·Y).
        let mut coeff = c;
        let mut string = vec![Pauli::I; nqubits];
        for q in 0..nqubits {
            let (xb, zb) = (x >> q & 1, z >> q & 1);
            string[q] = match (xb, zb) {
                (0, 0) => Pauli::I,
                (1, 0) => Pauli::X,
                (0, 1) => Pauli::Z,
                _ => {
                    coeff *= Complex64::new(0.0, -1.0);
                    Pauli::Y
                }
            };
        }
        debug_assert!(coeff.im.abs() < 1e-12, "imaginary coefficient {coeff}");
        if coeff.re.abs() >= 1e-12 {
            terms.push((coeff.re, string));
        }
    }
    terms.sort_by(|a, b| {
        PauliHamiltonian::string_of(&a.1).cmp(&PauliHamiltonian::string_of(&b.1))
    });
    PauliHamiltonian { nqubits, terms }
}
