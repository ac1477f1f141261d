//! Classical ground truth: exact diagonalization and a brute-force
//! Fock-space Hamiltonian built by literal ladder-operator application.
//! Deliberately naive and capacity-capped; exists to validate the mappings
//! through an independent code path.

use ndarray::prelude::*;

use crate::error::{Error, Result};
use crate::integrals::IntegralTable;
use crate::linalg;
use crate::mappings::ConfigurationBasis;

#[derive(Debug, Clone)]
pub struct SpectralResult {
    /// Ascending eigenvalues, hartree.
    pub eigenvalues: Array1<f64>,
    /// Normalized ground eigenvector, largest-magnitude component positive.
    pub ground: Array1<f64>,
    /// E1 - E0; infinite for a one-dimensional space.
    pub gap: f64,
}

pub fn diagonalize(h: &ArrayView2<f64>) -> Result<SpectralResult> {
    let (eigenvalues, vecs) = linalg::eigh_ascending(h)?;
    let mut ground = vecs.column(0).to_owned();
    linalg::phase_fix(&mut ground);
    let residual = (&h.dot(&ground) - &(eigenvalues[0] * &ground))
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let scale = h.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    if residual > 1e-9 * scale {
        return Err(Error::Numerics(format!(
            "ground-state residual {residual:.2e} exceeds 1e-9 of matrix norm"
        )));
    }
    let gap = if eigenvalues.len() > 1 {
        eigenvalues[1] - eigenvalues[0]
    } else {
        f64::INFINITY
    };
    Ok(SpectralResult { eigenvalues, ground, gap })
}

/// Apply a ladder operator on spin-orbital position `pos` of an occupation
/// mask, with the fermionic sign from occupied positions below `pos`.
fn ladder(mask: u64, sign: f64, pos: usize, create: bool) -> Option<(u64, f64)> {
    let occupied = mask >> pos & 1 == 1;
    if occupied == create {
        return None;
    }
    let s = if (mask & ((1u64 << pos) - 1)).count_ones() % 2 == 1 {
        -sign
    } else {
        sign
    };
    Some((mask ^ (1 << pos), s))
}

/// The full Fock-space Hamiltonian over 2·norb spin orbitals, interleaved
/// ordering (position 2p = orbital p alpha, 2p+1 = orbital p beta), basis
/// index = occupation mask.
pub fn fock_space_hamiltonian(t: &IntegralTable) -> Result<Array2<f64>> {
    let norb = t.norb();
    if norb > 3 {
        return Err(Error::Capacity(format!(
            "Fock-space oracle capped at 3 orbitals, got {norb}"
        )));
    }
    let nso = 2 * norb;
    let dim = 1usize << nso;
    let so = |p: usize, sigma: usize| 2 * p + sigma;
    let mut h = Array2::<f64>::zeros((dim, dim));

    // Operator strings listed right-to-left (application order).
    let mut add_term = |coeff: f64, ops: &[(usize, bool)]| {
        if coeff == 0.0 {
            return;
        }
        for col in 0..dim {
            let mut state = Some((col as u64, 1.0));
            for &(pos, create) in ops {
                state = state.and_then(|(m, s)| ladder(m, s, pos, create));
            }
            if let Some((row, sign)) = state {
                h[[row as usize, col]] += sign * coeff;
            }
        }
    };

    for p in 0..norb {
        for q in 0..norb {
            for sigma in 0..2 {
                add_term(t.one(p, q), &[(so(q, sigma), false), (so(p, sigma), true)]);
            }
        }
    }
    for p in 0..norb {
        for r in 0..norb {
            for q in 0..norb {
                for s in 0..norb {
                    let v = 0.5 * t.two(p, r, q, s);
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            add_term(
                                v,
                                &[
                                    (so(r, sigma), false),
                                    (so(s, tau), false),
                                    (so(q, tau), true),
                                    (so(p, sigma), true),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Interleave an (alpha, beta) orbital-mask pair into the Fock basis index.
pub fn interleaved_index(alpha: u32, beta: u32, norb: usize) -> usize {
    let mut idx = 0usize;
    for p in 0..norb {
        idx |= ((alpha >> p & 1) as usize) << (2 * p);
        idx |= ((beta >> p & 1) as usize) << (2 * p + 1);
    }
    idx
}

/// Sign relating the interleaved creation-operator ordering to the
/// alpha-then-beta (blocked) ordering used by the determinant basis.
pub fn blocked_sign(alpha: u32, beta: u32) -> f64 {
    let mut inversions = 0u32;
    let mut b = beta;
    while b != 0 {
        let orb = b.trailing_zeros();
        inversions += (alpha >> (orb + 1)).count_ones();
        b &= b - 1;
    }
    if inversions % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Extract the (nalpha, nbeta) sector of the Fock-space matrix in the
/// determinant basis's ordering and blocked sign convention; directly
/// comparable to the Slater-Condon matrix.
pub fn sector_matrix(fock: &Array2<f64>, basis: &ConfigurationBasis) -> Array2<f64> {
    let dim = basis.len();
    let mut out = Array2::<f64>::zeros((dim, dim));
    let entries: Vec<(usize, f64)> = basis
        .determinants
        .iter()
        .map(|&(a, b)| (interleaved_index(a, b, basis.norb), blocked_sign(a, b)))
        .collect();
    for i in 0..dim {
        for j in 0..dim {
            out[[i, j]] = entries[i].1 * entries[j].1 * fock[[entries[i].0, entries[j].0]];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{build_fci_matrix, enumerate_determinants, jordan_wigner};

    #[test]
    fn diagonalize_sorts() {
        let h = Array2::from_diag(&array![3.0, 1.0, 2.0]);
        let r = diagonalize(&h.view()).unwrap();
        assert_eq!(r.eigenvalues.as_slice().unwrap(), &[1.0, 2.0, 3.0]);
        assert!((r.gap - 1.0).abs() < 1e-14);
        assert!((r.ground[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_integrals_zero_matrix() {
        let t = IntegralTable::empty(2, 2, 0);
        let h = fock_space_hamiltonian(&t).unwrap();
        assert!(h.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn number_operator_diagonal() {
        let mut t = IntegralTable::empty(1, 2, 0);
        t.set_one(0, 0, 1.5);
        let h = fock_space_hamiltonian(&t).unwrap();
        for col in 0..4usize {
            let occ = col.count_ones() as f64;
            assert!((h[[col, col]] - 1.5 * occ).abs() < 1e-14);
        }
        assert!((h.iter().map(|x| x.abs()).sum::<f64>() - (1.5 + 1.5 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn capacity_cap() {
        let t = IntegralTable::empty(4, 4, 0);
        assert!(matches!(fock_space_hamiltonian(&t), Err(Error::Capacity(_))));
    }

    #[test]
    fn h2_sector_matches_slater_condon() {
        let t = IntegralTable::parse_fcidump(
            &std::fs::read_to_string(crate::test_fixture("h2_sto3g_0.74.fcidump")).unwrap(),
        )
        .unwrap();
        let fock = fock_space_hamiltonian(&t).unwrap();
        let b = enumerate_determinants(2, 1, 1).unwrap();
        let sector = sector_matrix(&fock, &b);
        let sc = build_fci_matrix(&t, &b).unwrap();
        let diff = (&sector - &sc).iter().map(|x| x.abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "max deviation {diff:.2e}");
    }

    #[test]
    fn jw_dense_equals_fock_oracle() {
        let t = IntegralTable::parse_fcidump(
            &std::fs::read_to_string(crate::test_fixture("h2_sto3g_1.50.fcidump")).unwrap(),
        )
        .unwrap();
        let fock = fock_space_hamiltonian(&t).unwrap();
        let dense = jordan_wigner(&t).dense().unwrap();
        let mut worst = 0.0f64;
        for i in 0..fock.nrows() {
            for j in 0..fock.ncols() {
                worst = worst.max((dense[[i, j]] - fock[[i, j]]).norm());
            }
        }
        assert!(worst < 1e-10, "max deviation {worst:.2e}");
    }

    #[test]
    fn blocked_sign_small_cases() {
        // No betas, or all alphas below all betas: identity permutation.
        assert_eq!(blocked_sign(0b11, 0b00), 1.0);
        assert_eq!(blocked_sign(0b01, 0b01), 1.0);
        // One alpha above one beta: a single inversion.
        assert_eq!(blocked_sign(0b10, 0b01), -1.0);
    }
}
