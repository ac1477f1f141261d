//! FCI matrix construction in the determinant basis via Slater-Condon rules.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::integrals::IntegralTable;
use crate::mappings::ConfigurationBasis;

pub const DEFAULT_DIMENSION_CAP: usize = 1 << 14;

/// Sign from the occupied bits of `mask` strictly between positions i and j.
fn parity_between(mask: u32, i: usize, j: usize) -> f64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let window = ((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1);
    if (mask & window).count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn occupied(mask: u32, norb: usize) -> Vec<usize> {
    (0..norb).filter(|&o| mask >> o & 1 == 1).collect()
}

/// Same-spin double excitation element: |I⟩ holds {p,q}, |J⟩ holds {r,s}
/// within one spin channel.  Sign from sequentially applying the operator
/// string a†_p a†_q a_s a_r to |J⟩ (annihilate r, then s; create q, then p).
fn double_same_spin(mi: u32, mj: u32, p: usize, q: usize, r: usize, s: usize, t: &IntegralTable) -> f64 {
    let mut sign = 1.0;
    let mut mk = mj;
    for o in [r, s, q, p] {
        if (mk & ((1u32 << o) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mk ^= 1 << o;
    }
    debug_assert_eq!(mk, mi);
    sign * (t.two(p, r, q, s) - t.two(p, s, q, r))
}

/// Single excitation element p -> q in one spin channel with the other
/// channel's occupation `other`.
fn single(t: &IntegralTable, mask: u32, occ_same: &[usize], occ_other: &[usize], p: usize, q: usize) -> f64 {
    let mut v = t.one(p, q);
    for &i in occ_same {
        if i != p {
            v += t.two(p, q, i, i) - t.two(p, i, i, q);
        }
    }
    for &i in occ_other {
        v += t.two(p, q, i, i);
    }
    parity_between(mask, p, q) * v
}

pub fn build_fci_matrix(t: &IntegralTable, b: &ConfigurationBasis) -> Result<Array2<f64>> {
    build_fci_matrix_with_cap(t, b, DEFAULT_DIMENSION_CAP)
}

/// Hamiltonian matrix over the determinant basis; core_energy is NOT added.
pub fn build_fci_matrix_with_cap(t: &IntegralTable, b: &ConfigurationBasis, cap: usize) -> Result<Array2<f64>> {
    if b.norb != t.norb() {
        return Err(Error::Shape(format!(
            "basis has {} orbitals, table has {}",
            b.norb,
            t.norb()
        )));
    }
    let dim = b.len();
    if dim > cap {
        return Err(Error::Capacity(format!("FCI dimension {dim} exceeds cap {cap}")));
    }
    let norb = b.norb;
    let mut h = Array2::<f64>::zeros((dim, dim));
    let occs: Vec<(Vec<usize>, Vec<usize>)> = b
        .determinants
        .iter()
        .map(|&(a, bm)| (occupied(a, norb), occupied(bm, norb)))
        .collect();

    for i in 0..dim {
        let (ma, mb) = b.determinants[i];
        let (occ_a, occ_b) = &occs[i];
        let mut e = 0.0;
        for &p in occ_a.iter().chain(occ_b.iter()) {
            e += t.one(p, p);
        }
        for &p in occ_a {
            for &q in occ_a {
                e += 0.5 * (t.two(p, p, q, q) - t.two(p, q, q, p));
            }
            for &q in occ_b {
                e += 0.5 * t.two(p, p, q, q);
            }
        }
        for &p in occ_b {
            for &q in occ_b {
                e += 0.5 * (t.two(p, p, q, q) - t.two(p, q, q, p));
            }
            for &q in occ_a {
                e += 0.5 * t.two(p, p, q, q);
            }
        }
        h[[i, i]] = e;

        for j in 0..i {
            let (na, nb) = b.determinants[j];
            let (da, db) = (ma ^ na, mb ^ nb);
            let (ca, cb) = (da.count_ones(), db.count_ones());
            if ca / 2 + cb / 2 > 2 {
                continue;
            }
            let v = match (ca, cb) {
                (2, 0) => {
                    let p = 31 - (ma & da).leading_zeros() as usize;
                    let q = 31 - (na & da).leading_zeros() as usize;
                    single(t, ma, occ_a, occ_b, p, q)
                }
                (0, 2) => {
                    let p = 31 - (mb & db).leading_zeros() as usize;
                    let q = 31 - (nb & db).leading_zeros() as usize;
                    single(t, mb, occ_b, occ_a, p, q)
                }
                (2, 2) => {
                    let p = 31 - (ma & da).leading_zeros() as usize;
                    let q = 31 - (na & da).leading_zeros() as usize;
                    let r = 31 - (mb & db).leading_zeros() as usize;
                    let s = 31 - (nb & db).leading_zeros() as usize;
                    parity_between(ma, p, q) * parity_between(mb, r, s) * t.two(p, q, r, s)
                }
                (4, 0) => {
                    let pq = occupied(ma & da, norb);
                    let rs = occupied(na & da, norb);
                    double_same_spin(ma, na, pq[0], pq[1], rs[0], rs[1], t)
                }
                (0, 4) => {
                    let pq = occupied(mb & db, norb);
                    let rs = occupied(nb & db, norb);
                    double_same_spin(mb, nb, pq[0], pq[1], rs[0], rs[1], t)
                }
                _ => 0.0,
            };
            h[[i, j]] = v;
            h[[j, i]] = v;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::enumerate_determinants;

    fn diagonal_table(norb: usize, nelec: usize, diag: &[f64]) -> IntegralTable {
        let mut t = IntegralTable::empty(norb, nelec, 0);
        for (p, &v) in diag.iter().enumerate() {
            t.set_one(p, p, v);
        }
        t
    }

    #[test]
    fn non_interacting_limit() {
        let t = diagonal_table(3, 2, &[-2.0, -1.0, -0.5]);
        let b = enumerate_determinants(3, 1, 1).unwrap();
        let h = build_fci_matrix(&t, &b).unwrap();
        for i in 0..b.len() {
            let (ma, mb) = b.determinants[i];
            let expect: f64 = (0..3)
                .map(|o| {
                    let occ = (ma >> o & 1) + (mb >> o & 1);
                    occ as f64 * [-2.0, -1.0, -0.5][o]
                })
                .sum();
            assert!((h[[i, i]] - expect).abs() < 1e-14);
            for j in 0..b.len() {
                if i != j {
                    assert_eq!(h[[i, j]], 0.0);
                }
            }
        }
    }

    #[test]
    fn hf_first_entry_matches_reference_energy() {
        let t = IntegralTable::parse_fcidump(
            &std::fs::read_to_string(crate::test_fixture("h2_sto3g_0.74.fcidump")).unwrap(),
        )
        .unwrap();
        let b = enumerate_determinants(t.norb(), 1, 1).unwrap();
        let h = build_fci_matrix(&t, &b).unwrap();
        let e_hf = t.hf_reference_energy(&t.hf_occupation()).unwrap();
        assert!((h[[0, 0]] - e_hf).abs() < 1e-12);
    }

    #[test]
    fn symmetric_to_1e12() {
        let t = IntegralTable::parse_fcidump(
            &std::fs::read_to_string(crate::test_fixture("h2_sto3g_1.50.fcidump")).unwrap(),
        )
        .unwrap();
        let b = enumerate_determinants(t.norb(), 1, 1).unwrap();
        let h = build_fci_matrix(&t, &b).unwrap();
        assert!(crate::linalg::asymmetry(&h.view()) < 1e-12);
    }

    #[test]
    fn capacity_cap_enforced() {
        let t = IntegralTable::empty(6, 6, 0);
        let b = enumerate_determinants(6, 3, 3).unwrap();
        assert!(matches!(
            build_fci_matrix_with_cap(&t, &b, 100),
            Err(Error::Capacity(_))
        ));
    }
}
