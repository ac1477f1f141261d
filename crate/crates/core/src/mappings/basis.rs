//! Determinant enumeration for the compact mapping.

use crate::error::{Error, Result};

/// Ordered basis of Slater determinants with fixed (nalpha, nbeta).
///
/// Occupations are bitmasks over spatial orbitals; index 0 is always the
/// Hartree-Fock determinant (lowest orbitals filled).
#[derive(Debug, Clone)]
pub struct ConfigurationBasis {
    pub norb: usize,
    pub nalpha: usize,
    pub nbeta: usize,
    pub determinants: Vec<(u32, u32)>,
}

impl ConfigurationBasis {
    pub fn len(&self) -> usize {
        self.determinants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.determinants.is_empty()
    }

    /// Position of a determinant in the basis, if present.
    pub fn index_of(&self, det: (u32, u32)) -> Option<usize> {
        self.determinants.iter().position(|&d| d == det)
    }
}

/// All bitmasks over `norb` bits with exactly `k` bits set, ascending.
fn masks_with_popcount(norb: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(0);
        return out;
    }
    let mut m: u32 = (1u32 << k) - 1;
    let limit: u32 = 1u32 << norb;
    while m < limit {
        out.push(m);
        // Gosper's hack: next larger integer with the same popcount.
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
        if c == 0 {
            break;
        }
    }
    out
}

/// Enumerate all determinants with the given occupation numbers,
/// Hartree-Fock first, the rest in ascending (alpha, beta) order.
pub fn enumerate_determinants(norb: usize, nalpha: usize, nbeta: usize) -> Result<ConfigurationBasis> {
    if nalpha > norb || nbeta > norb {
        return Err(Error::Domain(format!(
            "cannot place {nalpha} alpha / {nbeta} beta electrons in {norb} orbitals"
        )));
    }
    if norb > 31 {
        return Err(Error::Domain(format!("norb = {norb} exceeds bitmask width")));
    }
    let alphas = masks_with_popcount(norb, nalpha);
    let betas = masks_with_popcount(norb, nbeta);
    let hf = ((1u32 << nalpha) - 1, (1u32 << nbeta) - 1);
    let mut determinants = Vec::with_capacity(alphas.len() * betas.len());
    determinants.push(hf);
    for &a in &alphas {
        for &b in &betas {
            if (a, b) != hf {
                determinants.push((a, b));
            }
        }
    }
    Ok(ConfigurationBasis { norb, nalpha, nbeta, determinants })
}
