//! Qubit-requirement calculator for the three mapping flavors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingKind {
    Direct,
    Compact,
    CompactSinglet,
}

impl std::str::FromStr for MappingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "compact" => Ok(Self::Compact),
            "compact_singlet" | "compact-singlet" => Ok(Self::CompactSinglet),
            other => Err(Error::Parse(format!("unknown mapping kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingSpec {
    pub kind: MappingKind,
    pub nqubits: u32,
    pub subspace_dimension: u128,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of singlet (S = 0) configurations of `nelec` electrons in `norb`
/// orbitals, by the Weyl dimension formula.
pub(crate) fn weyl_dimension(norb: usize, nelec: usize) -> u128 {
    let m = norb as u128 + 1;
    let half = nelec as u128 / 2;
    binomial(m, half) * binomial(m, half + 1) / m
}

fn ceil_log2(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// Qubits needed to hold the wave function under each mapping.
pub fn qubit_requirements(norb: usize, nelec: usize, kind: MappingKind) -> Result<MappingSpec> {
    if nelec > 2 * norb {
        return Err(Error::Domain(format!(
            "{nelec} electrons exceed capacity of {norb} spatial orbitals"
        )));
    }
    let (nqubits, subspace_dimension) = match kind {
        MappingKind::Direct => (2 * norb as u32, 1u128 << (2 * norb)),
        MappingKind::Compact => {
            let dim = binomial(2 * norb as u128, nelec as u128);
            (ceil_log2(dim), dim)
        }
        MappingKind::CompactSinglet => {
            if nelec % 2 != 0 {
                return Err(Error::Domain(format!(
                    "singlet mapping requires an even electron count, got {nelec}"
                )));
            }
            let dim = weyl_dimension(norb, nelec);
            (ceil_log2(dim), dim)
        }
    };
    Ok(MappingSpec { kind, nqubits, subspace_dimension })
}
