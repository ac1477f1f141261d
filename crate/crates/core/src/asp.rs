//! Adiabatic state preparation: discretized linear interpolation from the
//! trivial Hartree-Fock Hamiltonian to the full FCI operator, with overlap
//! and spectral-gap traces.

use ndarray::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone)]
pub struct AspPath {
    pub h_start: Array2<f64>,
    pub h_end: Array2<f64>,
    pub steps: usize,
    /// Total evolution time T, hartree^-1.
    pub total_time: f64,
}

impl AspPath {
    pub fn new(h_start: Array2<f64>, h_end: Array2<f64>, steps: usize, total_time: f64) -> Result<Self> {
        if h_start.dim() != h_end.dim() || h_start.nrows() != h_start.ncols() {
            return Err(Error::Shape(format!(
                "endpoint matrices are {:?} and {:?}",
                h_start.dim(),
                h_end.dim()
            )));
        }
        for (name, m) in [("start", &h_start), ("end", &h_end)] {
            let dev = linalg::asymmetry(&m.view());
            if dev > 1e-10 {
                return Err(Error::Symmetry(format!(
                    "{name} Hamiltonian deviates from symmetry by {dev:.2e}"
                )));
            }
        }
        if steps < 1 {
            return Err(Error::Domain("ASP needs at least one step".into()));
        }
        if !(total_time > 0.0) {
            return Err(Error::Domain(format!("total time {total_time} must be positive")));
        }
        Ok(Self { h_start, h_end, steps, total_time })
    }

    fn interpolate(&self, s: f64) -> Array2<f64> {
        (1.0 - s) * &self.h_start + s * &self.h_end
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AspStepRecord {
    pub s: f64,
    /// |<instantaneous ground state | psi>|^2.
    pub overlap_instantaneous: f64,
    /// |<final (s = 1) ground state | psi>|^2.
    pub overlap_final: f64,
    /// E1(s) - E0(s), hartree.
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct AspTrace {
    pub records: Vec<AspStepRecord>,
    pub final_state: Array1<Complex64>,
}

impl AspTrace {
    pub fn final_overlap(&self) -> f64 {
        self.records.last().map(|r| r.overlap_final).unwrap_or(0.0)
    }
}

/// All zero except entry (0,0) = the HF energy; valid because the basis is
/// ordered HF-first.
pub fn build_hf_hamiltonian(dim: usize, hf_energy: f64) -> Array2<f64> {
    let mut h = Array2::zeros((dim, dim));
    h[[0, 0]] = hf_energy;
    h
}

/// Default T = steps · 0.1/|E_HF|, tying the step size to the initial gap.
pub fn default_total_time(hf_energy: f64, steps: usize) -> f64 {
    steps as f64 * 0.1 / hf_energy.abs()
}

fn ground_and_gap(h: &Array2<f64>) -> Result<(Array1<f64>, f64)> {
    let (vals, vecs) = linalg::eigh_ascending(&h.view())?;
    let gap = if vals.len() > 1 {
        vals[1] - vals[0]
    } else {
        f64::INFINITY
    };
    let mut g = vecs.column(0).to_owned();
    linalg::phase_fix(&mut g);
    Ok((g, gap))
}

fn overlap2(ground: &Array1<f64>, psi: &Array1<Complex64>) -> f64 {
    let inner: Complex64 = ground
        .iter()
        .zip(psi.iter())
        .map(|(g, p)| Complex64::new(*g, 0.0) * p)
        .sum();
    inner.norm_sqr()
}

/// Evolve `initial` along the path, one exact exponential of the
/// interpolated Hamiltonian per step.
pub fn asp_evolve(path: &AspPath, initial: &Array1<Complex64>) -> Result<AspTrace> {
    let dim = path.h_start.nrows();
    if initial.len() != dim {
        return Err(Error::Shape(format!(
            "initial state has {} amplitudes, path dimension is {dim}",
            initial.len()
        )));
    }
    let (ground_final, _) = ground_and_gap(&path.h_end)?;
    let dt = path.total_time / path.steps as f64;
    let mut psi = initial.clone();
    let mut records = Vec::with_capacity(path.steps + 1);

    let (g0, gap0) = ground_and_gap(&path.h_start)?;
    records.push(AspStepRecord {
        s: 0.0,
        overlap_instantaneous: overlap2(&g0, &psi),
        overlap_final: overlap2(&ground_final, &psi),
        gap: gap0,
    });

    for j in 1..=path.steps {
        let s = j as f64 / path.steps as f64;
        let h = path.interpolate(s);
        let (vals, vecs) = linalg::eigh_ascending(&h.view())?;
        let gap = vals[1] - vals[0];
        if gap < 1e-12 {
            return Err(Error::Degeneracy(format!(
                "instantaneous gap {gap:.2e} at s = {s}"
            )));
        }
        // psi <- V e^{-i w dt} V^T psi
        let vecs_c = linalg::to_complex(&vecs.view());
        let coeffs = vecs_c.t().dot(&psi);
        let rotated = Array1::from_iter(
            coeffs
                .iter()
                .zip(vals.iter())
                .map(|(c, &w)| c * Complex64::from_polar(1.0, -w * dt)),
        );
        psi = vecs_c.dot(&rotated);

        let mut ground = vecs.column(0).to_owned();
        linalg::phase_fix(&mut ground);
        records.push(AspStepRecord {
            s,
            overlap_instantaneous: overlap2(&ground, &psi),
            overlap_final: overlap2(&ground_final, &psi),
            gap,
        });
    }
    let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Numerics(format!("evolved norm drifted to {norm}")));
    }
    Ok(AspTrace { records, final_state: psi })
}

/// Two lowest levels of H(s) at each grid point, including both endpoints.
pub fn gap_profile(path: &AspPath) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(path.steps + 1);
    for j in 0..=path.steps {
        let s = j as f64 / path.steps as f64;
        let (vals, _) = linalg::eigh_ascending(&path.interpolate(s).view())?;
        let gap = if vals.len() > 1 {
            vals[1] - vals[0]
        } else {
            f64::INFINITY
        };
        out.push((s, gap));
    }
    Ok(out)
}

/// Double T from the default until the final overlap with the exact ground
/// state reaches `threshold`.  Returns the calibrated T and its trace.
pub fn calibrate_total_time(
    h_start: &Array2<f64>,
    h_end: &Array2<f64>,
    steps: usize,
    initial: &Array1<Complex64>,
    threshold: f64,
) -> Result<(f64, AspTrace)> {
    let hf_energy = h_start[[0, 0]];
    let mut t = default_total_time(hf_energy, steps);
    for _ in 0..16 {
        let path = AspPath::new(h_start.clone(), h_end.clone(), steps, t)?;
        let trace = asp_evolve(&path, initial)?;
        if trace.final_overlap() >= threshold {
            return Ok((t, trace));
        }
        t *= 2.0;
    }
    Err(Error::Preparation(format!(
        "overlap threshold {threshold} not reached after 16 doublings of T"
    )))
}
