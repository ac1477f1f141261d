//! Dense statevector simulator: registers, gates, controlled unitaries,
//! the inverse quantum Fourier transform, matrix exponentiation, and
//! measurement.

use std::f64::consts::PI;
use std::ops::Range;

use ndarray::prelude::*;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 16;

/// A register of `nqubits` qubits; qubit `q` is bit `q` of the basis index
/// (little-endian), so high-order qubits form the read-out register.
#[derive(Debug, Clone)]
pub struct StateVector {
    nqubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis_state(nqubits: usize, index: usize) -> Result<Self> {
        let dim = Self::check_capacity(nqubits)?;
        if index >= dim {
            return Err(Error::Index(format!("basis index {index} outside 0..{dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { nqubits, amps })
    }

    pub fn from_amplitudes(nqubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = Self::check_capacity(nqubits)?;
        if amps.len() != dim {
            return Err(Error::Shape(format!(
                "expected {dim} amplitudes for {nqubits} qubits, got {}",
                amps.len()
            )));
        }
        let s = Self { nqubits, amps };
        let n = s.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("state norm {n} is not 1")));
        }
        Ok(s)
    }

    /// Embed a (possibly shorter-than-2^n) subspace vector into a register,
    /// padding with zeros and renormalizing exactly.
    pub fn from_subspace(nqubits: usize, v: &[Complex64]) -> Result<Self> {
        let dim = Self::check_capacity(nqubits)?;
        if v.len() > dim {
            return Err(Error::Shape(format!(
                "{} amplitudes exceed {nqubits}-qubit register",
                v.len()
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[..v.len()].copy_from_slice(v);
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-12 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        for a in &mut amps {
            *a /= n;
        }
        Ok(Self { nqubits, amps })
    }

    fn check_capacity(nqubits: usize) -> Result<usize> {
        let dim = 1usize
            .checked_shl(nqubits as u32)
            .filter(|&d| d <= DEFAULT_AMPLITUDE_CAP)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "{nqubits} qubits exceed the amplitude cap {DEFAULT_AMPLITUDE_CAP}"
                ))
            })?;
        Ok(dim)
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_one_qubit_gate(&mut self, q: usize, g: &[[Complex64; 2]; 2]) -> Result<()> {
        if q >= self.nqubits {
            return Err(Error::Index(format!("qubit {q} outside register of {}", self.nqubits)));
        }
        let stride = 1usize << q;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for lo in base..base + stride {
                let hi = lo + stride;
                let (a, b) = (self.amps[lo], self.amps[hi]);
                self.amps[lo] = g[0][0] * a + g[0][1] * b;
                self.amps[hi] = g[1][0] * a + g[1][1] * b;
            }
            base += 2 * stride;
        }
        Ok(())
    }

    /// Apply `u` on a contiguous block of qubits, optionally conditioned on
    /// a control qubit outside the block.  A `u` smaller than the block
    /// acts on its leading basis states and as identity on the rest.
    pub fn apply_block_unitary(
        &mut self,
        block: Range<usize>,
        u: &DenseUnitary,
        control: Option<usize>,
    ) -> Result<()> {
        let width = block.end - block.start;
        if block.end > self.nqubits {
            return Err(Error::Index(format!(
                "block {block:?} outside register of {}",
                self.nqubits
            )));
        }
        if u.dim() > 1 << width {
            return Err(Error::Shape(format!(
                "unitary of dimension {} on a {width}-qubit block",
                u.dim()
            )));
        }
        if let Some(c) = control {
            if c >= self.nqubits {
                return Err(Error::Index(format!("control {c} outside register")));
            }
            if block.contains(&c) {
                return Err(Error::Index(format!("control {c} inside target block {block:?}")));
            }
        }
        let bdim = u.dim();
        let lo_mask = (1usize << block.start) - 1;
        let rest = self.amps.len() >> width;
        let mut scratch = Array1::<Complex64>::zeros(bdim);
        for r in 0..rest {
            // Scatter the non-block bits of r around the block.
            let low = r & lo_mask;
            let high = (r & !lo_mask) << width;
            let base = high | low;
            if let Some(c) = control {
                if base >> c & 1 == 0 {
                    continue;
                }
            }
            for k in 0..bdim {
                scratch[k] = self.amps[base | (k << block.start)];
            }
            let transformed = u.matrix().dot(&scratch);
            for k in 0..bdim {
                self.amps[base | (k << block.start)] = transformed[k];
            }
        }
        Ok(())
    }

    /// Inverse quantum Fourier transform on a contiguous block.
    pub fn inverse_qft(&mut self, block: Range<usize>) -> Result<()> {
        let u = DenseUnitary::inverse_fourier(block.end - block.start)?;
        self.apply_block_unitary(block, &u, None)
    }

    /// Marginal outcome distribution over a contiguous block of qubits.
    pub fn measure_distribution(&self, block: Range<usize>) -> Result<Vec<f64>> {
        if block.end > self.nqubits {
            return Err(Error::Index(format!(
                "block {block:?} outside register of {}",
                self.nqubits
            )));
        }
        let width = block.end - block.start;
        let mask = (1usize << width) - 1;
        let mut probs = vec![0.0; 1 << width];
        for (i, a) in self.amps.iter().enumerate() {
            probs[(i >> block.start) & mask] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Sample one outcome on the block and collapse the state.
    pub fn sample_and_collapse<R: Rng>(&mut self, block: Range<usize>, rng: &mut R) -> Result<usize> {
        let probs = self.measure_distribution(block.clone())?;
        let draw: f64 = rng.gen();
        let mut cum = 0.0;
        let mut outcome = probs.len() - 1;
        for (k, p) in probs.iter().enumerate() {
            cum += p;
            if draw < cum {
                outcome = k;
                break;
            }
        }
        let width = block.end - block.start;
        let mask = (1usize << width) - 1;
        let mut kept = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i >> block.start) & mask != outcome {
                *a = Complex64::new(0.0, 0.0);
            } else {
                kept += a.norm_sqr();
            }
        }
        let scale = kept.sqrt();
        if scale < 1e-12 {
            return Err(Error::Numerics("collapse onto a zero-probability outcome".into()));
        }
        for a in &mut self.amps {
            *a /= scale;
        }
        Ok(outcome)
    }
}

/// A dense unitary matrix, validated on construction.
#[derive(Debug, Clone)]
pub struct DenseUnitary {
    matrix: Array2<Complex64>,
}

impl DenseUnitary {
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Shape(format!(
                "unitary must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let drift = linalg::unitarity_error(&matrix.view());
        if drift > 1e-9 {
            return Err(Error::Numerics(format!("unitarity violated by {drift:.2e}")));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.matrix.view())
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: Array2::eye(dim) }
    }

    /// Global phase times the identity.
    pub fn phase(dim: usize, angle: f64) -> Self {
        let z = Complex64::from_polar(1.0, angle);
        Self { matrix: Array2::eye(dim).mapv(|e: Complex64| e * z) }
    }

    pub fn scale_phase(&self, angle: f64) -> Self {
        let z = Complex64::from_polar(1.0, angle);
        Self { matrix: self.matrix.mapv(|e| e * z) }
    }

    pub fn dot(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.dot(&other.matrix) }
    }

    pub fn square(&self) -> Self {
        self.dot(self)
    }

    /// Pad to a 2^nqubits register, acting as identity on the complement.
    pub fn embed(&self, nqubits: usize) -> Result<Self> {
        let dim = 1usize << nqubits;
        if self.dim() > dim {
            return Err(Error::Shape(format!(
                "cannot embed dimension {} into {nqubits} qubits",
                self.dim()
            )));
        }
        let mut m = Array2::<Complex64>::eye(dim);
        m.slice_mut(s![..self.dim(), ..self.dim()])
            .assign(&self.matrix);
        Ok(Self { matrix: m })
    }

    /// The m-qubit inverse Fourier transform `F^{-1}[k,j] = 2^{-m/2} e^{-i2πjk/2^m}`.
    pub fn inverse_fourier(m: usize) -> Result<Self> {
        if m > 16 {
            return Err(Error::Capacity(format!("inverse QFT on {m} qubits refused")));
        }
        let dim = 1usize << m;
        let scale = 1.0 / (dim as f64).sqrt();
        let matrix = Array2::from_shape_fn((dim, dim), |(k, j)| {
            Complex64::from_polar(scale, -2.0 * PI * (j as f64) * (k as f64) / dim as f64)
        });
        Ok(Self { matrix })
    }
}

/// `e^{i h τ}` for real symmetric `h`, via full eigendecomposition.
pub fn expm_i_hermitian(h: &ArrayView2<f64>, tau: f64) -> Result<DenseUnitary> {
    let (vals, vecs) = linalg::eigh_ascending(h)?;
    let vecs_c = linalg::to_complex(&vecs.view());
    let phases = Array1::from_iter(vals.iter().map(|&l| Complex64::from_polar(1.0, l * tau)));
    let scaled = &vecs_c * &phases.view().insert_axis(Axis(0));
    let matrix = scaled.dot(&vecs_c.t().mapv(|z| z.conj()));
    Ok(DenseUnitary { matrix })
}

/// Complex-Hermitian variant of [`expm_i_hermitian`].
pub fn expm_i_hermitian_complex(h: &ArrayView2<Complex64>, tau: f64) -> Result<DenseUnitary> {
    let (vals, vecs) = linalg::eigh_hermitian(h)?;
    let phases = Array1::from_iter(vals.iter().map(|&l| Complex64::from_polar(1.0, l * tau)));
    let scaled = &vecs * &phases.view().insert_axis(Axis(0));
    let matrix = scaled.dot(&vecs.t().mapv(|z| z.conj()));
    Ok(DenseUnitary { matrix })
}

pub fn hadamard() -> [[Complex64; 2]; 2] {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_tau_zero_is_identity() {
        let h: Array2<f64> = array![[1.0, 0.3], [0.3, -2.0]];
        let u = expm_i_hermitian(&h.view(), 0.0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((u.matrix()[[i, j]] - c(e, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expm_diagonal_case() {
        let h = Array2::from_diag(&array![0.5, -1.5]);
        let u = expm_i_hermitian(&h.view(), 2.0).unwrap();
        assert!((u.matrix()[[0, 0]] - Complex64::from_polar(1.0, 1.0)).norm() < 1e-12);
        assert!((u.matrix()[[1, 1]] - Complex64::from_polar(1.0, -3.0)).norm() < 1e-12);
    }

    #[test]
    fn expm_pauli_x_quarter_turn() {
        let h: Array2<f64> = array![[0.0, 1.0], [1.0, 0.0]];
        let u = expm_i_hermitian(&h.view(), PI / 2.0).unwrap();
        // e^{iXπ/2} = i·X
        for (i, j, e) in [(0, 0, c(0.0, 0.0)), (0, 1, c(0.0, 1.0)), (1, 0, c(0.0, 1.0)), (1, 1, c(0.0, 0.0))] {
            assert!((u.matrix()[[i, j]] - e).norm() < 1e-12, "entry {i}{j}");
        }
    }

    #[test]
    fn expm_group_property() {
        let h: Array2<f64> = array![[0.2, 0.7], [0.7, -0.4]];
        let a = expm_i_hermitian(&h.view(), 0.3).unwrap();
        let b = expm_i_hermitian(&h.view(), 1.1).unwrap();
        let ab = a.dot(&b);
        let direct = expm_i_hermitian(&h.view(), 1.4).unwrap();
        let diff = ab.matrix() - direct.matrix();
        assert!(linalg::spectral_norm(&diff.view()) < 1e-8);
    }

    #[test]
    fn hadamard_roundtrip() {
        let mut s = StateVector::basis_state(1, 0).unwrap();
        s.apply_one_qubit_gate(0, &hadamard()).unwrap();
        assert!((s.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amplitudes()[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        s.apply_one_qubit_gate(0, &hadamard()).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-12);
        assert!(s.amplitudes()[1].norm() < 1e-12);
    }

    #[test]
    fn controlled_unitary_respects_control() {
        let x = DenseUnitary::new(array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        // control qubit 1 clear: nothing happens
        let mut s = StateVector::basis_state(2, 0b00).unwrap();
        s.apply_block_unitary(0..1, &x, Some(1)).unwrap();
        assert!((s.amplitudes()[0b00].re - 1.0).abs() < 1e-12);
        // control set: target flipped (CNOT)
        let mut s = StateVector::basis_state(2, 0b10).unwrap();
        s.apply_block_unitary(0..1, &x, Some(1)).unwrap();
        assert!((s.amplitudes()[0b11].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_kickback() {
        let phi = 0.3;
        let u = DenseUnitary::phase(2, 2.0 * PI * phi);
        let mut s = StateVector::basis_state(2, 0).unwrap();
        s.apply_one_qubit_gate(1, &hadamard()).unwrap();
        s.apply_block_unitary(0..1, &u, Some(1)).unwrap();
        let r = s.amplitudes()[0b10] / s.amplitudes()[0b00];
        assert!((r - Complex64::from_polar(1.0, 2.0 * PI * phi)).norm() < 1e-12);
    }

    #[test]
    fn iqft_inverts_fourier_vectors() {
        let m = 4;
        let dim = 1 << m;
        for j in [0usize, 5, 11] {
            let amps: Vec<Complex64> = (0..dim)
                .map(|n| Complex64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * (j * n) as f64 / dim as f64))
                .collect();
            let mut s = StateVector::from_amplitudes(m, amps).unwrap();
            s.inverse_qft(0..m).unwrap();
            let probs = s.measure_distribution(0..m).unwrap();
            assert!((probs[j] - 1.0).abs() < 1e-10, "j = {j}: {probs:?}");
        }
    }

    #[test]
    fn kernel_peak_probability_bound() {
        let m = 4;
        let dim = 1usize << m;
        let phi = 0.53 + 1.0 / 64.0; // deliberately off-grid
        let amps: Vec<Complex64> = (0..dim)
            .map(|n| Complex64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * phi * n as f64))
            .collect();
        let mut s = StateVector::from_amplitudes(m, amps).unwrap();
        s.inverse_qft(0..m).unwrap();
        let probs = s.measure_distribution(0..m).unwrap();
        let peak = probs.iter().cloned().fold(0.0, f64::max);
        let argmax = probs.iter().position(|&p| p == peak).unwrap();
        assert_eq!(argmax, (phi * dim as f64).round() as usize % dim);
        assert!(peak >= 4.0 / (PI * PI));
    }

    #[test]
    fn bell_pair_marginal() {
        let s = StateVector::from_amplitudes(
            2,
            vec![c(std::f64::consts::FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(std::f64::consts::FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        let probs = s.measure_distribution(0..1).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-12);
        assert!((probs[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampling_collapses() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut s = StateVector::from_amplitudes(
            2,
            vec![c(std::f64::consts::FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(std::f64::consts::FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        let outcome = s.sample_and_collapse(0..1, &mut rng).unwrap();
        let probs = s.measure_distribution(0..2).unwrap();
        // After collapse the state is a definite basis state of the pair.
        assert!((probs[outcome * 0b11] - 1.0).abs() < 1e-10);
        assert!((s.norm() - 1.0).abs() < 1e-10);
    }
}
