//! Small dense linear-algebra helpers shared by the physics modules.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest absolute deviation from symmetry, `max |a - a^T|`.
pub fn asymmetry(a: &ArrayView2<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..i {
            worst = worst.max((a[[i, j]] - a[[j, i]]).abs());
        }
    }
    worst
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn eigh_ascending(a: &ArrayView2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!("matrix is {}x{}", a.nrows(), a.ncols())));
    }
    if asymmetry(a) > 1e-10 {
        return Err(Error::Symmetry(format!(
            "matrix deviates from symmetry by {:.2e}",
            asymmetry(a)
        )));
    }
    let (vals, vecs) = a
        .to_owned()
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Numerics(format!("eigendecomposition failed: {e}")))?;
    Ok((vals, vecs))
}

/// Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending.
pub fn eigh_hermitian(a: &ArrayView2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..=i {
            worst = worst.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    if worst > 1e-10 {
        return Err(Error::Symmetry(format!("matrix deviates from Hermiticity by {worst:.2e}")));
    }
    let (vals, vecs) = a
        .to_owned()
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Numerics(format!("eigendecomposition failed: {e}")))?;
    Ok((vals, vecs))
}

/// Frobenius norm of `U^H U - I`.
pub fn unitarity_error(u: &ArrayView2<Complex64>) -> f64 {
    let gram = u.t().mapv(|z| z.conj()).dot(u);
    let mut sum = 0.0;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let expect = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            sum += (gram[[i, j]] - expect).norm_sqr();
        }
    }
    sum.sqrt()
}

/// Spectral norm (largest singular value) of a complex matrix, computed
/// from the Hermitian Gram matrix.
pub fn spectral_norm(a: &ArrayView2<Complex64>) -> f64 {
    let gram = a.t().mapv(|z| z.conj()).dot(a);
    // Gram is Hermitian PSD by construction; take the top eigenvalue.
    let (vals, _) = gram
        .eigh(UPLO::Lower)
        .expect("gram eigendecomposition cannot fail for finite input");
    vals[vals.len() - 1].max(0.0).sqrt()
}

/// Promote a real matrix to complex.
pub fn to_complex(a: &ArrayView2<f64>) -> Array2<Complex64> {
    a.mapv(|x| Complex64::new(x, 0.0))
}

/// Flip the sign of a real vector so its largest-magnitude entry is positive.
pub fn phase_fix(v: &mut Array1<f64>) {
    let mut best = 0;
    for i in 0..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.mapv_inplace(|x| -x);
    }
}

/// Frobenius norm of the commutator `ab - ba`.
pub fn commutator_norm(a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> f64 {
    let c = a.dot(b) - b.dot(a);
    c.iter().map(|x| x * x).sum::<f64>().sqrt()
}
