//! Total-spin operator in the determinant basis and projection onto the
//! singlet (S = 0) subspace.

use std::collections::HashMap;

use ndarray::prelude::*;
use ndarray_linalg::SVD;

use crate::error::{Error, Result};
use crate::linalg;
use crate::mappings::ConfigurationBasis;

/// A determinant with an accumulated fermionic sign, threaded through
/// sequential ladder-operator application.  Ordering convention: alpha
/// spin orbitals first (positions 0..norb), then beta (norb..2norb).
#[derive(Clone, Copy)]
struct Walker {
    alpha: u32,
    beta: u32,
    sign: f64,
}

impl Walker {
    fn annihilate_alpha(mut self, p: usize) -> Option<Self> {
        if self.alpha >> p & 1 == 0 {
            return None;
        }
        if (self.alpha & ((1u32 << p) - 1)).count_ones() % 2 == 1 {
            self.sign = -self.sign;
        }
        self.alpha ^= 1 << p;
        Some(self)
    }

    fn create_alpha(mut self, p: usize) -> Option<Self> {
        if self.alpha >> p & 1 == 1 {
            return None;
        }
        if (self.alpha & ((1u32 << p) - 1)).count_ones() % 2 == 1 {
            self.sign = -self.sign;
        }
        self.alpha ^= 1 << p;
        Some(self)
    }

    fn annihilate_beta(mut self, p: usize) -> Option<Self> {
        if self.beta >> p & 1 == 0 {
            return None;
        }
        let crossings = self.alpha.count_ones() + (self.beta & ((1u32 << p) - 1)).count_ones();
        if crossings % 2 == 1 {
            self.sign = -self.sign;
        }
        self.beta ^= 1 << p;
        Some(self)
    }

    fn create_beta(mut self, p: usize) -> Option<Self> {
        if self.beta >> p & 1 == 1 {
            return None;
        }
        let crossings = self.alpha.count_ones() + (self.beta & ((1u32 << p) - 1)).count_ones();
        if crossings % 2 == 1 {
            self.sign = -self.sign;
        }
        self.beta ^= 1 << p;
        Some(self)
    }
}

/// Matrix of S^2 = Sz(Sz + 1) + S_- S_+ in the determinant basis.
pub fn build_s2_matrix(b: &ConfigurationBasis) -> Result<Array2<f64>> {
    if b.nalpha != b.nbeta {
        return Err(Error::Domain(format!(
            "S^2 basis requires nalpha = nbeta, got {} and {}",
            b.nalpha, b.nbeta
        )));
    }
    let dim = b.len();
    let index: HashMap<(u32, u32), usize> = b
        .determinants
        .iter()
        .enumerate()
        .map(|(i, &d)| (d, i))
        .collect();
    let sz = (b.nalpha as f64 - b.nbeta as f64) / 2.0;
    let mut s2 = Array2::<f64>::zeros((dim, dim));
    for (j, &(alpha, beta)) in b.determinants.iter().enumerate() {
        s2[[j, j]] += sz * (sz + 1.0);
        // S_- S_+ applied right-to-left: a_beta(p), a+_alpha(p), a_alpha(q), a+_beta(q).
        for p in 0..b.norb {
            for q in 0..b.norb {
                let w = Walker { alpha, beta, sign: 1.0 };
                let Some(w) = w.annihilate_beta(p) else { continue };
                let Some(w) = w.create_alpha(p) else { continue };
                let Some(w) = w.annihilate_alpha(q) else { continue };
                let Some(w) = w.create_beta(q) else { continue };
                let i = index[&(w.alpha, w.beta)];
                s2[[i, j]] += w.sign;
            }
        }
    }
    Ok(s2)
}

/// Project `h` onto the S^2 null space.  Returns the projected matrix and
/// the isometry whose columns span the singlet subspace; column 0 carries
/// maximal overlap with the HF determinant (basis index 0).
pub fn project_singlet(h: &Array2<f64>, s2: &Array2<f64>) -> Result<(Array2<f64>, Array2<f64>)> {
    if h.dim() != s2.dim() || h.nrows() != h.ncols() {
        return Err(Error::Shape(format!(
            "h is {:?}, s2 is {:?}",
            h.dim(),
            s2.dim()
        )));
    }
    let comm = linalg::commutator_norm(&h.view(), &s2.view());
    if comm > 1e-8 {
        return Err(Error::Symmetry(format!(
            "[H, S^2] has Frobenius norm {comm:.2e}"
        )));
    }
    let (vals, vecs) = linalg::eigh_ascending(&s2.view())?;
    let null_dim = vals.iter().filter(|&&v| v < 0.5).count();
    if null_dim == 0 {
        return Err(Error::Domain("S^2 has no null space in this basis".into()));
    }
    let q = vecs.slice(s![.., ..null_dim]).to_owned();

    // Rotate the null-space basis so column 0 is the normalized projection
    // of the HF determinant, then complete with the dominant left singular
    // vectors of the remainder.
    let e_hf = q.row(0).to_owned();
    let mut v: Array1<f64> = q.dot(&e_hf);
    let norm = v.dot(&v).sqrt();
    if norm < 1e-12 {
        return Err(Error::Preparation(
            "HF determinant has no weight in the singlet subspace".into(),
        ));
    }
    v /= norm;
    linalg::phase_fix(&mut v);

    let mut iso = Array2::<f64>::zeros((h.nrows(), null_dim));
    iso.column_mut(0).assign(&v);
    if null_dim > 1 {
        let overlaps = v.dot(&q);
        let residual = &q - &v.view().insert_axis(Axis(1)).dot(&overlaps.insert_axis(Axis(0)));
        let (u, sigma, _) = residual
            .svd(true, false)
            .map_err(|e| Error::Numerics(format!("singular value decomposition failed: {e}")))?;
        let u = u.expect("left singular vectors requested");
        let kept: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > 1e-8).collect();
        if kept.len() != null_dim - 1 {
            return Err(Error::Numerics(format!(
                "expected {} residual directions, found {}",
                null_dim - 1,
                kept.len()
            )));
        }
        for (c, &i) in kept.iter().enumerate() {
            let mut col = u.column(i).to_owned();
            linalg::phase_fix(&mut col);
            iso.column_mut(c + 1).assign(&col);
        }
    }
    let projected = iso.t().dot(h).dot(&iso);
    Ok((projected, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::enumerate_determinants;

    #[test]
    fn closed_shell_single_determinant() {
        let b = enumerate_determinants(1, 1, 1).unwrap();
        let s2 = build_s2_matrix(&b).unwrap();
        assert_eq!(s2.dim(), (1, 1));
        assert!(s2[[0, 0]].abs() < 1e-14);
    }

    #[test]
    fn two_in_two_spectrum() {
        let b = enumerate_determinants(2, 1, 1).unwrap();
        let s2 = build_s2_matrix(&b).unwrap();
        let (vals, _) = linalg::eigh_ascending(&s2.view()).unwrap();
        let expect = [0.0, 0.0, 0.0, 2.0];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12, "eigenvalues {vals:?}");
        }
    }

    #[test]
    fn eigenvalues_are_s_of_s_plus_one() {
        let b = enumerate_determinants(3, 2, 2).unwrap();
        let s2 = build_s2_matrix(&b).unwrap();
        let (vals, _) = linalg::eigh_ascending(&s2.view()).unwrap();
        for v in vals {
            let near = [0.0, 2.0, 6.0].iter().any(|e| (v - e).abs() < 1e-10);
            assert!(near, "unexpected S^2 eigenvalue {v}");
        }
    }

    #[test]
    fn singlet_count_matches_weyl_formula() {
        for norb in 1..=5usize {
            for nelec in (2..=norb.min(4)).step_by(2) {
                let b = enumerate_determinants(norb, nelec / 2, nelec / 2).unwrap();
                let s2 = build_s2_matrix(&b).unwrap();
                let (vals, _) = linalg::eigh_ascending(&s2.view()).unwrap();
                let count = vals.iter().filter(|&&v| v < 0.5).count() as u128;
                let w = crate::mappings::qubits::weyl_dimension(norb, nelec);
                assert_eq!(count, w, "norb={norb} nelec={nelec}");
            }
        }
    }

    #[test]
    fn projection_preserves_spectrum_subset() {
        let b = enumerate_determinants(2, 1, 1).unwrap();
        let s2 = build_s2_matrix(&b).unwrap();
        // Any matrix commuting with S^2 works; take a polynomial of it.
        let h = s2.dot(&s2) - &(2.0 * &s2) - &(1.5 * Array2::<f64>::eye(4));
        let (proj, iso) = project_singlet(&h, &s2).unwrap();
        assert_eq!(proj.dim(), (3, 3));
        // Isometry columns orthonormal.
        let gram = iso.t().dot(&iso);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((gram[[i, j]] - e).abs() < 1e-10);
            }
        }
        let (pv, _) = linalg::eigh_ascending(&proj.view()).unwrap();
        let (hv, _) = linalg::eigh_ascending(&h.view()).unwrap();
        for p in pv {
            assert!(hv.iter().any(|v| (v - p).abs() < 1e-9));
        }
    }

    #[test]
    fn column_zero_tracks_hf() {
        let b = enumerate_determinants(2, 1, 1).unwrap();
        let s2 = build_s2_matrix(&b).unwrap();
        let h = Array2::<f64>::eye(4);
        let (_, iso) = project_singlet(&h, &s2).unwrap();
        // HF determinant is pure singlet here, so column 0 is e_0 exactly.
        assert!((iso[[0, 0]] - 1.0).abs() < 1e-10);
        for r in 1..4 {
            assert!(iso[[r, 0]].abs() < 1e-10);
        }
    }
}
