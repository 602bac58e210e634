use faer::Mat;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

const NORM_TOL: f64 = 1e-10;

/// `|ψ> = Σ_i λ_i |u_i> ⊗ |v_i>` across a cut.
#[derive(Clone, Debug)]
pub struct Schmidt {
    /// Descending, non-negative.
    pub values: Vec<f64>,
    /// Columns are `|u_i>` on the first `cut` sites.
    pub left: Mat<C64>,
    /// Columns are `|v_i>` on the remaining sites.
    pub right: Mat<C64>,
}

impl Schmidt {
    /// Eigenvalues `λ_i²` of the reduced density matrix.
    pub fn probabilities(&self) -> Vec<f64> {
        self.values.iter().map(|l| l * l).collect()
    }
}

/// Amplitudes reshaped to `n^cut × n^(L−cut)`; site 1 is most significant, so
/// the row index is the left block.
pub(crate) fn bipartite_matrix(state: &StateVector, cut: usize) -> Result<Mat<C64>> {
    let basis = state.basis();
    if cut > basis.sites() {
        return Err(Error::SiteOutOfRange {
            site: cut,
            sites: basis.sites(),
        });
    }
    let cols = basis.local_dim().pow((basis.sites() - cut) as u32);
    let rows = basis.dim() / cols;
    let amps = state.amplitudes();
    Ok(Mat::from_fn(rows, cols, |r, c| amps[r * cols + c]))
}

/// Schmidt decomposition of a normalized state after the first `cut` sites.
pub fn schmidt_decompose(state: &StateVector, cut: usize) -> Result<Schmidt> {
    state.check_normalized(NORM_TOL)?;
    let m = bipartite_matrix(state, cut)?;
    let svd = m.thin_svd().map_err(|e| Error::Linalg(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let values: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
    let v = svd.V();
    Ok(Schmidt {
        values,
        left: svd.U().to_owned(),
        right: Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)].conj()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BasisIndex;

    #[test]
    fn product_state_has_one_value() {
        let b = BasisIndex::new(4, 2).unwrap();
        let s = schmidt_decompose(&StateVector::from_label(b, "0110").unwrap(), 2).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-14);
        assert!(s.values[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn bell_pair() {
        let b = BasisIndex::new(2, 2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new(
            b,
            vec![C64::ZERO, C64::new(r, 0.0), C64::new(r, 0.0), C64::ZERO],
        )
        .unwrap();
        let s = schmidt_decompose(&psi, 1).unwrap();
        assert!((s.values[0] - r).abs() < 1e-14 && (s.values[1] - r).abs() < 1e-14);
    }

    #[test]
    fn factors_reconstruct_the_state() {
        let b = BasisIndex::new(5, 2).unwrap();
        let psi = StateVector::random_gaussian(b, &mut crate::rng::stream(3, "schmidt"));
        let s = schmidt_decompose(&psi, 2).unwrap();
        let total: f64 = s.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for idx in 0..b.dim() {
            let (r, c) = (idx / 8, idx % 8);
            let rebuilt: C64 = (0..s.values.len())
                .map(|i| s.left[(r, i)] * s.right[(c, i)] * s.values[i])
                .sum();
            assert!((rebuilt - psi.amplitude(idx)).norm() < 1e-12);
        }
    }

    #[test]
    fn unnormalized_input_rejected() {
        let b = BasisIndex::new(2, 2).unwrap();
        let psi = StateVector::from_label(b, "01")
            .unwrap()
            .scale(C64::new(2.0, 0.0));
        assert!(matches!(
            schmidt_decompose(&psi, 1),
            Err(Error::NotNormalized(_))
        ));
    }
}
