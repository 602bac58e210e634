use faer::{Mat, Side};

use crate::algebra::{BasisIndex, Charge, SparseOperator};
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

const HERMITIAN_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;
const SECTOR_WEIGHT_TOL: f64 = 1e-10;

/// Eigenvalues ascending, with eigenvectors as columns when retained.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    basis: BasisIndex,
    eigenvalues: Vec<f64>,
    vectors: Option<Mat<C64>>,
    /// Full-space indices spanned by the columns; `None` for the full space.
    sector_indices: Option<Vec<usize>>,
    sector: Option<Charge>,
}

/// Diagonalizes a Hermitian operator, optionally inside the charge sector `sector`.
///
/// Real operators go through the real-symmetric solver.
pub fn diagonalize(
    h: &SparseOperator,
    basis: &BasisIndex,
    sector: Option<Charge>,
    keep_vectors: bool,
) -> Result<EigenDecomposition> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: h.dim(),
        });
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let indices: Option<Vec<usize>> = match sector {
        None => None,
        Some(q) => {
            let leak = h.charge_leakage(basis);
            let scale = h.max_abs().max(f64::MIN_POSITIVE);
            if leak / scale > SYMMETRY_TOL {
                return Err(Error::SymmetryBroken(leak));
            }
            Some(match h.sectors() {
                Some(blocks) => blocks
                    .iter()
                    .find(|b| b.charge == q)
                    .map(|b| b.indices.clone())
                    .unwrap_or_default(),
                None => (0..basis.dim()).filter(|&i| basis.charge(i) == q).collect(),
            })
        }
    };
    let dense = match &indices {
        Some(idx) => h.restrict(idx),
        None => h.to_dense(),
    };
    let (eigenvalues, vectors) = dense_eigh(&dense, keep_vectors)?;
    Ok(EigenDecomposition {
        basis: *basis,
        eigenvalues,
        vectors,
        sector_indices: indices,
        sector,
    })
}

fn dense_eigh(m: &Mat<C64>, keep_vectors: bool) -> Result<(Vec<f64>, Option<Mat<C64>>)> {
    let dim = m.nrows();
    if dim == 0 {
        return Ok((Vec::new(), keep_vectors.then(|| Mat::zeros(0, 0))));
    }
    let is_real = (0..dim).all(|j| (0..dim).all(|i| m[(i, j)].im == 0.0));
    let linalg = |e: faer::linalg::evd::EvdError| Error::Linalg(format!("{e:?}"));
    if is_real {
        let re = Mat::<f64>::from_fn(dim, dim, |i, j| m[(i, j)].re);
        if keep_vectors {
            let evd = re.self_adjoint_eigen(Side::Lower).map_err(linalg)?;
            let s = evd.S().column_vector();
            let u = evd.U();
            let values = (0..dim).map(|i| s[i]).collect();
            let vecs = Mat::from_fn(dim, dim, |i, j| C64::new(u[(i, j)], 0.0));
            Ok(sorted(values, Some(vecs)))
        } else {
            Ok(sorted(
                re.self_adjoint_eigenvalues(Side::Lower).map_err(linalg)?,
                None,
            ))
        }
    } else if keep_vectors {
        let evd = m.self_adjoint_eigen(Side::Lower).map_err(linalg)?;
        let s = evd.S().column_vector();
        let values = (0..dim).map(|i| s[i].re).collect();
        Ok(sorted(values, Some(evd.U().to_owned())))
    } else {
        Ok(sorted(
            m.self_adjoint_eigenvalues(Side::Lower).map_err(linalg)?,
            None,
        ))
    }
}

/// Enforces ascending order, permuting columns alongside.
fn sorted(values: Vec<f64>, vectors: Option<Mat<C64>>) -> (Vec<f64>, Option<Mat<C64>>) {
    if values.windows(2).all(|w| w[0] <= w[1]) {
        return (values, vectors);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let vals = order.iter().map(|&i| values[i]).collect();
    let vecs = vectors.map(|v| Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, order[j])]));
    (vals, vecs)
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn basis(&self) -> &BasisIndex {
        &self.basis
    }

    pub fn sector(&self) -> Option<Charge> {
        self.sector
    }

    pub fn sector_indices(&self) -> Option<&[usize]> {
        self.sector_indices.as_deref()
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    /// Eigenvector matrix in the (possibly restricted) diagonalization basis.
    pub fn vectors(&self) -> Result<&Mat<C64>> {
        self.vectors.as_ref().ok_or(Error::MissingEigenvectors)
    }

    /// Eigenvector `i` as a full-space state.
    pub fn eigenstate(&self, i: usize) -> Result<StateVector> {
        let v = self.vectors()?;
        let mut amps = vec![C64::ZERO; self.basis.dim()];
        match &self.sector_indices {
            Some(idx) => idx
                .iter()
                .enumerate()
                .for_each(|(k, &full)| amps[full] = v[(k, i)]),
            None => (0..v.nrows()).for_each(|k| amps[k] = v[(k, i)]),
        }
        StateVector::new(self.basis, amps)
    }

    /// Restriction of a full-space state to the diagonalization basis.
    ///
    /// Errors when the state has weight outside the sector.
    pub fn restrict_state(&self, state: &StateVector) -> Result<Vec<C64>> {
        let amps = state.amplitudes();
        match &self.sector_indices {
            None => Ok(amps.to_vec()),
            Some(idx) => {
                let inside: f64 = idx.iter().map(|&i| amps[i].norm_sqr()).sum();
                let total = state.norm().powi(2);
                let outside = (total - inside).max(0.0);
                if outside > SECTOR_WEIGHT_TOL * total.max(1.0) {
                    return Err(Error::OutsideSector(outside));
                }
                Ok(idx.iter().map(|&i| amps[i]).collect())
            }
        }
    }

    /// `c_i = <E_i|ψ>` for every eigenvector.
    pub fn coefficients_of(&self, state: &StateVector) -> Result<Vec<C64>> {
        let v = self.vectors()?;
        let psi = self.restrict_state(state)?;
        Ok((0..v.ncols())
            .map(|j| (0..v.nrows()).map(|k| v[(k, j)].conj() * psi[k]).sum())
            .collect())
    }

    /// `‖H − VΛV^†‖_F / ‖H‖_F` on the diagonalized block.
    pub fn reconstruction_error(&self, h: &SparseOperator) -> Result<f64> {
        let v = self.vectors()?;
        let block = match &self.sector_indices {
            Some(idx) => h.restrict(idx),
            None => h.to_dense(),
        };
        let dim = v.nrows();
        let scaled = Mat::from_fn(dim, dim, |i, j| v[(i, j)] * self.eigenvalues[j]);
        let rebuilt = &scaled * v.adjoint();
        let mut diff = 0.0;
        let mut norm = 0.0;
        for j in 0..dim {
            for i in 0..dim {
                diff += (block[(i, j)] - rebuilt[(i, j)]).norm_sqr();
                norm += block[(i, j)].norm_sqr();
            }
        }
        Ok((diff / norm.max(f64::MIN_POSITIVE)).sqrt())
    }
}
