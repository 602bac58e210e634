use faer::Mat;

use super::mps::{MpsBoundary, MpsFactors};
use crate::algebra::{BasisIndex, SparseOperator};
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

/// Trace-closed matrix-product operator. `cores[site][i * bond_dim + j]` is
/// the `n × n` on-site operator carried by auxiliary entry `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoFactors {
    local_dim: usize,
    bond_dim: usize,
    cores: Vec<Vec<Mat<C64>>>,
}

impl MpoFactors {
    pub fn new(local_dim: usize, bond_dim: usize, cores: Vec<Vec<Mat<C64>>>) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::ChainTooShort { min: 1, found: 0 });
        }
        for site in &cores {
            if site.len() != bond_dim * bond_dim {
                return Err(Error::DimensionMismatch {
                    expected: bond_dim * bond_dim,
                    found: site.len(),
                });
            }
            if let Some(m) = site
                .iter()
                .find(|m| m.nrows() != local_dim || m.ncols() != local_dim)
            {
                return Err(Error::DimensionMismatch {
                    expected: local_dim,
                    found: m.nrows(),
                });
            }
        }
        Ok(Self {
            local_dim,
            bond_dim,
            cores,
        })
    }

    pub fn sites(&self) -> usize {
        self.cores.len()
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn core(&self, site: usize, i: usize, j: usize) -> &Mat<C64> {
        &self.cores[site][i * self.bond_dim + j]
    }

    /// The MPS obtained by acting on the product state `|digits>`.
    pub fn apply_to_product(&self, digits: &[usize]) -> Result<MpsFactors> {
        if digits.len() != self.sites() {
            return Err(Error::DimensionMismatch {
                expected: self.sites(),
                found: digits.len(),
            });
        }
        let d = self.bond_dim;
        let tensors = digits
            .iter()
            .enumerate()
            .map(|(site, &col)| {
                (0..self.local_dim)
                    .map(|p| Mat::from_fn(d, d, |i, j| self.core(site, i, j)[(p, col)]))
                    .collect()
            })
            .collect();
        MpsFactors::new(self.local_dim, tensors, MpsBoundary::Trace)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let basis = BasisIndex::new(self.sites(), self.local_dim)?;
        if *state.basis() != basis {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: state.basis().dim(),
            });
        }
        let mut out = StateVector::zeros(basis);
        for (idx, &amp) in state.amplitudes().iter().enumerate() {
            if amp == C64::ZERO {
                continue;
            }
            let column = self.apply_to_product(&basis.decode(idx))?.contract()?;
            out = out.add_scaled(amp, &column)?;
        }
        Ok(out)
    }

    /// Full operator, one column per product state.
    pub fn to_sparse(&self) -> Result<SparseOperator> {
        let basis = BasisIndex::new(self.sites(), self.local_dim)?;
        let mut triplets = Vec::new();
        for col in 0..basis.dim() {
            let column = self.apply_to_product(&basis.decode(col))?.contract()?;
            for (row, &v) in column.amplitudes().iter().enumerate() {
                if v != C64::ZERO {
                    triplets.push((row, col, v));
                }
            }
        }
        SparseOperator::from_triplets(basis.dim(), triplets)
    }
}
