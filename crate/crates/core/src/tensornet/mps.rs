use faer::Mat;

use crate::algebra::BasisIndex;
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

/// How the auxiliary index is closed at the chain ends.
#[derive(Clone, Debug, PartialEq)]
pub enum MpsBoundary {
    /// `tr(A_{p_1} ⋯ A_{p_L})`.
    Trace,
    /// `<l| A_{p_1} ⋯ A_{p_L} |r>`.
    Open { left: Vec<C64>, right: Vec<C64> },
}

/// Site tensors `tensors[site][p]`, each `bond_dim × bond_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsFactors {
    local_dim: usize,
    bond_dim: usize,
    tensors: Vec<Vec<Mat<C64>>>,
    boundary: MpsBoundary,
}

impl MpsFactors {
    pub fn new(
        local_dim: usize,
        tensors: Vec<Vec<Mat<C64>>>,
        boundary: MpsBoundary,
    ) -> Result<Self> {
        let first = tensors
            .first()
            .and_then(|t| t.first())
            .ok_or(Error::ChainTooShort { min: 1, found: 0 })?;
        let bond_dim = first.nrows();
        for site in &tensors {
            if site.len() != local_dim {
                return Err(Error::DimensionMismatch {
                    expected: local_dim,
                    found: site.len(),
                });
            }
            for m in site {
                if m.nrows() != bond_dim || m.ncols() != bond_dim {
                    return Err(Error::DimensionMismatch {
                        expected: bond_dim,
                        found: m.nrows().max(m.ncols()),
                    });
                }
            }
        }
        if let MpsBoundary::Open { left, right } = &boundary {
            for v in [left, right] {
                if v.len() != bond_dim {
                    return Err(Error::DimensionMismatch {
                        expected: bond_dim,
                        found: v.len(),
                    });
                }
            }
        }
        Ok(Self {
            local_dim,
            bond_dim,
            tensors,
            boundary,
        })
    }

    pub fn sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn boundary(&self) -> &MpsBoundary {
        &self.boundary
    }

    pub fn tensor(&self, site: usize, p: usize) -> &Mat<C64> {
        &self.tensors[site][p]
    }

    /// Dense amplitude vector, exact (no truncation).
    ///
    /// Prefix products are extended one site at a time, so every amplitude
    /// costs a handful of small matrix products.
    pub fn contract(&self) -> Result<StateVector> {
        let basis = BasisIndex::new(self.sites(), self.local_dim)?;
        let d = self.bond_dim;
        // each prefix carries a rows × d block
        let (rows, mut prefix) = match &self.boundary {
            MpsBoundary::Trace => {
                let mut id = vec![C64::ZERO; d * d];
                (0..d).for_each(|i| id[i * d + i] = C64::ONE);
                (d, id)
            }
            MpsBoundary::Open { left, .. } => (1, left.clone()),
        };
        let block = rows * d;
        for site in &self.tensors {
            let count = prefix.len() / block;
            let mut next = vec![C64::ZERO; count * self.local_dim * block];
            for c in 0..count {
                let src = &prefix[c * block..(c + 1) * block];
                for (p, m) in site.iter().enumerate() {
                    let dst = &mut next[(c * self.local_dim + p) * block..][..block];
                    for r in 0..rows {
                        for k in 0..d {
                            let a = src[r * d + k];
                            if a == C64::ZERO {
                                continue;
                            }
                            for j in 0..d {
                                dst[r * d + j] += a * m[(k, j)];
                            }
                        }
                    }
                }
            }
            prefix = next;
        }
        let amps = prefix
            .chunks(block)
            .map(|b| match &self.boundary {
                MpsBoundary::Trace => (0..d).map(|i| b[i * d + i]).sum(),
                MpsBoundary::Open { right, .. } => (0..d).map(|j| b[j] * right[j]).sum(),
            })
            .collect();
        StateVector::new(basis, amps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bond_one_product_state() {
        let one = Mat::<C64>::from_fn(1, 1, |_, _| C64::ONE);
        let zero = Mat::<C64>::zeros(1, 1);
        let site = vec![zero.clone(), one.clone()];
        let mps = MpsFactors::new(2, vec![site.clone(), site], MpsBoundary::Trace).unwrap();
        let s = mps.contract().unwrap();
        assert_eq!(s.amplitude(3), C64::ONE);
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn open_boundary_selects_paths() {
        // W-like state on 3 sites: one excitation carried by a 2-dim bond
        let m0 = Mat::<C64>::from_fn(2, 2, |i, j| if i == j { C64::ONE } else { C64::ZERO });
        let m1 = Mat::<C64>::from_fn(2, 2, |i, j| {
            if i == 0 && j == 1 {
                C64::ONE
            } else {
                C64::ZERO
            }
        });
        let site = vec![m0, m1];
        let mps = MpsFactors::new(
            2,
            vec![site.clone(), site.clone(), site],
            MpsBoundary::Open {
                left: vec![C64::ONE, C64::ZERO],
                right: vec![C64::ZERO, C64::ONE],
            },
        )
        .unwrap();
        let s = mps.contract().unwrap();
        let basis = *s.basis();
        for label in ["100", "010", "001"] {
            assert_eq!(s.amplitude(basis.parse(label).unwrap()), C64::ONE);
        }
        assert!((s.norm() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn inconsistent_shapes_rejected() {
        let a = Mat::<C64>::zeros(2, 2);
        let b = Mat::<C64>::zeros(3, 3);
        assert!(MpsFactors::new(
            2,
            vec![vec![a.clone(), a.clone()], vec![a.clone(), b]],
            MpsBoundary::Trace
        )
        .is_err());
        assert!(MpsFactors::new(2, vec![vec![a]], MpsBoundary::Trace).is_err());
    }
}
