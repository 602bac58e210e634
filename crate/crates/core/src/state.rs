//! Amplitude vectors over the product basis.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{BasisIndex, SparseOperator};
use crate::error::{Error, Result};
use crate::C64;

/// Complex amplitudes indexed by [`BasisIndex`] ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: BasisIndex,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(basis: BasisIndex, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amps.len(),
            });
        }
        Ok(Self { basis, amps })
    }

    pub fn zeros(basis: BasisIndex) -> Self {
        Self {
            basis,
            amps: vec![C64::ZERO; basis.dim()],
        }
    }

    pub fn basis_state(basis: BasisIndex, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: index + 1,
            });
        }
        let mut s = Self::zeros(basis);
        s.amps[index] = C64::ONE;
        Ok(s)
    }

    /// Product state `|p_1 … p_L>`.
    pub fn product(basis: BasisIndex, digits: &[usize]) -> Result<Self> {
        if digits.len() != basis.sites() {
            return Err(Error::DimensionMismatch {
                expected: basis.sites(),
                found: digits.len(),
            });
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= basis.local_dim()) {
            return Err(Error::InvalidParameter(format!(
                "digit {d} exceeds local dimension"
            )));
        }
        Self::basis_state(basis, basis.encode(digits))
    }

    /// Product state from a digit string such as `"1010"`.
    pub fn from_label(basis: BasisIndex, label: &str) -> Result<Self> {
        Self::basis_state(basis, basis.parse(label)?)
    }

    /// `|⇓> = |0 … 0>`.
    pub fn all_down(basis: BasisIndex) -> Self {
        Self::basis_state(basis, 0).expect("index 0 always exists")
    }

    /// Normalized vector with i.i.d. complex Gaussian amplitudes.
    pub fn random_gaussian<R: Rng + ?Sized>(basis: BasisIndex, rng: &mut R) -> Self {
        let amps = (0..basis.dim())
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self { basis, amps }
            .normalized()
            .expect("Gaussian vector is nonzero")
    }

    pub fn basis(&self) -> &BasisIndex {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    /// Errors unless `|‖ψ‖ − 1| ≤ tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized(norm));
        }
        Ok(())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            basis: self.basis,
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: C64, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a + s * b)
            .collect();
        Ok(Self {
            basis: self.basis,
            amps,
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_basis(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|` for normalized inputs; insensitive to global phases.
    pub fn overlap_modulus(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn apply(&self, op: &SparseOperator) -> Result<Self> {
        if op.dim() != self.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                found: op.dim(),
            });
        }
        Ok(Self {
            basis: self.basis,
            amps: op.apply(&self.amps),
        })
    }

    /// `<ψ|O|ψ> / <ψ|ψ>`.
    pub fn expectation(&self, op: &SparseOperator) -> Result<C64> {
        let norm_sq = self.norm().powi(2);
        if norm_sq == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(self.inner(&self.apply(op)?)? / norm_sq)
    }

    /// `max_i |ψ_i − φ_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_basis(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: other.basis.dim(),
            });
        }
        Ok(())
    }
}
