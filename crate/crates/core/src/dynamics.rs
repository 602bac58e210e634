//! Exact time evolution by spectral resolution, fidelity and entanglement
//! traces.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::EigenDecomposition;
use crate::entanglement::von_neumann_ee;
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

/// Time series recorded from one initial state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub label: String,
    pub times: Vec<f64>,
    /// `F(t) = |<φ|e^{−iHt}|φ>|`.
    pub fidelity: Vec<f64>,
    /// Entropy at the recorded cut.
    pub entropy: Vec<f64>,
}

/// `e^{−iHt}|φ>` expanded in the eigenbasis of `H`.
#[derive(Clone, Debug)]
pub struct Propagator<'a> {
    decomposition: &'a EigenDecomposition,
    coefficients: Vec<C64>,
}

impl<'a> Propagator<'a> {
    pub fn new(decomposition: &'a EigenDecomposition, initial: &StateVector) -> Result<Self> {
        initial.check_normalized(1e-10)?;
        let coefficients = decomposition.coefficients_of(initial)?;
        Ok(Self {
            decomposition,
            coefficients,
        })
    }

    /// `Σ_i |c_i|²`; below 1 when the state leaks out of the diagonalized sector.
    pub fn captured_weight(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<H>`, constant in time.
    pub fn energy(&self) -> f64 {
        self.coefficients
            .iter()
            .zip(self.decomposition.eigenvalues())
            .map(|(c, e)| c.norm_sqr() * e)
            .sum()
    }

    pub fn fidelity(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .zip(self.decomposition.eigenvalues())
            .map(|(c, &e)| C64::from_polar(c.norm_sqr(), -e * t))
            .sum::<C64>()
            .norm()
    }

    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        let v = self.decomposition.vectors()?;
        let phased: Vec<C64> = self
            .coefficients
            .iter()
            .zip(self.decomposition.eigenvalues())
            .map(|(c, &e)| c * C64::from_polar(1.0, -e * t))
            .collect();
        let basis = *self.decomposition.basis();
        let mut amps = vec![C64::ZERO; basis.dim()];
        let rows: Vec<usize> = match self.decomposition.sector_indices() {
            Some(idx) => idx.to_vec(),
            None => (0..v.nrows()).collect(),
        };
        for (k, &full) in rows.iter().enumerate() {
            amps[full] = (0..v.ncols()).map(|j| v[(k, j)] * phased[j]).sum();
        }
        StateVector::new(basis, amps)
    }
}

/// `e^{−iHt}|state>` with `H` given by its eigendecomposition.
pub fn evolve(
    state: &StateVector,
    decomposition: &EigenDecomposition,
    t: f64,
) -> Result<StateVector> {
    if !decomposition.has_vectors() {
        return Err(Error::MissingEigenvectors);
    }
    Propagator::new(decomposition, state)?.state_at(t)
}

pub fn fidelity_trace(
    initial: &StateVector,
    decomposition: &EigenDecomposition,
    times: &[f64],
    label: &str,
) -> Result<DynamicsTrace> {
    if !decomposition.has_vectors() {
        return Err(Error::MissingEigenvectors);
    }
    let prop = Propagator::new(decomposition, initial)?;
    Ok(DynamicsTrace {
        label: label.to_string(),
        times: times.to_vec(),
        fidelity: times.iter().map(|&t| prop.fidelity(t)).collect(),
        entropy: Vec::new(),
    })
}

/// Fidelity and entropy at `cut` at every time.
pub fn ee_trace(
    initial: &StateVector,
    decomposition: &EigenDecomposition,
    times: &[f64],
    cut: usize,
    label: &str,
) -> Result<DynamicsTrace> {
    let mut trace = fidelity_trace(initial, decomposition, times, label)?;
    let prop = Propagator::new(decomposition, initial)?;
    trace.entropy = times
        .par_iter()
        .map(|&t| von_neumann_ee(&prop.state_at(t)?.normalized()?, cut))
        .collect::<Result<_>>()?;
    Ok(trace)
}

/// Revival period `2π/(nh)`.
pub fn revival_period(n: usize, h: f64) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "revival period undefined for h = {h}"
        )));
    }
    Ok(2.0 * PI / (n as f64 * h.abs()))
}

/// `points` equally spaced times on `[0, t_max]`, endpoints included.
pub fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| t_max * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// 400 points over five revival periods.
pub fn default_time_grid(n: usize, h: f64) -> Result<Vec<f64>> {
    Ok(time_grid(5.0 * revival_period(n, h)?, 400))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BasisIndex, SparseOperator};
    use crate::eigensolve::diagonalize;
    use crate::models::{build_h_s, ModelSpec, PerturbationCoefficients};

    fn model() -> (SparseOperator, BasisIndex, EigenDecomposition) {
        let spec = ModelSpec::new(
            2,
            6,
            1.0,
            PerturbationCoefficients::spin_half_random(6, 2, [true; 3]),
        )
        .unwrap();
        let h = build_h_s(&spec).unwrap();
        let basis = BasisIndex::new(6, 2).unwrap();
        let d = diagonalize(&h, &basis, None, true).unwrap();
        (h, basis, d)
    }

    #[test]
    fn zero_time_is_identity_and_norm_is_kept() {
        let (h, basis, d) = model();
        let psi = StateVector::random_gaussian(basis, &mut crate::rng::stream(1, "dyn"));
        assert!(evolve(&psi, &d, 0.0).unwrap().max_abs_diff(&psi).unwrap() < 1e-12);
        let later = evolve(&psi, &d, 2.3).unwrap();
        assert!((later.norm() - 1.0).abs() < 1e-12);
        let e0 = psi.expectation(&h).unwrap().re;
        let e1 = later.expectation(&h).unwrap().re;
        assert!((e0 - e1).abs() < 1e-10 * e0.abs().max(1.0));
        assert!((Propagator::new(&d, &psi).unwrap().energy() - e0).abs() < 1e-10);
    }

    #[test]
    fn eigenstate_only_gains_a_phase() {
        let (_, _, d) = model();
        let v = d.eigenstate(7).unwrap();
        let tr = fidelity_trace(&v, &d, &time_grid(3.0, 7), "eig").unwrap();
        assert!(tr.fidelity.iter().all(|f| (f - 1.0).abs() < 1e-12));
    }

    #[test]
    fn product_eigenstate_of_diagonal_h_stays_unentangled() {
        let basis = BasisIndex::new(4, 2).unwrap();
        let h = SparseOperator::from_diagonal(
            (0..16).map(|i| C64::new(i as f64 * 0.37, 0.0)).collect(),
        );
        let d = diagonalize(&h, &basis, None, true).unwrap();
        let psi = StateVector::from_label(basis, "0110").unwrap();
        let tr = ee_trace(&psi, &d, &time_grid(4.0, 9), 2, "product").unwrap();
        assert!(tr.entropy.iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn grid_and_period() {
        let g = default_time_grid(2, 1.0).unwrap();
        assert_eq!(g.len(), 400);
        assert!((g[399] - 5.0 * PI).abs() < 1e-12);
        assert!((revival_period(3, 1.5).unwrap() - 2.0 * PI / 4.5).abs() < 1e-15);
        assert!(revival_period(2, 0.0).is_err());
    }
}
