use faer::Side;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::tensornet::schmidt_decompose;

/// Probabilities at or below this are dropped before the entropy sum.
const PROBABILITY_FLOOR: f64 = 1e-14;

/// `−Σ p ln p` over `p > 1e-14`.
pub fn entropy_from_probabilities(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > PROBABILITY_FLOOR)
        .map(|&x| -x * x.ln())
        .sum()
}

/// Entropy of the first `cut` sites, via Schmidt values.
pub fn von_neumann_ee(state: &StateVector, cut: usize) -> Result<f64> {
    Ok(entropy_from_probabilities(
        &schmidt_decompose(state, cut)?.probabilities(),
    ))
}

/// Same quantity from the spectrum of `ρ_A = tr_B |ψ><ψ|`.
pub fn von_neumann_ee_density_matrix(state: &StateVector, cut: usize) -> Result<f64> {
    state.check_normalized(1e-10)?;
    let m = crate::tensornet::bipartite_matrix(state, cut)?;
    let rho = &m * m.adjoint();
    let p = rho
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Linalg(format!("{e:?}")))?;
    Ok(entropy_from_probabilities(&p))
}

/// Mean half-chain entropy of a random pure state, `(L/2) ln n − 1/2`.
pub fn page_value(sites: usize, n: usize) -> f64 {
    sites as f64 / 2.0 * (n as f64).ln() - 0.5
}
