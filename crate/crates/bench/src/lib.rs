//! Fixtures shared by the benchmarks.

use onsager_core::{BasisIndex, ModelSpec, PerturbationCoefficients, Result, StateVector, C64};

/// Perturbed spin-1/2 or spin-1 chain with all channels on.
pub fn perturbed_spec(n: usize, sites: usize, seed: u64) -> Result<ModelSpec> {
    let couplings = match n {
        2 => PerturbationCoefficients::spin_half_random(sites, seed, [true; 3]),
        _ => PerturbationCoefficients::spin_one_random(sites, seed, true),
    };
    ModelSpec::new(n, sites, 1.0, couplings)
}

/// Deterministic dense vector with no special structure.
pub fn probe_state(n: usize, sites: usize) -> Result<StateVector> {
    let basis = BasisIndex::new(sites, n)?;
    let amps = (0..basis.dim())
        .map(|i| {
            let x = i as f64;
            C64::new((0.37 * x).sin(), (0.11 * x + 0.5).cos())
        })
        .collect();
    StateVector::new(basis, amps)?.normalized()
}
