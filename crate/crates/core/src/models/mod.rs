//! Clock-model Hamiltonians, Onsager-algebra charges and scar-preserving
//! disorder.

mod charges;
mod hamiltonian;
mod perturbation;
mod spec;

pub use charges::{
    build_charge_q, build_charge_q_hat, build_q_l_plus, build_q_plus, dolan_grady_defects,
    DolanGrady,
};
pub use hamiltonian::{
    build_h_n, build_h_orig, build_h_s, build_zeeman, e_fm, frame_phases, frame_unitary,
    max_tower_power, tower_energy, OrigBoundary,
};
pub use perturbation::{
    build_perturbation, build_perturbation_n2, build_perturbation_n3, build_perturbation_two_param,
    spin_one_window_states, two_param_window_states, WindowState, SPIN_ONE_PROJECTORS,
};
pub use spec::{ModelSpec, Perturbation, PerturbationCoefficients};

use crate::algebra::BasisIndex;
use crate::error::{Error, Result};

/// `θ = π(1 + 1/n)`, the per-site angle of the frame change between the
/// original and the transformed Hamiltonian.
pub(crate) fn frame_angle(n: usize) -> f64 {
    std::f64::consts::PI * (1.0 + 1.0 / n as f64)
}

/// Basis for an even-length periodic chain.
pub(crate) fn chain_basis(n: usize, sites: usize) -> Result<BasisIndex> {
    if sites % 2 == 1 {
        return Err(Error::OddLength(sites));
    }
    if sites < 2 {
        return Err(Error::ChainTooShort {
            min: 2,
            found: sites,
        });
    }
    BasisIndex::new(sites, n)
}

/// 1-based site `j + offset` on a ring of `sites`, for possibly negative offsets.
pub(crate) fn ring_site(j: usize, offset: isize, sites: usize) -> usize {
    let l = sites as isize;
    ((j as isize - 1 + offset).rem_euclid(l) + 1) as usize
}
