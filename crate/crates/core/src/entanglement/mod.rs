//! Von Neumann entanglement entropy, eigenstate scatter with scar tags,
//! ETH-violating observables and the closed-form tower entropy.

mod closed_form;
mod entropy;
mod scars;

pub use closed_form::{
    binomial, scar_ee_closed_form, scar_ee_numerical_obc, transfer_matrix_entry,
    transfer_matrix_entry_formula, ClosedFormEE,
};
pub use entropy::{
    entropy_from_probabilities, page_value, von_neumann_ee, von_neumann_ee_density_matrix,
};
pub use scars::{
    ee_scatter, identify_scars, observable_expectation, one_magnon_states, window_010_observable,
    EEPoint, ScarCandidate, ScarMatch, ScarTag,
};
