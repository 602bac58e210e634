//! Matrix-product scar states and operators, exact contraction to dense
//! vectors, tower states and Schmidt decomposition.

mod coherent;
mod mpo;
mod mps;
mod schmidt;
pub(crate) use schmidt::bipartite_matrix;
mod tower;

pub use coherent::{
    coherent_mpo_tensors, coherent_mps_tensors, coherent_state, multi_param_state,
    nilpotent_exp_apply, two_param_mpo, two_param_state, CoherentParams,
};
pub use mpo::MpoFactors;
pub use mps::{MpsBoundary, MpsFactors};
pub use schmidt::{schmidt_decompose, Schmidt};
pub use tower::{obc_tower_mps, scar_tower, tower_states, two_param_tower, TowerState};
