//! On-site clock and spin operators, the many-body product basis, sparse
//! operators on it, and the U(1) charge-sector decomposition.

mod basis;
mod embed;
mod local;
mod sparse;

pub use basis::{charge_sector_basis, sector_blocks, BasisIndex, Charge, SectorBlock};
pub use embed::{embed, OperatorBuilder};
pub use local::{kron, kron_all, local_operator, mat_pow, LocalAlgebra, LocalKind};
pub use sparse::{commutator_residual_norm, scaled_commutator_norm, SparseOperator};
