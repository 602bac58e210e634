//! Dense Hermitian diagonalization, optionally restricted to a U(1) charge
//! sector, and level-spacing statistics.

mod dense;
mod levels;

pub use dense::{diagonalize, EigenDecomposition};
pub use levels::{
    goe_surrogate_levels, histogram, level_spacing_stats, poisson_surrogate_levels, reference_pdf,
    HistogramBin, LevelStatistics, ReferenceKind, SpacingWindow,
};
