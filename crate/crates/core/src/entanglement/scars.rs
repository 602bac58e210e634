use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entropy::von_neumann_ee;
use crate::algebra::{BasisIndex, SparseOperator};
use crate::eigensolve::EigenDecomposition;
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

/// Individual eigenvector weight needed to carry a matched candidate's tag.
const TAG_WEIGHT_FLOOR: f64 = 1e-6;

/// Which exact construction an eigenstate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScarTag {
    None,
    /// `(Q^+)^k|⇓>`.
    Tower(usize),
    /// Spin-1 one-magnon plane wave with momentum index `m`.
    OneMagnon(usize),
    /// `(Q_1^+)^a (Q_2^+)^b|⇓>`.
    TwoTower(usize, usize),
}

impl std::fmt::Display for ScarTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScarTag::None => write!(f, "none"),
            ScarTag::Tower(k) => write!(f, "tower({k})"),
            ScarTag::OneMagnon(m) => write!(f, "one_magnon({m})"),
            ScarTag::TwoTower(a, b) => write!(f, "two_tower({a},{b})"),
        }
    }
}

/// A normalized state expected to be an exact eigenstate.
#[derive(Clone, Debug)]
pub struct ScarCandidate {
    pub tag: ScarTag,
    pub state: StateVector,
}

/// Outcome of matching one candidate against the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct ScarMatch {
    pub tag: ScarTag,
    /// Summed `|<E_i|ψ>|²` over the best degenerate cluster.
    pub overlap: f64,
    /// Cluster eigenvalue.
    pub energy: f64,
    /// `(eigenindex, individual weight)` for the cluster; empty when unmatched.
    pub members: Vec<(usize, f64)>,
}

impl ScarMatch {
    pub fn is_matched(&self) -> bool {
        !self.members.is_empty()
    }
}

/// Matches each candidate to the eigenvector cluster (eigenvalues within
/// `degeneracy_tol` of the heaviest eigenvector) holding its weight.
///
/// Candidates whose cluster weight stays below `threshold` come back with no
/// members. Candidates outside the diagonalized sector are unmatched.
pub fn identify_scars(
    decomposition: &EigenDecomposition,
    candidates: &[ScarCandidate],
    threshold: f64,
    degeneracy_tol: Option<f64>,
) -> Result<Vec<ScarMatch>> {
    let energies = decomposition.eigenvalues();
    let width = match (energies.first(), energies.last()) {
        (Some(a), Some(b)) => b - a,
        _ => return Err(Error::TooFewLevels(0)),
    };
    let tol = degeneracy_tol.unwrap_or(1e-9 * width.max(1.0));
    candidates
        .iter()
        .map(|cand| {
            let coeffs = match decomposition.coefficients_of(&cand.state) {
                Ok(c) => c,
                Err(Error::OutsideSector(_)) => {
                    return Ok(ScarMatch {
                        tag: cand.tag,
                        overlap: 0.0,
                        energy: f64::NAN,
                        members: vec![],
                    })
                }
                Err(e) => return Err(e),
            };
            let weights: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
            let best = weights
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .ok_or(Error::TooFewLevels(0))?;
            let energy = energies[best];
            let cluster: Vec<(usize, f64)> = (0..energies.len())
                .filter(|&i| (energies[i] - energy).abs() <= tol)
                .map(|i| (i, weights[i]))
                .collect();
            let overlap: f64 = cluster.iter().map(|m| m.1).sum();
            let members = if overlap >= threshold {
                cluster
                    .into_iter()
                    .filter(|m| m.1 > TAG_WEIGHT_FLOOR)
                    .collect()
            } else {
                Vec::new()
            };
            Ok(ScarMatch {
                tag: cand.tag,
                overlap,
                energy,
                members,
            })
        })
        .collect()
}

/// One eigenstate in the entropy-energy plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EEPoint {
    pub index: usize,
    pub energy: f64,
    pub entropy: f64,
    pub tag: ScarTag,
    /// Weight of the tagged candidate on this eigenvector, 0 when untagged.
    pub overlap: f64,
}

/// Entropy of every eigenstate at `cut`, tagged by the matched candidates.
pub fn ee_scatter(
    decomposition: &EigenDecomposition,
    cut: usize,
    matches: &[ScarMatch],
) -> Result<Vec<EEPoint>> {
    let mut tags = vec![(ScarTag::None, 0.0); decomposition.len()];
    for m in matches {
        for &(i, w) in &m.members {
            if w > tags[i].1 {
                tags[i] = (m.tag, w);
            }
        }
    }
    (0..decomposition.len())
        .into_par_iter()
        .map(|i| {
            let state = decomposition.eigenstate(i)?.normalized()?;
            Ok(EEPoint {
                index: i,
                energy: decomposition.eigenvalues()[i],
                entropy: von_neumann_ee(&state, cut)?,
                tag: tags[i].0,
                overlap: tags[i].1,
            })
        })
        .collect()
}

/// `<E_i|O|E_i>` for every eigenstate.
pub fn observable_expectation(
    decomposition: &EigenDecomposition,
    observable: &SparseOperator,
) -> Result<Vec<f64>> {
    (0..decomposition.len())
        .into_par_iter()
        .map(|i| Ok(decomposition.eigenstate(i)?.expectation(observable)?.re))
        .collect()
}

/// `Σ_j |010><010|` on windows `(j−1, j, j+1)` of a spin-1/2 ring (diagonal).
pub fn window_010_observable(sites: usize) -> Result<SparseOperator> {
    if sites < 3 {
        return Err(Error::ChainTooShort {
            min: 3,
            found: sites,
        });
    }
    let basis = BasisIndex::new(sites, 2)?;
    let diag = (0..basis.dim())
        .map(|idx| {
            let bit = |s: usize| basis.digit(idx, s % sites);
            let count = (0..sites)
                .filter(|&c| bit(c + sites - 1) == 0 && bit(c) == 1 && bit(c + 1) == 0)
                .count();
            C64::new(count as f64, 0.0)
        })
        .collect();
    Ok(SparseOperator::from_diagonal(diag))
}

/// Spin-1 plane waves `Σ_j e^{2πimj/L} |2…2 1_j 2…2> / √L`, `m = 0..L`.
pub fn one_magnon_states(sites: usize) -> Result<Vec<ScarCandidate>> {
    let basis = BasisIndex::new(sites, 3)?;
    let top = vec![2usize; sites];
    let scale = 1.0 / (sites as f64).sqrt();
    (0..sites)
        .map(|m| {
            let mut amps = vec![C64::ZERO; basis.dim()];
            for j in 0..sites {
                let mut digits = top.clone();
                digits[j] = 1;
                let phase = 2.0 * PI * (m * (j + 1)) as f64 / sites as f64;
                amps[basis.encode(&digits)] = C64::from_polar(scale, phase);
            }
            Ok(ScarCandidate {
                tag: ScarTag::OneMagnon(m),
                state: StateVector::new(basis, amps)?,
            })
        })
        .collect()
}
