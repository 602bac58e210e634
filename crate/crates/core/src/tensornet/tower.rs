use faer::Mat;

use super::mps::{MpsBoundary, MpsFactors};
use crate::algebra::{BasisIndex, SparseOperator};
use crate::error::{Error, Result};
use crate::models::{build_q_l_plus, build_q_plus, max_tower_power};
use crate::state::StateVector;
use crate::C64;

const ANNIHILATION_TOL: f64 = 1e-12;

/// Result of raising `|⇓>` with `Q^+`.
#[derive(Clone, Debug, PartialEq)]
pub enum TowerState {
    /// Normalized `(Q^+)^k|⇓>`.
    Vector(StateVector),
    /// `(Q^+)^k|⇓> = 0`.
    Annihilated,
}

impl TowerState {
    pub fn vector(&self) -> Option<&StateVector> {
        match self {
            TowerState::Vector(v) => Some(v),
            TowerState::Annihilated => None,
        }
    }
}

/// `Q^+|v>` normalized, or `None` once the result vanishes to rounding.
fn raise(q: &SparseOperator, v: &StateVector) -> Result<Option<StateVector>> {
    let raw = v.apply(q)?;
    if raw.norm() <= ANNIHILATION_TOL * q.max_abs() {
        return Ok(None);
    }
    raw.normalized().map(Some)
}

/// Normalized `(Q^+)^k|⇓>` on a periodic chain.
pub fn scar_tower(n: usize, sites: usize, k: usize) -> Result<TowerState> {
    let q = build_q_plus(n, sites)?;
    let mut v = StateVector::all_down(BasisIndex::new(sites, n)?);
    for _ in 0..k {
        match raise(&q, &v)? {
            Some(u) => v = u,
            None => return Ok(TowerState::Annihilated),
        }
    }
    Ok(TowerState::Vector(v))
}

/// All nonzero tower states `(k, (Q^+)^k|⇓>)`, normalized.
pub fn tower_states(n: usize, sites: usize) -> Result<Vec<(usize, StateVector)>> {
    let q = build_q_plus(n, sites)?;
    let mut v = StateVector::all_down(BasisIndex::new(sites, n)?);
    let mut out = vec![(0, v.clone())];
    for k in 1..=max_tower_power(n, sites) {
        match raise(&q, &v)? {
            Some(u) => {
                out.push((k, u.clone()));
                v = u;
            }
            None => break,
        }
    }
    Ok(out)
}

/// `(Q_1^+)^{k_1} (Q_2^+)^{k_2}|⇓>` for every `k_1 + k_2 <= L/2` (spin-1/2),
/// normalized, with vanishing powers reported as [`TowerState::Annihilated`].
pub fn two_param_tower(sites: usize) -> Result<Vec<((usize, usize), TowerState)>> {
    let q1 = build_q_l_plus(1, sites)?;
    let q2 = build_q_l_plus(2, sites)?;
    let top = sites / 2;
    let mut out = Vec::new();
    let mut column = Some(StateVector::all_down(BasisIndex::new(sites, 2)?));
    for k2 in 0..=top {
        let mut v = column.clone();
        for k1 in 0..=top - k2 {
            out.push((
                (k1, k2),
                v.clone()
                    .map_or(TowerState::Annihilated, TowerState::Vector),
            ));
            v = match v {
                Some(u) => raise(&q1, &u)?,
                None => None,
            };
        }
        column = match column {
            Some(u) => raise(&q2, &u)?,
            None => None,
        };
    }
    Ok(out)
}

/// Open-boundary MPS of `(Σ_{j<L} S_j^+ S_{j+1}^+)^k |⇓>` (spin-1/2, up to
/// normalization): `M_0` keeps even auxiliary labels, `M_1` advances the label
/// by one, boundaries `<<0|` and `|2k>>`. Bond dimension is `2k + 1`.
pub fn obc_tower_mps(sites: usize, k: usize) -> Result<MpsFactors> {
    if sites == 0 {
        return Err(Error::ChainTooShort { min: 1, found: 0 });
    }
    let d = 2 * k + 1;
    let m0 = Mat::from_fn(d, d, |i, j| {
        if i == j && i % 2 == 0 {
            C64::ONE
        } else {
            C64::ZERO
        }
    });
    let m1 = Mat::from_fn(d, d, |i, j| if j == i + 1 { C64::ONE } else { C64::ZERO });
    let mut left = vec![C64::ZERO; d];
    let mut right = vec![C64::ZERO; d];
    left[0] = C64::ONE;
    right[2 * k] = C64::ONE;
    MpsFactors::new(
        2,
        vec![vec![m0, m1]; sites],
        MpsBoundary::Open { left, right },
    )
}
