use std::f64::consts::PI;

use faer::Mat;

use super::mpo::MpoFactors;
use super::mps::{MpsBoundary, MpsFactors};
use crate::algebra::{mat_pow, BasisIndex, LocalAlgebra, SparseOperator};
use crate::error::{Error, Result};
use crate::models::build_q_l_plus;
use crate::state::StateVector;
use crate::C64;

fn sign(exponent: usize) -> f64 {
    if exponent % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_even(sites: usize) -> Result<()> {
    if sites % 2 == 1 {
        return Err(Error::OddLength(sites));
    }
    if sites < 2 {
        return Err(Error::ChainTooShort {
            min: 2,
            found: sites,
        });
    }
    Ok(())
}

/// Site tensors of `exp(β^n Q^+)|⇓>`: `A_p` on odd (1-based) sites, `B_p` on
/// even ones, trace closure, bond dimension `n`.
///
/// `(A_p)_{ij} = β^p δ_{i,p} δ_{j,0} + (−1)^{j+1} β^p / sin(π(n−j)/n) δ_{j−i,n−p}` for `j > 0`;
/// `B_p` carries `(−1)^{n−j}` in place of `(−1)^{j+1}`.
pub fn coherent_mps_tensors(n: usize, beta: C64, sites: usize) -> Result<MpsFactors> {
    LocalAlgebra::new(n)?;
    check_even(sites)?;
    let build = |odd_site: bool| -> Vec<Mat<C64>> {
        (0..n)
            .map(|p| {
                let bp = beta.powu(p as u32);
                Mat::from_fn(n, n, |i, j| {
                    let mut v = C64::ZERO;
                    if i == p && j == 0 {
                        v += bp;
                    }
                    if j > 0 && j + p == n + i {
                        let s = if odd_site { sign(j + 1) } else { sign(n - j) };
                        v += bp * (s / (PI * (n - j) as f64 / n as f64).sin());
                    }
                    v
                })
            })
            .collect()
    };
    let (a, b) = (build(true), build(false));
    let tensors = (0..sites)
        .map(|s| if s % 2 == 0 { a.clone() } else { b.clone() })
        .collect();
    MpsFactors::new(n, tensors, MpsBoundary::Trace)
}

/// Contracted coherent state `|ψ(β)> = exp(β^n Q^+)|⇓>` (unnormalized).
pub fn coherent_state(n: usize, beta: C64, sites: usize) -> Result<StateVector> {
    coherent_mps_tensors(n, beta, sites)?.contract()
}

/// MPO cores of `exp(β^n Q^+)`:
/// `C_{i0} = (βS^+)^i`, `C_{ij} = (−1)^{(n+1)l+(n−j)} / sin(π(n−j)/n) (βS^+)^{n+i−j}` for `j > 0`.
pub fn coherent_mpo_tensors(n: usize, beta: C64, sites: usize) -> Result<MpoFactors> {
    let alg = LocalAlgebra::new(n)?;
    check_even(sites)?;
    let bsp = faer::Scale(beta) * alg.s_plus();
    let powers: Vec<Mat<C64>> = (0..2 * n).map(|k| mat_pow(&bsp, k)).collect();
    let cores = (1..=sites)
        .map(|l| {
            let mut site = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    if j == 0 {
                        site.push(powers[i].clone());
                    } else {
                        let c =
                            sign((n + 1) * l + (n - j)) / (PI * (n - j) as f64 / n as f64).sin();
                        site.push(faer::Scale(C64::new(c, 0.0)) * &powers[n + i - j]);
                    }
                }
            }
            site
        })
        .collect();
    MpoFactors::new(n, n, cores)
}

/// Bond-space tensor product of two 2×2 operator-valued blocks, multiplying
/// the operators on the physical space.
fn block_kron(x: &[Mat<C64>], dx: usize, y: &[Mat<C64>], dy: usize) -> Vec<Mat<C64>> {
    let d = dx * dy;
    let mut out = vec![Mat::<C64>::zeros(2, 2); d * d];
    for a in 0..dx {
        for b in 0..dx {
            for c in 0..dy {
                for e in 0..dy {
                    out[(a * dy + c) * d + (b * dy + e)] = &x[a * dx + b] * &y[c * dy + e];
                }
            }
        }
    }
    out
}

/// MPO cores of `exp(α² Q_1^+) exp(β² Q_2^+)` (spin-1/2, bond dimension 8).
pub fn two_param_mpo(alpha: C64, beta: C64, sites: usize) -> Result<MpoFactors> {
    check_even(sites)?;
    let alg = LocalAlgebra::new(2)?;
    let id = alg.identity();
    let zero = Mat::<C64>::zeros(2, 2);
    let sp = alg.s_plus();
    let sz = alg.s_z();
    let asp = faer::Scale(alpha) * sp;
    let bsp = faer::Scale(beta) * sp;
    let neg = |m: &Mat<C64>| faer::Scale(-C64::ONE) * m;
    let cores = (1..=sites)
        .map(|j| {
            if j % 2 == 1 {
                let x = [id.clone(), asp.clone(), asp.clone(), zero.clone()];
                let y = [id.clone(), bsp.clone(), bsp.clone(), zero.clone()];
                let z = [id.clone(), zero.clone(), zero.clone(), neg(sz)];
                block_kron(&block_kron(&x, 2, &y, 2), 4, &z, 2)
            } else {
                let x = [id.clone(), neg(&asp), asp.clone(), zero.clone()];
                let y = [id.clone(), zero.clone(), zero.clone(), sz.clone()];
                let z = [id.clone(), bsp.clone(), bsp.clone(), zero.clone()];
                block_kron(&block_kron(&x, 2, &y, 2), 4, &z, 2)
            }
        })
        .collect();
    MpoFactors::new(2, 8, cores)
}

/// `exp(α² Q_1^+) exp(β² Q_2^+)|⇓>` through the bond-dimension-8 MPO.
pub fn two_param_state(alpha: C64, beta: C64, sites: usize) -> Result<StateVector> {
    let mpo = two_param_mpo(alpha, beta, sites)?;
    mpo.apply_to_product(&vec![0; sites])?.contract()
}

/// `exp(c·op)|v>` for nilpotent `op`, summing the series until it terminates.
pub fn nilpotent_exp_apply(
    op: &SparseOperator,
    c: C64,
    state: &StateVector,
) -> Result<StateVector> {
    let mut term = state.clone();
    let mut sum = state.clone();
    for k in 1..=op.dim() {
        term = term.apply(op)?.scale(c / k as f64);
        if term.is_zero(0.0) {
            return Ok(sum);
        }
        sum = sum.add_scaled(C64::ONE, &term)?;
    }
    Err(Error::Linalg("operator is not nilpotent".into()))
}

/// `Π_l exp(β_l² Q_l^+)|⇓>` with `l = 1` leftmost, by dense nilpotent series.
pub fn multi_param_state(betas: &[C64], sites: usize) -> Result<StateVector> {
    check_even(sites)?;
    let mut state = StateVector::all_down(BasisIndex::new(sites, 2)?);
    for (l, &b) in betas.iter().enumerate().rev() {
        let q = build_q_l_plus(l + 1, sites)?;
        state = nilpotent_exp_apply(&q, b * b, &state)?;
    }
    Ok(state)
}

/// Parameters of a coherent scar state.
#[derive(Clone, Debug, PartialEq)]
pub enum CoherentParams {
    /// `exp(β^n Q^+)|⇓>`.
    Single(C64),
    /// `exp(α² Q_1^+) exp(β² Q_2^+)|⇓>`, spin-1/2 only.
    Pair { alpha: C64, beta: C64 },
    /// `Π_l exp(β_l² Q_l^+)|⇓>`, spin-1/2 only.
    Multi(Vec<C64>),
}

impl CoherentParams {
    pub fn validate(&self) -> Result<()> {
        let finite = match self {
            CoherentParams::Single(b) => b.is_finite(),
            CoherentParams::Pair { alpha, beta } => alpha.is_finite() && beta.is_finite(),
            CoherentParams::Multi(bs) => bs.iter().all(|b| b.is_finite()),
        };
        if !finite {
            return Err(Error::InvalidParameter(
                "non-finite coherent-state parameter".into(),
            ));
        }
        Ok(())
    }

    /// Unnormalized state on `sites` sites of local dimension `n`.
    pub fn state(&self, n: usize, sites: usize) -> Result<StateVector> {
        self.validate()?;
        let spin_half = || {
            if n == 2 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "multi-parameter states need n = 2, got {n}"
                )))
            }
        };
        match self {
            CoherentParams::Single(b) => coherent_state(n, *b, sites),
            CoherentParams::Pair { alpha, beta } => {
                spin_half()?;
                two_param_state(*alpha, *beta, sites)
            }
            CoherentParams::Multi(bs) => {
                spin_half()?;
                multi_param_state(bs, sites)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_q_plus;

    fn dense_series(n: usize, beta: C64, sites: usize) -> StateVector {
        let q = build_q_plus(n, sites).unwrap();
        let down = StateVector::all_down(BasisIndex::new(sites, n).unwrap());
        nilpotent_exp_apply(&q, beta.powu(n as u32), &down).unwrap()
    }

    #[test]
    fn three_site_window_of_spin_half_tensors() {
        let beta = C64::new(0.8, -0.3);
        let mps = coherent_mps_tensors(2, beta, 4).unwrap();
        let b2 = beta * beta;
        for p1 in 0..2 {
            for p2 in 0..2 {
                for p3 in 0..2 {
                    let m = mps.tensor(0, p1) * mps.tensor(1, p2) * mps.tensor(2, p3);
                    let want = match (p1, p2, p3) {
                        (0, 0, 0) => C64::ONE,
                        (0, 1, 1) => -b2,
                        (1, 1, 0) => b2,
                        _ => C64::ZERO,
                    };
                    assert!((m[(0, 0)] - want).norm() < 1e-14, "{p1}{p2}{p3}");
                }
            }
        }
    }

    #[test]
    fn zero_beta_is_all_down() {
        for n in [2, 3] {
            let psi = coherent_state(n, C64::ZERO, 4).unwrap();
            let down = StateVector::all_down(BasisIndex::new(4, n).unwrap());
            assert!(psi.max_abs_diff(&down).unwrap() < 1e-15);
        }
    }

    #[test]
    fn mps_mpo_and_series_agree() {
        for (n, sites) in [(2, 4), (2, 6), (3, 4), (3, 6)] {
            let beta = C64::new(0.9, 0.35);
            let series = dense_series(n, beta, sites);
            let mps = coherent_state(n, beta, sites).unwrap();
            let mpo = coherent_mpo_tensors(n, beta, sites)
                .unwrap()
                .apply(&StateVector::all_down(BasisIndex::new(sites, n).unwrap()))
                .unwrap();
            assert!(
                mps.max_abs_diff(&series).unwrap() < 1e-12,
                "mps n={n} L={sites}"
            );
            assert!(
                mpo.max_abs_diff(&series).unwrap() < 1e-12,
                "mpo n={n} L={sites}"
            );
        }
    }

    #[test]
    fn depends_on_beta_to_the_n() {
        let beta = C64::new(0.5, 0.4);
        for n in [2, 3] {
            let omega = C64::from_polar(1.0, 2.0 * PI / n as f64);
            let a = coherent_state(n, beta, 6).unwrap();
            let b = coherent_state(n, omega * beta, 6).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn two_parameter_mpo_matches_series() {
        for sites in [6, 8] {
            let (a, b) = (C64::new(0.7, 0.1), C64::new(-0.4, 0.6));
            let mpo = two_param_state(a, b, sites).unwrap();
            let series = multi_param_state(&[a, b], sites).unwrap();
            assert!(mpo.max_abs_diff(&series).unwrap() < 1e-12, "L={sites}");
        }
    }

    #[test]
    fn series_requires_nilpotent_operator() {
        let basis = BasisIndex::new(2, 2).unwrap();
        let id = SparseOperator::identity(4);
        assert!(nilpotent_exp_apply(&id, C64::ONE, &StateVector::all_down(basis)).is_err());
        assert!(coherent_state(2, C64::ONE, 5).is_err());
    }
}
