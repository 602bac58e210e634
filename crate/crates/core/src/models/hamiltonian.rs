use std::f64::consts::PI;

use faer::Mat;

use super::perturbation::build_perturbation;
use super::spec::ModelSpec;
use super::{chain_basis, frame_angle, ring_site};
use crate::algebra::{kron, mat_pow, sector_blocks, LocalAlgebra, OperatorBuilder, SparseOperator};
use crate::error::Result;
use crate::C64;

const HERMITIAN_TOL: f64 = 1e-12;

/// Two-site term of `H_n` on bond `(j, j+1)`, including the on-site τ part of site `j`.
fn h_n_bond(alg: &LocalAlgebra) -> Mat<C64> {
    let n = alg.n();
    let id = alg.identity();
    let mut bond = Mat::<C64>::zeros(n * n, n * n);
    for a in 1..n {
        let c = -1.0 / (2.0 * (PI * a as f64 / n as f64).sin());
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let hop = kron(&mat_pow(alg.s_minus(), a), &mat_pow(alg.s_plus(), a));
        let hop_h = hop.adjoint().to_owned();
        let onsite = kron(&mat_pow(alg.tau(), a), &id);
        let tau_coeff = alg.omega_half_power(a) * (n as f64 - 2.0 * a as f64);
        bond = bond
            + faer::Scale(C64::new(c * n as f64 * sign, 0.0)) * (hop + hop_h)
            + faer::Scale(tau_coeff * c) * onsite;
    }
    bond
}

/// Two-site term of the original (untransformed) Hamiltonian on `(j, j+1)`.
fn h_orig_bond(alg: &LocalAlgebra) -> Mat<C64> {
    let n = alg.n();
    let id = alg.identity();
    let omega = alg.omega();
    let mut bond = Mat::<C64>::zeros(n * n, n * n);
    for a in 1..n {
        let pre = C64::new(0.0, 1.0) / (C64::ONE - omega.powi(-(a as i32)));
        let onsite = kron(&mat_pow(alg.tau(), a), &id);
        let fwd = kron(
            &mat_pow(alg.s_plus(), n - a),
            &mat_pow(alg.s_minus(), n - a),
        );
        let back = kron(&mat_pow(alg.s_minus(), a), &mat_pow(alg.s_plus(), a));
        let nn = n as f64;
        bond =
            bond + faer::Scale(pre * (2.0 * a as f64 - nn)) * onsite + faer::Scale(pre * nn) * fwd
                - faer::Scale(pre * nn) * back;
    }
    bond
}

/// Conjugates a two-site operator by `exp(iθ(s_1 S^z ⊗ 1 + s_2 1 ⊗ S^z))`,
/// returning `u^† B u`.
pub(crate) fn rotate_bond(alg: &LocalAlgebra, bond: &Mat<C64>, s1: f64, s2: f64) -> Mat<C64> {
    let n = alg.n();
    let theta = frame_angle(n);
    let phase = |idx: usize| {
        C64::from_polar(
            1.0,
            theta * (s1 * alg.weight(idx / n) + s2 * alg.weight(idx % n)),
        )
    };
    Mat::from_fn(n * n, n * n, |r, c| {
        phase(r).conj() * bond[(r, c)] * phase(c)
    })
}

/// Moves a bond operator from the original frame to the `H_n` frame on bond
/// `(j, j+1)`, then sums it over the ring.
pub(crate) fn bondwise_from_original(
    alg: &LocalAlgebra,
    sites: usize,
    bond: &Mat<C64>,
) -> Result<SparseOperator> {
    let basis = chain_basis(alg.n(), sites)?;
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        let rotated = rotate_bond(alg, bond, j as f64, (j + 1) as f64);
        builder.add_term(C64::ONE, &rotated, &[j, ring_site(j, 1, sites)])?;
    }
    builder.build()
}

/// The self-dual U(1)-invariant clock Hamiltonian `H_n` with periodic bonds.
pub fn build_h_n(n: usize, sites: usize) -> Result<SparseOperator> {
    let alg = LocalAlgebra::new(n)?;
    let basis = chain_basis(n, sites)?;
    let bond = h_n_bond(&alg);
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        builder.add_term(C64::ONE, &bond, &[j, ring_site(j, 1, sites)])?;
    }
    builder
        .build()?
        .into_hermitian(HERMITIAN_TOL)?
        .with_sectors(sector_blocks(&basis))
}

/// `E_FM`, the eigenvalue of `H_n` on `|⇓>`.
pub fn e_fm(n: usize, sites: usize) -> f64 {
    let nn = n as f64;
    let sum: C64 = (1..n)
        .map(|a| {
            let x = PI * a as f64 / nn;
            C64::from_polar(1.0, x) * ((nn - 2.0 * a as f64) / (2.0 * x.sin()))
        })
        .sum();
    -(sites as f64) * sum.re
}

/// Largest `k` for which `(Q^+)^k |⇓>` can be nonzero: `⌊(n-1)L/n⌋`.
pub fn max_tower_power(n: usize, sites: usize) -> usize {
    (n - 1) * sites / n
}

/// Eigenvalue of `(Q^+)^k |⇓>` under `H_S`: `E_FM + h(nk − L(n−1)/2)`.
pub fn tower_energy(spec: &ModelSpec, k: usize) -> f64 {
    let (n, l) = (spec.n as f64, spec.sites as f64);
    e_fm(spec.n, spec.sites) + spec.h * (n * k as f64 - l * (n - 1.0) / 2.0)
}

/// Closing bond of the original Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrigBoundary {
    /// Every bond, including `(L, 1)`, has the same form.
    Periodic,
    /// The `(L, 1)` bond carries the twist that makes the model unitarily
    /// equivalent to `H_n` for every `L`.
    #[default]
    Twisted,
}

/// The original Hamiltonian, related to `H_n` by `H_n = U^† H_orig U` with
/// `U = exp(iθ Σ_j j S^z_j)` (twisted boundary).
///
/// With a plain periodic closing bond the two agree only when `θL` is a
/// multiple of `2π`.
pub fn build_h_orig(n: usize, sites: usize, boundary: OrigBoundary) -> Result<SparseOperator> {
    let alg = LocalAlgebra::new(n)?;
    let basis = chain_basis(n, sites)?;
    let bond = h_orig_bond(&alg);
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..sites {
        builder.add_term(C64::ONE, &bond, &[j, j + 1])?;
    }
    let closing = match boundary {
        OrigBoundary::Periodic => bond,
        OrigBoundary::Twisted => rotate_bond(&alg, &bond, 0.0, sites as f64),
    };
    builder.add_term(C64::ONE, &closing, &[sites, 1])?;
    builder.build()?.into_hermitian(HERMITIAN_TOL)
}

/// Diagonal of `U = exp(iθ Σ_j j S^z_j)` with 1-based `j`.
pub fn frame_phases(n: usize, sites: usize) -> Result<Vec<C64>> {
    let alg = LocalAlgebra::new(n)?;
    let basis = chain_basis(n, sites)?;
    let theta = frame_angle(n);
    Ok((0..basis.dim())
        .map(|idx| {
            let angle: f64 = (0..sites)
                .map(|s| (s + 1) as f64 * alg.weight(basis.digit(idx, s)))
                .sum();
            C64::from_polar(1.0, theta * angle)
        })
        .collect())
}

pub fn frame_unitary(n: usize, sites: usize) -> Result<SparseOperator> {
    Ok(SparseOperator::from_diagonal(frame_phases(n, sites)?))
}

/// `h Σ_j S^z_j`.
pub fn build_zeeman(n: usize, sites: usize, h: f64) -> Result<SparseOperator> {
    Ok(super::build_charge_q(n, sites)?.scale(C64::new(h, 0.0)))
}

/// `H_S = H_n + H_pert + h Σ S^z_j`. The charge-sector map is attached when
/// the perturbation conserves charge.
pub fn build_h_s(spec: &ModelSpec) -> Result<SparseOperator> {
    spec.validate()?;
    let basis = chain_basis(spec.n, spec.sites)?;
    let h_n = build_h_n(spec.n, spec.sites)?;
    let zeeman = build_zeeman(spec.n, spec.sites, spec.h)?;
    let pert = build_perturbation(spec.n, spec.sites, &spec.couplings)?;
    let mut builder = OperatorBuilder::new(basis);
    builder.add_operator(C64::ONE, &h_n)?;
    builder.add_operator(C64::ONE, &pert)?;
    builder.add_operator(C64::ONE, &zeeman)?;
    let h = builder.build()?.into_hermitian(HERMITIAN_TOL)?;
    if spec.couplings.conserves_charge() {
        h.with_sectors(sector_blocks(&basis))
    } else {
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{embed, scaled_commutator_norm, BasisIndex};
    use crate::models::{build_charge_q, PerturbationCoefficients};
    use crate::state::StateVector;

    #[test]
    fn spin_half_is_the_xx_chain() {
        let alg = LocalAlgebra::new(2).unwrap();
        let basis = BasisIndex::new(4, 2).unwrap();
        let mut xx = OperatorBuilder::new(basis);
        let hop = kron(alg.s_plus(), alg.s_minus());
        let hop_h = hop.adjoint().to_owned();
        for j in 1..=4 {
            xx.add_term(C64::ONE, &hop, &[j, j + 1]).unwrap();
            xx.add_term(C64::ONE, &hop_h, &[j, j + 1]).unwrap();
        }
        let xx = xx.build().unwrap();
        let h = build_h_n(2, 4).unwrap();
        assert!(h.max_abs_diff(&xx).unwrap() < 1e-14);
    }

    #[test]
    fn ferromagnetic_state_eigenvalue() {
        for (n, l) in [(2, 4), (3, 4), (3, 6), (4, 4)] {
            let h = build_h_n(n, l).unwrap();
            let down = StateVector::all_down(BasisIndex::new(l, n).unwrap());
            let out = down.apply(&h).unwrap();
            let expected = down.scale(C64::new(e_fm(n, l), 0.0));
            assert!(out.max_abs_diff(&expected).unwrap() < 1e-12, "n={n} L={l}");
        }
        assert_eq!(e_fm(2, 8), 0.0);
        assert!((e_fm(3, 4) + 4.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn two_site_ring_counts_the_bond_twice() {
        let h = build_h_n(2, 2).unwrap();
        let basis = BasisIndex::new(2, 2).unwrap();
        let (a, b) = (basis.parse("01").unwrap(), basis.parse("10").unwrap());
        assert_eq!(h.get(a, b), C64::new(2.0, 0.0));
    }

    #[test]
    fn frame_change_relates_original_and_transformed() {
        for (n, l) in [(2, 4), (2, 6), (3, 4), (3, 6), (4, 4)] {
            let u = frame_unitary(n, l).unwrap();
            let orig = build_h_orig(n, l, OrigBoundary::Twisted).unwrap();
            let moved = u.adjoint().matmul(&orig).unwrap().matmul(&u).unwrap();
            let h = build_h_n(n, l).unwrap();
            assert!(moved.max_abs_diff(&h).unwrap() < 1e-12, "n={n} L={l}");
        }
    }

    #[test]
    fn bondwise_frame_change_reproduces_h_n() {
        for (n, l) in [(2, 6), (3, 4)] {
            let alg = LocalAlgebra::new(n).unwrap();
            let moved = bondwise_from_original(&alg, l, &h_orig_bond(&alg)).unwrap();
            assert!(moved.max_abs_diff(&build_h_n(n, l).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn periodic_original_matches_twisted_when_twist_is_trivial() {
        // θL = 6π at n = 2, L = 4
        let p = build_h_orig(2, 4, OrigBoundary::Periodic).unwrap();
        let t = build_h_orig(2, 4, OrigBoundary::Twisted).unwrap();
        assert!(p.max_abs_diff(&t).unwrap() < 1e-12);
        let p = build_h_orig(2, 6, OrigBoundary::Periodic).unwrap();
        let t = build_h_orig(2, 6, OrigBoundary::Twisted).unwrap();
        assert!(p.max_abs_diff(&t).unwrap() > 0.1);
    }

    #[test]
    fn charge_is_conserved() {
        for (n, l) in [(2, 4), (3, 4)] {
            let h = build_h_n(n, l).unwrap();
            let q = build_charge_q(n, l).unwrap();
            assert!(scaled_commutator_norm(&q, &h).unwrap() < 1e-12);
        }
    }

    #[test]
    fn zero_couplings_give_h_n() {
        let spec = ModelSpec::clean(3, 4, 0.0).unwrap();
        let hs = build_h_s(&spec).unwrap();
        assert!(hs.max_abs_diff(&build_h_n(3, 4).unwrap()).unwrap() < 1e-15);
        assert!(hs.sectors().is_some());
        let broken = ModelSpec::new(
            2,
            6,
            1.0,
            PerturbationCoefficients::spin_half_random(6, 3, [true; 3]),
        )
        .unwrap();
        assert!(build_h_s(&broken).unwrap().sectors().is_none());
    }

    #[test]
    fn zeeman_is_field_times_charge() {
        let z = build_zeeman(2, 4, 0.5).unwrap();
        let single = embed(
            LocalAlgebra::new(2).unwrap().s_z(),
            &[1],
            &BasisIndex::new(4, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(z.get(0, 0), C64::new(-1.0, 0.0));
        assert_eq!(single.get(0, 0), C64::new(-0.5, 0.0));
    }
}
