use std::f64::consts::PI;

use faer::Mat;

use super::hamiltonian::bondwise_from_original;
use super::{chain_basis, ring_site};
use crate::algebra::{
    commutator_residual_norm, kron, kron_all, mat_pow, LocalAlgebra, OperatorBuilder,
    SparseOperator,
};
use crate::error::{Error, Result};
use crate::C64;

/// `Q = Σ_j S^z_j`.
pub fn build_charge_q(n: usize, sites: usize) -> Result<SparseOperator> {
    let basis = chain_basis(n, sites)?;
    let diag = (0..basis.dim())
        .map(|idx| C64::new(basis.charge(idx).value(), 0.0))
        .collect();
    Ok(SparseOperator::from_diagonal(diag))
}

/// The dual charge `Q̂ = Σ_j Σ_a (σ_j^†)^a σ_{j+1}^a / (1 − ω^{−a})`, moved
/// into the `H_n` frame bond by bond.
pub fn build_charge_q_hat(n: usize, sites: usize) -> Result<SparseOperator> {
    let alg = LocalAlgebra::new(n)?;
    let sigma_dag = alg.sigma().adjoint().to_owned();
    let mut bond = Mat::<C64>::zeros(n * n, n * n);
    for a in 1..n {
        let coeff = C64::ONE / (C64::ONE - alg.omega().powi(-(a as i32)));
        bond += faer::Scale(coeff) * kron(&mat_pow(&sigma_dag, a), &mat_pow(alg.sigma(), a));
    }
    bondwise_from_original(&alg, sites, &bond)?.into_hermitian(1e-12)
}

/// `Q^+ = Σ_j Σ_a (−1)^{(n+1)j+a} / sin(πa/n) · (S_j^+)^a (S_{j+1}^+)^{n−a}`.
pub fn build_q_plus(n: usize, sites: usize) -> Result<SparseOperator> {
    let alg = LocalAlgebra::new(n)?;
    let basis = chain_basis(n, sites)?;
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        for a in 1..n {
            let sign = if ((n + 1) * j + a) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let coeff = sign / (PI * a as f64 / n as f64).sin();
            let local = kron(&mat_pow(alg.s_plus(), a), &mat_pow(alg.s_plus(), n - a));
            builder.add_term(C64::new(coeff, 0.0), &local, &[j, ring_site(j, 1, sites)])?;
        }
    }
    builder.build()
}

/// Spin-1/2 Onsager element
/// `Q_l^+ = Σ_j (−1)^{j+1} S_j^+ (Π_{k=j+1}^{j+l−1} S^z_k) S_{j+l}^+`.
pub fn build_q_l_plus(range: usize, sites: usize) -> Result<SparseOperator> {
    let basis = chain_basis(2, sites)?;
    if range == 0 || 2 * range >= sites {
        return Err(Error::InvalidParameter(format!(
            "Q_l^+ needs 1 <= l < L/2, got l = {range}, L = {sites}"
        )));
    }
    let alg = LocalAlgebra::new(2)?;
    let mut factors: Vec<&Mat<C64>> = vec![alg.s_plus()];
    factors.extend(std::iter::repeat_n(alg.s_z(), range - 1));
    factors.push(alg.s_plus());
    let local = kron_all(&factors);
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let window: Vec<usize> = (0..=range)
            .map(|k| ring_site(j, k as isize, sites))
            .collect();
        builder.add_term(C64::new(sign, 0.0), &local, &window)?;
    }
    builder.build()
}

/// Relative defects of the two Dolan-Grady relations
/// `[A,[A,[A,B]]] = n²[A,B]` for `(A, B) = (Q, Q̂)` and `(Q̂, Q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DolanGrady {
    pub charge_first: f64,
    pub dual_first: f64,
}

impl DolanGrady {
    pub fn max(&self) -> f64 {
        self.charge_first.max(self.dual_first)
    }
}

/// Evaluates both relations; each defect is normalized by `‖n²[A,B]‖_F`.
///
/// The outermost commutator is never stored, which keeps `n = 3, L = 8` in
/// memory.
pub fn dolan_grady_defects(n: usize, sites: usize) -> Result<DolanGrady> {
    let q = build_charge_q(n, sites)?;
    let q_hat = build_charge_q_hat(n, sites)?;
    let k = C64::new((n * n) as f64, 0.0);
    let relation = |a: &SparseOperator, b: &SparseOperator| -> Result<f64> {
        let ab = a.commutator(b)?;
        let aab = a.commutator(&ab)?;
        let scale = k.norm() * ab.frobenius_norm();
        if scale == 0.0 {
            return Err(Error::Linalg("[A, B] vanishes; relation is vacuous".into()));
        }
        Ok(commutator_residual_norm(a, &aab, &ab, k)? / scale)
    };
    Ok(DolanGrady {
        charge_first: relation(&q, &q_hat)?,
        dual_first: relation(&q_hat, &q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{embed, scaled_commutator_norm, BasisIndex};
    use crate::models::build_h_n;
    use crate::state::StateVector;

    #[test]
    fn q_plus_for_spin_half() {
        let alg = LocalAlgebra::new(2).unwrap();
        let basis = BasisIndex::new(4, 2).unwrap();
        let pair = kron(alg.s_plus(), alg.s_plus());
        let mut b = OperatorBuilder::new(basis);
        for j in 1..=4usize {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            b.add_term(C64::new(sign, 0.0), &pair, &[j, j + 1]).unwrap();
        }
        let expected = b.build().unwrap();
        assert!(build_q_plus(2, 4).unwrap().max_abs_diff(&expected).unwrap() < 1e-14);
        assert!(matches!(build_q_plus(2, 5), Err(Error::OddLength(5))));
    }

    #[test]
    fn q_plus_raises_charge_by_n() {
        for n in [2, 3] {
            let q = build_charge_q(n, 4).unwrap();
            let p = build_q_plus(n, 4).unwrap();
            let lhs = q.commutator(&p).unwrap();
            let rhs = p.scale(C64::new(n as f64, 0.0));
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-13);
        }
    }

    #[test]
    fn charge_of_all_down() {
        let q = build_charge_q(2, 4).unwrap();
        assert_eq!(q.get(0, 0), C64::new(-2.0, 0.0));
    }

    #[test]
    fn charge_ladder_on_three_sites() {
        // [Q, S_j^±] = ±S_j^± on an odd chain, built directly from site terms
        let alg = LocalAlgebra::new(3).unwrap();
        let basis = BasisIndex::new(3, 3).unwrap();
        let mut q = OperatorBuilder::new(basis);
        for j in 1..=3 {
            q.add_term(C64::ONE, alg.s_z(), &[j]).unwrap();
        }
        let q = q.build().unwrap();
        for j in 1..=3 {
            let sp = embed(alg.s_plus(), &[j], &basis).unwrap();
            let sm = embed(alg.s_minus(), &[j], &basis).unwrap();
            assert!(q.commutator(&sp).unwrap().max_abs_diff(&sp).unwrap() < 1e-14);
            assert!(
                q.commutator(&sm)
                    .unwrap()
                    .max_abs_diff(&sm.scale(-C64::ONE))
                    .unwrap()
                    < 1e-14
            );
        }
    }

    #[test]
    fn onsager_elements_commute_with_h_n() {
        for (n, l) in [(2, 4), (2, 6), (3, 4)] {
            let h = build_h_n(n, l).unwrap();
            let qh = build_charge_q_hat(n, l).unwrap();
            let qp = build_q_plus(n, l).unwrap();
            assert!(
                scaled_commutator_norm(&qh, &h).unwrap() < 1e-12,
                "Q̂ n={n} L={l}"
            );
            assert!(
                scaled_commutator_norm(&qp, &h).unwrap() < 1e-12,
                "Q+ n={n} L={l}"
            );
        }
    }

    #[test]
    fn dolan_grady_small() {
        let dg = dolan_grady_defects(2, 4).unwrap();
        assert!(dg.max() < 1e-12, "{dg:?}");
        let q = build_charge_q(2, 4).unwrap();
        let qq = q.commutator(&q).unwrap();
        assert_eq!(q.commutator(&qq).unwrap().nnz(), 0);
    }

    #[test]
    fn q_l_plus_family() {
        let h = build_h_n(2, 6).unwrap();
        let q1 = build_q_l_plus(1, 6).unwrap();
        assert!(q1.max_abs_diff(&build_q_plus(2, 6).unwrap()).unwrap() < 1e-14);
        let q2 = build_q_l_plus(2, 6).unwrap();
        assert!(scaled_commutator_norm(&q2, &h).unwrap() < 1e-12);
        let basis = BasisIndex::new(6, 2).unwrap();
        let v = StateVector::all_down(basis).apply(&q2).unwrap();
        assert!(v.norm() > 0.0);
        for (i, a) in v.amplitudes().iter().enumerate() {
            if a.norm() > 0.0 {
                assert_eq!(basis.charge(i).value(), -1.0);
            }
        }
        assert!(build_q_l_plus(3, 6).is_err());
        assert!(build_q_l_plus(0, 6).is_err());
    }
}
