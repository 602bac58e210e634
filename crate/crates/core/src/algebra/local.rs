use std::f64::consts::PI;

use faer::Mat;

use crate::error::{Error, Result};
use crate::C64;

/// The five on-site operators of the clock/spin algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalKind {
    Tau,
    Sigma,
    SPlus,
    SMinus,
    Sz,
}

/// On-site operator algebra for local dimension `n`.
///
/// Basis states are labeled `|p>`, `p = 0..n`, with `S^z |p> = (p - (n-1)/2) |p>`,
/// so `|0>` is the lowest weight. In this labeling:
///
/// * `tau = diag(1, ω, …, ω^{n-1})` with `ω = e^{2πi/n}`;
/// * `sigma |p> = |p+1 mod n>`, i.e. `sigma[(i, j)] = δ_{i, j+1 mod n}`;
/// * `S^+ |p> = |p+1>` for `p < n-1` and `S^+ |n-1> = 0`; `S^- = (S^+)^†`.
///
/// With these choices `[S^z, S^±] = ±S^±` and `tau sigma = ω sigma tau`.
#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    n: usize,
    omega: C64,
    tau: Mat<C64>,
    sigma: Mat<C64>,
    s_plus: Mat<C64>,
    s_minus: Mat<C64>,
    s_z: Mat<C64>,
}

impl LocalAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let omega = C64::from_polar(1.0, 2.0 * PI / n as f64);
        let tau = Mat::from_fn(n, n, |i, j| {
            if i == j {
                omega.powu(i as u32)
            } else {
                C64::ZERO
            }
        });
        let sigma = Mat::from_fn(n, n, |i, j| {
            if i == (j + 1) % n {
                C64::ONE
            } else {
                C64::ZERO
            }
        });
        let s_plus = Mat::from_fn(n, n, |i, j| if i == j + 1 { C64::ONE } else { C64::ZERO });
        let s_minus = s_plus.adjoint().to_owned();
        let half = (n as f64 - 1.0) / 2.0;
        let s_z = Mat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(i as f64 - half, 0.0)
            } else {
                C64::ZERO
            }
        });
        Ok(Self {
            n,
            omega,
            tau,
            sigma,
            s_plus,
            s_minus,
            s_z,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Primitive root `e^{2πi/n}`.
    pub fn omega(&self) -> C64 {
        self.omega
    }

    /// `ω^{x/2}` on the principal branch, `e^{iπx/n}`.
    pub fn omega_half_power(&self, x: usize) -> C64 {
        C64::from_polar(1.0, PI * x as f64 / self.n as f64)
    }

    pub fn get(&self, kind: LocalKind) -> &Mat<C64> {
        match kind {
            LocalKind::Tau => &self.tau,
            LocalKind::Sigma => &self.sigma,
            LocalKind::SPlus => &self.s_plus,
            LocalKind::SMinus => &self.s_minus,
            LocalKind::Sz => &self.s_z,
        }
    }

    pub fn tau(&self) -> &Mat<C64> {
        &self.tau
    }

    pub fn sigma(&self) -> &Mat<C64> {
        &self.sigma
    }

    pub fn s_plus(&self) -> &Mat<C64> {
        &self.s_plus
    }

    pub fn s_minus(&self) -> &Mat<C64> {
        &self.s_minus
    }

    pub fn s_z(&self) -> &Mat<C64> {
        &self.s_z
    }

    pub fn identity(&self) -> Mat<C64> {
        Mat::identity(self.n, self.n)
    }

    /// Eigenvalue of `S^z` on `|p>`.
    pub fn weight(&self, p: usize) -> f64 {
        p as f64 - (self.n as f64 - 1.0) / 2.0
    }
}

/// Single-site operator of the requested kind.
pub fn local_operator(kind: LocalKind, n: usize) -> Result<Mat<C64>> {
    Ok(LocalAlgebra::new(n)?.get(kind).clone())
}

/// Integer matrix power; `m^0` is the identity.
pub fn mat_pow(m: &Mat<C64>, k: usize) -> Mat<C64> {
    let mut out = Mat::<C64>::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Kronecker product `a ⊗ b`; the left factor is the more significant index.
pub fn kron(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn kron_all(factors: &[&Mat<C64>]) -> Mat<C64> {
    let mut iter = factors.iter();
    let first = match iter.next() {
        Some(m) => (*m).clone(),
        None => return Mat::identity(1, 1),
    };
    iter.fold(first, |acc, m| kron(&acc, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                d = d.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        d
    }

    #[test]
    fn tau_for_qubits_is_pauli_z() {
        let tau = local_operator(LocalKind::Tau, 2).unwrap();
        assert!((tau[(0, 0)] - C64::ONE).norm() < 1e-15);
        assert!((tau[(1, 1)] + C64::ONE).norm() < 1e-15);
        assert_eq!(tau[(0, 1)], C64::ZERO);
    }

    #[test]
    fn s_plus_raises_the_label() {
        let sp = local_operator(LocalKind::SPlus, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(sp[(i, j)], C64::new(expected, 0.0));
            }
        }
        let sm = local_operator(LocalKind::SMinus, 3).unwrap();
        assert_eq!(sm[(0, 1)], C64::ONE);
        assert_eq!(sm[(1, 2)], C64::ONE);
    }

    #[test]
    fn s_z_ascends_with_label() {
        let sz = local_operator(LocalKind::Sz, 2).unwrap();
        assert_eq!(sz[(0, 0)].re, -0.5);
        assert_eq!(sz[(1, 1)].re, 0.5);
    }

    #[test]
    fn rejects_trivial_dimension() {
        assert_eq!(
            LocalAlgebra::new(1).unwrap_err(),
            Error::InvalidDimension(1)
        );
        assert!(local_operator(LocalKind::Tau, 0).is_err());
    }

    #[test]
    fn ladder_commutators() {
        for n in 2..=4 {
            let alg = LocalAlgebra::new(n).unwrap();
            let (sz, sp, sm) = (alg.s_z(), alg.s_plus(), alg.s_minus());
            let c_plus = sz * sp - sp * sz;
            let c_minus = sz * sm - sm * sz;
            assert_eq!(max_diff(&c_plus, sp), 0.0);
            assert_eq!(max_diff(&c_minus, &(-sm)), 0.0);
        }
    }

    #[test]
    fn weyl_relation() {
        for n in 2..=5 {
            let alg = LocalAlgebra::new(n).unwrap();
            let lhs = alg.tau() * alg.sigma();
            let rhs = (alg.sigma() * alg.tau()) * faer::Scale(alg.omega());
            assert!(max_diff(&lhs, &rhs) < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn kron_orders_left_factor_first() {
        let alg = LocalAlgebra::new(2).unwrap();
        let k = kron(alg.s_plus(), &alg.identity());
        // S^+ on the left site maps |00> (index 0) to |10> (index 2).
        assert_eq!(k[(2, 0)], C64::ONE);
        assert_eq!(mat_pow(alg.s_plus(), 2)[(1, 0)], C64::ZERO);
    }
}
