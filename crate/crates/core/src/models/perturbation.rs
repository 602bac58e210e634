use faer::Mat;

use super::spec::{Perturbation, PerturbationCoefficients};
use super::{chain_basis, ring_site};
use crate::algebra::{BasisIndex, OperatorBuilder, SparseOperator};
use crate::error::{Error, Result};
use crate::C64;

/// Number of distinct spin-1 window states with no overlap on the coherent state.
pub const SPIN_ONE_PROJECTORS: usize = 12;

/// Superposition of window product states, stored unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowState {
    pub terms: Vec<(&'static str, f64)>,
}

impl WindowState {
    fn new(terms: &[(&'static str, f64)]) -> Self {
        Self {
            terms: terms.to_vec(),
        }
    }

    pub fn width(&self) -> usize {
        self.terms[0].0.len()
    }

    /// Normalized amplitude vector on `n^width` window states.
    pub fn vector(&self, n: usize) -> Result<Vec<C64>> {
        let basis = BasisIndex::new(self.width(), n)?;
        let mut v = vec![C64::ZERO; basis.dim()];
        for &(label, c) in &self.terms {
            v[basis.parse(label)?] += C64::new(c, 0.0);
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Ok(v.into_iter().map(|a| a / norm).collect())
    }

    /// `|v><v|`.
    pub fn projector(&self, n: usize) -> Result<Mat<C64>> {
        let v = self.vector(n)?;
        Ok(Mat::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj()))
    }
}

/// Spin-1 three-site states with no overlap on the coherent state, `|110>`
/// counted once. The last
/// entry, `(|122> + |212> + |221>)/√3`, is the only one that also acts on
/// one-magnon states `|2…212…2>`.
pub fn spin_one_window_states() -> Vec<WindowState> {
    vec![
        WindowState::new(&[("010", 1.0)]),
        WindowState::new(&[("020", 1.0)]),
        WindowState::new(&[("110", 1.0)]),
        WindowState::new(&[("011", 1.0)]),
        WindowState::new(&[("111", 1.0)]),
        WindowState::new(&[("012", 1.0), ("021", 1.0), ("120", 1.0), ("210", 1.0)]),
        WindowState::new(&[("012", 1.0), ("120", -1.0)]),
        WindowState::new(&[("021", 1.0), ("210", -1.0)]),
        WindowState::new(&[("022", 1.0), ("112", -1.0), ("211", -1.0), ("220", 1.0)]),
        WindowState::new(&[("022", 1.0), ("112", 1.0), ("211", -1.0), ("220", -1.0)]),
        WindowState::new(&[
            ("022", 1.0),
            ("112", 1.0),
            ("121", 2.0),
            ("211", 1.0),
            ("220", 1.0),
        ]),
        WindowState::new(&[("122", 1.0), ("212", 1.0), ("221", 1.0)]),
    ]
}

/// Five-site spin-1/2 states annihilated against the two-parameter coherent state.
pub fn two_param_window_states() -> [WindowState; 2] {
    [
        WindowState::new(&[("00100", 1.0)]),
        WindowState::new(&[("00101", 1.0), ("10100", -1.0)]),
    ]
}

/// Sites of the window of `width` sites centred on 1-based `j`.
fn window_sites(j: usize, width: usize, sites: usize) -> Vec<usize> {
    let half = (width / 2) as isize;
    (0..width as isize)
        .map(|k| ring_site(j, k - half, sites))
        .collect()
}

fn check_len(name: &str, len: usize, sites: usize) -> Result<()> {
    if len != sites {
        return Err(Error::InvalidParameter(format!(
            "{name} has {len} entries for {sites} sites"
        )));
    }
    Ok(())
}

/// Spin-1/2 three-site perturbation on windows `(j−1, j, j+1)`:
/// `c1 |010><010| + (c2/2)(|011>+|110>)(h.c.) + c3 [|010>(<011|+<110|) + h.c.]`.
pub fn build_perturbation_n2(
    sites: usize,
    c1: &[f64],
    c2: &[f64],
    c3: &[f64],
) -> Result<SparseOperator> {
    let basis = chain_basis(2, sites)?;
    if sites < 4 {
        return Err(Error::ChainTooShort {
            min: 4,
            found: sites,
        });
    }
    check_len("c1", c1.len(), sites)?;
    check_len("c2", c2.len(), sites)?;
    check_len("c3", c3.len(), sites)?;
    let (s010, s011, s110) = (0b010, 0b011, 0b110);
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        let (a, b, c) = (c1[j - 1], c2[j - 1], c3[j - 1]);
        let mut local = Mat::<C64>::zeros(8, 8);
        local[(s010, s010)] += C64::new(a, 0.0);
        for &r in &[s011, s110] {
            for &col in &[s011, s110] {
                local[(r, col)] += C64::new(b / 2.0, 0.0);
            }
            local[(s010, r)] += C64::new(c, 0.0);
            local[(r, s010)] += C64::new(c, 0.0);
        }
        builder.add_term(C64::ONE, &local, &window_sites(j, 3, sites))?;
    }
    builder.build()?.into_hermitian(1e-12)
}

/// Weighted sum of spin-1 window projectors; the last projector is skipped
/// unless `include_last_projector`.
pub fn build_perturbation_n3(
    sites: usize,
    weights: &[[f64; SPIN_ONE_PROJECTORS]],
    include_last_projector: bool,
) -> Result<SparseOperator> {
    let basis = chain_basis(3, sites)?;
    if sites < 4 {
        return Err(Error::ChainTooShort {
            min: 4,
            found: sites,
        });
    }
    check_len("weights", weights.len(), sites)?;
    let projectors = spin_one_window_states()
        .iter()
        .map(|w| w.projector(3))
        .collect::<Result<Vec<_>>>()?;
    let used = if include_last_projector {
        SPIN_ONE_PROJECTORS
    } else {
        SPIN_ONE_PROJECTORS - 1
    };
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        let mut local = Mat::<C64>::zeros(27, 27);
        for (k, p) in projectors.iter().take(used).enumerate() {
            local += faer::Scale(C64::new(weights[j - 1][k], 0.0)) * p;
        }
        builder.add_term(C64::ONE, &local, &window_sites(j, 3, sites))?;
    }
    builder.build()?.into_hermitian(1e-12)
}

/// Five-site projectors on `(j−2, …, j+2)` built from [`two_param_window_states`].
pub fn build_perturbation_two_param(
    sites: usize,
    center: &[f64],
    antisymmetric: &[f64],
) -> Result<SparseOperator> {
    let basis = chain_basis(2, sites)?;
    if sites < 6 {
        return Err(Error::ChainTooShort {
            min: 6,
            found: sites,
        });
    }
    check_len("center", center.len(), sites)?;
    check_len("antisymmetric", antisymmetric.len(), sites)?;
    let [w0, w1] = two_param_window_states();
    let (p0, p1) = (w0.projector(2)?, w1.projector(2)?);
    let mut builder = OperatorBuilder::new(basis);
    for j in 1..=sites {
        let local = faer::Scale(C64::new(center[j - 1], 0.0)) * &p0
            + faer::Scale(C64::new(antisymmetric[j - 1], 0.0)) * &p1;
        builder.add_term(C64::ONE, &local, &window_sites(j, 5, sites))?;
    }
    builder.build()?.into_hermitian(1e-12)
}

/// Dispatches on the coupling variant; `None` gives the zero operator.
pub fn build_perturbation(
    n: usize,
    sites: usize,
    couplings: &PerturbationCoefficients,
) -> Result<SparseOperator> {
    couplings.validate(n, sites)?;
    match &couplings.terms {
        Perturbation::None => Ok(SparseOperator::zeros(chain_basis(n, sites)?.dim())),
        Perturbation::SpinHalf { c1, c2, c3 } => build_perturbation_n2(sites, c1, c2, c3),
        Perturbation::SpinOne {
            weights,
            include_last_projector,
        } => build_perturbation_n3(sites, weights, *include_last_projector),
        Perturbation::TwoParameter {
            center,
            antisymmetric,
        } => build_perturbation_two_param(sites, center, antisymmetric),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_q_plus;
    use crate::state::StateVector;
    use crate::tensornet::{coherent_state, multi_param_state};

    fn coherent(n: usize, beta: C64, sites: usize) -> StateVector {
        coherent_state(n, beta, sites)
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn spin_one_window_states_are_orthonormal() {
        let vs: Vec<Vec<C64>> = spin_one_window_states()
            .iter()
            .map(|w| w.vector(3).unwrap())
            .collect();
        assert_eq!(vs.len(), SPIN_ONE_PROJECTORS);
        for (a, va) in vs.iter().enumerate() {
            for (b, vb) in vs.iter().enumerate() {
                let ip: C64 = va.iter().zip(vb).map(|(x, y)| x.conj() * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-14, "{a} {b}");
            }
        }
    }

    #[test]
    fn spin_half_terms_annihilate_coherent_state() {
        let sites = 8;
        let c = |seed: u64| {
            (0..sites)
                .map(|j| ((j as f64 + 1.0) * 0.731 * seed as f64).sin())
                .collect::<Vec<_>>()
        };
        let h = build_perturbation_n2(sites, &c(1), &c(2), &c(3)).unwrap();
        for beta in [C64::new(0.4, 0.3), C64::new(-1.2, 0.1)] {
            let psi = coherent(2, beta, sites);
            assert!(psi.apply(&h).unwrap().norm() < 1e-12);
        }
        let probe =
            StateVector::from_label(BasisIndex::new(sites, 2).unwrap(), "01000000").unwrap();
        assert!(probe.apply(&h).unwrap().norm() > 1e-3);
    }

    #[test]
    fn spin_one_terms_annihilate_coherent_state() {
        let sites = 6;
        let weights: Vec<[f64; SPIN_ONE_PROJECTORS]> = (0..sites)
            .map(|j| std::array::from_fn(|k| ((j * 13 + k) as f64 * 0.37).cos()))
            .collect();
        for include_last in [false, true] {
            let h = build_perturbation_n3(sites, &weights, include_last).unwrap();
            let psi = coherent(3, C64::new(0.7, -0.2), sites);
            assert!(psi.apply(&h).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn last_projector_switches_on_one_magnon_states() {
        let sites = 6;
        let basis = BasisIndex::new(sites, 3).unwrap();
        let weights = vec![[1.0; SPIN_ONE_PROJECTORS]; sites];
        let off = build_perturbation_n3(sites, &weights, false).unwrap();
        let on = build_perturbation_n3(sites, &weights, true).unwrap();
        let mut amps = vec![C64::ZERO; basis.dim()];
        for j in 0..sites {
            let mut d = vec![2; sites];
            d[j] = 1;
            amps[basis.encode(&d)] = C64::new(1.0 / (sites as f64).sqrt(), 0.0);
        }
        let magnon = StateVector::new(basis, amps).unwrap();
        assert!(magnon.apply(&off).unwrap().norm() < 1e-12);
        assert!(magnon.apply(&on).unwrap().norm() > 0.1);
    }

    #[test]
    fn two_parameter_terms_annihilate_two_parameter_states() {
        let sites = 8;
        let c: Vec<f64> = (0..sites).map(|j| 0.3 + j as f64 * 0.1).collect();
        let a: Vec<f64> = (0..sites).map(|j| -0.5 + j as f64 * 0.2).collect();
        let h = build_perturbation_two_param(sites, &c, &a).unwrap();
        let psi = multi_param_state(&[C64::new(0.6, 0.2), C64::new(-0.3, 0.9)], sites)
            .unwrap()
            .normalized()
            .unwrap();
        assert!(psi.apply(&h).unwrap().norm() < 1e-12);
        let q = build_q_plus(2, sites).unwrap();
        let v = StateVector::all_down(BasisIndex::new(sites, 2).unwrap())
            .apply(&q)
            .unwrap();
        assert!(v.apply(&h).unwrap().norm() < 1e-12);
    }

    #[test]
    fn dispatch_and_validation() {
        let none = build_perturbation(2, 6, &PerturbationCoefficients::none()).unwrap();
        assert_eq!(none.nnz(), 0);
        let wrong = PerturbationCoefficients::spin_half_random(6, 1, [true; 3]);
        assert!(build_perturbation(3, 6, &wrong).is_err());
        assert!(build_perturbation_n2(6, &[0.0; 5], &[0.0; 6], &[0.0; 6]).is_err());
        assert!(matches!(
            build_perturbation_two_param(4, &[0.0; 4], &[0.0; 4]),
            Err(Error::ChainTooShort { min: 6, found: 4 })
        ));
    }
}
