use std::f64::consts::PI;

use onsager_core::algebra::BasisIndex;
use onsager_core::dynamics::{
    ee_trace, evolve, fidelity_trace, revival_period, time_grid, Propagator,
};
use onsager_core::eigensolve::diagonalize;
use onsager_core::models::{build_h_s, ModelSpec, PerturbationCoefficients};
use onsager_core::tensornet::{coherent_state, tower_states};
use onsager_core::{EigenDecomposition, StateVector, C64};

fn spin_half(sites: usize, h: f64) -> (onsager_core::SparseOperator, EigenDecomposition) {
    let spec = ModelSpec::new(
        2,
        sites,
        h,
        PerturbationCoefficients::spin_half_random(sites, 11, [true; 3]),
    )
    .unwrap();
    let hs = build_h_s(&spec).unwrap();
    let d = diagonalize(&hs, &BasisIndex::new(sites, 2).unwrap(), None, true).unwrap();
    (hs, d)
}

#[test]
fn coherent_state_rotates_its_parameter() {
    let (_, d) = spin_half(8, 1.0);
    let beta = C64::new(0.5, 0.2);
    let psi = coherent_state(2, beta, 8).unwrap().normalized().unwrap();
    for t in [0.3, 1.1] {
        let evolved = evolve(&psi, &d, t).unwrap();
        let want = coherent_state(2, beta * C64::from_polar(1.0, -t), 8)
            .unwrap()
            .normalized()
            .unwrap();
        assert!(
            (evolved.overlap_modulus(&want).unwrap() - 1.0).abs() < 1e-10,
            "t={t}"
        );
    }
}

#[test]
fn coherent_fidelity_is_periodic() {
    let (_, d) = spin_half(8, 1.0);
    let psi = coherent_state(2, C64::new(0.7, 0.0), 8)
        .unwrap()
        .normalized()
        .unwrap();
    let period = revival_period(2, 1.0).unwrap();
    assert!((period - PI).abs() < 1e-15);
    let times = time_grid(2.0 * period, 50);
    let shifted: Vec<f64> = times.iter().map(|t| t + period).collect();
    let a = fidelity_trace(&psi, &d, &times, "coherent").unwrap();
    let b = fidelity_trace(&psi, &d, &shifted, "coherent").unwrap();
    for (x, y) in a.fidelity.iter().zip(&b.fidelity) {
        assert!((x - y).abs() < 1e-8);
    }
    assert!((a.fidelity[0] - 1.0).abs() < 1e-12);
    assert!(a.fidelity.iter().all(|&f| (0.0..=1.0 + 1e-12).contains(&f)));
}

#[test]
fn tower_states_never_decay() {
    let (_, d) = spin_half(8, 1.0);
    for (k, v) in tower_states(2, 8).unwrap() {
        let tr = fidelity_trace(&v, &d, &time_grid(10.0, 25), "tower").unwrap();
        assert!(tr.fidelity.iter().all(|f| (f - 1.0).abs() < 1e-10), "k={k}");
    }
}

#[test]
fn norm_and_energy_are_conserved() {
    let (hs, d) = spin_half(8, 0.7);
    let basis = BasisIndex::new(8, 2).unwrap();
    let psi = StateVector::from_label(basis, "10101010").unwrap();
    let e0 = psi.expectation(&hs).unwrap().re;
    let prop = Propagator::new(&d, &psi).unwrap();
    assert!((prop.captured_weight() - 1.0).abs() < 1e-12);
    for t in time_grid(20.0, 11) {
        let v = prop.state_at(t).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12);
        let e = v.expectation(&hs).unwrap().re;
        assert!((e - e0).abs() <= 1e-10 * e0.abs().max(1.0));
    }
}

#[test]
fn entropy_trace_stays_in_range() {
    let (_, d) = spin_half(8, 1.0);
    let psi = StateVector::from_label(BasisIndex::new(8, 2).unwrap(), "10101010").unwrap();
    let tr = ee_trace(&psi, &d, &time_grid(10.0, 21), 4, "neel").unwrap();
    assert_eq!(tr.entropy.len(), 21);
    assert!(tr.entropy[0].abs() < 1e-12);
    assert!(tr
        .entropy
        .iter()
        .all(|&s| (-1e-12..=4.0 * 2f64.ln() + 1e-12).contains(&s)));
    assert!(tr.entropy[20] > 0.5);
}

#[test]
fn evolution_needs_eigenvectors() {
    let (hs, _) = spin_half(6, 1.0);
    let d = diagonalize(&hs, &BasisIndex::new(6, 2).unwrap(), None, false).unwrap();
    let psi = StateVector::all_down(BasisIndex::new(6, 2).unwrap());
    assert!(evolve(&psi, &d, 1.0).is_err());
}
