//! Self-test: the exact identities at small sizes, seeded from the config.

use onsager_core::algebra::BasisIndex;
use onsager_core::dynamics::{fidelity_trace, revival_period};
use onsager_core::eigensolve::diagonalize;
use onsager_core::entanglement::{
    scar_ee_closed_form, scar_ee_numerical_obc, von_neumann_ee, von_neumann_ee_density_matrix,
};
use onsager_core::models::{
    build_charge_q, build_charge_q_hat, build_h_n, build_h_s, build_perturbation, build_q_plus,
    dolan_grady_defects, tower_energy, ModelSpec, PerturbationCoefficients,
};
use onsager_core::rng::stream;
use onsager_core::tensornet::{
    coherent_mpo_tensors, coherent_state, nilpotent_exp_apply, tower_states,
};
use onsager_core::{StateVector, C64};
use rand::Rng;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::record::{ExperimentRecord, Table};

struct Check {
    name: String,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

fn couplings(n: usize, sites: usize, seed: u64) -> PerturbationCoefficients {
    if n == 2 {
        PerturbationCoefficients::spin_half_random(sites, seed, [true; 3])
    } else {
        PerturbationCoefficients::spin_one_random(sites, seed, true)
    }
}

fn chain_checks(n: usize, sites: usize, seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut push = |name: &str, value: f64, tolerance: f64| {
        out.push(Check {
            name: format!("{name} n={n} L={sites}"),
            value,
            tolerance,
        })
    };
    push("dolan_grady", dolan_grady_defects(n, sites)?.max(), 1e-10);
    let h = build_h_n(n, sites)?;
    let scale = h.max_abs();
    push(
        "commutator_q",
        build_charge_q(n, sites)?.commutator(&h)?.max_abs() / scale,
        1e-10,
    );
    push(
        "commutator_q_hat",
        build_charge_q_hat(n, sites)?.commutator(&h)?.max_abs() / scale,
        1e-10,
    );
    let q_plus = build_q_plus(n, sites)?;
    push(
        "commutator_q_plus",
        q_plus.commutator(&h)?.max_abs() / scale,
        1e-10,
    );

    let spec = ModelSpec::new(n, sites, 1.0, couplings(n, sites, seed))?;
    let pert = build_perturbation(n, sites, &spec.couplings)?;
    let hs = build_h_s(&spec)?;
    let down = StateVector::all_down(BasisIndex::new(sites, n)?);
    let mut rng = stream(seed, &format!("verify/beta/{n}/{sites}"));
    let (mut annihilation, mut triple) = (0.0f64, 0.0f64);
    for _ in 0..3 {
        let beta = C64::from_polar(
            rng.random_range(0.2..1.1),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let psi = coherent_state(n, beta, sites)?;
        annihilation = annihilation.max(psi.normalized()?.apply(&pert)?.norm());
        let series = nilpotent_exp_apply(&q_plus, beta.powu(n as u32), &down)?;
        let mpo = coherent_mpo_tensors(n, beta, sites)?.apply(&down)?;
        let norm = series.norm();
        triple = triple
            .max(psi.max_abs_diff(&series)? / norm)
            .max(mpo.max_abs_diff(&series)? / norm);
    }
    push("perturbation_annihilates_coherent", annihilation, 1e-10);
    push("mps_mpo_series_agreement", triple, 1e-11);
    let mut tower = 0.0f64;
    for (k, v) in tower_states(n, sites)? {
        let r = v
            .apply(&hs)?
            .add_scaled(C64::new(-tower_energy(&spec, k), 0.0), &v)?
            .norm();
        tower = tower.max(r);
    }
    push("tower_eigen_residual", tower, 1e-10);
    Ok(())
}

pub fn verify_suite(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut checks = Vec::new();
    for n in [2, 3] {
        for sites in [4, 6, 8] {
            chain_checks(n, sites, config.seed, &mut checks)?;
        }
    }
    for sites in [4, 8, 12] {
        let diff =
            (scar_ee_closed_form(sites)?.entropy - scar_ee_numerical_obc(sites, sites / 4)?).abs();
        checks.push(Check {
            name: format!("closed_form_entropy L={sites}"),
            value: diff,
            tolerance: 1e-10,
        });
    }
    let basis = BasisIndex::new(8, 2)?;
    let psi = StateVector::random_gaussian(basis, &mut stream(config.seed, "verify/random"));
    let ee_diff = (von_neumann_ee(&psi, 4)? - von_neumann_ee_density_matrix(&psi, 4)?).abs();
    checks.push(Check {
        name: "schmidt_vs_density_matrix L=8".into(),
        value: ee_diff,
        tolerance: 1e-10,
    });

    let spec = ModelSpec::new(2, 8, 1.0, couplings(2, 8, config.seed))?;
    let d = diagonalize(&build_h_s(&spec)?, &basis, None, true)?;
    let coherent = coherent_state(2, C64::new(0.6, 0.0), 8)?.normalized()?;
    let period = revival_period(2, 1.0)?;
    let f = fidelity_trace(&coherent, &d, &[period, 2.0 * period], "coherent")?;
    let loss = f.fidelity.iter().map(|x| 1.0 - x).fold(0.0, f64::max);
    checks.push(Check {
        name: "coherent_revival n=2 L=8".into(),
        value: loss,
        tolerance: 1e-8,
    });

    let mut table = Table::new("verify", &["check", "value", "tolerance", "pass"]);
    for c in &checks {
        let pass = if c.passed() { "true" } else { "false" };
        table.push(vec![
            c.name.clone().into(),
            c.value.into(),
            c.tolerance.into(),
            pass.to_string().into(),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    Ok(ExperimentRecord {
        config: config.clone(),
        tables: vec![table],
        summary: json!({ "checks": checks.len(), "failed": failed }),
    })
}
