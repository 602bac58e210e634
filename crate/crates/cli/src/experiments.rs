//! Experiment drivers. Each turns a resolved config into an [`ExperimentRecord`].

use std::f64::consts::LN_2;

use log::info;
use onsager_core::algebra::BasisIndex;
use onsager_core::dynamics::{ee_trace, fidelity_trace, revival_period, time_grid};
use onsager_core::eigensolve::{
    diagonalize, histogram, level_spacing_stats, poisson_surrogate_levels, reference_pdf,
    ReferenceKind, SpacingWindow,
};
use onsager_core::entanglement::{
    binomial, ee_scatter, identify_scars, observable_expectation, one_magnon_states, page_value,
    scar_ee_closed_form, scar_ee_numerical_obc, window_010_observable, ScarCandidate, ScarTag,
};
use onsager_core::models::build_h_s;
use onsager_core::rng::stream;
use onsager_core::tensornet::{scar_tower, tower_states, two_param_tower, TowerState};
use onsager_core::{EigenDecomposition, StateVector};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{ExperimentConfig, ExperimentKind, InitialState, PerturbationFamily};
use crate::error::{CliError, Result};
use crate::record::{ExperimentRecord, Table};
use crate::verify::verify_suite;

/// Summed cluster weight a candidate needs to count as an eigenstate.
pub const MATCH_THRESHOLD: f64 = 1.0 - 1e-6;

pub fn run(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    info!(
        "running {} (n = {}, L = {}, h = {})",
        config.experiment.name(),
        config.n,
        config.sites,
        config.h
    );
    match config.experiment {
        ExperimentKind::Levelstats => levelstats(config),
        ExperimentKind::EeScatter => scatter(config),
        ExperimentKind::Dynamics => dynamics(config),
        ExperimentKind::ClosedFormEe => closed_form(config),
        ExperimentKind::Verify => verify_suite(config),
    }
}

fn basis(config: &ExperimentConfig) -> Result<BasisIndex> {
    Ok(BasisIndex::new(config.sites, config.n)?)
}

fn window(config: &ExperimentConfig) -> SpacingWindow {
    SpacingWindow {
        lo: config.levels.window[0],
        hi: config.levels.window[1],
    }
}

fn levelstats(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let basis = basis(config)?;
    let sector = config.sector();
    let spectra: Vec<Vec<f64>> = (0..config.levels.realizations)
        .into_par_iter()
        .map(|r| {
            let h = build_h_s(&config.model_spec_for(r)?)?;
            let d = diagonalize(&h, &basis, sector, false)?;
            info!("realization {r}: {} levels", d.len());
            Ok(d.eigenvalues().to_vec())
        })
        .collect::<Result<_>>()?;
    let mut spacings = Table::new("levelstats_spacings", &["realization", "s"]);
    let mut ratios = Table::new("levelstats_ratios", &["realization", "r"]);
    let mut pooled = Vec::new();
    let mut means = Vec::new();
    let mut dim = 0;
    for (r, eigs) in spectra.iter().enumerate() {
        dim = eigs.len();
        let stats = level_spacing_stats(eigs, window(config), None)?;
        for &s in &stats.spacings {
            spacings.push(vec![r.into(), s.into()]);
        }
        for &x in &stats.ratios {
            ratios.push(vec![r.into(), x.into()]);
        }
        pooled.extend_from_slice(&stats.spacings);
        means.push(stats.mean_r);
    }
    let bins = histogram(&pooled, config.levels.bins, 0.0, config.levels.hist_max)?;
    let mut hist = Table::new(
        "levelstats_histogram",
        &["s", "density", "poisson", "wigner_dyson"],
    );
    for b in &bins {
        let s = b.center();
        hist.push(vec![
            s.into(),
            b.density.into(),
            reference_pdf(ReferenceKind::Poisson, s).into(),
            reference_pdf(ReferenceKind::WignerDyson, s).into(),
        ]);
    }
    let poisson = poisson_surrogate_levels(dim, &mut stream(config.seed, "levelstats/poisson"));
    let poisson_r = level_spacing_stats(&poisson, window(config), None)?.mean_r;
    let mean_r = means.iter().sum::<f64>() / means.len() as f64;
    Ok(ExperimentRecord {
        config: config.clone(),
        tables: vec![spacings, ratios, hist],
        summary: json!({
            "sector_dim": dim,
            "sector": config.levels.sector,
            "mean_r": mean_r,
            "mean_r_per_realization": means,
            "poisson_surrogate_mean_r": poisson_r,
            "histogram": { "bins": config.levels.bins, "lo": 0.0, "hi": config.levels.hist_max },
        }),
    })
}

/// Exact-scar candidates for this model: the `Q^+` tower, spin-1 one-magnon
/// plane waves, and the two-parameter tower when that family is selected.
pub fn scar_candidates(config: &ExperimentConfig) -> Result<Vec<ScarCandidate>> {
    let mut out: Vec<ScarCandidate> = tower_states(config.n, config.sites)?
        .into_iter()
        .map(|(k, state)| ScarCandidate {
            tag: ScarTag::Tower(k),
            state,
        })
        .collect();
    if config.n == 3 {
        out.extend(one_magnon_states(config.sites)?);
    }
    if config.perturbation.family == PerturbationFamily::TwoParameter {
        for ((a, b), t) in two_param_tower(config.sites)? {
            if let (TowerState::Vector(state), true) = (t, b > 0) {
                out.push(ScarCandidate {
                    tag: ScarTag::TwoTower(a, b),
                    state,
                });
            }
        }
    }
    Ok(out)
}

fn full_decomposition(config: &ExperimentConfig) -> Result<EigenDecomposition> {
    let h = build_h_s(&config.model_spec()?)?;
    info!("diagonalizing dimension {}", h.dim());
    Ok(diagonalize(&h, &basis(config)?, None, true)?)
}

fn scatter(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let d = full_decomposition(config)?;
    let cut = config.half_cut();
    let matches = identify_scars(&d, &scar_candidates(config)?, MATCH_THRESHOLD, None)?;
    let points = ee_scatter(&d, cut, &matches)?;
    let mut table = Table::new("ee_scatter", &["energy", "entropy", "scar_tag", "overlap"]);
    for p in &points {
        table.push(vec![
            p.energy.into(),
            p.entropy.into(),
            p.tag.to_string().into(),
            p.overlap.into(),
        ]);
    }
    let mut tables = vec![table];
    let mut bulk: Vec<f64> = points
        .iter()
        .filter(|p| p.tag == ScarTag::None)
        .map(|p| p.entropy)
        .collect();
    bulk.sort_by(f64::total_cmp);
    let mut summary = json!({
        "dimension": d.len(),
        "cut": cut,
        "page_value": page_value(cut * 2, config.n),
        "bulk_median_entropy": bulk.get(bulk.len() / 2),
        "tower_entropy_bound": ((config.sites / 2 + 1) as f64).ln() + LN_2,
        "candidates": matches.iter().map(|m| json!({
            "tag": m.tag.to_string(),
            "matched": m.is_matched(),
            "overlap": m.overlap,
            "energy": if m.energy.is_finite() { json!(m.energy) } else { json!(null) },
        })).collect::<Vec<_>>(),
    });
    if config.n == 2 {
        let values = observable_expectation(&d, &window_010_observable(config.sites)?)?;
        let mut obs = Table::new("eth_observable", &["energy", "expectation", "scar_tag"]);
        for (p, v) in points.iter().zip(&values) {
            obs.push(vec![p.energy.into(), (*v).into(), p.tag.to_string().into()]);
        }
        let scar_max = points
            .iter()
            .zip(&values)
            .filter(|(p, _)| p.tag != ScarTag::None)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
        summary["eth_observable_scar_max"] = json!(scar_max);
        tables.push(obs);
    }
    Ok(ExperimentRecord {
        config: config.clone(),
        tables,
        summary,
    })
}

fn initial_state(
    config: &ExperimentConfig,
    init: &InitialState,
    basis: BasisIndex,
) -> Result<StateVector> {
    let state = match init {
        InitialState::Coherent { .. } | InitialState::TwoParam { .. } => init
            .coherent_params()
            .expect("coherent descriptor")
            .state(config.n, config.sites)?,
        InitialState::Tower { k } => match scar_tower(config.n, config.sites, *k)? {
            TowerState::Vector(v) => v,
            TowerState::Annihilated => {
                return Err(CliError::Config(format!(
                    "(Q+)^{k} annihilates the all-down state at L = {}",
                    config.sites
                )))
            }
        },
        InitialState::Basis { label } => StateVector::from_label(basis, label)?,
        InitialState::Random { seed } => {
            let master = seed.unwrap_or(config.seed);
            StateVector::random_gaussian(basis, &mut stream(master, "initial/random"))
        }
    };
    Ok(state.normalized()?)
}

fn dynamics(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let basis = basis(config)?;
    let d = full_decomposition(config)?;
    let period = if config.h != 0.0 {
        Some(revival_period(config.n, config.h)?)
    } else {
        None
    };
    let t_max = match (config.time.t_max, period) {
        (Some(t), _) => t,
        (None, Some(p)) => config.time.periods * p,
        (None, None) => unreachable!("validated: h = 0 requires t_max"),
    };
    let times = time_grid(t_max, config.time.points);
    let cut = config.half_cut();
    let mut tables = Vec::new();
    let mut states = Vec::new();
    for init in &config.initial {
        let label = init.label();
        let psi = initial_state(config, init, basis)?;
        let trace = ee_trace(&psi, &d, &times, cut, &label)?;
        let mut table = Table::new(format!("dynamics_{label}"), &["t", "fidelity", "entropy"]);
        for ((t, f), s) in trace.times.iter().zip(&trace.fidelity).zip(&trace.entropy) {
            table.push(vec![(*t).into(), (*f).into(), (*s).into()]);
        }
        tables.push(table);
        let revivals = match period {
            Some(p) => {
                let ks: Vec<f64> = (1..)
                    .map(|k| k as f64 * p)
                    .take_while(|&t| t <= t_max * (1.0 + 1e-12))
                    .collect();
                fidelity_trace(&psi, &d, &ks, &label)?.fidelity
            }
            None => Vec::new(),
        };
        let late = &trace.entropy[trace.entropy.len() / 2..];
        states.push(json!({
            "label": label,
            "revival_fidelities": revivals,
            "min_fidelity": trace.fidelity.iter().copied().fold(1.0, f64::min),
            "late_mean_entropy": late.iter().sum::<f64>() / late.len() as f64,
        }));
    }
    Ok(ExperimentRecord {
        config: config.clone(),
        tables,
        summary: json!({
            "revival_period": period,
            "t_max": t_max,
            "page_value": page_value(2 * cut, config.n),
            "states": states,
        }),
    })
}

fn closed_form(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut table = Table::new("closed_form_ee", &["L", "k", "entropy", "bound"]);
    let mut check = Table::new(
        "closed_form_check",
        &["L", "closed_form", "numerical", "abs_diff"],
    );
    let mut normalizations = Vec::new();
    let mut all_exact = true;
    for sites in (4..=config.max_sites).step_by(4) {
        let cf = scar_ee_closed_form(sites)?;
        table.push(vec![
            sites.into(),
            (sites / 4).into(),
            cf.entropy.into(),
            cf.bound.into(),
        ]);
        let exact = cf.normalization == binomial(3 * sites as i64 / 4, sites as i64 / 4);
        all_exact &= exact;
        normalizations.push(json!({ "L": sites, "normalization": cf.normalization.to_string(), "equals_binomial": exact }));
        if sites <= 16 {
            let num = scar_ee_numerical_obc(sites, sites / 4)?;
            check.push(vec![
                sites.into(),
                cf.entropy.into(),
                num.into(),
                (cf.entropy - num).abs().into(),
            ]);
        }
    }
    Ok(ExperimentRecord {
        config: config.clone(),
        tables: vec![table, check],
        summary: json!({ "normalizations": normalizations, "all_normalizations_exact": all_exact }),
    })
}
