//! Experiment configuration: a TOML document resolved against CLI overrides.

use std::path::{Path, PathBuf};

use onsager_core::algebra::Charge;
use onsager_core::models::{Perturbation, PerturbationCoefficients};
use onsager_core::rng::sub_seed;
use onsager_core::tensornet::CoherentParams;
use onsager_core::{ModelSpec, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest `n^L` for which eigenvectors are retained.
pub const DESK_SCALE_LIMIT: f64 = (1u64 << 20) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Levelstats,
    EeScatter,
    Dynamics,
    ClosedFormEe,
    Verify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Levelstats => "levelstats",
            ExperimentKind::EeScatter => "ee_scatter",
            ExperimentKind::Dynamics => "dynamics",
            ExperimentKind::ClosedFormEe => "closed_form_ee",
            ExperimentKind::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        toml::Value::String(s.to_string())
            .try_into()
            .map_err(|_| CliError::Config(format!("unknown experiment kind {s:?}")))
    }

    pub fn keeps_eigenvectors(self) -> bool {
        matches!(self, ExperimentKind::EeScatter | ExperimentKind::Dynamics)
    }
}

/// Which perturbation family the disorder is drawn into.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationFamily {
    /// Three-site windows (spin-1/2 channels or spin-1 projectors by `n`).
    #[default]
    Standard,
    /// Five-site windows preserving the two-parameter tower (spin-1/2).
    TwoParameter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSwitches {
    #[serde(default)]
    pub family: PerturbationFamily,
    /// `c^(1)`, `c^(2)`, `c^(3)` on/off (spin-1/2 only).
    #[serde(default = "all_channels")]
    pub channels: [bool; 3],
    #[serde(default)]
    pub include_last_projector: bool,
}

fn all_channels() -> [bool; 3] {
    [true; 3]
}

impl Default for PerturbationSwitches {
    fn default() -> Self {
        Self {
            family: PerturbationFamily::Standard,
            channels: all_channels(),
            include_last_projector: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingMode {
    /// Uniform on `[-1, 1]`; the seed defaults to one derived from the master seed.
    RandomUniform {
        seed: Option<u64>,
    },
    Explicit {
        terms: Perturbation,
    },
    #[default]
    Zero,
}

/// Initial state of a quench.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// `exp(β^n Q^+)|⇓>`; `beta = [re, im]`.
    Coherent {
        beta: [f64; 2],
    },
    TwoParam {
        alpha: [f64; 2],
        beta: [f64; 2],
    },
    Tower {
        k: usize,
    },
    /// Product state, one digit per site, site 1 first.
    Basis {
        label: String,
    },
    /// Normalized complex Gaussian vector.
    Random {
        seed: Option<u64>,
    },
}

fn complex(z: [f64; 2]) -> C64 {
    C64::new(z[0], z[1])
}

impl InitialState {
    pub fn label(&self) -> String {
        match self {
            InitialState::Coherent { beta } => format!("coherent_{}_{}", beta[0], beta[1]),
            InitialState::TwoParam { alpha, beta } => {
                format!(
                    "two_param_{}_{}_{}_{}",
                    alpha[0], alpha[1], beta[0], beta[1]
                )
            }
            InitialState::Tower { k } => format!("tower_{k}"),
            InitialState::Basis { label } => format!("basis_{label}"),
            InitialState::Random { .. } => "random".to_string(),
        }
    }

    pub fn coherent_params(&self) -> Option<CoherentParams> {
        match self {
            InitialState::Coherent { beta } => Some(CoherentParams::Single(complex(*beta))),
            InitialState::TwoParam { alpha, beta } => Some(CoherentParams::Pair {
                alpha: complex(*alpha),
                beta: complex(*beta),
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    /// Grid end in units of the revival period `2π/(nh)`.
    #[serde(default = "default_periods")]
    pub periods: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Absolute end time; overrides `periods`.
    #[serde(default)]
    pub t_max: Option<f64>,
}

fn default_periods() -> f64 {
    5.0
}

fn default_points() -> usize {
    400
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            periods: default_periods(),
            points: default_points(),
            t_max: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelOptions {
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    /// Charge sector; omitted means the whole space.
    #[serde(default)]
    pub sector: Option<f64>,
    /// Fraction of the sorted spectrum kept for statistics.
    #[serde(default = "default_window")]
    pub window: [f64; 2],
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_hist_max")]
    pub hist_max: f64,
}

fn default_realizations() -> usize {
    1
}

fn default_window() -> [f64; 2] {
    [0.25, 0.75]
}

fn default_bins() -> usize {
    50
}

fn default_hist_max() -> f64 {
    4.0
}

impl Default for LevelOptions {
    fn default() -> Self {
        Self {
            realizations: default_realizations(),
            sector: None,
            window: default_window(),
            bins: default_bins(),
            hist_max: default_hist_max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_sites")]
    pub sites: usize,
    #[serde(default)]
    pub h: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Bipartition position; defaults to the half cut.
    #[serde(default)]
    pub cut: Option<usize>,
    #[serde(default)]
    pub couplings: CouplingMode,
    #[serde(default)]
    pub perturbation: PerturbationSwitches,
    #[serde(default)]
    pub initial: Vec<InitialState>,
    #[serde(default)]
    pub time: TimeGrid,
    #[serde(default)]
    pub levels: LevelOptions,
    /// Largest length in the closed-form entropy table.
    #[serde(default = "default_max_sites")]
    pub max_sites: usize,
}

fn default_n() -> usize {
    2
}

fn default_sites() -> usize {
    8
}

fn default_max_sites() -> usize {
    64
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub experiment: Option<ExperimentKind>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Serialize(e.to_string()))
    }

    /// Applies overrides and validates.
    pub fn resolve(mut self, overrides: &Overrides) -> Result<Self> {
        if let Some(kind) = overrides.experiment {
            self.experiment = kind;
        }
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if overrides.output.is_some() {
            self.output = overrides.output.clone();
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.experiment == ExperimentKind::ClosedFormEe {
            if self.max_sites < 4 || self.max_sites % 4 != 0 {
                return bad(format!(
                    "max_sites must be a positive multiple of 4, got {}",
                    self.max_sites
                ));
            }
            return Ok(());
        }
        if self.experiment == ExperimentKind::Verify {
            return Ok(());
        }
        self.model_spec()?;
        if let Some(cut) = self.cut {
            if cut == 0 || cut >= self.sites {
                return bad(format!("cut must lie in 1..{}, got {cut}", self.sites));
            }
        }
        if self.perturbation.family == PerturbationFamily::TwoParameter && self.n != 2 {
            return bad("the two-parameter family needs n = 2".into());
        }
        let [lo, hi] = self.levels.window;
        if !(0.0..1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
            return bad(format!(
                "levels.window must satisfy 0 <= lo < hi <= 1, got [{lo}, {hi}]"
            ));
        }
        if self.levels.realizations == 0 || self.levels.bins == 0 || self.levels.hist_max <= 0.0 {
            return bad("levels needs realizations >= 1, bins >= 1 and hist_max > 0".into());
        }
        if let Some(q) = self.levels.sector {
            if Charge::from_f64(q).is_none() {
                return bad(format!("sector {q} is not a multiple of 1/2"));
            }
        }
        if self.experiment == ExperimentKind::Dynamics {
            if self.initial.is_empty() {
                return bad("dynamics needs at least one [[initial]] state".into());
            }
            if self.time.points < 2 || self.time.periods.is_nan() || self.time.periods <= 0.0 {
                return bad("time grid needs points >= 2 and periods > 0".into());
            }
            if self.time.t_max.is_none() && self.h == 0.0 {
                return bad("time.t_max is required when h = 0 (no revival period)".into());
            }
            if let Some(t) = self.time.t_max {
                if !(t > 0.0 && t.is_finite()) {
                    return bad(format!("time.t_max must be positive, got {t}"));
                }
            }
        }
        if self.experiment.keeps_eigenvectors() {
            let dim = (self.n as f64).powi(self.sites as i32);
            if dim > DESK_SCALE_LIMIT {
                return Err(CliError::DeskScale {
                    n: self.n,
                    sites: self.sites,
                    dim,
                });
            }
        }
        Ok(())
    }

    /// Seed of the `r`-th disorder realization.
    pub fn coupling_seed(&self, realization: usize) -> u64 {
        let base = match &self.couplings {
            CouplingMode::RandomUniform { seed: Some(s) } => *s,
            _ => sub_seed(self.seed, "couplings"),
        };
        if realization == 0 {
            base
        } else {
            sub_seed(base, &format!("realization/{realization}"))
        }
    }

    pub fn couplings_for(&self, realization: usize) -> Result<PerturbationCoefficients> {
        let seed = self.coupling_seed(realization);
        let p = &self.perturbation;
        Ok(match &self.couplings {
            CouplingMode::Zero => PerturbationCoefficients::none(),
            CouplingMode::Explicit { terms } => PerturbationCoefficients {
                seed: None,
                terms: terms.clone(),
            },
            CouplingMode::RandomUniform { .. } => match (p.family, self.n) {
                (PerturbationFamily::TwoParameter, _) => {
                    PerturbationCoefficients::two_parameter_random(self.sites, seed)
                }
                (PerturbationFamily::Standard, 2) => {
                    PerturbationCoefficients::spin_half_random(self.sites, seed, p.channels)
                }
                (PerturbationFamily::Standard, 3) => PerturbationCoefficients::spin_one_random(
                    self.sites,
                    seed,
                    p.include_last_projector,
                ),
                (_, n) => {
                    return Err(CliError::Config(format!(
                        "no random perturbation family for n = {n}"
                    )));
                }
            },
        })
    }

    /// Model of realization 0.
    pub fn model_spec(&self) -> Result<ModelSpec> {
        self.model_spec_for(0)
    }

    pub fn model_spec_for(&self, realization: usize) -> Result<ModelSpec> {
        ModelSpec::new(self.n, self.sites, self.h, self.couplings_for(realization)?)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn half_cut(&self) -> usize {
        self.cut.unwrap_or(self.sites / 2)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn sector(&self) -> Option<Charge> {
        self.levels.sector.and_then(Charge::from_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DYNAMICS: &str = r#"
experiment = "dynamics"
n = 2
sites = 8
h = 1.0
seed = 7

[couplings]
mode = "random_uniform"

[[initial]]
kind = "coherent"
beta = [0.5, 0.0]

[[initial]]
kind = "basis"
label = "10101010"
"#;

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::from_toml(DYNAMICS).unwrap();
        assert_eq!(cfg.initial.len(), 2);
        assert_eq!(cfg.time.points, 400);
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn explicit_couplings_round_trip() {
        let text = r#"
experiment = "ee_scatter"
n = 2
sites = 4

[couplings]
mode = "explicit"
terms = { kind = "spin_half", c1 = [1.0, 0.0, 0.0, 0.5], c2 = [0.0, 0.0, 0.0, 0.0], c3 = [0.0, 0.0, 0.0, 0.0] }
"#;
        let cfg = ExperimentConfig::from_toml(text)
            .unwrap()
            .resolve(&Overrides::default())
            .unwrap();
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(matches!(
            cfg.model_spec().unwrap().couplings.terms,
            Perturbation::SpinHalf { .. }
        ));
    }

    #[test]
    fn overrides_and_seeds() {
        let cfg = ExperimentConfig::from_toml(DYNAMICS).unwrap();
        let o = Overrides {
            seed: Some(99),
            output: Some("x".into()),
            ..Default::default()
        };
        let r = cfg.clone().resolve(&o).unwrap();
        assert_eq!(r.seed, 99);
        assert_ne!(r.coupling_seed(0), cfg.coupling_seed(0));
        assert_ne!(r.coupling_seed(0), r.coupling_seed(1));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml("experiment = \"nope\"").is_err());
        assert!(ExperimentConfig::from_toml("experiment = \"verify\"\nbogus = 1").is_err());
        let odd = ExperimentConfig::from_toml("experiment = \"levelstats\"\nsites = 7").unwrap();
        assert!(matches!(odd.validate(), Err(CliError::Config(_))));
        let no_init = ExperimentConfig::from_toml("experiment = \"dynamics\"\nh = 1.0").unwrap();
        assert!(no_init.validate().is_err());
    }

    #[test]
    fn desk_scale_guard() {
        let big =
            ExperimentConfig::from_toml("experiment = \"ee_scatter\"\nn = 3\nsites = 14").unwrap();
        let err = big.validate().unwrap_err();
        assert!(matches!(err, CliError::DeskScale { .. }));
        assert!(err.to_string().contains("desk-scale exceeded"));
        let ok =
            ExperimentConfig::from_toml("experiment = \"levelstats\"\nn = 3\nsites = 14").unwrap();
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn kind_names_parse() {
        for k in [
            "levelstats",
            "ee_scatter",
            "dynamics",
            "closed_form_ee",
            "verify",
        ] {
            assert_eq!(ExperimentKind::parse(k).unwrap().name(), k);
        }
        assert!(ExperimentKind::parse("fig1").is_err());
    }
}
