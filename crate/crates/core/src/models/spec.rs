use rand::Rng;
use serde::{Deserialize, Serialize};

use super::perturbation::SPIN_ONE_PROJECTORS;
use crate::error::{Error, Result};
use crate::rng::stream;

/// Site-resolved couplings of the scar-preserving perturbation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    None,
    /// Spin-1/2 three-site terms; entry `j-1` belongs to the window centred on site `j`.
    SpinHalf {
        c1: Vec<f64>,
        c2: Vec<f64>,
        c3: Vec<f64>,
    },
    /// Spin-1 window projectors, one weight per listed state per site.
    SpinOne {
        weights: Vec<[f64; SPIN_ONE_PROJECTORS]>,
        include_last_projector: bool,
    },
    /// Five-site projectors that preserve the two-parameter tower (spin-1/2).
    TwoParameter {
        center: Vec<f64>,
        antisymmetric: Vec<f64>,
    },
}

/// Perturbation couplings plus the seed they were drawn from, if any.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCoefficients {
    pub seed: Option<u64>,
    pub terms: Perturbation,
}

fn uniform(seed: u64, label: &str, len: usize) -> Vec<f64> {
    let mut rng = stream(seed, label);
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

impl PerturbationCoefficients {
    pub fn none() -> Self {
        Self {
            seed: None,
            terms: Perturbation::None,
        }
    }

    /// Spin-1/2 couplings uniform on `[-1, 1]`; `active[i]` switches channel `c^(i+1)`.
    pub fn spin_half_random(sites: usize, seed: u64, active: [bool; 3]) -> Self {
        let draw = |i: usize| {
            if active[i] {
                uniform(seed, &format!("pert/n2/c{}", i + 1), sites)
            } else {
                vec![0.0; sites]
            }
        };
        Self {
            seed: Some(seed),
            terms: Perturbation::SpinHalf {
                c1: draw(0),
                c2: draw(1),
                c3: draw(2),
            },
        }
    }

    /// Spin-1 projector weights uniform on `[-1, 1]`.
    pub fn spin_one_random(sites: usize, seed: u64, include_last_projector: bool) -> Self {
        let columns: Vec<Vec<f64>> = (0..SPIN_ONE_PROJECTORS)
            .map(|k| uniform(seed, &format!("pert/n3/p{k}"), sites))
            .collect();
        let weights = (0..sites)
            .map(|j| std::array::from_fn(|k| columns[k][j]))
            .collect();
        Self {
            seed: Some(seed),
            terms: Perturbation::SpinOne {
                weights,
                include_last_projector,
            },
        }
    }

    pub fn two_parameter_random(sites: usize, seed: u64) -> Self {
        Self {
            seed: Some(seed),
            terms: Perturbation::TwoParameter {
                center: uniform(seed, "pert/two/center", sites),
                antisymmetric: uniform(seed, "pert/two/antisymmetric", sites),
            },
        }
    }

    /// Whether every term commutes with the total charge.
    pub fn conserves_charge(&self) -> bool {
        match &self.terms {
            Perturbation::SpinHalf { c3, .. } => c3.iter().all(|&c| c == 0.0),
            _ => true,
        }
    }

    pub fn validate(&self, n: usize, sites: usize) -> Result<()> {
        let check_len = |name: &str, len: usize| {
            if len != sites {
                return Err(Error::InvalidParameter(format!(
                    "{name} has {len} entries for {sites} sites"
                )));
            }
            Ok(())
        };
        let check_finite = |mut values: Box<dyn Iterator<Item = f64> + '_>| {
            if values.any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("non-finite coupling".into()));
            }
            Ok(())
        };
        let need = |want: usize, min_sites: usize| {
            if n != want {
                return Err(Error::InvalidParameter(format!(
                    "perturbation requires n = {want}, model has n = {n}"
                )));
            }
            if sites < min_sites {
                return Err(Error::ChainTooShort {
                    min: min_sites,
                    found: sites,
                });
            }
            Ok(())
        };
        match &self.terms {
            Perturbation::None => Ok(()),
            Perturbation::SpinHalf { c1, c2, c3 } => {
                need(2, 4)?;
                check_len("c1", c1.len())?;
                check_len("c2", c2.len())?;
                check_len("c3", c3.len())?;
                check_finite(Box::new(c1.iter().chain(c2).chain(c3).copied()))
            }
            Perturbation::SpinOne { weights, .. } => {
                need(3, 4)?;
                check_len("weights", weights.len())?;
                check_finite(Box::new(weights.iter().flatten().copied()))
            }
            Perturbation::TwoParameter {
                center,
                antisymmetric,
            } => {
                need(2, 6)?;
                check_len("center", center.len())?;
                check_len("antisymmetric", antisymmetric.len())?;
                check_finite(Box::new(center.iter().chain(antisymmetric).copied()))
            }
        }
    }
}

/// Everything needed to assemble `H_S = H_n + H_pert + h Σ S^z_j` on a periodic chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: usize,
    pub sites: usize,
    pub h: f64,
    pub couplings: PerturbationCoefficients,
}

impl ModelSpec {
    pub fn new(
        n: usize,
        sites: usize,
        h: f64,
        couplings: PerturbationCoefficients,
    ) -> Result<Self> {
        let spec = Self {
            n,
            sites,
            h,
            couplings,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Unperturbed chain with field `h`.
    pub fn clean(n: usize, sites: usize, h: f64) -> Result<Self> {
        Self::new(n, sites, h, PerturbationCoefficients::none())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidDimension(self.n));
        }
        if self.sites % 2 == 1 {
            return Err(Error::OddLength(self.sites));
        }
        if self.sites < 2 {
            return Err(Error::ChainTooShort {
                min: 2,
                found: self.sites,
            });
        }
        if !self.h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "field h = {} is not finite",
                self.h
            )));
        }
        self.couplings.validate(self.n, self.sites)
    }
}
