use std::f64::consts::PI;

use faer::{Mat, Side};
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional index window `[lo·N, hi·N)` of the sorted spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingWindow {
    pub lo: f64,
    pub hi: f64,
}

impl Default for SpacingWindow {
    /// Middle half of the spectrum.
    fn default() -> Self {
        Self { lo: 0.25, hi: 0.75 }
    }
}

/// Spacing and ratio statistics of one spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStatistics {
    /// Retained spacings divided by their mean.
    pub spacings: Vec<f64>,
    /// `min(Δ_i, Δ_{i+1}) / max(Δ_i, Δ_{i+1})` over consecutive retained spacings.
    pub ratios: Vec<f64>,
    pub mean_r: f64,
    /// Index range `[start, end)` of the levels used.
    pub window: (usize, usize),
    pub degeneracy_tol: f64,
    /// Spacings dropped as degenerate.
    pub discarded: usize,
}

/// Level statistics inside `window`. Spacings not exceeding `degeneracy_tol`
/// (default `1e-10 ×` spectral width) are discarded before normalizing.
pub fn level_spacing_stats(
    eigenvalues: &[f64],
    window: SpacingWindow,
    degeneracy_tol: Option<f64>,
) -> Result<LevelStatistics> {
    let n = eigenvalues.len();
    if !(0.0..=1.0).contains(&window.lo) || !(window.lo..=1.0).contains(&window.hi) {
        return Err(Error::InvalidParameter(format!(
            "bad spacing window {window:?}"
        )));
    }
    if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "eigenvalues must be ascending".into(),
        ));
    }
    if n < 100 {
        log::warn!("level statistics from only {n} eigenvalues");
    }
    let start = (window.lo * n as f64).floor() as usize;
    let end = ((window.hi * n as f64).floor() as usize).min(n);
    let width = match (eigenvalues.first(), eigenvalues.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let tol = degeneracy_tol.unwrap_or(1e-10 * width);
    let levels = &eigenvalues[start..end.max(start)];
    let raw: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let kept: Vec<f64> = raw.iter().copied().filter(|&d| d > tol).collect();
    if kept.len() + 1 < 3 {
        return Err(Error::TooFewLevels(kept.len() + 1));
    }
    let mean = kept.iter().sum::<f64>() / kept.len() as f64;
    let spacings = kept.iter().map(|d| d / mean).collect();
    let ratios: Vec<f64> = kept
        .windows(2)
        .map(|w| w[0].min(w[1]) / w[0].max(w[1]))
        .collect();
    let mean_r = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(LevelStatistics {
        spacings,
        ratios,
        mean_r,
        window: (start, end),
        degeneracy_tol: tol,
        discarded: raw.len() - kept.len(),
    })
}

/// Reference spacing distributions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// `P(s) = e^{−s}`.
    Poisson,
    /// Wigner surmise `P(s) = (π/2) s e^{−πs²/4}`.
    WignerDyson,
}

pub fn reference_pdf(kind: ReferenceKind, s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    match kind {
        ReferenceKind::Poisson => (-s).exp(),
        ReferenceKind::WignerDyson => PI / 2.0 * s * (-PI * s * s / 4.0).exp(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    /// Count divided by `total · bin width`; values outside the range still
    /// count toward the total.
    pub density: f64,
}

impl HistogramBin {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Density histogram with `bins` equal bins over `[lo, hi)`.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<HistogramBin>> {
    if bins == 0 || hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::InvalidParameter(format!(
            "bad histogram spec {bins} bins over [{lo}, {hi})"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v >= lo && v < hi {
            counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let total = values.len().max(1) as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| HistogramBin {
            lo: lo + i as f64 * width,
            hi: lo + (i + 1) as f64 * width,
            density: c as f64 / (total * width),
        })
        .collect())
}

/// Uncorrelated levels: cumulative sums of unit exponential spacings.
pub fn poisson_surrogate_levels<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    let mut e = 0.0;
    (0..count)
        .map(|_| {
            e += rng.sample::<f64, _>(Exp1);
            e
        })
        .collect()
}

/// Eigenvalues of a `dim × dim` GOE matrix (off-diagonal variance 1/2,
/// diagonal variance 1).
pub fn goe_surrogate_levels<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Vec<f64>> {
    let mut m = Mat::<f64>::zeros(dim, dim);
    for j in 0..dim {
        for i in j..dim {
            let g: f64 = rng.sample(StandardNormal);
            let v = if i == j { g } else { g / 2f64.sqrt() };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let mut vals = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Linalg(format!("{e:?}")))?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}
