use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::entropy::{entropy_from_probabilities, von_neumann_ee};
use crate::error::{Error, Result};
use crate::tensornet::obc_tower_mps;

/// `binom(n, k)`, zero for `k > n` or negative `n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Half-chain entropy of the open-chain tower state `(Q^+)^{L/4}|⇓>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEE {
    pub sites: usize,
    /// `c_l`, `l = 0..=L/2`.
    pub coefficients: Vec<BigUint>,
    /// `𝒩 = Σ_l c_l c_{L/2−l}`.
    pub normalization: BigUint,
    pub entropy: f64,
    /// `ln(L/2 + 1)`.
    pub bound: f64,
}

fn c_l(half: i64, l: i64) -> BigUint {
    if l % 2 == 0 {
        binomial(half - l / 2, l / 2)
    } else {
        binomial(half - (l + 1) / 2, (l - 1) / 2)
    }
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    // both fit comfortably in f64 range for L ≤ 1000
    num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact Schmidt weights `c_l c_{L/2−l} / 𝒩` and their entropy, `L % 4 == 0`.
pub fn scar_ee_closed_form(sites: usize) -> Result<ClosedFormEE> {
    if sites == 0 || sites % 4 != 0 {
        return Err(Error::InvalidParameter(format!(
            "closed form needs L divisible by 4, got {sites}"
        )));
    }
    let half = (sites / 2) as i64;
    let coefficients: Vec<BigUint> = (0..=half).map(|l| c_l(half, l)).collect();
    let products: Vec<BigUint> = (0..=half as usize)
        .map(|l| &coefficients[l] * &coefficients[half as usize - l])
        .collect();
    let normalization: BigUint = products.iter().sum();
    let p: Vec<f64> = products.iter().map(|x| ratio(x, &normalization)).collect();
    Ok(ClosedFormEE {
        sites,
        coefficients,
        normalization,
        entropy: entropy_from_probabilities(&p),
        bound: ((sites / 2 + 1) as f64).ln(),
    })
}

/// Half-chain entropy of the normalized open-chain `(Q^+)^k|⇓>` from its MPS.
pub fn scar_ee_numerical_obc(sites: usize, k: usize) -> Result<f64> {
    if sites % 2 == 1 {
        return Err(Error::OddLength(sites));
    }
    let state = obc_tower_mps(sites, k)?.contract()?.normalized()?;
    von_neumann_ee(&state, sites / 2)
}

/// `(E^m)_{(0,0),(l,l)}` for the transfer matrix `E = Σ_p M_p ⊗ M_p^*` of the
/// open-chain tower MPS, by explicit matrix powers.
pub fn transfer_matrix_entry(m: usize, l: usize) -> u64 {
    // M_p are 0/1 matrices, so E acts on pairs (i, j) of auxiliary labels
    let d = l + 1;
    let step = |i: usize, p: usize| -> Option<usize> {
        match p {
            0 if i % 2 == 0 => Some(i),
            1 if i + 1 < d => Some(i + 1),
            _ => None,
        }
    };
    let mut v = vec![0u64; d * d];
    v[0] = 1;
    for _ in 0..m {
        let mut next = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                let x = v[i * d + j];
                if x == 0 {
                    continue;
                }
                for p in 0..2 {
                    if let (Some(a), Some(b)) = (step(i, p), step(j, p)) {
                        next[a * d + b] += x;
                    }
                }
            }
        }
        v = next;
    }
    v[l * d + l]
}

/// Closed form of [`transfer_matrix_entry`]: `binom(m − l/2, l/2)` for even
/// `l`, `binom(m − (l+1)/2, (l−1)/2)` for odd `l`, zero when out of range.
pub fn transfer_matrix_entry_formula(m: usize, l: usize) -> BigUint {
    c_l(m as i64, l as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_sites() {
        let cf = scar_ee_closed_form(4).unwrap();
        assert_eq!(cf.coefficients, vec![BigUint::one(); 3]);
        assert_eq!(cf.normalization, BigUint::from(3u32));
        assert!((cf.entropy - 3f64.ln()).abs() < 1e-15);
        assert!((cf.bound - 3f64.ln()).abs() < 1e-15);
        assert!(scar_ee_closed_form(6).is_err());
    }

    #[test]
    fn vandermonde_normalization() {
        for l in [4usize, 8, 12, 64] {
            let cf = scar_ee_closed_form(l).unwrap();
            assert_eq!(cf.normalization, binomial(3 * l as i64 / 4, l as i64 / 4));
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(-1, 0), BigUint::zero());
        assert_eq!(binomial(48, 16), BigUint::from(2_254_848_913_647u64));
    }

    #[test]
    fn transfer_entries_match_formula() {
        for m in 0..=6 {
            for l in 0..=4 {
                assert_eq!(
                    BigUint::from(transfer_matrix_entry(m, l)),
                    transfer_matrix_entry_formula(m, l),
                    "m={m} l={l}"
                );
            }
        }
    }

    #[test]
    fn numerical_matches_closed_form() {
        for l in [4usize, 8] {
            let cf = scar_ee_closed_form(l).unwrap();
            assert!((scar_ee_numerical_obc(l, l / 4).unwrap() - cf.entropy).abs() < 1e-10);
        }
        assert_eq!(scar_ee_numerical_obc(8, 0).unwrap(), 0.0);
    }
}
