use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bijection between product-basis labels `(p_1, …, p_L)` and indices
/// `0..n^L`, with site 1 as the most significant digit.
///
/// Splitting an index at a cut `c` therefore separates the first `c` sites
/// (quotient) from the rest (remainder), which makes a half-chain bipartition
/// a plain reshape of the amplitude vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    sites: usize,
    local_dim: usize,
    dim: usize,
}

impl BasisIndex {
    /// Largest supported Hilbert-space dimension.
    pub const MAX_DIM: usize = 1 << 24;

    pub fn new(sites: usize, local_dim: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidDimension(local_dim));
        }
        if sites == 0 {
            return Err(Error::ChainTooShort { min: 1, found: 0 });
        }
        let mut dim: usize = 1;
        for _ in 0..sites {
            dim = dim
                .checked_mul(local_dim)
                .filter(|d| *d <= Self::MAX_DIM)
                .ok_or(Error::TooLarge {
                    dim: usize::MAX,
                    max: Self::MAX_DIM,
                })?;
        }
        Ok(Self {
            sites,
            local_dim,
            dim,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Place value of the 0-based site `site`.
    pub fn stride(&self, site: usize) -> usize {
        self.local_dim.pow((self.sites - 1 - site) as u32)
    }

    /// Index of the digit string; digits must be `< local_dim`.
    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.sites);
        digits.iter().fold(0, |acc, &d| {
            debug_assert!(d < self.local_dim);
            acc * self.local_dim + d
        })
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.sites];
        for slot in digits.iter_mut().rev() {
            *slot = index % self.local_dim;
            index /= self.local_dim;
        }
        digits
    }

    /// Digit on the 0-based site `site`.
    pub fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.local_dim
    }

    pub fn digit_sum(&self, mut index: usize) -> usize {
        let mut sum = 0;
        for _ in 0..self.sites {
            sum += index % self.local_dim;
            index /= self.local_dim;
        }
        sum
    }

    /// Total `Q = Σ_j S^z_j` of a basis state.
    pub fn charge(&self, index: usize) -> Charge {
        Charge::from_twice(
            2 * self.digit_sum(index) as i64 - (self.sites * (self.local_dim - 1)) as i64,
        )
    }

    /// Parse a digit string such as `"0110"`.
    pub fn parse(&self, label: &str) -> Result<usize> {
        let digits: Vec<usize> = label
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .filter(|d| *d < self.local_dim)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad digit {c:?} in {label:?}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                found: digits.len(),
            });
        }
        Ok(self.encode(&digits))
    }

    pub fn label(&self, index: usize) -> String {
        self.decode(index)
            .into_iter()
            .map(|d| char::from_digit(d as u32, 36).unwrap_or('?'))
            .collect()
    }
}

/// Eigenvalue of the U(1) charge, stored as twice its value so half-integer
/// charges (odd `L(n-1)`) are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Charge(i64);

impl Charge {
    pub fn from_twice(twice: i64) -> Self {
        Charge(twice)
    }

    pub fn integer(q: i64) -> Self {
        Charge(2 * q)
    }

    /// `None` unless `2q` is an integer.
    pub fn from_f64(q: f64) -> Option<Self> {
        let twice = 2.0 * q;
        (twice.is_finite() && twice.fract() == 0.0).then_some(Charge(twice as i64))
    }

    pub fn twice(&self) -> i64 {
        self.0
    }

    pub fn value(&self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Basis indices carrying one charge value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorBlock {
    pub charge: Charge,
    pub indices: Vec<usize>,
}

/// All basis indices with total charge `q`, ascending. An unattainable `q`
/// yields an empty list.
pub fn charge_sector_basis(sites: usize, n: usize, q: Charge) -> Result<Vec<usize>> {
    let basis = BasisIndex::new(sites, n)?;
    Ok((0..basis.dim()).filter(|&i| basis.charge(i) == q).collect())
}

/// Partition of the full basis into charge sectors, ordered by charge.
pub fn sector_blocks(basis: &BasisIndex) -> Vec<SectorBlock> {
    let max_sum = basis.sites() * (basis.local_dim() - 1);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_sum + 1];
    for i in 0..basis.dim() {
        buckets[basis.digit_sum(i)].push(i);
    }
    buckets
        .into_iter()
        .enumerate()
        .filter(|(_, idx)| !idx.is_empty())
        .map(|(sum, indices)| SectorBlock {
            charge: Charge::from_twice(2 * sum as i64 - max_sum as i64),
            indices,
        })
        .collect()
}
