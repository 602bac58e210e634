use faer::Mat;

use super::basis::{BasisIndex, SectorBlock};
use crate::error::{Error, Result};
use crate::C64;

/// Entries smaller than this fraction of the largest entry are dropped after
/// duplicate merging.
const DROP_RELATIVE: f64 = 1e-14;

/// Square complex operator in compressed-row storage.
///
/// Column indices within a row are strictly increasing, so two operators
/// built from the same terms are bit-identical regardless of term order
/// inside a row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    hermitian: bool,
    sectors: Option<Vec<SectorBlock>>,
}

impl SparseOperator {
    /// Sums duplicate `(row, col)` entries.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.max(c) + 1,
            });
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        let scale = merged.iter().map(|t| t.2.norm()).fold(0.0, f64::max);
        let cutoff = scale * DROP_RELATIVE;
        merged.retain(|t| t.2.norm() > cutoff);

        let mut row_ptr = vec![0usize; dim + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols = merged.iter().map(|t| t.1).collect();
        let vals = merged.iter().map(|t| t.2).collect();
        Ok(Self {
            dim,
            row_ptr,
            cols,
            vals,
            hermitian: false,
            sectors: None,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            hermitian: true,
            sectors: None,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(vec![C64::ONE; dim])
    }

    pub fn from_diagonal(diag: Vec<C64>) -> Self {
        let dim = diag.len();
        let triplets = diag
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i, i, v))
            .collect();
        let mut op = Self::from_triplets(dim, triplets).expect("diagonal indices are in range");
        op.hermitian = op.vals.iter().all(|v| v.im == 0.0);
        op
    }

    pub fn from_dense(m: &Mat<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let mut triplets = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != C64::ZERO {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.nrows(), triplets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Whether the operator has been checked Hermitian (see [`Self::into_hermitian`]).
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn sectors(&self) -> Option<&[SectorBlock]> {
        self.sectors.as_deref()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[C64]) {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.cols[range.clone()], &self.vals[range])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map(|k| vals[k]).unwrap_or(C64::ZERO)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(
            v.len(),
            self.dim,
            "vector length must match operator dimension"
        );
        (0..self.dim)
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(&c, &a)| a * v[c]).sum()
            })
            .collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out.hermitian = self.hermitian && s.im == 0.0;
        out
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        self.check_same_dim(other)?;
        let triplets = self
            .iter()
            .map(|(r, c, v)| (r, c, a * v))
            .chain(other.iter().map(|(r, c, v)| (r, c, b * v)))
            .collect();
        Self::from_triplets(self.dim, triplets)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.linear_combination(C64::ONE, other, C64::ONE)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(C64::ONE, other, -C64::ONE)
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.iter().map(|(r, c, v)| (c, r, v.conj())).collect();
        let mut out = Self::from_triplets(self.dim, triplets).expect("same dimension");
        out.hermitian = self.hermitian;
        out
    }

    /// Operator product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut acc = vec![C64::ZERO; self.dim];
        let mut touched = vec![false; self.dim];
        let mut pattern: Vec<usize> = Vec::new();
        let mut row_ptr = Vec::with_capacity(self.dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..self.dim {
            self.product_row(other, r, &mut acc, &mut touched, &mut pattern);
            pattern.sort_unstable();
            for &c in &pattern {
                let v = acc[c];
                if v != C64::ZERO {
                    cols.push(c);
                    vals.push(v);
                }
                acc[c] = C64::ZERO;
                touched[c] = false;
            }
            pattern.clear();
            row_ptr.push(cols.len());
        }
        Ok(Self {
            dim: self.dim,
            row_ptr,
            cols,
            vals,
            hermitian: false,
            sectors: None,
        })
    }

    /// Accumulates row `r` of `self · other` into `acc`, recording touched columns.
    fn product_row(
        &self,
        other: &Self,
        r: usize,
        acc: &mut [C64],
        touched: &mut [bool],
        pattern: &mut Vec<usize>,
    ) {
        let (cols_a, vals_a) = self.row(r);
        for (&k, &a) in cols_a.iter().zip(vals_a) {
            let (cols_b, vals_b) = other.row(k);
            for (&c, &b) in cols_b.iter().zip(vals_b) {
                if !touched[c] {
                    touched[c] = true;
                    pattern.push(c);
                }
                acc[c] += a * b;
            }
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.sub(&ba)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `max |self − other|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == 0.0)
    }

    /// `‖A − A^†‖_F / ‖A‖_F`, zero for the zero operator.
    pub fn hermiticity_defect(&self) -> f64 {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut defect = 0.0;
        for (r, c, v) in self.iter() {
            if c >= r {
                let d = v - self.get(c, r).conj();
                defect += if c == r {
                    d.norm_sqr()
                } else {
                    2.0 * d.norm_sqr()
                };
            } else if self.get(c, r) == C64::ZERO {
                // (c, r) is structurally absent, so this entry is unmatched.
                defect += 2.0 * v.norm_sqr();
            }
        }
        defect.sqrt() / norm
    }

    /// Checks Hermiticity to relative tolerance `tol` and sets the flag.
    pub fn into_hermitian(mut self, tol: f64) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        self.hermitian = true;
        Ok(self)
    }

    /// Attaches a charge-sector map; it must partition `0..dim` exactly once.
    pub fn with_sectors(mut self, blocks: Vec<SectorBlock>) -> Result<Self> {
        let mut seen = vec![false; self.dim];
        for block in &blocks {
            for &i in &block.indices {
                if i >= self.dim {
                    return Err(Error::InvalidSectorMap(format!("index {i} out of range")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidSectorMap(format!("index {i} listed twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidSectorMap(format!(
                "index {missing} not covered"
            )));
        }
        self.sectors = Some(blocks);
        Ok(self)
    }

    /// Largest matrix element between states of different charge.
    pub fn charge_leakage(&self, basis: &BasisIndex) -> f64 {
        self.iter()
            .filter(|&(r, c, _)| basis.charge(r) != basis.charge(c))
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Mat<C64> {
        let mut m = Mat::<C64>::zeros(self.dim, self.dim);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    /// Dense block on the listed (ascending) indices.
    pub fn restrict(&self, indices: &[usize]) -> Mat<C64> {
        let mut position = vec![usize::MAX; self.dim];
        for (k, &i) in indices.iter().enumerate() {
            position[i] = k;
        }
        let mut m = Mat::<C64>::zeros(indices.len(), indices.len());
        for (k, &r) in indices.iter().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let pc = position[c];
                if pc != usize::MAX {
                    m[(k, pc)] = v;
                }
            }
        }
        m
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// `‖[A, B]‖_F / (‖A‖_F ‖B‖_F)`; zero when either operator vanishes.
pub fn scaled_commutator_norm(a: &SparseOperator, b: &SparseOperator) -> Result<f64> {
    let denom = a.frobenius_norm() * b.frobenius_norm();
    if denom == 0.0 {
        return Ok(0.0);
    }
    let zero = SparseOperator::zeros(a.dim());
    Ok(commutator_residual_norm(a, b, &zero, C64::ZERO)? / denom)
}

/// `‖[A, B] − coeff·C‖_F`, evaluated one row at a time so the commutator
/// itself is never stored.
pub fn commutator_residual_norm(
    a: &SparseOperator,
    b: &SparseOperator,
    c: &SparseOperator,
    coeff: C64,
) -> Result<f64> {
    a.check_same_dim(b)?;
    a.check_same_dim(c)?;
    let dim = a.dim();
    let mut acc = vec![C64::ZERO; dim];
    let mut touched = vec![false; dim];
    let mut pattern = Vec::new();
    let mut total = 0.0;
    for r in 0..dim {
        a.product_row(b, r, &mut acc, &mut touched, &mut pattern);
        // subtract (B·A)[r, :]
        let (cols_b, vals_b) = b.row(r);
        for (&k, &bv) in cols_b.iter().zip(vals_b) {
            let (cols_a, vals_a) = a.row(k);
            for (&col, &av) in cols_a.iter().zip(vals_a) {
                if !touched[col] {
                    touched[col] = true;
                    pattern.push(col);
                }
                acc[col] -= bv * av;
            }
        }
        let (cols_c, vals_c) = c.row(r);
        for (&col, &cv) in cols_c.iter().zip(vals_c) {
            if !touched[col] {
                touched[col] = true;
                pattern.push(col);
            }
            acc[col] -= coeff * cv;
        }
        for &col in &pattern {
            total += acc[col].norm_sqr();
            acc[col] = C64::ZERO;
            touched[col] = false;
        }
        pattern.clear();
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triplets_merge_and_order() {
        let op = SparseOperator::from_triplets(
            3,
            vec![
                (2, 0, c(1.0, 0.0)),
                (0, 1, c(2.0, 0.0)),
                (2, 0, c(1.0, 0.0)),
                (0, 0, c(0.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(op.nnz(), 2);
        assert_eq!(op.get(2, 0), c(2.0, 0.0));
        assert_eq!(op.get(1, 1), C64::ZERO);
        assert!(SparseOperator::from_triplets(2, vec![(2, 0, C64::ONE)]).is_err());
    }

    #[test]
    fn matmul_matches_dense() {
        let a = SparseOperator::from_triplets(
            3,
            vec![
                (0, 1, c(1.0, 1.0)),
                (1, 2, c(2.0, 0.0)),
                (2, 0, c(0.0, -1.0)),
                (1, 1, c(3.0, 0.0)),
            ],
        )
        .unwrap();
        let b = a.adjoint();
        let prod = a.matmul(&b).unwrap().to_dense();
        let dense = &a.to_dense() * &b.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[(i, j)] - dense[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn streaming_residual_matches_explicit_commutator() {
        let a = SparseOperator::from_triplets(
            3,
            vec![
                (0, 1, c(1.0, 0.5)),
                (1, 0, c(0.2, 0.0)),
                (2, 2, c(1.5, 0.0)),
                (1, 2, c(0.0, 1.0)),
            ],
        )
        .unwrap();
        let b = SparseOperator::from_diagonal(vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)]);
        let comm = a.commutator(&b).unwrap();
        let zero = SparseOperator::zeros(3);
        let streamed = commutator_residual_norm(&a, &b, &zero, C64::ZERO).unwrap();
        assert!((streamed - comm.frobenius_norm()).abs() < 1e-14);
        let exact = commutator_residual_norm(&a, &b, &comm, C64::ONE).unwrap();
        assert!(exact < 1e-14);
    }

    #[test]
    fn hermiticity_checks() {
        let h = SparseOperator::from_triplets(2, vec![(0, 1, c(1.0, 2.0)), (1, 0, c(1.0, -2.0))])
            .unwrap();
        assert!(h.hermiticity_defect() < 1e-16);
        assert!(h.clone().into_hermitian(1e-12).unwrap().is_hermitian());
        let nh = SparseOperator::from_triplets(2, vec![(0, 1, C64::ONE)]).unwrap();
        assert!(matches!(
            nh.into_hermitian(1e-12),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn sector_map_validation() {
        let op = SparseOperator::identity(3);
        let good = vec![
            SectorBlock {
                charge: super::super::Charge::integer(0),
                indices: vec![0, 2],
            },
            SectorBlock {
                charge: super::super::Charge::integer(1),
                indices: vec![1],
            },
        ];
        assert!(op.clone().with_sectors(good).is_ok());
        let overlapping = vec![
            SectorBlock {
                charge: super::super::Charge::integer(0),
                indices: vec![0, 1],
            },
            SectorBlock {
                charge: super::super::Charge::integer(1),
                indices: vec![1, 2],
            },
        ];
        assert!(op.clone().with_sectors(overlapping).is_err());
        let partial = vec![SectorBlock {
            charge: super::super::Charge::integer(0),
            indices: vec![0],
        }];
        assert!(op.with_sectors(partial).is_err());
    }
}
