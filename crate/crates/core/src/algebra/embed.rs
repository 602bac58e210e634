use faer::Mat;

use super::basis::BasisIndex;
use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::C64;

/// Nonzero entries of a local operator grouped by column.
fn columns(op: &Mat<C64>) -> Vec<Vec<(usize, C64)>> {
    (0..op.ncols())
        .map(|c| {
            (0..op.nrows())
                .filter_map(|r| {
                    let v = op[(r, c)];
                    (v != C64::ZERO).then_some((r, v))
                })
                .collect()
        })
        .collect()
}

/// Resolve 1-based sites (wrapping past `L`) to 0-based positions.
fn resolve_sites(sites: &[usize], basis: &BasisIndex) -> Result<Vec<usize>> {
    let l = basis.sites();
    let mut resolved = Vec::with_capacity(sites.len());
    for &s in sites {
        if s == 0 {
            return Err(Error::SiteOutOfRange { site: s, sites: l });
        }
        let p = (s - 1) % l;
        if resolved.contains(&p) {
            return Err(Error::RepeatedSite(p + 1));
        }
        resolved.push(p);
    }
    Ok(resolved)
}

fn check_shape(op: &Mat<C64>, k: usize, n: usize) -> Result<()> {
    let expected = n.pow(k as u32);
    if op.nrows() != expected || op.ncols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: op.nrows().max(op.ncols()),
        });
    }
    Ok(())
}

fn push_terms(
    triplets: &mut Vec<(usize, usize, C64)>,
    coeff: C64,
    op: &Mat<C64>,
    positions: &[usize],
    basis: &BasisIndex,
) {
    let n = basis.local_dim();
    let strides: Vec<usize> = positions.iter().map(|&p| basis.stride(p)).collect();
    let cols = columns(op);
    for col in 0..basis.dim() {
        let mut local = 0;
        let mut base = col;
        for &st in &strides {
            let d = (col / st) % n;
            local = local * n + d;
            base -= d * st;
        }
        for &(r, v) in &cols[local] {
            let mut row = base;
            let mut rem = r;
            for &st in strides.iter().rev() {
                row += (rem % n) * st;
                rem /= n;
            }
            triplets.push((row, col, coeff * v));
        }
    }
}

/// Embed a `k`-site operator acting on the listed 1-based sites.
///
/// The local operator's first tensor factor acts on `sites[0]`. Sites past `L`
/// wrap periodically; a site repeated after wrapping is an error.
pub fn embed(op: &Mat<C64>, sites: &[usize], basis: &BasisIndex) -> Result<SparseOperator> {
    let mut builder = OperatorBuilder::new(*basis);
    builder.add_term(C64::ONE, op, sites)?;
    builder.build()
}

/// Accumulates `Σ coeff · op_{sites}` and assembles one sparse operator.
#[derive(Clone, Debug)]
pub struct OperatorBuilder {
    basis: BasisIndex,
    triplets: Vec<(usize, usize, C64)>,
}

impl OperatorBuilder {
    pub fn new(basis: BasisIndex) -> Self {
        Self {
            basis,
            triplets: Vec::new(),
        }
    }

    pub fn basis(&self) -> &BasisIndex {
        &self.basis
    }

    pub fn add_term(&mut self, coeff: C64, op: &Mat<C64>, sites: &[usize]) -> Result<&mut Self> {
        let positions = resolve_sites(sites, &self.basis)?;
        check_shape(op, positions.len(), self.basis.local_dim())?;
        if coeff != C64::ZERO {
            push_terms(&mut self.triplets, coeff, op, &positions, &self.basis);
        }
        Ok(self)
    }

    /// Adds every entry of an already-assembled operator.
    pub fn add_operator(&mut self, coeff: C64, op: &SparseOperator) -> Result<&mut Self> {
        if op.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: op.dim(),
            });
        }
        self.triplets
            .extend(op.iter().map(|(r, c, v)| (r, c, coeff * v)));
        Ok(self)
    }

    pub fn build(self) -> Result<SparseOperator> {
        SparseOperator::from_triplets(self.basis.dim(), self.triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{kron, kron_all, LocalAlgebra};

    fn max_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                m = m.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        m
    }

    #[test]
    fn single_site_matches_kronecker_product() {
        let alg = LocalAlgebra::new(3).unwrap();
        let basis = BasisIndex::new(3, 3).unwrap();
        let id = alg.identity();
        let op = embed(alg.s_plus(), &[2], &basis).unwrap().to_dense();
        let expected = kron_all(&[&id, alg.s_plus(), &id]);
        assert!(max_diff(&op, &expected) < 1e-15);
    }

    #[test]
    fn wrapped_bond_orders_factors_by_listed_site() {
        let alg = LocalAlgebra::new(2).unwrap();
        let basis = BasisIndex::new(3, 2).unwrap();
        let id = alg.identity();
        // bond (3, 4) wraps to sites (3, 1): S^+ on site 3, S^z on site 1
        let local = kron(alg.s_plus(), alg.s_z());
        let op = embed(&local, &[3, 4], &basis).unwrap().to_dense();
        let expected = kron_all(&[alg.s_z(), &id, alg.s_plus()]);
        assert!(max_diff(&op, &expected) < 1e-15);
    }

    #[test]
    fn invalid_sites_are_rejected() {
        let alg = LocalAlgebra::new(2).unwrap();
        let basis = BasisIndex::new(4, 2).unwrap();
        let local = kron(alg.s_plus(), alg.s_minus());
        assert!(matches!(
            embed(&local, &[1, 5], &basis),
            Err(Error::RepeatedSite(1))
        ));
        assert!(matches!(
            embed(&local, &[0, 1], &basis),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            embed(alg.s_plus(), &[1, 2], &basis),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn builder_sums_terms() {
        let alg = LocalAlgebra::new(2).unwrap();
        let basis = BasisIndex::new(2, 2).unwrap();
        let mut b = OperatorBuilder::new(basis);
        b.add_term(C64::ONE, alg.s_z(), &[1]).unwrap();
        b.add_term(C64::ONE, alg.s_z(), &[2]).unwrap();
        let q = b.build().unwrap();
        assert_eq!(q.nnz(), 2);
        assert_eq!(q.get(0, 0), C64::new(-1.0, 0.0));
        assert_eq!(q.get(3, 3), C64::new(1.0, 0.0));
    }
}
