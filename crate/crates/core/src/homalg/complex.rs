use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{independent_columns, kernel_basis, rank, SparseMatrix};

/// A bounded cochain complex `C^low -> C^{low+1} -> ... -> C^high` of finite-dimensional
/// spaces. Terms outside the stored range are zero.
#[derive(Debug)]
pub struct CochainComplex {
    low: i64,
    dims: Vec<usize>,
    diffs: Vec<SparseMatrix>,
    ranks: Vec<OnceLock<usize>>,
}

impl Clone for CochainComplex {
    fn clone(&self) -> Self {
        CochainComplex {
            low: self.low,
            dims: self.dims.clone(),
            diffs: self.diffs.clone(),
            ranks: self.ranks.iter().map(|r| {
                let c = OnceLock::new();
                if let Some(v) = r.get() {
                    let _ = c.set(*v);
                }
                c
            }).collect(),
        }
    }
}

impl CochainComplex {
    /// `diffs[k]` maps `C^{low+k}` to `C^{low+k+1}`; there is one fewer map than terms.
    /// Fails with `SignError` unless every composite of consecutive maps vanishes.
    pub fn new(low: i64, dims: Vec<usize>, diffs: Vec<SparseMatrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    low + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul(&diffs[k - 1]).is_zero() {
                return Err(Error::SignError(format!("d^{} d^{} != 0", low + k as i64, low + k as i64 - 1)));
            }
        }
        let ranks = diffs.iter().map(|_| OnceLock::new()).collect();
        Ok(CochainComplex { low, dims, diffs, ranks })
    }

    pub fn zero() -> Self {
        CochainComplex { low: 0, dims: Vec::new(), diffs: Vec::new(), ranks: Vec::new() }
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// Index of the last stored term.
    pub fn high(&self) -> i64 {
        self.low + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, i: i64) -> usize {
        if i < self.low || i > self.high() {
            0
        } else {
            self.dims[(i - self.low) as usize]
        }
    }

    /// `d^i : C^i -> C^{i+1}`, if both terms are stored.
    pub fn differential(&self, i: i64) -> Option<&SparseMatrix> {
        if i < self.low {
            return None;
        }
        self.diffs.get((i - self.low) as usize)
    }

    fn rank_of(&self, i: i64) -> usize {
        if i < self.low {
            return 0;
        }
        let k = (i - self.low) as usize;
        match self.diffs.get(k) {
            Some(d) => *self.ranks[k].get_or_init(|| rank(d)),
            None => 0,
        }
    }

    pub fn cohomology(&self, i: i64) -> usize {
        self.dim(i) - self.rank_of(i) - self.rank_of(i - 1)
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        (self.low..=self.high()).map(|i| (i, self.cohomology(i))).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.low..=self.high()).map(|i| if i.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(i) as i64).sum()
    }

    /// Cocycles representing a basis of `H^i`, as columns.
    pub fn cohomology_basis(&self, i: i64) -> SparseMatrix {
        let n = self.dim(i);
        let cocycles = match self.differential(i) {
            Some(d) => kernel_basis(d),
            None => SparseMatrix::identity(n),
        };
        let boundaries = match self.differential(i - 1) {
            Some(d) => d.clone(),
            None => SparseMatrix::zero(n, 0),
        };
        let nb = boundaries.cols();
        let picked: Vec<usize> = independent_columns(&boundaries.hstack(&cocycles))
            .into_iter()
            .filter(|&c| c >= nb)
            .map(|c| c - nb)
            .collect();
        cocycles.select_columns(&picked)
    }

    /// The shifted complex `C[s]`, with `C[s]^i = C^{i+s}`; differentials change sign by `(-1)^s`.
    pub fn shift(&self, s: i64) -> Self {
        let sign = if s.rem_euclid(2) == 0 { crate::Scalar::one() } else { -crate::Scalar::one() };
        let diffs = self.diffs.iter().map(|d| d.scale(&sign)).collect();
        CochainComplex::new(self.low - s, self.dims.clone(), diffs).expect("shift preserves d^2 = 0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_term_cohomology() {
        let d = SparseMatrix::from_i64_rows(&[&[1, 0], &[0, 0], &[0, 0]]);
        let c = CochainComplex::new(0, vec![2, 3], vec![d]).unwrap();
        assert_eq!(c.cohomology_dims(), BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(c.euler_characteristic(), -1);
        assert_eq!(c.cohomology_basis(1).cols(), 2);
        assert_eq!(c.shift(1).low(), -1);
    }

    #[test]
    fn nonzero_square_is_a_sign_error() {
        let d = SparseMatrix::identity(1);
        let r = CochainComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]);
        assert!(matches!(r, Err(Error::SignError(_))));
    }
}
