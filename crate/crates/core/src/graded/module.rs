use std::collections::BTreeMap;
use std::sync::Arc;

use super::{AlgebraElement, GradedAlgebraTruncation};
use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMatrix};

/// A graded module stored on the inclusive degree window `[low, high]`.
///
/// `action[(i, j)][a]` is the matrix of basis element `a` of `A_i` acting `M_j -> M_{i+j}`.
/// It is present exactly when both `j` and `i + j` lie in the window and `A_i` is known.
/// Products leaving the window are dropped, so the stored object is `M_{>=low} / M_{>high}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModuleWindow {
    algebra: Arc<GradedAlgebraTruncation>,
    low: i64,
    components: Vec<Vec<String>>,
    action: BTreeMap<(usize, i64), Vec<SparseMatrix>>,
}

impl GradedModuleWindow {
    pub fn new(
        algebra: Arc<GradedAlgebraTruncation>,
        low: i64,
        components: Vec<Vec<String>>,
        action: BTreeMap<(usize, i64), Vec<SparseMatrix>>,
    ) -> Result<Self> {
        let m = GradedModuleWindow { algebra, low, components, action };
        m.check_shapes()?;
        Ok(m)
    }

    /// Builds the action tables from `act(i, a, j, m)`, the coordinates of `a · m` in
    /// `M_{i+j}` for basis element `a` of `A_i` and basis element `m` of `M_j`.
    pub fn from_action_fn<F>(
        algebra: Arc<GradedAlgebraTruncation>,
        low: i64,
        components: Vec<Vec<String>>,
        act: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize, i64, usize) -> Vec<(usize, Scalar)>,
    {
        let high = low + components.len() as i64 - 1;
        let dim = |j: i64| components[(j - low) as usize].len();
        let mut action = BTreeMap::new();
        for j in low..=high {
            for i in 0..=algebra.max_degree() {
                let t = j + i as i64;
                if t > high {
                    break;
                }
                let mats = (0..algebra.dim(i))
                    .map(|a| {
                        let cols = (0..dim(j)).map(|m| act(i, a, j, m)).collect();
                        SparseMatrix::from_columns(dim(t), cols)
                    })
                    .collect();
                action.insert((i, j), mats);
            }
        }
        Self::new(algebra, low, components, action)
    }

    /// `dims[k]` copies of `K` in degree `low + k`, every positive-degree element and every
    /// augmentation element acting by zero. A unital `A_0` acts through its unit.
    pub fn trivial(algebra: Arc<GradedAlgebraTruncation>, low: i64, dims: &[usize]) -> Result<Self> {
        let components = dims
            .iter()
            .enumerate()
            .map(|(k, d)| (0..*d).map(|m| format!("v{}_{m}", low + k as i64)).collect())
            .collect();
        let unital = algebra.is_unital();
        Self::from_action_fn(algebra, low, components, move |i, _, _, m| {
            if unital && i == 0 {
                vec![(m, Scalar::one())]
            } else {
                vec![]
            }
        })
    }

    pub fn zero(algebra: Arc<GradedAlgebraTruncation>) -> Self {
        GradedModuleWindow { algebra, low: 0, components: Vec::new(), action: BTreeMap::new() }
    }

    fn check_shapes(&self) -> Result<()> {
        for (&(i, j), mats) in &self.action {
            let t = j + i as i64;
            if !self.in_window(j) || !self.in_window(t) {
                return Err(Error::WindowViolation(format!("action table ({i},{j}) leaves the window")));
            }
            if mats.len() != self.algebra.dim(i) {
                return Err(Error::Validation(format!("action table ({i},{j}) has wrong length")));
            }
            for m in mats {
                if m.rows() != self.dim(t) || m.cols() != self.dim(j) {
                    return Err(Error::Validation(format!("action table ({i},{j}) has wrong shape")));
                }
            }
        }
        for j in self.degrees() {
            for i in 0..=self.algebra.max_degree() {
                if self.in_window(j + i as i64) && !self.action.contains_key(&(i, j)) {
                    return Err(Error::Validation(format!("missing action table ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebraTruncation> {
        &self.algebra
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// Top degree of the window; `low - 1` for an empty window.
    pub fn high(&self) -> i64 {
        self.low + self.components.len() as i64 - 1
    }

    pub fn is_empty_window(&self) -> bool {
        self.components.is_empty()
    }

    pub fn in_window(&self, j: i64) -> bool {
        j >= self.low && j <= self.high()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.low..=self.high()
    }

    pub fn dim(&self, j: i64) -> usize {
        if self.in_window(j) {
            self.components[(j - self.low) as usize].len()
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn basis(&self, j: i64) -> &[String] {
        if self.in_window(j) {
            &self.components[(j - self.low) as usize]
        } else {
            &[]
        }
    }

    /// Action of basis element `a` of `A_i` on `M_j`, when `j` and `i + j` are in the window.
    pub fn act(&self, i: usize, a: usize, j: i64) -> Option<&SparseMatrix> {
        self.action.get(&(i, j)).map(|v| &v[a])
    }

    /// Action of an arbitrary algebra element on `M_j`.
    pub fn act_element(&self, x: &AlgebraElement, j: i64) -> Option<SparseMatrix> {
        let mats = self.action.get(&(x.degree, j))?;
        let t = j + x.degree as i64;
        let mut acc = SparseMatrix::zero(self.dim(t), self.dim(j));
        for (a, c) in x.coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&mats[a].scale(c));
            }
        }
        Some(acc)
    }

    pub(crate) fn action_tables(&self) -> &BTreeMap<(usize, i64), Vec<SparseMatrix>> {
        &self.action
    }

    /// `dim M_n` for each degree of the window.
    pub fn hilbert_function(&self) -> BTreeMap<i64, usize> {
        self.degrees().map(|j| (j, self.dim(j))).collect()
    }

    /// Restriction to `[p, q]`; action maps leaving the new window are dropped.
    /// An empty range (`p > q`) gives the zero module.
    pub fn truncate_window(&self, p: i64, q: i64) -> Result<Self> {
        if p > q {
            return Ok(GradedModuleWindow::zero(self.algebra.clone()));
        }
        if p < self.low || q > self.high() {
            return Err(Error::WindowViolation(format!(
                "[{p},{q}] is not contained in [{},{}]",
                self.low,
                self.high()
            )));
        }
        let components =
            (p..=q).map(|j| self.components[(j - self.low) as usize].clone()).collect();
        let action = self
            .action
            .iter()
            .filter(|(&(i, j), _)| j >= p && j + i as i64 <= q)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Ok(GradedModuleWindow { algebra: self.algebra.clone(), low: p, components, action })
    }

    /// `M(n)`: the component in degree `i` is `M_{i+n}`, so the window moves by `-n`.
    pub fn twist(&self, n: i64) -> Self {
        let action = self.action.iter().map(|(&(i, j), v)| ((i, j - n), v.clone())).collect();
        GradedModuleWindow {
            algebra: self.algebra.clone(),
            low: self.low - n,
            components: self.components.clone(),
            action,
        }
    }

    /// The same module viewed over the truncation of its algebra in degrees `<= d`.
    pub fn with_algebra_truncated(&self, d: usize) -> Self {
        let algebra = Arc::new(self.algebra.truncate(d));
        let action =
            self.action.iter().filter(|((i, _), _)| *i <= d).map(|(k, v)| (*k, v.clone())).collect();
        GradedModuleWindow { algebra, low: self.low, components: self.components.clone(), action }
    }

    /// The algebra regarded as a module over itself on `[low, high]`, clamped to the
    /// degrees the algebra knows.
    pub fn algebra_window(algebra: Arc<GradedAlgebraTruncation>, low: i64, high: i64) -> Result<Self> {
        let low = low.max(0);
        if high < low {
            return Ok(GradedModuleWindow::zero(algebra));
        }
        if high > algebra.max_degree() as i64 {
            return Err(Error::WindowViolation(format!(
                "window top {high} exceeds the algebra truncation {}",
                algebra.max_degree()
            )));
        }
        let components = (low..=high).map(|j| algebra.basis(j as usize).to_vec()).collect();
        let alg = algebra.clone();
        Self::from_action_fn(algebra, low, components, move |i, a, j, m| {
            alg.product(i, a, j as usize, m).map(<[_]>::to_vec).unwrap_or_default()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;

    #[test]
    fn algebra_as_module_hilbert() {
        let a = Arc::new(polynomial_ring(2, 3));
        let m = GradedModuleWindow::algebra_window(a, 0, 3).unwrap();
        let h: Vec<usize> = m.hilbert_function().into_values().collect();
        assert_eq!(h, vec![1, 2, 3, 4]);
    }

    #[test]
    fn truncate_and_twist() {
        let a = Arc::new(polynomial_ring(2, 3));
        let m = GradedModuleWindow::algebra_window(a.clone(), 0, 3).unwrap();
        assert_eq!(m.truncate_window(0, 3).unwrap(), m);
        let t = m.truncate_window(1, 2).unwrap();
        assert_eq!(t.hilbert_function(), BTreeMap::from([(1, 2), (2, 3)]));
        assert!(m.truncate_window(1, 4).is_err());
        assert!(m.truncate_window(2, 1).unwrap().is_empty_window());

        // A(-1) on [1,3]
        let shifted = GradedModuleWindow::algebra_window(a, 0, 2).unwrap().twist(-1);
        assert_eq!(shifted.hilbert_function(), BTreeMap::from([(1, 1), (2, 2), (3, 3)]));
        assert_eq!(m.twist(0), m);
        assert_eq!(m.twist(2).twist(-2), m);
    }
}
