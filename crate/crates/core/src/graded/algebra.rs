use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMatrix};

/// An element of one graded component, in the coordinates of its named basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub degree: usize,
    pub coords: Vec<Scalar>,
}

/// A graded algebra `A_0 ⊕ ... ⊕ A_d` known through multiplication tables up to degree `d`.
///
/// For every `i + j <= d` and every basis element `a` of `A_i`, `mult[(i, j)][a]` is the
/// matrix of left multiplication `A_j -> A_{i+j}`. When the algebra is unital, `A_0` is
/// spanned by the unit. A non-unital algebra may carry anything in degree 0 and then its
/// augmentation ideal is the whole algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebraTruncation {
    max_degree: usize,
    components: Vec<Vec<String>>,
    mult: BTreeMap<(usize, usize), Vec<SparseMatrix>>,
    unital: bool,
    commutative: bool,
    generators: Vec<AlgebraElement>,
}

impl GradedAlgebraTruncation {
    /// Assembles an algebra from its tables, checking only shapes. Identities are checked by
    /// [`validate_algebra`](super::validate_algebra).
    pub fn new(
        components: Vec<Vec<String>>,
        mult: BTreeMap<(usize, usize), Vec<SparseMatrix>>,
        unital: bool,
        commutative: bool,
        generators: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Validation("algebra needs at least a degree-0 component".into()));
        }
        let max_degree = components.len() - 1;
        let dim = |i: usize| components[i].len();
        for i in 0..=max_degree {
            for j in 0..=max_degree - i {
                let tables = mult.get(&(i, j)).ok_or_else(|| {
                    Error::Validation(format!("missing multiplication table A_{i} x A_{j}"))
                })?;
                if tables.len() != dim(i) {
                    return Err(Error::Validation(format!(
                        "table A_{i} x A_{j} has {} matrices, expected {}",
                        tables.len(),
                        dim(i)
                    )));
                }
                for t in tables {
                    if t.rows() != dim(i + j) || t.cols() != dim(j) {
                        return Err(Error::Validation(format!("table A_{i} x A_{j} has wrong shape")));
                    }
                }
            }
        }
        if unital && dim(0) != 1 {
            return Err(Error::Validation("unital algebra must have one-dimensional A_0".into()));
        }
        for g in &generators {
            if g.degree > max_degree || g.coords.len() != dim(g.degree) {
                return Err(Error::Validation(format!("generator in degree {} has wrong shape", g.degree)));
            }
        }
        Ok(GradedAlgebraTruncation { max_degree, components, mult, unital, commutative, generators })
    }

    /// Builds the tables from a structure-constant function `product(i, a, j, b)` returning
    /// coordinates in `A_{i+j}`.
    pub fn from_product_fn<F>(
        components: Vec<Vec<String>>,
        unital: bool,
        commutative: bool,
        generators: Vec<AlgebraElement>,
        product: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize, usize, usize) -> Vec<(usize, Scalar)>,
    {
        let d = components.len().saturating_sub(1);
        let mut mult = BTreeMap::new();
        for i in 0..=d {
            for j in 0..=d - i {
                let tables = (0..components[i].len())
                    .map(|a| {
                        let cols = (0..components[j].len()).map(|b| product(i, a, j, b)).collect();
                        SparseMatrix::from_columns(components[i + j].len(), cols)
                    })
                    .collect();
                mult.insert((i, j), tables);
            }
        }
        Self::new(components, mult, unital, commutative, generators)
    }

    /// Non-unital `span{e, e^2, .., e^k}` concentrated in degree 0, `e^{k+1} = 0`, generated by `e`.
    pub fn nilpotent(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("a nilpotent algebra needs at least one basis element".into()));
        }
        let names = (1..=k).map(|i| if i == 1 { "e".to_string() } else { format!("e^{i}") }).collect();
        let e = AlgebraElement { degree: 0, coords: (0..k).map(|i| Scalar::from_int((i == 0) as i64)).collect() };
        Self::from_product_fn(vec![names], false, true, vec![e], move |_, a, _, b| {
            if a + b + 1 < k {
                vec![(a + b + 1, Scalar::one())]
            } else {
                vec![]
            }
        })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.components.get(degree).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, degree: usize) -> &[String] {
        self.components.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    /// Left multiplication by basis element `a` of `A_i` as a map `A_j -> A_{i+j}`.
    pub fn left_mul(&self, i: usize, a: usize, j: usize) -> Option<&SparseMatrix> {
        self.mult.get(&(i, j)).map(|t| &t[a])
    }

    /// Product of basis elements, `None` when the degree leaves the truncation.
    pub fn product(&self, i: usize, a: usize, j: usize, b: usize) -> Option<&[(usize, Scalar)]> {
        self.left_mul(i, a, j).map(|m| m.column(b))
    }

    /// Left multiplication by an arbitrary element of `A_i`.
    pub fn left_mul_element(&self, x: &AlgebraElement, j: usize) -> Option<SparseMatrix> {
        let tables = self.mult.get(&(x.degree, j))?;
        let mut acc = SparseMatrix::zero(self.dim(x.degree + j), self.dim(j));
        for (a, c) in x.coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&tables[a].scale(c));
            }
        }
        Some(acc)
    }

    /// Basis elements `(degree, index)` of the augmentation ideal: positive degrees when
    /// unital, everything otherwise.
    pub fn augmentation_basis(&self) -> Vec<(usize, usize)> {
        let start = usize::from(self.unital);
        (start..=self.max_degree)
            .flat_map(|i| (0..self.dim(i)).map(move |a| (i, a)))
            .collect()
    }

    /// All multiplication tables keyed by `(i, j)`.
    pub fn tables(&self) -> &BTreeMap<(usize, usize), Vec<SparseMatrix>> {
        &self.mult
    }

    /// Replaces one multiplication matrix; used to build corrupted fixtures in tests.
    pub fn with_table_entry(mut self, i: usize, a: usize, j: usize, row: usize, col: usize, v: Scalar) -> Self {
        let t = self.mult.get_mut(&(i, j)).expect("table exists");
        let m = &t[a];
        let entries = m
            .entries()
            .filter(|(r, c, _)| (*r, *c) != (row, col))
            .map(|(r, c, x)| (r, c, x.clone()))
            .chain(std::iter::once((row, col, v)));
        t[a] = SparseMatrix::from_triplets(m.rows(), m.cols(), entries.collect::<Vec<_>>());
        self
    }

    /// The truncation `A_{<= d}`.
    pub fn truncate(&self, d: usize) -> Self {
        let d = d.min(self.max_degree);
        let components = self.components[..=d].to_vec();
        let mult = self
            .mult
            .iter()
            .filter(|((i, j), _)| i + j <= d)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let generators = self.generators.iter().filter(|g| g.degree <= d).cloned().collect();
        GradedAlgebraTruncation {
            max_degree: d,
            components,
            mult,
            unital: self.unital,
            commutative: self.commutative,
            generators,
        }
    }
}
