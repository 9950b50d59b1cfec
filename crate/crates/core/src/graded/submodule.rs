use std::collections::BTreeMap;
use std::sync::Arc;

use super::GradedModuleWindow;
use crate::error::{Error, Result};
use crate::linalg::{complement_coordinates, rank, solve, SparseMatrix};

/// A graded subspace `V = ⊕ V_j` of a module window, each `V_j` given by a full-rank basis
/// matrix with columns in the coordinates of `M_j`.
///
/// Whether `V` is stable under the algebra is not part of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmodulePoint {
    ambient: Arc<GradedModuleWindow>,
    bases: BTreeMap<i64, SparseMatrix>,
}

/// A quotient module together with the projections `M_j -> (M/V)_j`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub module: GradedModuleWindow,
    pub projections: BTreeMap<i64, SparseMatrix>,
}

impl SubmodulePoint {
    /// `bases` maps each degree of the ambient window to a basis matrix; missing degrees
    /// are taken to be zero.
    pub fn new(ambient: Arc<GradedModuleWindow>, bases: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        let mut full = BTreeMap::new();
        for j in ambient.degrees() {
            let b = bases.get(&j).cloned().unwrap_or_else(|| SparseMatrix::zero(ambient.dim(j), 0));
            if b.rows() != ambient.dim(j) {
                return Err(Error::DimensionMismatch(format!(
                    "basis of V_{j} has {} rows, ambient has dimension {}",
                    b.rows(),
                    ambient.dim(j)
                )));
            }
            if rank(&b) != b.cols() {
                return Err(Error::Validation(format!("basis of V_{j} is not of full column rank")));
            }
            full.insert(j, b);
        }
        if let Some(j) = bases.keys().find(|j| !ambient.in_window(**j)) {
            return Err(Error::WindowViolation(format!("degree {j} is outside the ambient window")));
        }
        Ok(SubmodulePoint { ambient, bases: full })
    }

    pub fn zero(ambient: Arc<GradedModuleWindow>) -> Self {
        let bases = ambient.degrees().map(|j| (j, SparseMatrix::zero(ambient.dim(j), 0))).collect();
        SubmodulePoint { ambient, bases }
    }

    pub fn whole(ambient: Arc<GradedModuleWindow>) -> Self {
        let bases = ambient.degrees().map(|j| (j, SparseMatrix::identity(ambient.dim(j)))).collect();
        SubmodulePoint { ambient, bases }
    }

    pub fn ambient(&self) -> &Arc<GradedModuleWindow> {
        &self.ambient
    }

    pub fn basis(&self, j: i64) -> SparseMatrix {
        self.bases.get(&j).cloned().unwrap_or_else(|| SparseMatrix::zero(self.ambient.dim(j), 0))
    }

    pub fn dim(&self, j: i64) -> usize {
        self.bases.get(&j).map_or(0, SparseMatrix::cols)
    }

    /// Dimension vector `k = (k_j)`.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.bases.iter().map(|(j, b)| (*j, b.cols())).collect()
    }

    /// `V` with the action induced from the ambient module; fails unless `V` is stable.
    pub fn induced_module(&self) -> Result<GradedModuleWindow> {
        let m = &self.ambient;
        let alg = m.algebra().clone();
        let mut components = Vec::new();
        for j in m.degrees() {
            components.push((0..self.dim(j)).map(|k| format!("v{j}_{k}")).collect());
        }
        let mut action = BTreeMap::new();
        for (&(i, j), mats) in m.action_tables() {
            let t = j + i as i64;
            let src = self.basis(j);
            let dst = self.basis(t);
            let mut out = Vec::with_capacity(mats.len());
            for (a, mat) in mats.iter().enumerate() {
                let image = mat.mul(&src);
                let coords = solve(&dst, &image).ok_or_else(|| {
                    Error::NotASubmodule(format!(
                        "basis element {a} of A_{i} maps V_{j} outside V_{t}"
                    ))
                })?;
                out.push(coords);
            }
            action.insert((i, j), out);
        }
        GradedModuleWindow::new(alg, m.low(), components, action)
    }

    /// `M/V` on the ambient window, with basis given by the ambient coordinates completing `V`.
    pub fn quotient(&self) -> Result<Quotient> {
        let m = &self.ambient;
        let mut components = Vec::new();
        let mut projections = BTreeMap::new();
        for j in m.degrees() {
            let v = self.basis(j);
            let comp = complement_coordinates(&v);
            let n = m.dim(j);
            let e = SparseMatrix::from_columns(
                n,
                comp.iter().map(|&c| vec![(c, crate::Scalar::one())]).collect(),
            );
            let full = v.hstack(&e);
            let inv = solve(&full, &SparseMatrix::identity(n)).expect("square invertible");
            // the rows after the V part give coordinates in the complement
            let k = v.cols();
            let proj_rows: Vec<usize> = (k..n).collect();
            let proj = inv.transpose().select_columns(&proj_rows).transpose();
            components.push(comp.iter().map(|&c| m.basis(j)[c].clone()).collect());
            projections.insert(j, proj);
        }
        let mut action = BTreeMap::new();
        for (&(i, j), mats) in m.action_tables() {
            let t = j + i as i64;
            let comp_j = complement_coordinates(&self.basis(j));
            let lift = SparseMatrix::from_columns(
                m.dim(j),
                comp_j.iter().map(|&c| vec![(c, crate::Scalar::one())]).collect(),
            );
            let out = mats.iter().map(|mat| projections[&t].mul(&mat.mul(&lift))).collect();
            action.insert((i, j), out);
        }
        let module = GradedModuleWindow::new(m.algebra().clone(), m.low(), components, action)?;
        Ok(Quotient { module, projections })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;
    use crate::linalg::Scalar;

    #[test]
    fn induced_and_quotient_of_ideal_x() {
        // (x) inside K[x,y] on [1,2]; bases ordered x > y, x^2 > xy > y^2.
        let a = Arc::new(polynomial_ring(2, 2));
        let m = Arc::new(GradedModuleWindow::algebra_window(a, 1, 2).unwrap());
        let v1 = SparseMatrix::from_i64_rows(&[&[1], &[0]]);
        let v2 = SparseMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        let v = SubmodulePoint::new(m.clone(), BTreeMap::from([(1, v1), (2, v2)])).unwrap();
        let induced = v.induced_module().unwrap();
        assert_eq!(induced.hilbert_function(), BTreeMap::from([(1, 1), (2, 2)]));
        let q = v.quotient().unwrap();
        assert_eq!(q.module.hilbert_function(), BTreeMap::from([(1, 1), (2, 1)]));
        // y acts on the class of y by y^2
        let y_act = q.module.act(1, 1, 1).unwrap();
        assert_eq!(y_act.get(0, 0), Scalar::one());
        // x kills the quotient
        assert!(q.module.act(1, 0, 1).unwrap().is_zero());
    }

    #[test]
    fn non_stable_subspace_is_rejected() {
        let a = Arc::new(polynomial_ring(2, 2));
        let m = Arc::new(GradedModuleWindow::algebra_window(a, 1, 2).unwrap());
        let v1 = SparseMatrix::from_i64_rows(&[&[1], &[0]]);
        let v2 = SparseMatrix::from_i64_rows(&[&[0], &[0], &[1]]);
        let v = SubmodulePoint::new(m, BTreeMap::from([(1, v1), (2, v2)])).unwrap();
        assert!(matches!(v.induced_module(), Err(Error::NotASubmodule(_))));
    }
}
