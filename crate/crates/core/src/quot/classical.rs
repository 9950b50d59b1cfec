use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{AlgebraElement, GradedAlgebraTruncation, GradedModuleWindow, SubmodulePoint};
use crate::linalg::{image_basis, in_column_space, kernel_basis, reduced_image_basis, solve, Scalar, SparseMatrix};

/// The elements along which stability is tested: the declared generators, or the whole
/// augmentation basis when none are declared.
pub fn stability_elements(alg: &GradedAlgebraTruncation) -> Vec<AlgebraElement> {
    if !alg.generators().is_empty() {
        return alg.generators().to_vec();
    }
    alg.augmentation_basis()
        .into_iter()
        .map(|(d, a)| AlgebraElement {
            degree: d,
            coords: (0..alg.dim(d)).map(|b| Scalar::from_int((a == b) as i64)).collect(),
        })
        .collect()
}

/// A basis vector of `V_j` that a generator moves out of `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmoduleWitness {
    pub generator: usize,
    pub degree: i64,
    /// The vector of `V_j`, in ambient coordinates.
    pub vector: Vec<Scalar>,
    /// Its image in `M_{j+e}`.
    pub image: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmoduleCheck {
    pub holds: bool,
    pub witness: Option<SubmoduleWitness>,
}

fn dense_column(m: &SparseMatrix, c: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); m.rows()];
    for (r, x) in m.column(c) {
        v[*r] = x.clone();
    }
    v
}

/// Checks `g · V_j ⊆ V_{j+e}` for every stability element `g` of degree `e` and every `j`
/// with `j + e` in the window, generators in order, then degrees ascending.
pub fn is_submodule(v: &SubmodulePoint) -> SubmoduleCheck {
    let m = v.ambient();
    for (gi, g) in stability_elements(m.algebra()).iter().enumerate() {
        for j in m.degrees() {
            let t = j + g.degree as i64;
            if !m.in_window(t) || v.dim(j) == 0 {
                continue;
            }
            let Some(act) = m.act_element(g, j) else { continue };
            let (src, dst) = (v.basis(j), v.basis(t));
            let image = act.mul(&src);
            for c in 0..image.cols() {
                let col = image.select_columns(&[c]);
                if !in_column_space(&dst, &col) {
                    return SubmoduleCheck {
                        holds: false,
                        witness: Some(SubmoduleWitness {
                            generator: gi,
                            degree: j,
                            vector: dense_column(&src, c),
                            image: dense_column(&col, 0),
                        }),
                    };
                }
            }
        }
    }
    SubmoduleCheck { holds: true, witness: None }
}

/// For each stability element `g` (by position) and degree `j`, the matrix of
/// `V_j -> M_{j+e} -> (M/V)_{j+e}`, `v ↦ [g v]`.
pub fn section_values(v: &SubmodulePoint) -> Result<BTreeMap<(usize, i64), SparseMatrix>> {
    let m = v.ambient();
    let q = v.quotient()?;
    let mut out = BTreeMap::new();
    for (gi, g) in stability_elements(m.algebra()).iter().enumerate() {
        for j in m.degrees() {
            let t = j + g.degree as i64;
            if !m.in_window(t) {
                continue;
            }
            if let Some(act) = m.act_element(g, j) {
                out.insert((gi, j), q.projections[&t].mul(&act.mul(&v.basis(j))));
            }
        }
    }
    Ok(out)
}

/// `Hom^0_A(V, M/V)` as a solution space.
#[derive(Debug, Clone)]
pub struct TangentSpace {
    pub dim: usize,
    /// Columns are solutions, in the coordinates of `⊕_j Hom(V_j, (M/V)_j)` with each block
    /// stored column-major.
    pub basis: SparseMatrix,
    pub offsets: BTreeMap<i64, usize>,
}

/// Degree-0 maps `φ : V -> M/V` commuting with the stability elements, by one linear solve
/// over the whole window.
pub fn tangent_classical(v: &SubmodulePoint) -> Result<TangentSpace> {
    let check = is_submodule(v);
    if let Some(w) = check.witness {
        return Err(Error::NotASubmodule(format!(
            "generator {} moves a vector of degree {} out of the subspace",
            w.generator, w.degree
        )));
    }
    let m = v.ambient();
    let quot = v.quotient()?;
    let qm = &quot.module;
    let mut offsets = BTreeMap::new();
    let mut n = 0;
    for j in m.degrees() {
        offsets.insert(j, n);
        n += qm.dim(j) * v.dim(j);
    }
    // φ_j[r][c] sits at offsets[j] + c * q_j + r
    let var = |j: i64, r: usize, c: usize| offsets[&j] + c * qm.dim(j) + r;
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for g in stability_elements(m.algebra()) {
        for j in m.degrees() {
            let t = j + g.degree as i64;
            if !m.in_window(t) || v.dim(j) == 0 || qm.dim(t) == 0 {
                continue;
            }
            let Some(act) = m.act_element(&g, j) else { continue };
            let on_v = solve(&v.basis(t), &act.mul(&v.basis(j)))
                .ok_or_else(|| Error::NotASubmodule(format!("degree {j} leaves the subspace")))?;
            let on_q = qm.act_element(&g, j).unwrap_or_else(|| SparseMatrix::zero(qm.dim(t), qm.dim(j)));
            let (on_v, on_q) = (on_v.to_dense(), on_q.to_dense());
            for r in 0..qm.dim(t) {
                for c in 0..v.dim(j) {
                    let mut row = Vec::new();
                    for (mm, line) in on_v.iter().enumerate() {
                        if !line[c].is_zero() {
                            row.push((var(t, r, mm), line[c].clone()));
                        }
                    }
                    for mm in 0..qm.dim(j) {
                        if !on_q[r][mm].is_zero() {
                            row.push((var(j, mm, c), -&on_q[r][mm]));
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let eqs = SparseMatrix::from_triplets(
        rows.len(),
        n,
        rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(c, x)| (i, *c, x.clone()))),
    );
    let basis = kernel_basis(&eqs);
    Ok(TangentSpace { dim: basis.cols(), basis, offsets })
}

/// The submodule generated by `W ⊆ M_p`: zero below `p`, `W + A_0 · W` in degree `p`,
/// `A_j · W` in degree `p + j`.
pub fn generate_from_bottom(ambient: Arc<GradedModuleWindow>, p: i64, w: &SparseMatrix) -> Result<SubmodulePoint> {
    if !ambient.in_window(p) || w.rows() != ambient.dim(p) {
        return Err(Error::DimensionMismatch(format!("W must be a subspace of M_{p}")));
    }
    let alg = ambient.algebra().clone();
    let mut bases = BTreeMap::new();
    for t in p..=ambient.high() {
        let j = (t - p) as usize;
        if j > alg.max_degree() {
            return Err(Error::WindowTooShort { degree: j as i64 });
        }
        // W itself: without a unit, A_0 · W need not contain it
        let mut span = if t == p { w.clone() } else { SparseMatrix::zero(ambient.dim(t), 0) };
        for a in 0..alg.dim(j) {
            let act = ambient.act(j, a, p).ok_or(Error::WindowTooShort { degree: j as i64 })?;
            span = span.hstack(&act.mul(w));
        }
        bases.insert(t, reduced_image_basis(&span));
    }
    SubmodulePoint::new(ambient, bases)
}

/// The submodule of a wider window generated by `V`: degrees of `V`'s window are copied,
/// each higher degree `t` is spanned by `A_e · V'_{t-e}`. Both ambients must agree on the
/// common degrees.
pub fn extend_submodule(v: &SubmodulePoint, wider: Arc<GradedModuleWindow>) -> Result<SubmodulePoint> {
    let old = v.ambient();
    if wider.low() != old.low() || wider.high() < old.high() {
        return Err(Error::WindowViolation("the new window must extend the old one upwards".into()));
    }
    let alg = wider.algebra().clone();
    let mut bases: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for t in wider.degrees() {
        if t <= old.high() {
            if wider.dim(t) != old.dim(t) {
                return Err(Error::DimensionMismatch(format!("ambients differ in degree {t}")));
            }
            bases.insert(t, v.basis(t));
            continue;
        }
        let mut span = SparseMatrix::zero(wider.dim(t), 0);
        for (s, b) in &bases {
            let e = (t - s) as usize;
            if e == 0 || e > alg.max_degree() {
                continue;
            }
            for a in 0..alg.dim(e) {
                if let Some(act) = wider.act(e, a, *s) {
                    span = span.hstack(&act.mul(b));
                }
            }
        }
        bases.insert(t, image_basis(&span));
    }
    SubmodulePoint::new(wider, bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;
    use crate::graded::GradedModuleWindow;

    fn plane_window() -> Arc<GradedModuleWindow> {
        Arc::new(GradedModuleWindow::algebra_window(Arc::new(polynomial_ring(2, 3)), 1, 2).unwrap())
    }

    fn cols(rows: usize, c: &[&[(usize, i64)]]) -> SparseMatrix {
        SparseMatrix::from_columns(rows, c.iter().map(|v| v.iter().map(|(r, x)| (*r, Scalar::from_int(*x))).collect()).collect())
    }

    // basis of K[x,y]_1 is (x, y), of K[x,y]_2 is (x^2, xy, y^2)
    #[test]
    fn line_and_its_multiples() {
        let m = plane_window();
        let v = SubmodulePoint::new(
            m.clone(),
            BTreeMap::from([(1, cols(2, &[&[(0, 1)]])), (2, cols(3, &[&[(0, 1)], &[(1, 1)]]))]),
        )
        .unwrap();
        assert!(is_submodule(&v).holds);
        assert!(section_values(&v).unwrap().values().all(SparseMatrix::is_zero));
        assert_eq!(tangent_classical(&v).unwrap().dim, 1);
    }

    #[test]
    fn witness_for_x_times_x() {
        let m = plane_window();
        let v = SubmodulePoint::new(
            m.clone(),
            BTreeMap::from([(1, cols(2, &[&[(0, 1)]])), (2, cols(3, &[&[(2, 1)]]))]),
        )
        .unwrap();
        let c = is_submodule(&v);
        let w = c.witness.unwrap();
        assert_eq!((w.generator, w.degree), (0, 1));
        assert_eq!(w.image, vec![Scalar::one(), Scalar::zero(), Scalar::zero()]);
        let s = section_values(&v).unwrap();
        let nonzero: Vec<_> = s.iter().filter(|(_, m)| !m.is_zero()).map(|(k, _)| *k).collect();
        assert_eq!(nonzero, vec![(0, 1), (1, 1)]);
        assert!(matches!(tangent_classical(&v), Err(Error::NotASubmodule(_))));
    }

    #[test]
    fn whole_module_has_no_tangent() {
        let v = SubmodulePoint::whole(plane_window());
        assert!(is_submodule(&v).holds);
        assert_eq!(tangent_classical(&v).unwrap().dim, 0);
    }

    #[test]
    fn bottom_generation() {
        let m = Arc::new(GradedModuleWindow::algebra_window(Arc::new(polynomial_ring(2, 5)), 2, 5).unwrap());
        // x^2 in K[x,y]_2
        let v = generate_from_bottom(m.clone(), 2, &cols(3, &[&[(0, 1)]])).unwrap();
        assert_eq!(v.dims().values().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let all = generate_from_bottom(m.clone(), 2, &SparseMatrix::identity(3)).unwrap();
        assert_eq!(all.dims(), m.hilbert_function());
        let none = generate_from_bottom(m, 2, &SparseMatrix::zero(3, 0)).unwrap();
        assert!(none.dims().values().all(|d| *d == 0));
    }
}
