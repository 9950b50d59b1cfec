//! Tangent complexes at a point: of the action classifier, of the space of A-linear maps,
//! and of the space of submodules.
//!
//! For a submodule `V ⊆ M` write `X^n = Hom^0(A_+^{⊗n} ⊗ V, V)` and
//! `Y^n = Hom^0(A_+^{⊗n} ⊗ V, M)` with their bar differentials. The tangent complex is the
//! cone with term `i` equal to `X^{i+1} ⊕ Y^i` and `d(x, y) = (-δx, ιx + δy)`, where `ι` is
//! composition with the inclusion. It starts at `i = -1` with `X^0 = End^0(V)`, the
//! infinitesimal changes of basis of `V`; dropping that term would leave `End^0(V)` inside
//! `H^0`. With it, `H^{-1} = 0` and `H^i = Ext^i(V, M/V)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{GradedModuleWindow, SubmodulePoint};
use crate::homalg::{
    bar_differential, bar_hom_terms, check_ainf_module, ext_free, hom_direct, AInfinityModuleStructure, AugBasis,
    CochainComplex, GradedDims, HomSpace,
};
use crate::linalg::{Scalar, SparseMatrix};
use crate::quot::{extend_submodule, is_submodule, QuotProblem};

#[derive(Debug, Clone, Serialize)]
pub struct TangentComplexReport {
    #[serde(skip)]
    pub complex: CochainComplex,
    pub cohomology: BTreeMap<i64, usize>,
    pub oracle: BTreeMap<i64, usize>,
    /// Cohomology on each window `[p, q']` tried, when the window was widened.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub windows: BTreeMap<i64, BTreeMap<i64, usize>>,
    pub pass: bool,
}

impl TangentComplexReport {
    fn new(complex: CochainComplex, cohomology: BTreeMap<i64, usize>, oracle: BTreeMap<i64, usize>) -> Self {
        let pass = cohomology == oracle;
        TangentComplexReport { complex, cohomology, oracle, windows: BTreeMap::new(), pass }
    }
}

/// The genuine module underlying a structure whose higher components vanish.
pub fn module_of_action(s: &AInfinityModuleStructure) -> Result<GradedModuleWindow> {
    for n in 2..=s.arity() {
        if s.keys(n).iter().any(|k| !s.get(n, k).is_empty()) {
            return Err(Error::NotAnAction(format!("μ_{n} is nonzero; only genuine actions are supported")));
        }
    }
    let alg = s.algebra().clone();
    let space = s.space().clone();
    let names = space.degrees().map(|j| (0..space.dim(j)).map(|k| format!("v{j}_{k}")).collect()).collect();
    let aug = s.aug().clone();
    let unital = alg.is_unital();
    GradedModuleWindow::from_action_fn(alg, space.low, names, move |i, a, j, m| {
        if unital && i == 0 {
            return vec![(m, Scalar::one())];
        }
        let key = crate::homalg::TensorKey { algebra: vec![aug.position(i, a)], vdeg: j, v: m };
        s.get(1, &key).to_vec()
    })
}

/// Tangent complex of the action classifier at a genuine action: term `i` is
/// `Hom^0(A_+^{⊗(i+1)} ⊗ V, V)`, `0 <= i < arity_max`. Reported for `i <= arity_max - 2`, against
/// `Z^1` for `i = 0` and `Ext^{i+1}(V, V)` above.
pub fn tangent_ract(s: &AInfinityModuleStructure, arity_max: usize) -> Result<TangentComplexReport> {
    if arity_max < 2 {
        return Err(Error::Validation("the tangent complex needs arity at least 2".into()));
    }
    let rep = check_ainf_module(s, 2.max(s.arity()))?;
    if let Some(n) = rep.first_failure() {
        return Err(Error::NotAnAction(format!("coherence fails at arity {n}")));
    }
    let v = module_of_action(s)?;
    let c = bar_hom_terms(&v, &v, 1, arity_max)?.shift(1);
    let cohomology: BTreeMap<i64, usize> = (0..=arity_max as i64 - 2).map(|i| (i, c.cohomology(i))).collect();
    // Z^1 = Ext^1 + B^1, B^1 = C^0 / Hom_A(V, V)
    let c0 = bar_hom_terms(&v, &v, 0, 0)?.dim(0);
    let mut oracle = BTreeMap::from([(0, ext_free(&v, &v, 1)? + c0 - hom_direct(&v, &v)?)]);
    for i in 1..=arity_max as i64 - 2 {
        oracle.insert(i, ext_free(&v, &v, i as usize + 1)?);
    }
    Ok(TangentComplexReport::new(c, cohomology, oracle))
}

/// Coordinates of a degree-0 map `f : V -> M` (one matrix per degree) in `Hom^0(V, M)`.
fn map_coordinates(space: &HomSpace, f: &BTreeMap<i64, SparseMatrix>) -> Result<Vec<(usize, Scalar)>> {
    let mut out = Vec::new();
    for (e, key) in space.keys.iter().enumerate() {
        let Some(m) = f.get(&key.vdeg) else { continue };
        if m.rows() != space.block_dim(e) {
            return Err(Error::DimensionMismatch(format!("f in degree {} has the wrong shape", key.vdeg)));
        }
        for (r, x) in m.column(key.v) {
            out.push((space.coord(e, *r), x.clone()));
        }
    }
    Ok(out)
}

/// Cone of `K -> Hom^0(Bar^{≥1} V, M)`, `1 ↦ δf`: term 0 is `K`, term `n >= 1` is
/// `Hom^0(A_+^{⊗n} ⊗ V, M)`. The first differential is the linearity defect
/// `(δf)(a, v) = a f(v) - f(a v)`, so `H^0 = K` exactly when `f` is A-linear.
pub fn rlin_cone(
    v: &GradedModuleWindow,
    m: &GradedModuleWindow,
    f: &BTreeMap<i64, SparseMatrix>,
    n_max: usize,
) -> Result<CochainComplex> {
    let aug = AugBasis::new(v.algebra());
    let (vd, md) = (GradedDims::of(v), GradedDims::of(m));
    let h0 = HomSpace::new(&aug, 0, &vd, &md);
    let h1 = HomSpace::new(&aug, 1, &vd, &md);
    let x = SparseMatrix::from_columns(h0.dim, vec![map_coordinates(&h0, f)?]);
    let first = bar_differential(&aug, &h0, &h1, v, m)?.mul(&x);
    let rest = bar_hom_terms(v, m, 1, n_max.max(1))?;
    let mut dims = vec![1];
    let mut diffs = vec![first];
    for i in 1..=rest.high() {
        dims.push(rest.dim(i));
        if let Some(d) = rest.differential(i) {
            diffs.push(d.clone());
        }
    }
    CochainComplex::new(0, dims, diffs)
}

/// The matrix of composition with `V ⊆ M`, `X^n -> Y^n`.
fn inclusion(x: &HomSpace, y: &HomSpace, sub: &SubmodulePoint) -> SparseMatrix {
    let mut trip = Vec::new();
    for (e, key) in x.keys.iter().enumerate() {
        let Some(ey) = y.lookup(key) else { continue };
        let b = sub.basis(x.degrees[e]);
        for (r, k, c) in b.entries() {
            trip.push((y.coord(ey, r), x.coord(e, k), c.clone()));
        }
    }
    SparseMatrix::from_triplets(y.dim, x.dim, trip)
}

/// Tangent complex of the space of submodules at `V`, terms `-1..=i_max + 1`, checked against
/// `Ext^i(V, M/V)` for `0 <= i <= i_max` and `H^{-1} = 0`.
pub fn tangent_rg_cone(sub: &SubmodulePoint, i_max: usize) -> Result<TangentComplexReport> {
    if let Some(w) = is_submodule(sub).witness {
        return Err(Error::NotASubmodule(format!("generator {} leaves V in degree {}", w.generator, w.degree)));
    }
    let m = sub.ambient();
    let v = sub.induced_module()?;
    let q = sub.quotient()?.module;
    let aug = AugBasis::new(m.algebra());
    let (vd, md) = (GradedDims::of(&v), GradedDims::of(m));
    let top = i_max + 1;
    let xs: Vec<HomSpace> = (0..=top + 1).map(|n| HomSpace::new(&aug, n, &vd, &vd)).collect();
    let ys: Vec<HomSpace> = (0..=top).map(|n| HomSpace::new(&aug, n, &vd, &md)).collect();
    let dx = (0..=top).map(|n| bar_differential(&aug, &xs[n], &xs[n + 1], &v, &v)).collect::<Result<Vec<_>>>()?;
    let dy = (0..top).map(|n| bar_differential(&aug, &ys[n], &ys[n + 1], &v, m)).collect::<Result<Vec<_>>>()?;
    let iota: Vec<SparseMatrix> = (0..=top).map(|n| inclusion(&xs[n], &ys[n], sub)).collect();
    let minus = -Scalar::one();

    // term i (i from -1) is X^{i+1} ⊕ Y^i; index k = i + 1
    let mut dims = vec![xs[0].dim];
    let mut diffs = Vec::new();
    let neg_dx0 = dx[0].scale(&minus);
    diffs.push(SparseMatrix::block(&[xs[1].dim, ys[0].dim], &[xs[0].dim], &[vec![Some(&neg_dx0)], vec![Some(&iota[0])]]));
    for k in 1..=top + 1 {
        // from X^k ⊕ Y^{k-1} to X^{k+1} ⊕ Y^k
        dims.push(xs[k].dim + ys[k - 1].dim);
        if k <= top {
            let neg = dx[k].scale(&minus);
            diffs.push(SparseMatrix::block(
                &[xs[k + 1].dim, ys[k].dim],
                &[xs[k].dim, ys[k - 1].dim],
                &[vec![Some(&neg), None], vec![Some(&iota[k]), Some(&dy[k - 1])]],
            ));
        }
    }
    let complex = CochainComplex::new(-1, dims, diffs).map_err(|e| match e {
        Error::SignError(s) => Error::SignError(format!("assembled cone: {s}")),
        other => other,
    })?;
    let cohomology: BTreeMap<i64, usize> = (-1..=i_max as i64).map(|i| (i, complex.cohomology(i))).collect();
    let mut oracle = BTreeMap::from([(-1, 0)]);
    for i in 0..=i_max {
        oracle.insert(i as i64, ext_free(&v, &q, i)?);
    }
    Ok(TangentComplexReport::new(complex, cohomology, oracle))
}

/// `tangent_rg_cone` at `V` on the problem's window `[p, q]`, repeated on `[p, q + 1]` and
/// `[p, q + 2]` with `V` replaced by the submodule it generates there. Fails with
/// `WindowUnstable` if the cohomology changes.
pub fn derived_quot_tangent(qp: &QuotProblem, v: &SubmodulePoint, i_max: usize) -> Result<TangentComplexReport> {
    let q = qp.ambient().high();
    let mut base = tangent_rg_cone(v, i_max)?;
    base.windows.insert(q, base.cohomology.clone());
    for w in [q + 1, q + 2] {
        let wider = extend_submodule(v, qp.ambient_on(w)?)?;
        let r = tangent_rg_cone(&wider, i_max)?;
        if r.cohomology != base.cohomology {
            return Err(Error::WindowUnstable(format!(
                "[{}, {q}] gives {:?}, [{}, {w}] gives {:?}",
                qp.ambient().low(),
                base.cohomology,
                qp.ambient().low(),
                r.cohomology
            )));
        }
        base.pass &= r.pass;
        base.windows.insert(w, r.cohomology);
    }
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;
    use crate::graded::{AlgebraElement, GradedAlgebraTruncation};
    use crate::ingest::{ideal_submodule, CoordinateRing, IdealPresentation, Polynomial};
    use std::sync::Arc;

    fn dual_numbers_on_line() -> GradedModuleWindow {
        let a = Arc::new(
            GradedAlgebraTruncation::from_product_fn(
                vec![vec!["e".into()]],
                false,
                true,
                vec![AlgebraElement { degree: 0, coords: vec![Scalar::one()] }],
                |_, _, _, _| vec![],
            )
            .unwrap(),
        );
        GradedModuleWindow::from_action_fn(a, 0, vec![vec!["v".into()]], |_, _, _, _| vec![]).unwrap()
    }

    fn point(n: usize, gens: &[&str], p: i64, q: i64) -> SubmodulePoint {
        let ring = CoordinateRing::new(&IdealPresentation::new(n, vec![], (q - p + 1) as usize).unwrap()).unwrap();
        let g: Vec<Polynomial> = gens.iter().map(|s| Polynomial::parse(s, n).unwrap()).collect();
        let whole = ideal_submodule(&ring, &[Polynomial::constant(n, Scalar::one())], p, q).unwrap();
        let ambient = Arc::new(whole.induced_module().unwrap());
        let v = ideal_submodule(&ring, &g, p, q).unwrap();
        // same coordinates: the ambient of `v` is A_{[p,q]} with the monomial basis
        SubmodulePoint::new(ambient, v.ambient().degrees().map(|j| (j, v.basis(j))).collect()).unwrap()
    }

    #[test]
    fn classifier_tangent_at_zero_action() {
        let v = dual_numbers_on_line();
        let s = AInfinityModuleStructure::from_module(&v, 1);
        let r = tangent_ract(&s, 6).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.cohomology, BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]));
    }

    #[test]
    fn classifier_tangent_rejects_non_actions() {
        let v = dual_numbers_on_line();
        let mut s = AInfinityModuleStructure::from_module(&v, 1);
        let key = s.keys(1)[0].clone();
        s.perturb(1, key, 0, &Scalar::one());
        assert!(matches!(tangent_ract(&s, 3), Err(Error::NotAnAction(_))));
    }

    #[test]
    fn linearity_cone() {
        let a = Arc::new(polynomial_ring(1, 3));
        let m = GradedModuleWindow::algebra_window(a, 0, 2).unwrap();
        let id: BTreeMap<i64, SparseMatrix> = m.degrees().map(|j| (j, SparseMatrix::identity(m.dim(j)))).collect();
        let c = rlin_cone(&m, &m, &id, 2).unwrap();
        assert!(c.differential(0).unwrap().is_zero());
        assert_eq!(c.cohomology(0), 1);
        // scale degree 1 by 2: x·1 ↦ 2x but x·f(1) = x
        let mut bad = id.clone();
        bad.insert(1, SparseMatrix::identity(1).scale(&Scalar::from_int(2)));
        let c = rlin_cone(&m, &m, &bad, 2).unwrap();
        assert_eq!(c.cohomology(0), 0);
        let d0 = c.differential(0).unwrap();
        // nonzero exactly on the lines x ⊗ 1 (into degree 1) and x ⊗ x (out of degree 1)
        assert_eq!(d0.nnz(), 2);
    }

    #[test]
    fn whole_module_is_rigid() {
        let v = point(2, &["1"], 0, 3);
        let r = tangent_rg_cone(&v, 2).unwrap();
        assert!(r.cohomology.values().all(|d| *d == 0));
        assert!(r.pass);
    }

    #[test]
    fn line_in_the_plane() {
        let v = point(2, &["x0"], 1, 5);
        let r = tangent_rg_cone(&v, 2).unwrap();
        assert_eq!(r.cohomology, BTreeMap::from([(-1, 0), (0, 1), (1, 0), (2, 0)]));
        assert!(r.pass);
    }

    #[test]
    fn point_in_projective_plane() {
        let v = point(3, &["x0", "x1"], 1, 6);
        let r = tangent_rg_cone(&v, 2).unwrap();
        assert_eq!(r.cohomology, BTreeMap::from([(-1, 0), (0, 2), (1, 1), (2, 0)]));
        assert!(r.pass);
    }

    #[test]
    fn non_submodule_rejected() {
        let v = point(2, &["x0"], 1, 2);
        let m = v.ambient().clone();
        let bad = SubmodulePoint::new(
            m.clone(),
            BTreeMap::from([(1, v.basis(1)), (2, SparseMatrix::from_columns(3, vec![vec![(2, Scalar::one())]]))]),
        )
        .unwrap();
        assert!(matches!(tangent_rg_cone(&bad, 1), Err(Error::NotASubmodule(_))));
    }
}
