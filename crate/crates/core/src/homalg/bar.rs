use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::graded::{GradedAlgebraTruncation, GradedModuleWindow};
use crate::linalg::{Scalar, SparseMatrix};

/// Dimensions of a graded space on a window, without any structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDims {
    pub low: i64,
    pub dims: Vec<usize>,
}

impl GradedDims {
    pub fn of(m: &GradedModuleWindow) -> Self {
        GradedDims { low: m.low(), dims: m.degrees().map(|j| m.dim(j)).collect() }
    }

    pub fn high(&self) -> i64 {
        self.low + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, j: i64) -> usize {
        if j < self.low || j > self.high() {
            0
        } else {
            self.dims[(j - self.low) as usize]
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.low..=self.high()
    }
}

/// Basis of the augmentation ideal `A_+`, numbered consecutively.
#[derive(Debug, Clone)]
pub struct AugBasis {
    pub elems: Vec<(usize, usize)>,
    pos: Vec<Vec<u32>>,
}

impl AugBasis {
    pub fn new(alg: &GradedAlgebraTruncation) -> Self {
        let elems = alg.augmentation_basis();
        let mut pos: Vec<Vec<u32>> = (0..=alg.max_degree()).map(|d| vec![u32::MAX; alg.dim(d)]).collect();
        for (k, (d, a)) in elems.iter().enumerate() {
            pos[*d][*a] = k as u32;
        }
        AugBasis { elems, pos }
    }

    pub fn degree(&self, k: u32) -> usize {
        self.elems[k as usize].0
    }

    pub fn position(&self, degree: usize, index: usize) -> u32 {
        self.pos[degree][index]
    }

    /// Product of two augmentation basis elements, in augmentation positions.
    pub fn product(&self, alg: &GradedAlgebraTruncation, x: u32, y: u32) -> Result<Vec<(u32, Scalar)>> {
        let (i, a) = self.elems[x as usize];
        let (j, b) = self.elems[y as usize];
        let p = alg.product(i, a, j, b).ok_or(Error::WindowTooShort { degree: (i + j) as i64 })?;
        Ok(p.iter().map(|(c, v)| (self.pos[i + j][*c], v.clone())).collect())
    }
}

/// All sequences of `n` augmentation basis elements whose degrees sum to at most `max_sum`,
/// with that sum, in lexicographic order.
pub fn tuples(aug: &AugBasis, n: usize, max_sum: i64) -> Vec<(Vec<u32>, i64)> {
    let mut out: Vec<(Vec<u32>, i64)> = vec![(Vec::new(), 0)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (t, s) in &out {
            for k in 0..aug.elems.len() as u32 {
                let d = s + aug.degree(k) as i64;
                if d <= max_sum {
                    let mut t2 = t.clone();
                    t2.push(k);
                    next.push((t2, d));
                }
            }
        }
        out = next;
    }
    out
}

/// One basis line `a_1 ⊗ ... ⊗ a_n ⊗ v` of `A_+^{⊗n} ⊗ V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey {
    pub algebra: Vec<u32>,
    pub vdeg: i64,
    pub v: usize,
}

/// Coordinates on `Hom^0(A_+^{⊗n} ⊗ V, N)`: one block of size `dim N_s` for every basis
/// line of total degree `s`.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub arity: usize,
    pub keys: Vec<TensorKey>,
    pub degrees: Vec<i64>,
    pub offsets: Vec<usize>,
    index: HashMap<TensorKey, usize>,
    pub target: GradedDims,
    pub dim: usize,
}

impl HomSpace {
    pub fn new(aug: &AugBasis, n: usize, source: &GradedDims, target: &GradedDims) -> Self {
        let max_sum = target.high() - source.low;
        let mut keys = Vec::new();
        let mut degrees = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        if max_sum >= 0 && !source.dims.is_empty() && !target.dims.is_empty() {
            for (t, s) in tuples(aug, n, max_sum) {
                for j in source.degrees() {
                    let total = s + j;
                    let nd = target.dim(total);
                    if nd == 0 {
                        continue;
                    }
                    for v in 0..source.dim(j) {
                        keys.push(TensorKey { algebra: t.clone(), vdeg: j, v });
                        degrees.push(total);
                        offsets.push(dim);
                        dim += nd;
                    }
                }
            }
        }
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        HomSpace { arity: n, keys, degrees, offsets, index, target: target.clone(), dim }
    }

    pub fn lookup(&self, key: &TensorKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Coordinate of output basis vector `k` on line `entry`.
    pub fn coord(&self, entry: usize, k: usize) -> usize {
        self.offsets[entry] + k
    }

    pub fn block_dim(&self, entry: usize) -> usize {
        self.target.dim(self.degrees[entry])
    }
}

fn same_algebra(v: &GradedModuleWindow, n: &GradedModuleWindow) -> Result<()> {
    if Arc::ptr_eq(v.algebra(), n.algebra()) || v.algebra() == n.algebra() {
        Ok(())
    } else {
        Err(Error::Validation("modules are over different algebras".into()))
    }
}

fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// The bar cochain differential `Hom^0(A_+^{⊗n}⊗V, N) -> Hom^0(A_+^{⊗(n+1)}⊗V, N)`:
///
/// `(δf)(a_1..a_{n+1}, v) = a_1 f(a_2..a_{n+1}, v) + Σ_i (-1)^i f(..a_i a_{i+1}.., v)
///  + (-1)^{n+1} f(a_1..a_n, a_{n+1} v)`.
pub fn bar_differential(
    aug: &AugBasis,
    src: &HomSpace,
    dst: &HomSpace,
    v: &GradedModuleWindow,
    nmod: &GradedModuleWindow,
) -> Result<SparseMatrix> {
    let alg = v.algebra();
    let n = src.arity;
    assert_eq!(dst.arity, n + 1);
    let rows: Vec<Vec<(usize, usize, Scalar)>> = (0..dst.keys.len())
        .into_par_iter()
        .map(|e| -> Result<Vec<(usize, usize, Scalar)>> {
            let key = &dst.keys[e];
            let nd = dst.block_dim(e);
            let mut out = Vec::new();
            // a_1 acting on f of the tail
            let a1 = key.algebra[0];
            let tail = TensorKey { algebra: key.algebra[1..].to_vec(), vdeg: key.vdeg, v: key.v };
            if let Some(t) = src.lookup(&tail) {
                let (i, a) = aug.elems[a1 as usize];
                let m = nmod.act(i, a, src.degrees[t]).ok_or(Error::WindowTooShort { degree: i as i64 })?;
                for (r, c, x) in m.entries() {
                    out.push((dst.coord(e, r), src.coord(t, c), x.clone()));
                }
            }
            // adjacent products
            for i in 0..n {
                let prod = aug.product(alg, key.algebra[i], key.algebra[i + 1])?;
                for (b, c) in prod {
                    let mut algebra = Vec::with_capacity(n);
                    algebra.extend_from_slice(&key.algebra[..i]);
                    algebra.push(b);
                    algebra.extend_from_slice(&key.algebra[i + 2..]);
                    if let Some(t) = src.lookup(&TensorKey { algebra, vdeg: key.vdeg, v: key.v }) {
                        let c = &c * &sign(i + 1);
                        for k in 0..nd {
                            out.push((dst.coord(e, k), src.coord(t, k), c.clone()));
                        }
                    }
                }
            }
            // last factor acting on v
            let last = key.algebra[n];
            let (i, a) = aug.elems[last as usize];
            let w = key.vdeg + i as i64;
            if let Some(m) = v.act(i, a, key.vdeg) {
                let head = key.algebra[..n].to_vec();
                for (r, x) in m.column(key.v) {
                    if let Some(t) = src.lookup(&TensorKey { algebra: head.clone(), vdeg: w, v: *r }) {
                        let c = x * &sign(n + 1);
                        for k in 0..nd {
                            out.push((dst.coord(e, k), src.coord(t, k), c.clone()));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_triplets(dst.dim, src.dim, rows.into_iter().flatten()))
}

/// Terms `C^lo .. C^hi` of the reduced bar Hom complex `Hom^0(A_+^{⊗n} ⊗ V, N)`.
pub fn bar_hom_terms(v: &GradedModuleWindow, n: &GradedModuleWindow, lo: usize, hi: usize) -> Result<CochainComplex> {
    same_algebra(v, n)?;
    let aug = AugBasis::new(v.algebra());
    let (sd, td) = (GradedDims::of(v), GradedDims::of(n));
    let spaces: Vec<HomSpace> = (lo..=hi).map(|k| HomSpace::new(&aug, k, &sd, &td)).collect();
    let diffs = spaces
        .windows(2)
        .map(|w| bar_differential(&aug, &w[0], &w[1], v, n))
        .collect::<Result<Vec<_>>>()?;
    CochainComplex::new(lo as i64, spaces.iter().map(|s| s.dim).collect(), diffs)
}

/// The bar Hom complex with terms `0..=n_max`. For a unital graded algebra the terms vanish
/// beyond arity `high(N) - low(V)`.
pub fn bar_hom_complex(v: &GradedModuleWindow, n: &GradedModuleWindow, n_max: usize) -> Result<CochainComplex> {
    bar_hom_terms(v, n, 0, n_max)
}

#[derive(Debug, Clone)]
pub struct ExtClass {
    pub dim: usize,
    /// Cocycles in `Hom^0(A_+^{⊗i} ⊗ V, N)` representing a basis.
    pub representatives: SparseMatrix,
}

/// `Ext^i(V, N)` (in the graded case `Ext^{i,0}`) from three consecutive bar terms.
pub fn ext_bar(v: &GradedModuleWindow, n: &GradedModuleWindow, i: usize) -> Result<ExtClass> {
    let lo = i.saturating_sub(1);
    let c = bar_hom_terms(v, n, lo, i + 1)?;
    let i = i as i64;
    Ok(ExtClass { dim: c.cohomology(i), representatives: c.cohomology_basis(i) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;
    use crate::graded::AlgebraElement;

    /// span{e} with e^2 = 0 in degree 0, no unit; K with e acting by zero.
    fn nilpotent_line() -> (Arc<GradedAlgebraTruncation>, GradedModuleWindow) {
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
        let k = GradedModuleWindow::from_action_fn(a.clone(), 0, vec![vec!["v".into()]], |_, _, _, _| vec![]).unwrap();
        (a, k)
    }

    #[test]
    fn dual_numbers_bar_terms() {
        let (_, k) = nilpotent_line();
        let c = bar_hom_complex(&k, &k, 6).unwrap();
        for i in 0..=6 {
            assert_eq!(c.dim(i), 1);
        }
        for i in 0..=5 {
            assert!(c.differential(i).unwrap().is_zero());
            assert_eq!(ext_bar(&k, &k, i as usize).unwrap().dim, 1);
        }
    }

    #[test]
    fn zero_target() {
        let (a, k) = nilpotent_line();
        let z = GradedModuleWindow::zero(a);
        let c = bar_hom_complex(&k, &z, 3).unwrap();
        assert!((0..=3).all(|i| c.dim(i) == 0));
    }

    #[test]
    fn graded_terms_vanish_past_width() {
        let a = Arc::new(polynomial_ring(2, 3));
        let m = GradedModuleWindow::algebra_window(a, 1, 3).unwrap();
        let c = bar_hom_complex(&m, &m, 4).unwrap();
        assert!(c.dim(2) > 0);
        assert_eq!(c.dim(3), 0);
        assert_eq!(c.dim(4), 0);
        assert_eq!(ext_bar(&m, &m, 0).unwrap().dim, 1);
    }
}
