use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::bar::{tuples, AugBasis, GradedDims};
use super::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::graded::GradedModuleWindow;
use crate::ingest::{module_from_presentation, CoordinateRing, ModulePresentation, Polynomial};
use crate::linalg::{Scalar, SparseMatrix};

/// Basis line `p ⊗ a_1 ⊗ ... ⊗ a_n ⊗ q`, with `p`, `q` given as (degree, index).
type Line = ((i64, usize), Vec<u32>, (i64, usize));

fn lines(aug: &AugBasis, n: usize, p: &GradedDims, q: &GradedDims, t: i64) -> Vec<Line> {
    let mut out = Vec::new();
    if p.dims.is_empty() || q.dims.is_empty() {
        return out;
    }
    let max_sum = t - p.low - q.low;
    if max_sum < 0 {
        return out;
    }
    for (a, s) in tuples(aug, n, max_sum) {
        for j in p.degrees() {
            let l = t - s - j;
            if q.dim(l) == 0 {
                continue;
            }
            for x in 0..p.dim(j) {
                for y in 0..q.dim(l) {
                    out.push(((j, x), a.clone(), (l, y)));
                }
            }
        }
    }
    out
}

/// The bar complex `P ⊗ A_+^{⊗n} ⊗ Q` in total degree `t`, arities `0..=n_max`, placed in
/// cohomological degrees `-n_max..=0`. The algebra must be commutative so that `P` is also
/// a right module.
pub fn tor_bar_complex(p: &GradedModuleWindow, q: &GradedModuleWindow, n_max: usize, t: i64) -> Result<CochainComplex> {
    let alg = p.algebra();
    if !alg.is_commutative() {
        return Err(Error::Validation("the bar tensor complex needs a commutative algebra".into()));
    }
    let aug = AugBasis::new(alg);
    let (pd, qd) = (GradedDims::of(p), GradedDims::of(q));
    let bases: Vec<Vec<Line>> = (0..=n_max).map(|n| lines(&aug, n, &pd, &qd, t)).collect();
    let index: Vec<HashMap<&Line, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, l)| (l, i)).collect()).collect();
    let sign = |k: usize| if k.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };

    let mut diffs = Vec::new();
    for n in (1..=n_max).rev() {
        let cols: Vec<Vec<(usize, Scalar)>> = bases[n]
            .par_iter()
            .map(|((j, x), a, (l, y))| -> Result<Vec<(usize, Scalar)>> {
                let mut col = Vec::new();
                let tgt = &index[n - 1];
                // p a_1
                let (d1, e1) = aug.elems[a[0] as usize];
                if let Some(m) = p.act(d1, e1, *j) {
                    for (r, c) in m.column(*x) {
                        let key = ((j + d1 as i64, *r), a[1..].to_vec(), (*l, *y));
                        if let Some(&k) = tgt.get(&key) {
                            col.push((k, c.clone()));
                        }
                    }
                }
                for i in 0..n - 1 {
                    for (b, c) in aug.product(alg, a[i], a[i + 1])? {
                        let mut merged = a[..i].to_vec();
                        merged.push(b);
                        merged.extend_from_slice(&a[i + 2..]);
                        if let Some(&k) = tgt.get(&((*j, *x), merged, (*l, *y))) {
                            col.push((k, &c * &sign(i + 1)));
                        }
                    }
                }
                let (dn, en) = aug.elems[a[n - 1] as usize];
                if let Some(m) = q.act(dn, en, *l) {
                    for (r, c) in m.column(*y) {
                        let key = ((*j, *x), a[..n - 1].to_vec(), (l + dn as i64, *r));
                        if let Some(&k) = tgt.get(&key) {
                            col.push((k, c * &sign(n)));
                        }
                    }
                }
                Ok(col)
            })
            .collect::<Result<_>>()?;
        diffs.push(SparseMatrix::from_columns(bases[n - 1].len(), cols));
    }
    let dims = (0..=n_max).rev().map(|n| bases[n].len()).collect();
    CochainComplex::new(-(n_max as i64), dims, diffs)
}

/// `Tor_i(P, Q)` in degree `t`.
pub fn tor_bar(p: &GradedModuleWindow, q: &GradedModuleWindow, i: usize, t: i64) -> Result<usize> {
    Ok(tor_bar_complex(p, q, i + 1, t)?.cohomology(-(i as i64)))
}

/// `Tor_i(A/Y, A/Z)` in each degree `0..=max_degree`, both quotients built from the ring.
pub fn derived_intersection(
    ring: &CoordinateRing,
    gens_y: &[Polynomial],
    gens_z: &[Polynomial],
    i: usize,
    max_degree: i64,
) -> Result<BTreeMap<i64, usize>> {
    let quotient = |gens: &[Polynomial]| {
        let mp = ModulePresentation {
            generator_degrees: vec![0],
            relations: gens.iter().map(|g| vec![g.clone()]).collect(),
            low: 0,
            high: max_degree,
        };
        module_from_presentation(ring, &mp)
    };
    let (p, q) = (quotient(gens_y)?, quotient(gens_z)?);
    (0..=max_degree).map(|t| Ok((t, tor_bar(&p, &q, i, t)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::IdealPresentation;

    fn ring(n: usize, d: usize) -> CoordinateRing {
        CoordinateRing::new(&IdealPresentation::new(n, vec![], d).unwrap()).unwrap()
    }

    fn polys(s: &[&str], n: usize) -> Vec<Polynomial> {
        s.iter().map(|x| Polynomial::parse(x, n).unwrap()).collect()
    }

    #[test]
    fn residue_field_of_line() {
        let r = ring(1, 4);
        let k = polys(&["x0"], 1);
        let t0 = derived_intersection(&r, &k, &k, 0, 4).unwrap();
        let t1 = derived_intersection(&r, &k, &k, 1, 4).unwrap();
        let t2 = derived_intersection(&r, &k, &k, 2, 4).unwrap();
        assert_eq!(t0, BTreeMap::from([(0, 1), (1, 0), (2, 0), (3, 0), (4, 0)]));
        assert_eq!(t1, BTreeMap::from([(0, 0), (1, 1), (2, 0), (3, 0), (4, 0)]));
        assert!(t2.values().all(|v| *v == 0));
    }

    #[test]
    fn transverse_lines() {
        let r = ring(2, 4);
        let (y, z) = (polys(&["x0"], 2), polys(&["x1"], 2));
        let t0 = derived_intersection(&r, &y, &z, 0, 4).unwrap();
        assert_eq!(t0.values().copied().collect::<Vec<_>>(), vec![1, 0, 0, 0, 0]);
        assert!(derived_intersection(&r, &y, &z, 1, 4).unwrap().values().all(|v| *v == 0));
    }
}
