//! The classifier of A∞-actions of `A` on a fixed graded space `V`, as a free
//! graded-commutative dg-algebra.
//!
//! Generators are the matrix entries of indeterminate maps `μ_n : A_+^{⊗n} ⊗ V -> V` of
//! projective degree 0, placed in cohomological degree `1 - n`. The differential of an entry
//! of `μ_n` is the matching entry of the coherence residual `R_n` (see the `ainf` module),
//! with every composite `μ_p(.., μ_q(..))` read as the product of the outer entry and the
//! inner entry. So `d` of the `μ_2` entries cuts out associativity of `μ_1`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::presentation::{add_into, DgaGenerator, FreeDgaPresentation, GcPoly};
use crate::error::Result;
use crate::graded::{BiDegree, GradedAlgebraTruncation};
use crate::homalg::{AInfinityModuleStructure, AugBasis, GradedDims, HomSpace, TensorKey};
use crate::linalg::Scalar;

/// Which generator is which matrix entry: `(n, line, output coordinate)`.
pub type Slot = (usize, TensorKey, usize);

#[derive(Debug, Clone)]
pub struct RactPresentation {
    pub dga: FreeDgaPresentation,
    pub slots: Vec<Slot>,
    index: HashMap<Slot, u32>,
}

fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

fn slot_name(n: usize, key: &TensorKey, l: usize) -> String {
    let a: Vec<String> = key.algebra.iter().map(u32::to_string).collect();
    format!("m{n}[{}|{}:{}>{}]", a.join(","), key.vdeg, key.v, l)
}

/// Builds the classifier up to arity `arity_max` and verifies `d² = 0`.
pub fn build_ract_dga(alg: &Arc<GradedAlgebraTruncation>, space: &GradedDims, arity_max: usize) -> Result<RactPresentation> {
    let p = build_with_signs(alg, space, arity_max, |p, _| sign(p))?;
    FreeDgaPresentation::new(p.dga.generators().to_vec(), (0..p.dga.len()).map(|k| p.dga.differential(k).clone()).collect())?;
    Ok(p)
}

/// Same construction with the sign of the composite `μ_p(.., μ_q(..))` supplied by the caller.
/// No `d² = 0` check.
pub(crate) fn build_with_signs(
    alg: &Arc<GradedAlgebraTruncation>,
    space: &GradedDims,
    arity_max: usize,
    composite_sign: impl Fn(usize, usize) -> Scalar + Sync,
) -> Result<RactPresentation> {
    let aug = AugBasis::new(alg);
    let spaces: Vec<HomSpace> = (0..=arity_max).map(|n| HomSpace::new(&aug, n, space, space)).collect();
    let mut slots = Vec::new();
    let mut generators = Vec::new();
    for n in 1..=arity_max {
        for (e, key) in spaces[n].keys.iter().enumerate() {
            for l in 0..spaces[n].block_dim(e) {
                generators.push(DgaGenerator { name: slot_name(n, key, l), degree: BiDegree::new(0, 1 - n as i64) });
                slots.push((n, key.clone(), l));
            }
        }
    }
    let index: HashMap<Slot, u32> = slots.iter().cloned().enumerate().map(|(i, s)| (s, i as u32)).collect();
    let dga0 = FreeDgaPresentation::unchecked(generators.clone(), vec![GcPoly::new(); generators.len()])?;
    let weight = |a: &[u32]| a.iter().map(|k| aug.degree(*k) as i64).sum::<i64>();

    let differential: Vec<GcPoly> = slots
        .par_iter()
        .map(|(n, key, l)| -> Result<GcPoly> {
            let (n, a) = (*n, &key.algebra);
            let mut out = GcPoly::new();
            for i in 0..n.saturating_sub(1) {
                for (b, c) in aug.product(alg, a[i], a[i + 1])? {
                    let mut merged = a[..i].to_vec();
                    merged.push(b);
                    merged.extend_from_slice(&a[i + 2..]);
                    let k = TensorKey { algebra: merged, vdeg: key.vdeg, v: key.v };
                    if let Some(&g) = index.get(&(n - 1, k, *l)) {
                        add_into(&mut out, vec![g], &c * &sign(i));
                    }
                }
            }
            for p in 1..n {
                let inner_key = TensorKey { algebra: a[p..].to_vec(), vdeg: key.vdeg, v: key.v };
                let j = key.vdeg + weight(&a[p..]);
                let s = composite_sign(p, n - p);
                for m in 0..space.dim(j) {
                    let Some(&gi) = index.get(&(n - p, inner_key.clone(), m)) else { continue };
                    let outer_key = TensorKey { algebra: a[..p].to_vec(), vdeg: j, v: m };
                    let Some(&go) = index.get(&(p, outer_key, *l)) else { continue };
                    if let Some((mono, neg)) = dga0.mul_monomials(&[go], &[gi]) {
                        add_into(&mut out, mono, if neg { -s.clone() } else { s.clone() });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let dga = FreeDgaPresentation::unchecked(generators, differential)?;
    Ok(RactPresentation { dga, slots, index })
}

impl RactPresentation {
    pub fn generator(&self, n: usize, key: &TensorKey, l: usize) -> Option<usize> {
        self.index.get(&(n, key.clone(), l)).map(|g| *g as usize)
    }

    /// Coordinates of a structure: generator values read off its `μ_n`.
    pub fn point(&self, s: &AInfinityModuleStructure) -> Vec<Scalar> {
        self.slots
            .iter()
            .map(|(n, key, l)| {
                s.get(*n, key).iter().find(|(r, _)| r == l).map_or_else(Scalar::zero, |(_, x)| x.clone())
            })
            .collect()
    }
}

/// `d` of the degree −1 generators with every generator of negative degree set to zero:
/// polynomials in the degree-0 generators cutting out `π₀`.
pub fn pi0_ideal(p: &FreeDgaPresentation) -> Vec<GcPoly> {
    p.generators_in_degree(-1)
        .into_iter()
        .map(|k| {
            p.differential(k)
                .iter()
                .filter(|(m, _)| m.iter().all(|x| p.generators()[*x as usize].degree.cohomological == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect()
        })
        .filter(|q: &GcPoly| !q.is_empty())
        .collect()
}

/// Whether every polynomial of `ideal` vanishes at `values`.
pub fn vanishes_at(p: &FreeDgaPresentation, ideal: &[GcPoly], values: &[Scalar]) -> bool {
    ideal.iter().all(|q| p.evaluate(q, values).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraElement;
    use crate::Error;

    /// Non-unital `span{e, .., e^k}` in degree 0 with `e^{k+1} = 0`.
    fn truncated_nilpotent(k: usize) -> Arc<GradedAlgebraTruncation> {
        let names = (1..=k).map(|i| format!("e^{i}")).collect();
        Arc::new(
            GradedAlgebraTruncation::from_product_fn(
                vec![names],
                false,
                true,
                vec![AlgebraElement { degree: 0, coords: (0..k).map(|i| Scalar::from_int((i == 0) as i64)).collect() }],
                move |_, a, _, b| if a + b + 1 < k { vec![(a + b + 1, Scalar::one())] } else { vec![] },
            )
            .unwrap(),
        )
    }

    fn line(dim: usize) -> GradedDims {
        GradedDims { low: 0, dims: vec![dim] }
    }

    #[test]
    fn dual_numbers_on_a_line() {
        let p = build_ract_dga(&truncated_nilpotent(1), &line(1), 3).unwrap();
        let g: Vec<i64> = p.dga.generators().iter().map(|g| g.degree.cohomological).collect();
        assert_eq!(g, vec![0, -1, -2]);
        assert_eq!(p.dga.format(p.dga.differential(1)), "-m1[0|0:0>0]^2");
        assert_eq!(pi0_ideal(&p.dga).len(), 1);
    }

    #[test]
    fn dual_numbers_on_a_plane_give_matrix_square() {
        let p = build_ract_dga(&truncated_nilpotent(1), &line(2), 2).unwrap();
        let ideal = pi0_ideal(&p.dga);
        assert_eq!(ideal.len(), 4);
        // entry (l, k) of -G^2 is -Σ_m G[l][m] G[m][k]
        for q in &ideal {
            assert!(q.keys().all(|m| m.len() == 2));
            assert!(q.values().all(|c| *c == -Scalar::one()));
        }
    }

    #[test]
    fn higher_arities_square_to_zero() {
        for (k, dim, arity) in [(2, 2, 4), (3, 1, 5), (2, 3, 3)] {
            build_ract_dga(&truncated_nilpotent(k), &line(dim), arity).unwrap();
        }
    }

    #[test]
    fn alternative_composite_sign_breaks_d_squared() {
        // the reading with (-1)^{p q} on μ_p ∘ μ_q
        let alg = truncated_nilpotent(2);
        let check = |arity| {
            let p = build_with_signs(&alg, &line(2), arity, |p, q| sign(p * q)).unwrap();
            let gens = p.dga.generators().to_vec();
            let diff = (0..p.dga.len()).map(|k| p.dga.differential(k).clone()).collect();
            FreeDgaPresentation::new(gens, diff)
        };
        assert!(check(2).is_ok());
        assert!(matches!(check(3), Err(Error::SignError(_))));
    }

    #[test]
    fn trivial_cases() {
        let zero_aug = Arc::new(
            GradedAlgebraTruncation::from_product_fn(vec![vec!["1".into()]], true, true, vec![], |_, _, _, _| {
                vec![(0, Scalar::one())]
            })
            .unwrap(),
        );
        assert!(build_ract_dga(&zero_aug, &line(2), 3).unwrap().dga.is_empty());
        let plane = Arc::new(crate::graded::test_fixtures::polynomial_ring(2, 3));
        assert!(build_ract_dga(&plane, &GradedDims { low: 1, dims: vec![1] }, 3).unwrap().dga.is_empty());
    }
}
