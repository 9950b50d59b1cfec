#![allow(dead_code)]

use std::sync::Arc;

use dquot_core::graded::GradedAlgebraTruncation;
use dquot_core::homalg::CochainComplex;
use dquot_core::ingest::{CoordinateRing, IdealPresentation, Polynomial};
use dquot_core::Scalar;

pub fn ring(nvars: usize, max_degree: usize) -> Arc<CoordinateRing> {
    Arc::new(CoordinateRing::new(&IdealPresentation::new(nvars, vec![], max_degree).unwrap()).unwrap())
}

pub fn ring_mod(nvars: usize, relations: &[Polynomial], max_degree: usize) -> Arc<CoordinateRing> {
    Arc::new(CoordinateRing::new(&IdealPresentation::new(nvars, relations.to_vec(), max_degree).unwrap()).unwrap())
}

pub fn mono(exps: &[u32]) -> Polynomial {
    Polynomial::monomial(exps.len(), exps.to_vec(), Scalar::one())
}

pub fn nilpotent(k: usize) -> Arc<GradedAlgebraTruncation> {
    Arc::new(GradedAlgebraTruncation::nilpotent(k).unwrap())
}

/// `d^{i+1} d^i = 0` for every stored pair, by explicit multiplication.
pub fn squares_to_zero(c: &CochainComplex) -> bool {
    (c.low()..c.high()).all(|i| match (c.differential(i), c.differential(i + 1)) {
        (Some(a), Some(b)) => b.mul(a).is_zero(),
        _ => true,
    })
}

/// Monomials of total degree `t` in `n` variables.
pub fn monomials(n: usize, t: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if t == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in (0..=t).rev() {
        for mut rest in monomials(n - 1, t - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `dim (S/I)_t` for a monomial ideal, by counting monomials outside `I`.
pub fn standard_count(n: usize, gens: &[Vec<u32>], t: u32) -> usize {
    monomials(n, t).iter().filter(|m| !gens.iter().any(|g| divides(g, m))).count()
}
