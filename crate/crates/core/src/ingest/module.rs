use std::collections::BTreeMap;
use std::sync::Arc;

use super::poly::{monomial_name, Polynomial};
use super::ring::{CoordinateRing, LinearQuotient};
use crate::error::{Error, Result};
use crate::graded::{GradedModuleWindow, SubmodulePoint};
use crate::linalg::{rref, Scalar, SparseMatrix};

/// A graded module `⊕ A(-d_k) / (relations)` to be stored on the window `[low, high]`.
///
/// Each relation is a vector with one polynomial per free generator; it must be
/// homogeneous: `deg r_k + d_k` is the same for every nonzero entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    pub generator_degrees: Vec<i64>,
    pub relations: Vec<Vec<Polynomial>>,
    pub low: i64,
    pub high: i64,
}

impl ModulePresentation {
    pub fn free(generator_degrees: Vec<i64>, low: i64, high: i64) -> Self {
        ModulePresentation { generator_degrees, relations: Vec::new(), low, high }
    }

    pub fn with_window(&self, low: i64, high: i64) -> Self {
        ModulePresentation { low, high, ..self.clone() }
    }
}

fn relation_degree(ring: &CoordinateRing, gen_degrees: &[i64], r: &[Polynomial]) -> Result<Option<i64>> {
    if r.len() != gen_degrees.len() {
        return Err(Error::InconsistentGrading(format!(
            "relation has {} entries for {} generators",
            r.len(),
            gen_degrees.len()
        )));
    }
    let w = ring.presentation().weights();
    let mut deg = None;
    for (p, d) in r.iter().zip(gen_degrees) {
        match p.homogeneous_degree(w) {
            None => return Err(Error::InconsistentGrading(format!("relation entry {p} is not homogeneous"))),
            Some(None) => {}
            Some(Some(e)) => {
                let t = e as i64 + d;
                if deg.is_some_and(|d0| d0 != t) {
                    return Err(Error::InconsistentGrading("relation mixes degrees".into()));
                }
                deg = Some(t);
            }
        }
    }
    Ok(deg)
}

/// Free module layout in one degree: offset of each generator's block and its size.
fn free_layout(ring: &CoordinateRing, gen_degrees: &[i64], t: i64) -> Result<(Vec<usize>, usize)> {
    let mut offsets = Vec::with_capacity(gen_degrees.len());
    let mut total = 0;
    for d in gen_degrees {
        offsets.push(total);
        let s = t - d;
        if s > ring.max_degree() as i64 {
            return Err(Error::WindowViolation(format!(
                "degree {t} needs A_{s}, beyond the algebra truncation {}",
                ring.max_degree()
            )));
        }
        if s >= 0 {
            total += ring.algebra().dim(s as usize);
        }
    }
    Ok((offsets, total))
}

pub fn module_from_presentation(ring: &CoordinateRing, mp: &ModulePresentation) -> Result<GradedModuleWindow> {
    let alg = ring.algebra().clone();
    if mp.low > mp.high {
        return Ok(GradedModuleWindow::zero(alg));
    }
    let gd = &mp.generator_degrees;
    let rel_degrees: Vec<Option<i64>> =
        mp.relations.iter().map(|r| relation_degree(ring, gd, r)).collect::<Result<_>>()?;

    let mut layouts = BTreeMap::new();
    let mut quotients = BTreeMap::new();
    let mut components = Vec::new();
    for t in mp.low..=mp.high {
        let (offsets, total) = free_layout(ring, gd, t)?;
        let mut rows = Vec::new();
        for (r, e) in mp.relations.iter().zip(&rel_degrees) {
            let Some(e) = *e else { continue };
            if e > t {
                continue;
            }
            let s = (t - e) as usize;
            for m in 0..alg.dim(s) {
                let mono = ring.basis_polynomial(s, m);
                let mut row = Vec::new();
                for (k, p) in r.iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let (_, coords) = ring.reduce(&p.mul(&mono))?;
                    row.extend(coords.into_iter().map(|(i, c)| (offsets[k] + i, c)));
                }
                rows.push(row);
            }
        }
        let q = LinearQuotient::new(total, rows);
        let mut names = Vec::with_capacity(q.dim());
        for &c in &q.standard {
            let k = offsets.iter().rposition(|&o| o <= c).unwrap();
            let s = (t - gd[k]) as usize;
            let mono = monomial_name(ring.standard_monomials(s)[c - offsets[k]].as_slice());
            names.push(if mono == "1" { format!("e{k}") } else { format!("e{k}*{mono}") });
        }
        components.push(names);
        layouts.insert(t, offsets);
        quotients.insert(t, q);
    }

    GradedModuleWindow::from_action_fn(alg.clone(), mp.low, components, |i, a, j, m| {
        let t = j + i as i64;
        let c = quotients[&j].standard[m];
        let offsets = &layouts[&j];
        let k = offsets.iter().rposition(|&o| o <= c).unwrap();
        let s = (j - gd[k]) as usize;
        let prod = alg.product(i, a, s, c - offsets[k]).expect("inside truncation");
        let lifted: Vec<(usize, Scalar)> =
            prod.iter().map(|(r, v)| (layouts[&t][k] + r, v.clone())).collect();
        quotients[&t].reduce(&lifted)
    })
}

/// The graded pieces of the ideal generated by `gens`, inside `A` stored on `[low, high]`.
pub fn ideal_submodule(ring: &CoordinateRing, gens: &[Polynomial], low: i64, high: i64) -> Result<SubmodulePoint> {
    let ambient = Arc::new(GradedModuleWindow::algebra_window(ring.algebra().clone(), low, high)?);
    let w = ring.presentation().weights();
    let mut degs = Vec::new();
    for g in gens {
        match g.homogeneous_degree(w) {
            None => return Err(Error::NotContained(format!("{g} is not homogeneous"))),
            Some(None) => {}
            Some(Some(e)) => degs.push((g, e as i64)),
        }
    }
    let mut bases = BTreeMap::new();
    for t in ambient.degrees() {
        let n = ambient.dim(t);
        let mut cols = Vec::new();
        for (g, e) in &degs {
            if *e > t {
                continue;
            }
            let s = (t - e) as usize;
            for m in 0..ring.algebra().dim(s) {
                let (_, coords) = ring.reduce(&g.mul(&ring.basis_polynomial(s, m)))?;
                cols.push(coords);
            }
        }
        // canonical basis: rows of the reduced echelon form
        let span = rref(&SparseMatrix::from_columns(n, cols).transpose());
        bases.insert(t, SparseMatrix::from_columns(n, span.rows));
    }
    SubmodulePoint::new(ambient, bases)
}
