use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::poly::{monomial_name, monomials_of_degree, Exponents, Polynomial};
use crate::error::{Error, Result};
use crate::graded::{AlgebraElement, GradedAlgebraTruncation};
use crate::linalg::{rref, Rref, Scalar, SparseMatrix};

/// `K[x0..x{n-1}] / (generators)`, to be computed degree by degree up to `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPresentation {
    nvars: usize,
    weights: Vec<u32>,
    generators: Vec<Polynomial>,
    max_degree: usize,
}

impl IdealPresentation {
    /// Standard grading: every variable has degree 1.
    pub fn new(nvars: usize, generators: Vec<Polynomial>, max_degree: usize) -> Result<Self> {
        Self::with_weights(vec![1; nvars], generators, max_degree)
    }

    pub fn with_weights(weights: Vec<u32>, generators: Vec<Polynomial>, max_degree: usize) -> Result<Self> {
        let nvars = weights.len();
        if weights.contains(&0) {
            return Err(Error::InconsistentGrading("variables must have positive degree".into()));
        }
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::InconsistentGrading(format!("generator {g} uses a different variable count")));
            }
            if g.homogeneous_degree(&weights).is_none() {
                return Err(Error::InconsistentGrading(format!("generator {g} is not homogeneous")));
            }
        }
        Ok(IdealPresentation { nvars, weights, generators, max_degree })
    }

    /// Parses generator strings in the variables `x0..x{nvars-1}`.
    pub fn parse(nvars: usize, generators: &[&str], max_degree: usize) -> Result<Self> {
        let gens = generators.iter().map(|s| Polynomial::parse(s, nvars)).collect::<Result<_>>()?;
        Self::new(nvars, gens, max_degree)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// The same ideal truncated at a different degree.
    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        IdealPresentation { max_degree, ..self.clone() }
    }
}

/// A quotient `K^n / span(rows)`, with basis the coordinates that are not pivots of the
/// reduced row echelon form of the relations.
#[derive(Debug)]
pub(crate) struct LinearQuotient {
    reducer: Rref,
    pub(crate) standard: Vec<usize>,
    std_pos: HashMap<usize, usize>,
}

impl LinearQuotient {
    pub(crate) fn new(n: usize, rows: Vec<Vec<(usize, Scalar)>>) -> Self {
        let mat = SparseMatrix::from_columns(n, rows).transpose();
        let reducer = rref(&mat);
        let mut is_pivot = vec![false; n];
        for &p in &reducer.pivots {
            is_pivot[p] = true;
        }
        let standard: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let std_pos = standard.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        LinearQuotient { reducer, standard, std_pos }
    }

    pub(crate) fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Coordinates in the quotient basis of a vector given in ambient coordinates.
    pub(crate) fn reduce(&self, v: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        let mut dense: HashMap<usize, Scalar> = HashMap::new();
        for (c, x) in v {
            *dense.entry(*c).or_insert_with(Scalar::zero) += x;
        }
        for (row, &p) in self.reducer.rows.iter().zip(&self.reducer.pivots) {
            if let Some(s) = dense.remove(&p) {
                for (c, x) in &row[1..] {
                    let slot = dense.entry(*c).or_insert_with(Scalar::zero);
                    *slot -= &(&s * x);
                }
            }
        }
        let mut out: Vec<(usize, Scalar)> = dense
            .into_iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (self.std_pos[&c], x))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// Per-degree data of `S/I`: all monomials and the quotient by `I_d`. The standard
/// monomials (those that are not leading terms of `I_d`) form the basis of `A_d`.
#[derive(Debug)]
struct Degree {
    monomials: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
    quotient: LinearQuotient,
}

impl Degree {
    fn reduce(&self, v: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        self.quotient.reduce(v)
    }
}

/// Normal forms for `S/I` in every degree up to the truncation bound, together with the
/// resulting algebra.
#[derive(Debug)]
pub struct CoordinateRing {
    presentation: IdealPresentation,
    degrees: Vec<Degree>,
    algebra: Arc<GradedAlgebraTruncation>,
}

impl CoordinateRing {
    pub fn new(ip: &IdealPresentation) -> Result<Self> {
        let w = &ip.weights;
        let degrees: Vec<Degree> = (0..=ip.max_degree)
            .into_par_iter()
            .map(|d| {
                let monomials = monomials_of_degree(w, d);
                let index: HashMap<Exponents, usize> =
                    monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                let mut rows = Vec::new();
                for g in &ip.generators {
                    let Some(Some(e)) = g.homogeneous_degree(w) else { continue };
                    if e > d {
                        continue;
                    }
                    for m in monomials_of_degree(w, d - e) {
                        let prod = g.mul(&Polynomial::monomial(ip.nvars, m, Scalar::one()));
                        rows.push(prod.terms().map(|(e, c)| (index[e], c.clone())).collect::<Vec<_>>());
                    }
                }
                let quotient = LinearQuotient::new(monomials.len(), rows);
                Degree { monomials, index, quotient }
            })
            .collect();

        let components: Vec<Vec<String>> = degrees
            .iter()
            .map(|deg| deg.quotient.standard.iter().map(|&c| monomial_name(&deg.monomials[c])).collect())
            .collect();
        let generators = (0..ip.nvars)
            .filter(|&k| (w[k] as usize) <= ip.max_degree)
            .map(|k| {
                let d = w[k] as usize;
                let mut e = vec![0; ip.nvars];
                e[k] = 1;
                let coords = degrees[d].reduce(&[(degrees[d].index[&e], Scalar::one())]);
                dense_element(d, components[d].len(), &coords)
            })
            .collect();
        let degs = &degrees;
        let algebra = GradedAlgebraTruncation::from_product_fn(components, true, true, generators, |i, a, j, b| {
            let ma = &degs[i].monomials[degs[i].quotient.standard[a]];
            let mb = &degs[j].monomials[degs[j].quotient.standard[b]];
            let m: Exponents = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let t = &degs[i + j];
            t.reduce(&[(t.index[&m], Scalar::one())])
        })?;
        Ok(CoordinateRing { presentation: ip.clone(), degrees, algebra: Arc::new(algebra) })
    }

    pub fn presentation(&self) -> &IdealPresentation {
        &self.presentation
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebraTruncation> {
        &self.algebra
    }

    pub fn max_degree(&self) -> usize {
        self.presentation.max_degree
    }

    /// Standard monomials spanning `A_d`, in basis order.
    pub fn standard_monomials(&self, d: usize) -> Vec<Exponents> {
        let deg = &self.degrees[d];
        deg.quotient.standard.iter().map(|&c| deg.monomials[c].clone()).collect()
    }

    /// Image of a homogeneous polynomial in `A`, as sparse coordinates of `A_d`.
    pub fn reduce(&self, p: &Polynomial) -> Result<(usize, Vec<(usize, Scalar)>)> {
        let w = &self.presentation.weights;
        let d = match p.homogeneous_degree(w) {
            None => return Err(Error::NotContained(format!("{p} is not homogeneous"))),
            Some(None) => return Ok((0, Vec::new())),
            Some(Some(d)) => d,
        };
        if p.nvars() != self.presentation.nvars {
            return Err(Error::NotContained(format!("{p} uses a different variable count")));
        }
        if d > self.max_degree() {
            return Err(Error::NotContained(format!("{p} has degree {d} beyond the truncation")));
        }
        let deg = &self.degrees[d];
        let coords: Vec<(usize, Scalar)> = p.terms().map(|(e, c)| (deg.index[e], c.clone())).collect();
        Ok((d, deg.reduce(&coords)))
    }

    /// Like [`reduce`](Self::reduce), as a dense algebra element.
    pub fn element(&self, p: &Polynomial) -> Result<AlgebraElement> {
        let (d, coords) = self.reduce(p)?;
        Ok(dense_element(d, self.algebra.dim(d), &coords))
    }

    /// Polynomial of the standard monomial `a` of `A_d`.
    pub fn basis_polynomial(&self, d: usize, a: usize) -> Polynomial {
        let deg = &self.degrees[d];
        Polynomial::monomial(self.presentation.nvars, deg.monomials[deg.quotient.standard[a]].clone(), Scalar::one())
    }
}

fn dense_element(degree: usize, dim: usize, coords: &[(usize, Scalar)]) -> AlgebraElement {
    let mut v = vec![Scalar::zero(); dim];
    for (i, c) in coords {
        v[*i] = c.clone();
    }
    AlgebraElement { degree, coords: v }
}

pub fn coordinate_algebra(ip: &IdealPresentation) -> Result<GradedAlgebraTruncation> {
    Ok(CoordinateRing::new(ip)?.algebra().as_ref().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::validate_algebra;

    #[test]
    fn conic_dimensions() {
        let ip = IdealPresentation::parse(3, &["x1^2 - x0*x2"], 3).unwrap();
        let a = coordinate_algebra(&ip).unwrap();
        assert_eq!(a.dims(), vec![1, 3, 5, 7]);
        assert!(validate_algebra(&a).is_valid());
        // x0*x2 > x1^2 in the monomial order, so x0*x2 is the leading term
        assert!(!a.basis(2).contains(&"x0*x2".to_string()));
        assert!(a.basis(2).contains(&"x1^2".to_string()));
    }

    #[test]
    fn killing_a_variable() {
        let ip = IdealPresentation::parse(1, &["x0"], 4).unwrap();
        assert_eq!(coordinate_algebra(&ip).unwrap().dims(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn inhomogeneous_generator() {
        assert!(matches!(
            IdealPresentation::parse(2, &["x0^2 - x1"], 3),
            Err(Error::InconsistentGrading(_))
        ));
    }

    #[test]
    fn reduce_modulo_ideal() {
        let ring = CoordinateRing::new(&IdealPresentation::parse(3, &["x1^2 - x0*x2"], 3).unwrap()).unwrap();
        let p = Polynomial::parse("x1^2", 3).unwrap();
        let q = Polynomial::parse("x0*x2", 3).unwrap();
        assert_eq!(ring.reduce(&p).unwrap(), ring.reduce(&q).unwrap());
        assert!(ring.reduce(&Polynomial::parse("x0 + x1^2", 3).unwrap()).is_err());
    }

    #[test]
    fn weighted_grading() {
        let ip = IdealPresentation::with_weights(vec![1, 2], vec![], 4).unwrap();
        assert_eq!(coordinate_algebra(&ip).unwrap().dims(), vec![1, 1, 2, 2, 3]);
    }
}
