use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::BiDegree;
use crate::linalg::Scalar;

/// A monomial: generator indices in nondecreasing order. Odd generators occur at most once.
pub type Monomial = Vec<u32>;

/// A polynomial in the generators of a free graded-commutative algebra.
pub type GcPoly = BTreeMap<Monomial, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DgaGenerator {
    pub name: String,
    pub degree: BiDegree,
}

/// A free graded-commutative dg-algebra `K[x_1, .., x_r]` with `d` given on generators.
///
/// Monomials are kept sorted; moving two odd generators past each other costs a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDgaPresentation {
    generators: Vec<DgaGenerator>,
    differential: Vec<GcPoly>,
    odd: Vec<bool>,
}

pub fn add_into(acc: &mut GcPoly, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn poly_add(p: &GcPoly, q: &GcPoly) -> GcPoly {
    let mut out = p.clone();
    for (m, c) in q {
        add_into(&mut out, m.clone(), c.clone());
    }
    out
}

pub fn poly_scale(p: &GcPoly, s: &Scalar) -> GcPoly {
    if s.is_zero() {
        return GcPoly::new();
    }
    p.iter().map(|(m, c)| (m.clone(), c * s)).collect()
}

pub fn poly_sub(p: &GcPoly, q: &GcPoly) -> GcPoly {
    poly_add(p, &poly_scale(q, &-Scalar::one()))
}

pub fn constant(c: Scalar) -> GcPoly {
    let mut p = GcPoly::new();
    add_into(&mut p, Vec::new(), c);
    p
}

pub fn generator(k: u32) -> GcPoly {
    GcPoly::from([(vec![k], Scalar::one())])
}

impl FreeDgaPresentation {
    /// Checks the degree conditions and `d² = 0`.
    pub fn new(generators: Vec<DgaGenerator>, differential: Vec<GcPoly>) -> Result<Self> {
        let p = Self::unchecked(generators, differential)?;
        let bad = p.square_failures();
        if let Some(&k) = bad.first() {
            return Err(Error::SignError(format!(
                "d² is nonzero on generator {} ({} generators fail)",
                p.generators[k].name,
                bad.len()
            )));
        }
        Ok(p)
    }

    /// Checks degrees but not `d² = 0`.
    pub fn unchecked(generators: Vec<DgaGenerator>, differential: Vec<GcPoly>) -> Result<Self> {
        if generators.len() != differential.len() {
            return Err(Error::DimensionMismatch("one differential per generator".into()));
        }
        let odd = generators.iter().map(|g| g.degree.is_odd()).collect();
        let p = FreeDgaPresentation { generators, differential, odd };
        for (k, g) in p.generators.iter().enumerate() {
            if g.degree.cohomological > 0 {
                return Err(Error::InconsistentGrading(format!("generator {} has positive degree", g.name)));
            }
            for m in p.differential[k].keys() {
                if m.iter().any(|x| *x as usize >= p.generators.len()) {
                    return Err(Error::Validation(format!("d({}) uses an unknown generator", g.name)));
                }
                let d = p.degree(m);
                if d != BiDegree::new(g.degree.projective, g.degree.cohomological + 1) {
                    return Err(Error::InconsistentGrading(format!(
                        "d({}) has a term of bidegree ({}, {})",
                        g.name, d.projective, d.cohomological
                    )));
                }
            }
        }
        Ok(p)
    }

    /// The algebra with no generators.
    pub fn trivial() -> Self {
        FreeDgaPresentation { generators: vec![], differential: vec![], odd: vec![] }
    }

    pub fn generators(&self) -> &[DgaGenerator] {
        &self.generators
    }

    pub fn differential(&self, k: usize) -> &GcPoly {
        &self.differential[k]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree(&self, m: &[u32]) -> BiDegree {
        let mut d = BiDegree::new(0, 0);
        for x in m {
            let g = self.generators[*x as usize].degree;
            d.projective += g.projective;
            d.cohomological += g.cohomological;
        }
        d
    }

    fn is_odd(&self, x: u32) -> bool {
        self.odd[x as usize]
    }

    /// Product of two monomials as a signed normal-form monomial, or `None` when an odd
    /// generator repeats.
    pub fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        // odd elements of `a` not yet emitted
        let mut odd_left: usize = a.iter().filter(|x| self.is_odd(**x)).count();
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] <= b[j]) {
                if self.is_odd(a[i]) {
                    odd_left -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if self.is_odd(b[j]) && odd_left % 2 == 1 {
                    negative = !negative;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        if out.windows(2).any(|w| w[0] == w[1] && self.is_odd(w[0])) {
            return None;
        }
        Some((out, negative))
    }

    pub fn mul(&self, p: &GcPoly, q: &GcPoly) -> GcPoly {
        let mut out = GcPoly::new();
        for (a, x) in p {
            for (b, y) in q {
                if let Some((m, neg)) = self.mul_monomials(a, b) {
                    let c = x * y;
                    add_into(&mut out, m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Applies a degree-`deg` derivation given on generators by `on_gen`:
    /// `D(x_1 .. x_k) = Σ_j (-1)^{deg (|x_1| + .. + |x_{j-1}|)} x_1 .. D(x_j) .. x_k`.
    pub fn apply_derivation(&self, p: &GcPoly, deg_odd: bool, on_gen: impl Fn(u32) -> GcPoly) -> GcPoly {
        let mut out = GcPoly::new();
        for (m, c) in p {
            let mut before_odd = false;
            for j in 0..m.len() {
                let image = on_gen(m[j]);
                if !image.is_empty() {
                    let left = GcPoly::from([(m[..j].to_vec(), Scalar::one())]);
                    let right = GcPoly::from([(m[j + 1..].to_vec(), Scalar::one())]);
                    let mut term = self.mul(&self.mul(&left, &image), &right);
                    if deg_odd && before_odd {
                        term = poly_scale(&term, &-Scalar::one());
                    }
                    for (mm, cc) in term {
                        add_into(&mut out, mm, &cc * c);
                    }
                }
                before_odd ^= self.is_odd(m[j]);
            }
        }
        out
    }

    pub fn apply_d(&self, p: &GcPoly) -> GcPoly {
        self.apply_derivation(p, true, |x| self.differential[x as usize].clone())
    }

    /// Generators on which `d²` does not vanish.
    pub fn square_failures(&self) -> Vec<usize> {
        (0..self.generators.len())
            .into_par_iter()
            .filter(|k| !self.apply_d(&self.differential[*k]).is_empty())
            .collect()
    }

    /// Value at a point where generator `k` takes `values[k]`.
    pub fn evaluate(&self, p: &GcPoly, values: &[Scalar]) -> Scalar {
        p.iter()
            .map(|(m, c)| m.iter().fold(c.clone(), |acc, x| &acc * &values[*x as usize]))
            .sum()
    }

    /// Generators of a given cohomological degree.
    pub fn generators_in_degree(&self, deg: i64) -> Vec<usize> {
        (0..self.len()).filter(|k| self.generators[*k].degree.cohomological == deg).collect()
    }

    /// Inverse of [`format`](Self::format): signed terms of `*`-separated factors, each a
    /// rational constant or a generator name with an optional `^k`. Factors multiply left to
    /// right, so the order of odd generators matters.
    pub fn parse(&self, s: &str) -> Result<GcPoly> {
        let err = |msg: String| Error::Parse(format!("{msg} in `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if i == 0 {
                    negative = ch == '-';
                    continue;
                }
                if current.is_empty() {
                    return Err(err("dangling sign".into()));
                }
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(err("dangling sign".into()));
        }
        terms.push((negative, current));
        let mut out = GcPoly::new();
        for (neg, term) in terms {
            let mut acc = constant(if neg { -Scalar::one() } else { Scalar::one() });
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor".into()));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    let c: Scalar = factor.parse().map_err(|_| err(format!("bad coefficient `{factor}`")))?;
                    acc = poly_scale(&acc, &c);
                    continue;
                }
                let (name, pow) = match factor.rsplit_once('^') {
                    Some((n, k)) if self.position(n).is_some() => {
                        (n, k.parse::<u32>().map_err(|_| err(format!("bad exponent in `{factor}`")))?)
                    }
                    _ => (factor, 1),
                };
                let k = self.position(name).ok_or_else(|| err(format!("unknown generator `{name}`")))?;
                for _ in 0..pow {
                    acc = self.mul(&acc, &generator(k as u32));
                }
            }
            out = poly_add(&out, &acc);
        }
        Ok(out)
    }

    /// `"3/2*g1^2*g2 - g3"`, monomials in the stored order. Zero prints as `"0"`.
    pub fn format(&self, p: &GcPoly) -> String {
        if p.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (m, c)) in p.iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (n, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let mut names: Vec<String> = Vec::new();
            for run in m.chunk_by(|a, b| a == b) {
                let name = &self.generators[run[0] as usize].name;
                names.push(if run.len() == 1 { name.clone() } else { format!("{name}^{}", run.len()) });
            }
            if names.is_empty() {
                write!(s, "{abs}").unwrap();
            } else if abs.is_one() {
                s.push_str(&names.join("*"));
            } else {
                write!(s, "{abs}*{}", names.join("*")).unwrap();
            }
        }
        s
    }
}
