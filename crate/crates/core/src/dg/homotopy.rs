//! Polynomial homotopies between dg-algebra maps `f_0, f_1 : B -> C` out of a free
//! graded-commutative `B`.
//!
//! A homotopy is a family `f_t` of dg-algebra maps, polynomial in `t`, together with
//! `f_t`-derivations `s_t` of degree −1 such that `d/dt f_t = d s_t + s_t d`. It is built one
//! generator `y` at a time, in order of decreasing degree. With `r(t) = s_t(dy)` already
//! known, put
//!
//! `f_t(y) = f_0(y) + ∫_0^t r + t e`, `e = f_1(y) - f_0(y) - ∫_0^1 r`,
//!
//! so that `d f_t(y) = f_t(dy)` and the endpoints are right. Then `e` is a cocycle and
//! `s_t(y) = u` for any `u` with `du = e`. For generators of degree 0 this is the condition
//! that `f_0` and `f_1` agree on `H^0`; below it, `C` must be acyclic in that degree.

use serde::Serialize;

use super::presentation::{add_into, poly_add, poly_scale, poly_sub, FreeDgaPresentation, GcPoly, Monomial};
use crate::error::{Error, Result};
use crate::graded::BiDegree;
use crate::linalg::{solve, Scalar, SparseMatrix};

/// A polynomial in `t` with coefficients in `C`: entry `k` is the coefficient of `t^k`.
pub type TPoly = Vec<GcPoly>;

fn trim(mut p: TPoly) -> TPoly {
    while p.last().is_some_and(GcPoly::is_empty) {
        p.pop();
    }
    p
}

fn tp_add(p: &TPoly, q: &TPoly) -> TPoly {
    let n = p.len().max(q.len());
    let empty = GcPoly::new();
    trim((0..n).map(|k| poly_add(p.get(k).unwrap_or(&empty), q.get(k).unwrap_or(&empty))).collect())
}

fn tp_scale(p: &TPoly, s: &Scalar) -> TPoly {
    trim(p.iter().map(|c| poly_scale(c, s)).collect())
}

fn tp_mul(c: &FreeDgaPresentation, p: &TPoly, q: &TPoly) -> TPoly {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GcPoly::new(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] = poly_add(&out[i + j], &c.mul(x, y));
        }
    }
    trim(out)
}

fn tp_derivative(p: &TPoly) -> TPoly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| poly_scale(c, &Scalar::from_int(k as i64))).collect())
}

/// `∫_0^t p`.
fn tp_integral(p: &TPoly) -> TPoly {
    let mut out = vec![GcPoly::new()];
    out.extend(p.iter().enumerate().map(|(k, c)| poly_scale(c, &Scalar::new(1, k as i64 + 1))));
    trim(out)
}

fn tp_eval(p: &TPoly, t: &Scalar) -> GcPoly {
    let mut out = GcPoly::new();
    let mut power = Scalar::one();
    for c in p {
        out = poly_add(&out, &poly_scale(c, &power));
        power = &power * t;
    }
    out
}

fn tp_const(p: GcPoly) -> TPoly {
    trim(vec![p])
}

fn tp_d(c: &FreeDgaPresentation, p: &TPoly) -> TPoly {
    trim(p.iter().map(|x| c.apply_d(x)).collect())
}

/// The homotopy: `f_t` and `s_t` on each generator of `B`, as polynomials in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MHomotopy {
    pub f: Vec<TPoly>,
    pub s: Vec<TPoly>,
    /// Generators of `B` that were treated (those of degree at least the floor).
    pub treated: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyCheck {
    /// `d/dt f_t = d s_t + s_t d` coefficientwise in `t`.
    pub identity: bool,
    pub endpoints: bool,
    /// `d f_t = f_t d` at each sampled `t`.
    pub dg_map_at_samples: Vec<bool>,
}

impl HomotopyCheck {
    pub fn pass(&self) -> bool {
        self.identity && self.endpoints && self.dg_map_at_samples.iter().all(|x| *x)
    }
}

/// Image of a `B`-polynomial under the algebra map with generator images `f`.
fn map_poly(c: &FreeDgaPresentation, p: &GcPoly, f: &dyn Fn(u32) -> TPoly) -> TPoly {
    let mut out = Vec::new();
    for (m, coef) in p {
        let mut term = tp_const(super::presentation::constant(coef.clone()));
        for x in m {
            term = tp_mul(c, &term, &f(*x));
        }
        out = tp_add(&out, &term);
    }
    out
}

/// `s(x_1 .. x_m) = Σ_j (-1)^{|x_1| + .. + |x_{j-1}|} f(x_1) .. s(x_j) .. f(x_m)`.
fn derivation_poly(
    b: &FreeDgaPresentation,
    c: &FreeDgaPresentation,
    p: &GcPoly,
    f: &dyn Fn(u32) -> TPoly,
    s: &dyn Fn(u32) -> TPoly,
) -> TPoly {
    let mut out = Vec::new();
    for (m, coef) in p {
        let mut before = 0i64;
        for j in 0..m.len() {
            let mut term = tp_const(super::presentation::constant(coef.clone()));
            for (k, x) in m.iter().enumerate() {
                let factor = if k == j { s(*x) } else { f(*x) };
                term = tp_mul(c, &term, &factor);
            }
            if before.rem_euclid(2) == 1 {
                term = tp_scale(&term, &-Scalar::one());
            }
            out = tp_add(&out, &term);
            before += b.generators()[m[j] as usize].degree.cohomological;
        }
    }
    out
}

/// Monomials of `C` of a given bidegree. Needs every generator to have positive projective
/// degree or negative cohomological degree, so that the piece is finite.
pub fn monomials_of_bidegree(c: &FreeDgaPresentation, deg: BiDegree) -> Result<Vec<Monomial>> {
    let gens = c.generators();
    if let Some(g) = gens.iter().find(|g| g.degree.projective < 0 || (g.degree.projective == 0 && g.degree.cohomological == 0)) {
        return Err(Error::Validation(format!("generator {} makes the graded pieces infinite", g.name)));
    }
    fn go(c: &FreeDgaPresentation, idx: usize, rest: BiDegree, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rest.projective < 0 || rest.cohomological > 0 {
            return;
        }
        if idx == c.len() {
            if rest == BiDegree::new(0, 0) {
                out.push(cur.clone());
            }
            return;
        }
        let g = c.generators()[idx].degree;
        let max_mult = if g.is_odd() { 1 } else { usize::MAX };
        let mut r = rest;
        let mut m = 0;
        loop {
            go(c, idx + 1, r, cur, out);
            if m == max_mult {
                break;
            }
            r = BiDegree::new(r.projective - g.projective, r.cohomological - g.cohomological);
            if r.projective < 0 || r.cohomological > 0 {
                break;
            }
            cur.push(idx as u32);
            m += 1;
        }
        cur.truncate(cur.len() - m);
    }
    let mut out = Vec::new();
    go(c, 0, deg, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

fn check_degree(c: &FreeDgaPresentation, p: &GcPoly, deg: i64, what: &str) -> Result<()> {
    if let Some((m, _)) = p.iter().find(|(m, _)| c.degree(m).cohomological != deg) {
        return Err(Error::InconsistentGrading(format!(
            "{what} has a term of degree {}, expected {deg}",
            c.degree(m).cohomological
        )));
    }
    Ok(())
}

/// Some `u` of cohomological degree `deg` with `du = e`, or `None`. Since `d` keeps the
/// projective degree, each projective component of `e` is solved for separately.
fn d_preimage(c: &FreeDgaPresentation, e: &GcPoly, deg: i64) -> Result<Option<GcPoly>> {
    let mut parts: std::collections::BTreeMap<i64, GcPoly> = std::collections::BTreeMap::new();
    for (m, x) in e {
        add_into(parts.entry(c.degree(m).projective).or_default(), m.clone(), x.clone());
    }
    let mut u = GcPoly::new();
    for (p, part) in parts {
        let src = monomials_of_bidegree(c, BiDegree::new(p, deg))?;
        let tgt = monomials_of_bidegree(c, BiDegree::new(p, deg + 1))?;
        let row: std::collections::HashMap<&Monomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let cols: Vec<Vec<(usize, Scalar)>> = src
            .iter()
            .map(|m| {
                c.apply_d(&GcPoly::from([(m.clone(), Scalar::one())]))
                    .into_iter()
                    .map(|(mm, x)| (row[&mm], x))
                    .collect()
            })
            .collect();
        let dm = SparseMatrix::from_columns(tgt.len(), cols);
        let rhs = SparseMatrix::from_columns(tgt.len(), vec![part.iter().map(|(m, x)| (row[m], x.clone())).collect()]);
        let Some(sol) = solve(&dm, &rhs) else { return Ok(None) };
        for (i, x) in sol.column(0) {
            add_into(&mut u, src[*i].clone(), x.clone());
        }
    }
    Ok(Some(u))
}

/// Builds `(f_t, s_t)` on the generators of `B` of degree `>= floor`. `f0`, `f1` give the
/// images of all generators of `B`; they must keep the cohomological degree but may mix
/// projective degrees.
pub fn m_homotopy_construct(
    b: &FreeDgaPresentation,
    c: &FreeDgaPresentation,
    f0: &[GcPoly],
    f1: &[GcPoly],
    floor: i64,
) -> Result<MHomotopy> {
    if f0.len() != b.len() || f1.len() != b.len() {
        return Err(Error::DimensionMismatch("one image per generator of B".into()));
    }
    for (k, g) in b.generators().iter().enumerate() {
        check_degree(c, &f0[k], g.degree.cohomological, &format!("f0({})", g.name))?;
        check_degree(c, &f1[k], g.degree.cohomological, &format!("f1({})", g.name))?;
    }
    for (name, f) in [("f0", f0), ("f1", f1)] {
        for k in 0..b.len() {
            let lhs = c.apply_d(&f[k]);
            let rhs = tp_eval(&map_poly(c, b.differential(k), &|x| tp_const(f[x as usize].clone())), &Scalar::zero());
            if lhs != rhs {
                return Err(Error::Validation(format!("{name} does not commute with d on {}", b.generators()[k].name)));
            }
        }
    }
    let mut order: Vec<usize> =
        (0..b.len()).filter(|k| b.generators()[*k].degree.cohomological >= floor).collect();
    order.sort_by_key(|k| (-b.generators()[*k].degree.cohomological, *k));

    let mut f: Vec<Option<TPoly>> = vec![None; b.len()];
    let mut s: Vec<Option<TPoly>> = vec![None; b.len()];
    for &y in &order {
        let g = &b.generators()[y];
        let get = |v: &Vec<Option<TPoly>>, x: u32| {
            v[x as usize].clone().expect("generators of d(y) sit in higher degree and are already treated")
        };
        let r = derivation_poly(b, c, b.differential(y), &|x| get(&f, x), &|x| get(&s, x));
        let integral = tp_integral(&r);
        let e = poly_sub(&poly_sub(&f1[y], &f0[y]), &tp_eval(&integral, &Scalar::one()));
        if !c.apply_d(&e).is_empty() {
            return Err(Error::AcyclicityFailure(format!("the residual on {} is not closed", g.name)));
        }
        let u = d_preimage(c, &e, g.degree.cohomological - 1)?.ok_or_else(|| {
            let msg = format!("f1({0}) - f0({0}) is not a boundary", g.name);
            if g.degree.cohomological == 0 {
                Error::NotHomotopic(msg)
            } else {
                Error::AcyclicityFailure(msg)
            }
        })?;
        let linear = vec![GcPoly::new(), e];
        f[y] = Some(tp_add(&tp_add(&tp_const(f0[y].clone()), &integral), &trim(linear)));
        s[y] = Some(tp_const(u));
    }
    Ok(MHomotopy {
        f: f.into_iter().map(Option::unwrap_or_default).collect(),
        s: s.into_iter().map(Option::unwrap_or_default).collect(),
        treated: order,
    })
}

impl MHomotopy {
    /// `f_t(y)` at a given `t`.
    pub fn f_at(&self, y: usize, t: &Scalar) -> GcPoly {
        tp_eval(&self.f[y], t)
    }

    /// Exact checks of the defining identities on the treated generators, and of `f_t`
    /// commuting with `d` at the sample points.
    pub fn check(&self, b: &FreeDgaPresentation, c: &FreeDgaPresentation, f0: &[GcPoly], f1: &[GcPoly], samples: &[Scalar]) -> HomotopyCheck {
        let fx = |x: u32| self.f[x as usize].clone();
        let sx = |x: u32| self.s[x as usize].clone();
        let mut identity = true;
        let mut endpoints = true;
        let mut dg = vec![true; samples.len()];
        for &y in &self.treated {
            let lhs = tp_derivative(&self.f[y]);
            let rhs = tp_add(&tp_d(c, &self.s[y]), &derivation_poly(b, c, b.differential(y), &fx, &sx));
            identity &= lhs == rhs;
            endpoints &= self.f_at(y, &Scalar::zero()) == f0[y] && self.f_at(y, &Scalar::one()) == f1[y];
            let df = tp_d(c, &self.f[y]);
            let fd = map_poly(c, b.differential(y), &fx);
            for (i, t) in samples.iter().enumerate() {
                dg[i] &= tp_eval(&df, t) == tp_eval(&fd, t);
            }
        }
        HomotopyCheck { identity, endpoints, dg_map_at_samples: dg }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{generator, DgaGenerator};

    fn gens(spec: &[(&str, i64, i64)]) -> Vec<DgaGenerator> {
        spec.iter().map(|(n, p, c)| DgaGenerator { name: n.to_string(), degree: BiDegree::new(*p, *c) }).collect()
    }

    fn mono(m: &[u32], c: i64) -> GcPoly {
        GcPoly::from([(m.to_vec(), Scalar::from_int(c))])
    }

    /// `C = K[a] ⊗ Λ[c]`, `dc = a^2`.
    fn target() -> FreeDgaPresentation {
        FreeDgaPresentation::new(gens(&[("a", 1, 0), ("c", 2, -1)]), vec![GcPoly::new(), mono(&[0, 0], 1)]).unwrap()
    }

    fn samples() -> Vec<Scalar> {
        [(0, 1), (1, 1), (1, 2), (-3, 7), (5, 3)].iter().map(|(p, q)| Scalar::new(*p, *q)).collect()
    }

    #[test]
    fn one_generator() {
        let c = target();
        let b = FreeDgaPresentation::new(gens(&[("e", 1, 0)]), vec![GcPoly::new()]).unwrap();
        let f0 = vec![generator(0)];
        let f1 = vec![poly_add(&generator(0), &mono(&[0, 0], 1))];
        let h = m_homotopy_construct(&b, &c, &f0, &f1, -3).unwrap();
        assert_eq!(h.f[0], vec![generator(0), mono(&[0, 0], 1)]);
        assert_eq!(h.s[0], vec![generator(1)]);
        assert!(h.check(&b, &c, &f0, &f1, &samples()).pass());
    }

    #[test]
    fn second_step() {
        let c = target();
        // B = K[e] ⊗ Λ[h], dh = e^2
        let b = FreeDgaPresentation::new(gens(&[("e", 1, 0), ("h", 2, -1)]), vec![GcPoly::new(), mono(&[0, 0], 1)])
            .unwrap();
        let f0 = vec![generator(0), generator(1)];
        // (a + a^2)^2 = a^2 + 2a^3 + a^4 = d(c + 2ac + a^2 c)
        let f1 = vec![
            poly_add(&generator(0), &mono(&[0, 0], 1)),
            poly_add(&poly_add(&generator(1), &mono(&[0, 1], 2)), &mono(&[0, 0, 1], 1)),
        ];
        let h = m_homotopy_construct(&b, &c, &f0, &f1, -1).unwrap();
        assert_eq!(h.f[1], vec![generator(1), mono(&[0, 1], 2), mono(&[0, 0, 1], 1)]);
        assert!(h.s[1].is_empty());
        assert!(h.check(&b, &c, &f0, &f1, &samples()).pass());
    }

    #[test]
    fn equal_maps() {
        let c = target();
        let b = FreeDgaPresentation::new(gens(&[("e", 1, 0)]), vec![GcPoly::new()]).unwrap();
        let f = vec![generator(0)];
        let h = m_homotopy_construct(&b, &c, &f, &f, 0).unwrap();
        assert_eq!(h.f[0], vec![generator(0)]);
        assert!(h.s[0].is_empty());
    }

    #[test]
    fn different_on_h0() {
        let c = target();
        let b = FreeDgaPresentation::new(gens(&[("e", 1, 0)]), vec![GcPoly::new()]).unwrap();
        let f0 = vec![generator(0)];
        let f1 = vec![mono(&[0], 2)];
        assert!(matches!(m_homotopy_construct(&b, &c, &f0, &f1, 0), Err(Error::NotHomotopic(_))));
    }

    #[test]
    fn missing_preimage_below_degree_zero() {
        // C without c: K[a] ⊗ Λ[u] with u of bidegree (2, -1) and du = 0, so H^{-1} ≠ 0
        let c = FreeDgaPresentation::new(gens(&[("a", 1, 0), ("u", 2, -1)]), vec![GcPoly::new(), GcPoly::new()]).unwrap();
        let b = FreeDgaPresentation::new(gens(&[("h", 2, -1)]), vec![GcPoly::new()]).unwrap();
        let f0 = vec![GcPoly::new()];
        let f1 = vec![generator(1)];
        assert!(matches!(m_homotopy_construct(&b, &c, &f0, &f1, -1), Err(Error::AcyclicityFailure(_))));
    }

    #[test]
    fn graded_pieces() {
        let c = target();
        assert_eq!(monomials_of_bidegree(&c, BiDegree::new(3, -1)).unwrap(), vec![vec![0, 1]]);
        assert_eq!(monomials_of_bidegree(&c, BiDegree::new(4, -2)).unwrap(), Vec::<Monomial>::new());
        assert_eq!(monomials_of_bidegree(&c, BiDegree::new(2, 0)).unwrap(), vec![vec![0, 0]]);
    }
}
