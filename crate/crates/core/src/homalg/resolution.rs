use std::collections::BTreeMap;

use super::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::graded::{GradedAlgebraTruncation, GradedModuleWindow};
use crate::linalg::{kernel_basis, rank, Scalar, SparseMatrix};

/// The algebra with a unit adjoined when it has none (`K ⊕ A`); otherwise the algebra
/// itself. In the adjoined case index 0 of degree 0 is the new unit.
#[derive(Debug, Clone, Copy)]
pub struct Unitalization<'a> {
    alg: &'a GradedAlgebraTruncation,
    extra: bool,
}

impl<'a> Unitalization<'a> {
    pub fn new(alg: &'a GradedAlgebraTruncation) -> Self {
        Unitalization { alg, extra: !alg.is_unital() }
    }

    pub fn max_degree(&self) -> usize {
        self.alg.max_degree()
    }

    pub fn dim(&self, d: usize) -> usize {
        self.alg.dim(d) + usize::from(self.extra && d == 0)
    }

    fn shift(&self, d: usize) -> usize {
        usize::from(self.extra && d == 0)
    }

    fn is_unit(&self, d: usize, a: usize) -> bool {
        self.extra && d == 0 && a == 0
    }

    pub fn product(&self, i: usize, a: usize, j: usize, b: usize) -> Option<Vec<(usize, Scalar)>> {
        if i + j > self.alg.max_degree() {
            return None;
        }
        if self.is_unit(i, a) {
            return Some(vec![(b, Scalar::one())]);
        }
        if self.is_unit(j, b) {
            return Some(vec![(a, Scalar::one())]);
        }
        let sh = self.shift(i + j);
        let p = self.alg.product(i, a - self.shift(i), j, b - self.shift(j))?;
        Some(p.iter().map(|(c, v)| (c + sh, v.clone())).collect())
    }

    /// Action of basis element `a` of the unitalization in degree `i` on `M_j`.
    pub fn act(&self, m: &GradedModuleWindow, i: usize, a: usize, j: i64) -> Option<SparseMatrix> {
        if self.is_unit(i, a) {
            return m.in_window(j).then(|| SparseMatrix::identity(m.dim(j)));
        }
        m.act(i, a - self.shift(i), j).cloned()
    }
}

/// One free layer: generator degrees and, for each generator, its image as coordinates in
/// the previous layer (or in the resolved module for layer 0) in the generator's degree.
#[derive(Debug, Clone)]
pub struct FreeLayer {
    pub generator_degrees: Vec<i64>,
    pub images: Vec<Vec<(usize, Scalar)>>,
}

/// A free resolution `F_0 <- F_1 <- ...` over the unitalization, exact in every degree
/// up to `top`.
#[derive(Debug, Clone)]
pub struct FreeResolutionWindow {
    pub layers: Vec<FreeLayer>,
    pub top: i64,
}

/// Block layout of a free module `⊕ Ã(-d_g)` in one degree.
fn layout(u: &Unitalization, gens: &[i64], t: i64) -> (Vec<Option<usize>>, usize) {
    let mut total = 0;
    let offs = gens
        .iter()
        .map(|d| {
            let s = t - d;
            if s < 0 || s as usize > u.max_degree() {
                None
            } else {
                let o = total;
                total += u.dim(s as usize);
                Some(o)
            }
        })
        .collect();
    (offs, total)
}

/// `x · (element of F in degree t)`, landing in degree `t + i`.
fn mul_free(
    u: &Unitalization,
    gens: &[i64],
    i: usize,
    a: usize,
    elem: &[(usize, Scalar)],
    t: i64,
) -> Result<Vec<(usize, Scalar)>> {
    let (offs, _) = layout(u, gens, t);
    let (offs2, _) = layout(u, gens, t + i as i64);
    let mut out = Vec::new();
    for (c, x) in elem {
        let g = offs.iter().rposition(|o| o.is_some_and(|o| o <= *c)).unwrap();
        let s = (t - gens[g]) as usize;
        let b = c - offs[g].unwrap();
        let prod = u.product(i, a, s, b).ok_or(Error::WindowTooShort { degree: t + i as i64 })?;
        let o2 = offs2[g].ok_or(Error::WindowTooShort { degree: t + i as i64 })?;
        out.extend(prod.into_iter().map(|(r, v)| (o2 + r, &v * x)));
    }
    Ok(out)
}

/// Matrix of `F_k -> F_{k-1}` (or `F_0 -> V`) in degree `t`.
fn boundary_matrix(
    u: &Unitalization,
    layer: &FreeLayer,
    prev_gens: Option<&[i64]>,
    module: &GradedModuleWindow,
    t: i64,
) -> Result<SparseMatrix> {
    let gens = &layer.generator_degrees;
    let (offs, total) = layout(u, gens, t);
    let rows = match prev_gens {
        Some(p) => layout(u, p, t).1,
        None => module.dim(t),
    };
    let mut cols = vec![Vec::new(); total];
    for (g, o) in offs.iter().enumerate() {
        let Some(o) = o else { continue };
        let s = (t - gens[g]) as usize;
        for a in 0..u.dim(s) {
            cols[o + a] = match prev_gens {
                Some(p) => mul_free(u, p, s, a, &layer.images[g], gens[g])?,
                None if !module.in_window(t) => Vec::new(),
                None => {
                    let m = u.act(module, s, a, gens[g]).ok_or(Error::WindowTooShort { degree: t })?;
                    let v = SparseMatrix::from_columns(module.dim(gens[g]), vec![layer.images[g].clone()]);
                    m.mul(&v).column(0).to_vec()
                }
            };
        }
    }
    Ok(SparseMatrix::from_columns(rows, cols))
}

/// Resolves `module` through layer `length`, exactly in all degrees up to `top`.
///
/// Generators are chosen greedily degree by degree from a kernel basis, so the layers are
/// minimal when the degree-0 part of the unitalization is a local ring.
pub fn free_resolution_window(module: &GradedModuleWindow, length: usize, top: i64) -> Result<FreeResolutionWindow> {
    let alg = module.algebra();
    let u = Unitalization::new(alg);
    let start = module.low();
    if top - start > alg.max_degree() as i64 && !module.is_empty_window() {
        return Err(Error::WindowTooShort { degree: start + alg.max_degree() as i64 + 1 });
    }
    let mut layers: Vec<FreeLayer> = Vec::new();
    for k in 0..=length {
        let mut layer = FreeLayer { generator_degrees: Vec::new(), images: Vec::new() };
        for t in start..=top {
            // the space to cover in degree t
            let target = if k == 0 {
                SparseMatrix::identity(module.dim(t))
            } else {
                let prev_prev = if k >= 2 { Some(layers[k - 2].generator_degrees.as_slice()) } else { None };
                kernel_basis(&boundary_matrix(&u, &layers[k - 1], prev_prev, module, t)?)
            };
            if target.cols() == 0 {
                continue;
            }
            let prev = if k >= 1 { Some(layers[k - 1].generator_degrees.as_slice()) } else { None };
            let mut covered = boundary_matrix(&u, &layer, prev, module, t)?;
            let mut r = rank(&covered);
            for c in 0..target.cols() {
                if r == target.cols() {
                    break;
                }
                let cand = SparseMatrix::from_columns(target.rows(), vec![target.column(c).to_vec()]);
                let trial = covered.hstack(&cand);
                if rank(&trial) == r {
                    continue;
                }
                layer.generator_degrees.push(t);
                layer.images.push(target.column(c).to_vec());
                covered = boundary_matrix(&u, &layer, prev, module, t)?;
                r = rank(&covered);
            }
        }
        let done = layer.generator_degrees.is_empty();
        layers.push(layer);
        if done {
            break;
        }
    }
    Ok(FreeResolutionWindow { layers, top })
}

impl FreeResolutionWindow {
    pub fn generator_degrees(&self, k: usize) -> &[i64] {
        self.layers.get(k).map_or(&[], |l| l.generator_degrees.as_slice())
    }

    /// Graded Betti numbers: for each layer, generator count per degree.
    pub fn betti(&self) -> Vec<BTreeMap<i64, usize>> {
        self.layers
            .iter()
            .map(|l| {
                let mut m = BTreeMap::new();
                for d in &l.generator_degrees {
                    *m.entry(*d).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }

    /// `Hom^0(F_•, N)` through layer `upto`.
    pub fn hom_complex(&self, alg: &GradedAlgebraTruncation, n: &GradedModuleWindow, upto: usize) -> Result<CochainComplex> {
        let u = Unitalization::new(alg);
        let blocks = |k: usize| -> (Vec<Option<usize>>, usize) {
            let mut total = 0;
            let offs = self
                .generator_degrees(k)
                .iter()
                .map(|d| {
                    let nd = n.dim(*d);
                    (nd > 0).then(|| {
                        let o = total;
                        total += nd;
                        o
                    })
                })
                .collect();
            (offs, total)
        };
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for k in 0..=upto {
            let (offs_k, dim_k) = blocks(k);
            dims.push(dim_k);
            if k == upto {
                break;
            }
            let (offs_h, dim_h) = blocks(k + 1);
            let gens_k = self.generator_degrees(k);
            let mut triplets = Vec::new();
            if let Some(layer) = self.layers.get(k + 1) {
                for (h, dh) in layer.generator_degrees.iter().enumerate() {
                    let Some(oh) = offs_h[h] else { continue };
                    let (offs, _) = layout(&u, gens_k, *dh);
                    for (c, x) in &layer.images[h] {
                        let g = offs.iter().rposition(|o| o.is_some_and(|o| o <= *c)).unwrap();
                        let Some(og) = offs_k[g] else { continue };
                        let s = (dh - gens_k[g]) as usize;
                        let b = c - offs[g].unwrap();
                        let m = u.act(n, s, b, gens_k[g]).ok_or(Error::WindowTooShort { degree: *dh })?;
                        triplets.extend(m.entries().map(|(r, cc, y)| (oh + r, og + cc, y * x)));
                    }
                }
            }
            diffs.push(SparseMatrix::from_triplets(dim_h, dim_k, triplets));
        }
        CochainComplex::new(0, dims, diffs)
    }

    /// `F_• ⊗ Q` in degree `t` through layer `upto`, as a cochain complex in degrees `-upto..=0`.
    pub fn tensor_complex(&self, alg: &GradedAlgebraTruncation, q: &GradedModuleWindow, upto: usize, t: i64) -> Result<CochainComplex> {
        let u = Unitalization::new(alg);
        let blocks = |k: usize| -> (Vec<Option<usize>>, usize) {
            let mut total = 0;
            let offs = self
                .generator_degrees(k)
                .iter()
                .map(|d| {
                    let qd = q.dim(t - d);
                    (qd > 0).then(|| {
                        let o = total;
                        total += qd;
                        o
                    })
                })
                .collect();
            (offs, total)
        };
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for k in (0..=upto).rev() {
            let (offs_h, dim_h) = blocks(k);
            dims.push(dim_h);
            if k == 0 {
                break;
            }
            let (offs_k, dim_k) = blocks(k - 1);
            let gens_k = self.generator_degrees(k - 1);
            let mut triplets = Vec::new();
            // a resolution that stopped early has no layer k
            if let Some(layer) = self.layers.get(k) {
                for (h, dh) in layer.generator_degrees.iter().enumerate() {
                    let Some(oh) = offs_h[h] else { continue };
                    let (offs, _) = layout(&u, gens_k, *dh);
                    for (c, x) in &layer.images[h] {
                        let g = offs.iter().rposition(|o| o.is_some_and(|o| o <= *c)).unwrap();
                        let Some(og) = offs_k[g] else { continue };
                        let s = (dh - gens_k[g]) as usize;
                        let b = c - offs[g].unwrap();
                        // h ⊗ q  ->  g ⊗ (c_g q)
                        let m = u.act(q, s, b, t - dh).ok_or(Error::WindowTooShort { degree: t })?;
                        triplets.extend(m.entries().map(|(r, cc, y)| (og + r, oh + cc, y * x)));
                    }
                }
            }
            diffs.push(SparseMatrix::from_triplets(dim_k, dim_h, triplets));
        }
        CochainComplex::new(-(upto as i64), dims, diffs)
    }
}

/// `Ext^i(V, N)` from a free resolution of `V`; the independent check on [`ext_bar`](super::ext_bar).
pub fn ext_free(v: &GradedModuleWindow, n: &GradedModuleWindow, i: usize) -> Result<usize> {
    if v.is_empty_window() || n.is_empty_window() {
        return Ok(0);
    }
    let res = free_resolution_window(v, i + 1, n.high().max(v.low()))?;
    Ok(res.hom_complex(v.algebra(), n, i + 1)?.cohomology(i as i64))
}

/// `Tor_i(P, Q)` in degree `t` from a free resolution of `P`.
pub fn tor_free(p: &GradedModuleWindow, q: &GradedModuleWindow, i: usize, t: i64) -> Result<usize> {
    if p.is_empty_window() || q.is_empty_window() || t < p.low() {
        return Ok(0);
    }
    let res = free_resolution_window(p, i + 1, t)?;
    Ok(res.tensor_complex(p.algebra(), q, i + 1, t)?.cohomology(-(i as i64)))
}

/// `Hom^0_A(V, N)` by solving the linearity conditions directly, one map per degree.
pub fn hom_direct(v: &GradedModuleWindow, n: &GradedModuleWindow) -> Result<usize> {
    let alg = v.algebra();
    // unknowns: φ_j ∈ Hom(V_j, N_j), column-major blocks
    let mut offs = BTreeMap::new();
    let mut total = 0;
    for j in v.degrees() {
        offs.insert(j, total);
        total += v.dim(j) * n.dim(j);
    }
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for j in v.degrees() {
        for (d, a) in alg.augmentation_basis() {
            let t = j + d as i64;
            if !v.in_window(t) && !n.in_window(t) {
                continue;
            }
            // φ_t(a v) - a φ_j(v) = 0 for each basis v of V_j
            let av = v.act(d, a, j);
            let an = n.act(d, a, j);
            for col in 0..v.dim(j) {
                for r in 0..n.dim(t) {
                    let mut row = Vec::new();
                    if let Some(av) = av {
                        for (w, x) in av.column(col) {
                            row.push((offs[&t] + w * n.dim(t) + r, x.clone()));
                        }
                    }
                    if let Some(an) = an {
                        for k in 0..n.dim(j) {
                            let y = an.get(r, k);
                            if !y.is_zero() {
                                row.push((offs[&j] + col * n.dim(j) + k, -y));
                            }
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    let m = SparseMatrix::from_columns(total, rows).transpose();
    Ok(total - rank(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;
    use crate::homalg::ext_bar;
    use std::sync::Arc;

    #[test]
    fn free_module_resolves_in_one_step() {
        let a = Arc::new(polynomial_ring(2, 4));
        let m = GradedModuleWindow::algebra_window(a, 0, 4).unwrap();
        let r = free_resolution_window(&m, 2, 4).unwrap();
        assert_eq!(r.generator_degrees(0), &[0]);
        assert!(r.generator_degrees(1).is_empty());
    }

    #[test]
    fn residue_field_of_plane() {
        // K over K[x,y]: Koszul, generators in degrees 0 | 1,1 | 2
        let a = Arc::new(polynomial_ring(2, 4));
        let k = GradedModuleWindow::from_action_fn(a, 0, vec![vec!["1".into()]], |i, _, _, _| {
            if i == 0 { vec![(0, Scalar::one())] } else { vec![] }
        })
        .unwrap();
        let r = free_resolution_window(&k, 3, 4).unwrap();
        assert_eq!(r.generator_degrees(0), &[0]);
        assert_eq!(r.generator_degrees(1), &[1, 1]);
        assert_eq!(r.generator_degrees(2), &[2]);
        assert!(r.generator_degrees(3).is_empty());
        for i in 0..3 {
            assert_eq!(tor_free(&k, &k, i, i as i64).unwrap(), [1, 2, 1][i]);
        }
    }

    #[test]
    fn ext_free_matches_bar_on_truncated_plane() {
        let a = Arc::new(polynomial_ring(2, 3));
        let m = GradedModuleWindow::algebra_window(a, 1, 3).unwrap();
        for i in 0..3 {
            assert_eq!(ext_free(&m, &m, i).unwrap(), ext_bar(&m, &m, i).unwrap().dim, "i = {i}");
        }
        assert_eq!(hom_direct(&m, &m).unwrap(), 1);
    }
}
