//! A∞-module structures over an ordinary algebra (no differential on `A` or `V`).
//!
//! Sign convention. With `μ_0 = 0` the coherence identity at arity `n` is `R_n = 0`, where
//!
//! `R_n(a_1..a_n, v) = Σ_{i=1}^{n-1} (-1)^{i-1} μ_{n-1}(..a_i a_{i+1}.., v)
//!                   + Σ_{p=1}^{n-1} (-1)^p μ_p(a_1..a_p, μ_{n-p}(a_{p+1}..a_n, v))`.
//!
//! These are the signs of the coderivation `D` on the bar comodule `T(A_+[1]) ⊗ V`
//! obtained by moving a degree-one map past `p` suspended factors, so `D² = 0` on inputs
//! of arity `<= N` exactly when `R_k = 0` for all `k <= N`. At arity 2 this reads
//! `μ(a_1 a_2, v) - μ(a_1, μ(a_2, v))`. The alternative reading with a factor
//! `(-1)^{p(n-p)}` on the composite terms agrees with this one whenever `n - p = 1`, so it
//! cannot be told apart on genuine modules, but the classifier built from it
//! (`dg::build_ract_dga`) has `d² ≠ 0` from arity 3 on. It is not used.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::bar::{tuples, AugBasis, GradedDims, HomSpace, TensorKey};
use crate::error::{Error, Result};
use crate::graded::{GradedAlgebraTruncation, GradedModuleWindow};
use crate::linalg::{solve, Scalar, SparseMatrix};

/// Sparse vector in one graded piece of `V`.
pub type Vector = Vec<(usize, Scalar)>;

/// Components `μ_n : A_+^{⊗n} ⊗ V -> V`, `1 <= n <= arity bound`, each preserving the
/// projective degree. Missing entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfinityModuleStructure {
    algebra: Arc<GradedAlgebraTruncation>,
    aug: Arc<AugBasisShared>,
    space: GradedDims,
    mu: Vec<HashMap<TensorKey, Vector>>,
}

/// Wrapper so the augmentation basis can live inside `PartialEq` types.
#[derive(Debug)]
pub struct AugBasisShared(pub AugBasis);

impl PartialEq for AugBasisShared {
    fn eq(&self, other: &Self) -> bool {
        self.0.elems == other.0.elems
    }
}
impl Eq for AugBasisShared {}

fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

fn axpy(acc: &mut BTreeMap<usize, Scalar>, s: &Scalar, v: &[(usize, Scalar)]) {
    for (i, x) in v {
        let slot = acc.entry(*i).or_insert_with(Scalar::zero);
        *slot += &(s * x);
    }
}

fn finish(acc: BTreeMap<usize, Scalar>) -> Vector {
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

impl AInfinityModuleStructure {
    /// All `μ_n` zero for `n <= arity`.
    pub fn zero(algebra: Arc<GradedAlgebraTruncation>, space: GradedDims, arity: usize) -> Self {
        let aug = Arc::new(AugBasisShared(AugBasis::new(&algebra)));
        AInfinityModuleStructure { algebra, aug, space, mu: vec![HashMap::new(); arity] }
    }

    /// The genuine module: `μ_1` is the action, higher components vanish.
    pub fn from_module(m: &GradedModuleWindow, arity: usize) -> Self {
        let mut s = Self::zero(m.algebra().clone(), GradedDims::of(m), arity.max(1));
        for key in s.keys(1) {
            let (d, a) = s.aug.0.elems[key.algebra[0] as usize];
            if let Some(mat) = m.act(d, a, key.vdeg) {
                let col = mat.column(key.v).to_vec();
                if !col.is_empty() {
                    s.mu[0].insert(key, col);
                }
            }
        }
        s
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebraTruncation> {
        &self.algebra
    }

    pub fn aug(&self) -> &AugBasis {
        &self.aug.0
    }

    pub fn space(&self) -> &GradedDims {
        &self.space
    }

    /// Highest stored arity.
    pub fn arity(&self) -> usize {
        self.mu.len()
    }

    /// Basis lines of `A_+^{⊗n} ⊗ V` on which `μ_n` can be nonzero.
    pub fn keys(&self, n: usize) -> Vec<TensorKey> {
        HomSpace::new(&self.aug.0, n, &self.space, &self.space).keys
    }

    pub fn get(&self, n: usize, key: &TensorKey) -> &[(usize, Scalar)] {
        if n == 0 || n > self.mu.len() {
            return &[];
        }
        self.mu[n - 1].get(key).map_or(&[], Vec::as_slice)
    }

    pub fn set(&mut self, n: usize, key: TensorKey, value: Vector) {
        while self.mu.len() < n {
            self.mu.push(HashMap::new());
        }
        if value.is_empty() {
            self.mu[n - 1].remove(&key);
        } else {
            self.mu[n - 1].insert(key, value);
        }
    }

    /// Adds `value` to the coordinate `k` of `μ_n(key)`.
    pub fn perturb(&mut self, n: usize, key: TensorKey, k: usize, value: &Scalar) {
        let mut acc: BTreeMap<usize, Scalar> = self.get(n, &key).iter().cloned().collect();
        axpy(&mut acc, value, &[(k, Scalar::one())]);
        self.set(n, key, finish(acc));
    }

    /// `μ_n(a, w)` for a vector `w ∈ V_j`.
    pub fn apply(&self, n: usize, a: &[u32], j: i64, w: &[(usize, Scalar)]) -> Vector {
        let mut acc = BTreeMap::new();
        for (v, x) in w {
            let key = TensorKey { algebra: a.to_vec(), vdeg: j, v: *v };
            axpy(&mut acc, x, self.get(n, &key));
        }
        finish(acc)
    }

    /// Degree of `a_1 ⊗ .. ⊗ a_n` in `A`.
    fn weight(&self, a: &[u32]) -> i64 {
        a.iter().map(|k| self.aug.0.degree(*k) as i64).sum()
    }

    /// The coherence residual `R_n` on one basis line.
    pub fn residual(&self, n: usize, key: &TensorKey) -> Result<Vector> {
        let a = &key.algebra;
        let mut acc = BTreeMap::new();
        for i in 0..n.saturating_sub(1) {
            for (b, c) in self.aug.0.product(&self.algebra, a[i], a[i + 1])? {
                let mut merged = a[..i].to_vec();
                merged.push(b);
                merged.extend_from_slice(&a[i + 2..]);
                let k = TensorKey { algebra: merged, vdeg: key.vdeg, v: key.v };
                axpy(&mut acc, &(&c * &sign(i)), self.get(n - 1, &k));
            }
        }
        for p in 1..n {
            let inner = self.get(n - p, &TensorKey { algebra: a[p..].to_vec(), vdeg: key.vdeg, v: key.v }).to_vec();
            if inner.is_empty() {
                continue;
            }
            let j = key.vdeg + self.weight(&a[p..]);
            let outer = self.apply(p, &a[..p], j, &inner);
            axpy(&mut acc, &sign(p), &outer);
        }
        Ok(finish(acc))
    }
}

/// Nonzero residuals per arity; valid iff empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AInfReport {
    pub residuals: BTreeMap<usize, Vec<(TensorKey, Vector)>>,
}

impl AInfReport {
    pub fn is_valid(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.keys().next().copied()
    }
}

/// Evaluates the coherence identities for every arity `2..=arity`. Components above the
/// stored bound count as zero.
pub fn check_ainf_module(s: &AInfinityModuleStructure, arity: usize) -> Result<AInfReport> {
    let mut report = AInfReport::default();
    for n in 2..=arity {
        let mut bad = Vec::new();
        for key in s.keys(n) {
            let r = s.residual(n, &key)?;
            if !r.is_empty() {
                bad.push((key, r));
            }
        }
        if !bad.is_empty() {
            report.residuals.insert(n, bad);
        }
    }
    Ok(report)
}

/// Components `f_n : A_+^{⊗n} ⊗ V -> N` of a morphism from an A∞-module to a genuine module.
#[derive(Debug, Clone)]
pub struct AInfinityMorphismData {
    pub source: AInfinityModuleStructure,
    pub target: GradedModuleWindow,
    /// `f[n]` keyed by basis lines of arity `n`; `f[0]` has empty algebra tuples.
    pub f: Vec<HashMap<TensorKey, Vector>>,
}

impl AInfinityMorphismData {
    pub fn zero(source: AInfinityModuleStructure, target: GradedModuleWindow, arity: usize) -> Self {
        AInfinityMorphismData { source, target, f: vec![HashMap::new(); arity + 1] }
    }

    /// `f_0` given by one matrix `V_j -> N_j` per degree, higher components zero.
    pub fn from_linear_map(
        source: AInfinityModuleStructure,
        target: GradedModuleWindow,
        maps: &BTreeMap<i64, SparseMatrix>,
        arity: usize,
    ) -> Self {
        let mut out = Self::zero(source, target, arity);
        for (j, m) in maps {
            for v in 0..m.cols() {
                let col = m.column(v).to_vec();
                if !col.is_empty() {
                    out.f[0].insert(TensorKey { algebra: vec![], vdeg: *j, v }, col);
                }
            }
        }
        out
    }

    fn get(&self, n: usize, key: &TensorKey) -> &[(usize, Scalar)] {
        self.f.get(n).and_then(|m| m.get(key)).map_or(&[], Vec::as_slice)
    }

    fn apply(&self, n: usize, a: &[u32], j: i64, w: &[(usize, Scalar)]) -> Vector {
        let mut acc = BTreeMap::new();
        for (v, x) in w {
            axpy(&mut acc, x, self.get(n, &TensorKey { algebra: a.to_vec(), vdeg: j, v: *v }));
        }
        finish(acc)
    }

    /// `S_n(a_1..a_n, v) = Σ_{p=0}^{n-1} (-1)^p f_p(a_1..a_p, μ_{n-p}(a_{p+1}..a_n, v))
    ///  + Σ_{i=1}^{n-1} (-1)^{i-1} f_{n-1}(..a_i a_{i+1}.., v) - a_1 f_{n-1}(a_2..a_n, v)`.
    pub fn residual(&self, n: usize, key: &TensorKey) -> Result<Vector> {
        let s = &self.source;
        let aug = s.aug();
        let a = &key.algebra;
        let mut acc = BTreeMap::new();
        for p in 0..n {
            let inner = s.get(n - p, &TensorKey { algebra: a[p..].to_vec(), vdeg: key.vdeg, v: key.v }).to_vec();
            if inner.is_empty() {
                continue;
            }
            let j = key.vdeg + a[p..].iter().map(|k| aug.degree(*k) as i64).sum::<i64>();
            axpy(&mut acc, &sign(p), &self.apply(p, &a[..p], j, &inner));
        }
        for i in 0..n - 1 {
            for (b, c) in aug.product(s.algebra(), a[i], a[i + 1])? {
                let mut merged = a[..i].to_vec();
                merged.push(b);
                merged.extend_from_slice(&a[i + 2..]);
                axpy(&mut acc, &(&c * &sign(i)), self.get(n - 1, &TensorKey { algebra: merged, vdeg: key.vdeg, v: key.v }));
            }
        }
        let tail = self.get(n - 1, &TensorKey { algebra: a[1..].to_vec(), vdeg: key.vdeg, v: key.v });
        if !tail.is_empty() {
            let (d, e) = aug.elems[a[0] as usize];
            let j = key.vdeg + a[1..].iter().map(|k| aug.degree(*k) as i64).sum::<i64>();
            if let Some(m) = self.target.act(d, e, j) {
                let w = m.mul(&SparseMatrix::from_columns(m.cols(), vec![tail.to_vec()]));
                axpy(&mut acc, &-Scalar::one(), w.column(0));
            }
        }
        Ok(finish(acc))
    }
}

/// Evaluates the morphism identities for arities `1..=arity`.
pub fn check_ainf_morphism(f: &AInfinityMorphismData, arity: usize) -> Result<AInfReport> {
    let mut report = AInfReport::default();
    let target = GradedDims::of(&f.target);
    for n in 1..=arity {
        let space = HomSpace::new(f.source.aug(), n, f.source.space(), &target);
        let mut bad = Vec::new();
        for key in &space.keys {
            let r = f.residual(n, key)?;
            if !r.is_empty() {
                bad.push((key.clone(), r));
            }
        }
        if !bad.is_empty() {
            report.residuals.insert(n, bad);
        }
    }
    Ok(report)
}

/// Basis of the bar comodule `⊕_{n <= N} A_+^{⊗n} ⊗ V`, cut at the top degree of `V`.
#[derive(Debug, Clone)]
pub struct BarComodule {
    pub keys: Vec<TensorKey>,
    index: HashMap<TensorKey, usize>,
    pub max_arity: usize,
}

impl BarComodule {
    pub fn new(s: &AInfinityModuleStructure, max_arity: usize) -> Self {
        let v = s.space();
        let mut keys = Vec::new();
        if !v.dims.is_empty() {
            for n in 0..=max_arity {
                for (a, w) in tuples(s.aug(), n, v.high() - v.low) {
                    for j in v.degrees() {
                        if j + w > v.high() {
                            continue;
                        }
                        for x in 0..v.dim(j) {
                            keys.push(TensorKey { algebra: a.clone(), vdeg: j, v: x });
                        }
                    }
                }
            }
        }
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        BarComodule { keys, index, max_arity }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    fn pos(&self, a: Vec<u32>, vdeg: i64, v: usize) -> usize {
        self.index[&TensorKey { algebra: a, vdeg, v }]
    }

    fn weight(s: &AInfinityModuleStructure, a: &[u32]) -> i64 {
        a.iter().map(|k| s.aug().degree(*k) as i64).sum()
    }

    /// `D(a_1..a_n ⊗ v) = Σ_i (-1)^{i-1} (..a_i a_{i+1}..) ⊗ v
    ///  + Σ_{p=0}^{n-1} (-1)^p a_1..a_p ⊗ μ_{n-p}(a_{p+1}..a_n, v)`.
    pub fn differential(&self, s: &AInfinityModuleStructure) -> Result<SparseMatrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for key in &self.keys {
            let a = &key.algebra;
            let n = a.len();
            let mut col = Vec::new();
            for i in 0..n.saturating_sub(1) {
                for (b, c) in s.aug().product(s.algebra(), a[i], a[i + 1])? {
                    let mut merged = a[..i].to_vec();
                    merged.push(b);
                    merged.extend_from_slice(&a[i + 2..]);
                    col.push((self.pos(merged, key.vdeg, key.v), &c * &sign(i)));
                }
            }
            for p in 0..n {
                let out = s.get(n - p, &TensorKey { algebra: a[p..].to_vec(), vdeg: key.vdeg, v: key.v });
                let j = key.vdeg + Self::weight(s, &a[p..]);
                for (w, x) in out {
                    col.push((self.pos(a[..p].to_vec(), j, *w), x * &sign(p)));
                }
            }
            cols.push(col);
        }
        Ok(SparseMatrix::from_columns(self.dim(), cols))
    }

    /// The comodule map `Φ(a_1..a_n ⊗ v) = Σ_p a_1..a_p ⊗ F_{n-p}(a_{p+1}..a_n, v)` with
    /// `F_0 = id`; `f[k-1]` holds `F_k`.
    pub fn comodule_map(&self, s: &AInfinityModuleStructure, f: &[HashMap<TensorKey, Vector>]) -> SparseMatrix {
        let mut cols = Vec::with_capacity(self.dim());
        for (c, key) in self.keys.iter().enumerate() {
            let a = &key.algebra;
            let n = a.len();
            let mut col = vec![(c, Scalar::one())];
            for p in 0..n {
                let k = n - p;
                let Some(fk) = f.get(k - 1) else { continue };
                let Some(out) = fk.get(&TensorKey { algebra: a[p..].to_vec(), vdeg: key.vdeg, v: key.v }) else {
                    continue;
                };
                let j = key.vdeg + Self::weight(s, &a[p..]);
                for (w, x) in out {
                    col.push((self.pos(a[..p].to_vec(), j, *w), x.clone()));
                }
            }
            cols.push(col);
        }
        SparseMatrix::from_columns(self.dim(), cols)
    }

    /// Smallest arity `n` such that `D²` is nonzero on some input of arity `n`.
    pub fn first_square_failure(&self, s: &AInfinityModuleStructure) -> Result<Option<usize>> {
        let d = self.differential(s)?;
        let d2 = d.mul(&d);
        Ok((0..self.dim()).filter(|&c| !d2.column(c).is_empty()).map(|c| self.keys[c].algebra.len()).min())
    }
}

/// Conjugates the bar differential of `s` by the comodule automorphism built from
/// `F_1, F_2, ...` and reads off the transported structure, up to arity `max_arity`.
pub fn transport(
    s: &AInfinityModuleStructure,
    f: &[HashMap<TensorKey, Vector>],
    max_arity: usize,
) -> Result<AInfinityModuleStructure> {
    let bar = BarComodule::new(s, max_arity);
    let d = bar.differential(s)?;
    let phi = bar.comodule_map(s, f);
    let inv = solve(&phi, &SparseMatrix::identity(bar.dim())).ok_or_else(|| {
        Error::Validation("comodule map is not invertible".into())
    })?;
    let conj = phi.mul(&d).mul(&inv);
    let mut out = AInfinityModuleStructure::zero(s.algebra().clone(), s.space().clone(), max_arity);
    for (c, key) in bar.keys.iter().enumerate() {
        if key.algebra.is_empty() {
            continue;
        }
        let j = key.vdeg + BarComodule::weight(s, &key.algebra);
        let val: Vector = conj
            .column(c)
            .iter()
            .filter(|(r, _)| bar.keys[*r].algebra.is_empty() && bar.keys[*r].vdeg == j)
            .map(|(r, x)| (bar.keys[*r].v, x.clone()))
            .collect();
        out.set(key.algebra.len(), key.clone(), val);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraElement;

    /// Non-unital span{e}, e^2 = 0, in degree 0.
    fn nilpotent() -> Arc<GradedAlgebraTruncation> {
        Arc::new(
            GradedAlgebraTruncation::from_product_fn(
                vec![vec!["e".into()]],
                false,
                true,
                vec![AlgebraElement { degree: 0, coords: vec![Scalar::one()] }],
                |_, _, _, _| vec![],
            )
            .unwrap(),
        )
    }

    fn line(v: usize) -> GradedDims {
        GradedDims { low: 0, dims: vec![v] }
    }

    fn key(n: usize, v: usize) -> TensorKey {
        TensorKey { algebra: vec![0; n], vdeg: 0, v }
    }

    #[test]
    fn scalar_action_of_nilpotent_fails_at_two() {
        let mut s = AInfinityModuleStructure::zero(nilpotent(), line(1), 2);
        s.set(1, key(1, 0), vec![(0, Scalar::one())]);
        let r = check_ainf_module(&s, 3).unwrap();
        assert_eq!(r.first_failure(), Some(2));
        assert_eq!(r.residuals[&2][0].1, vec![(0, -Scalar::one())]);
        let bar = BarComodule::new(&s, 3);
        assert_eq!(bar.first_square_failure(&s).unwrap(), Some(2));
    }

    #[test]
    fn jordan_block_is_a_module() {
        let mut s = AInfinityModuleStructure::zero(nilpotent(), line(2), 3);
        s.set(1, key(1, 0), vec![(1, Scalar::one())]);
        assert!(check_ainf_module(&s, 4).unwrap().is_valid());
        assert_eq!(BarComodule::new(&s, 4).first_square_failure(&s).unwrap(), None);
    }

    #[test]
    fn transported_structure_is_valid() {
        let mut s = AInfinityModuleStructure::zero(nilpotent(), line(2), 3);
        s.set(1, key(1, 0), vec![(1, Scalar::one())]);
        let mut f1 = HashMap::new();
        f1.insert(key(1, 1), vec![(0, Scalar::from_int(2))]);
        f1.insert(key(1, 0), vec![(0, Scalar::from_int(-1)), (1, Scalar::from_int(3))]);
        let t = transport(&s, &[f1], 4).unwrap();
        assert!(!t.mu[1].is_empty(), "transport should produce a nonzero μ_2");
        assert!(check_ainf_module(&t, 4).unwrap().is_valid());
        // D of the transported structure is the conjugated differential
        let bar = BarComodule::new(&t, 4);
        assert_eq!(bar.first_square_failure(&t).unwrap(), None);
    }

    #[test]
    fn non_linear_map_fails_at_one() {
        let mut s = AInfinityModuleStructure::zero(nilpotent(), line(2), 1);
        s.set(1, key(1, 0), vec![(1, Scalar::one())]);
        let a = nilpotent();
        let target = GradedModuleWindow::from_action_fn(a, 0, vec![vec!["w0".into(), "w1".into()]], |_, _, _, m| {
            if m == 0 { vec![(1, Scalar::one())] } else { vec![] }
        })
        .unwrap();
        let id = BTreeMap::from([(0, SparseMatrix::identity(2))]);
        let f = AInfinityMorphismData::from_linear_map(s.clone(), target.clone(), &id, 1);
        assert!(check_ainf_morphism(&f, 3).unwrap().is_valid());
        let swap = BTreeMap::from([(0, SparseMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]))]);
        let g = AInfinityMorphismData::from_linear_map(s, target, &swap, 1);
        assert_eq!(check_ainf_morphism(&g, 3).unwrap().first_failure(), Some(1));
    }
}
