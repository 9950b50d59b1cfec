use serde::Serialize;

use super::{GradedAlgebraTruncation, GradedModuleWindow};
use crate::linalg::{rank, SparseMatrix};

/// Which identity a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Associativity,
    Commutativity,
    Unit,
    ModuleAssociativity,
    ModuleUnit,
}

/// One failed identity. `degrees` and `basis` locate the offending basis elements:
/// `(i, j[, k])` and the matching basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub degrees: Vec<i64>,
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Non-fatal findings, e.g. a generator list that does not generate the truncation.
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Matrix of left multiplication by the product `a * b` (`a ∈ A_i`, `b ∈ A_j`) on `A_k`.
fn product_action(alg: &GradedAlgebraTruncation, i: usize, a: usize, j: usize, b: usize, k: usize) -> Option<SparseMatrix> {
    let ab = alg.product(i, a, j, b)?;
    let mut acc = SparseMatrix::zero(alg.dim(i + j + k), alg.dim(k));
    for (c, coeff) in ab {
        acc = acc.add(&alg.left_mul(i + j, *c, k)?.scale(coeff));
    }
    Some(acc)
}

pub fn validate_algebra(alg: &GradedAlgebraTruncation) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = alg.max_degree();
    // associativity (ab)c = a(bc), checked column by column to locate c
    for i in 0..=d {
        for j in 0..=d - i {
            for k in 0..=d - i - j {
                for a in 0..alg.dim(i) {
                    for b in 0..alg.dim(j) {
                        let lhs = product_action(alg, i, a, j, b, k).expect("inside truncation");
                        let la = alg.left_mul(i, a, j + k).unwrap();
                        let lb = alg.left_mul(j, b, k).unwrap();
                        let rhs = la.mul(lb);
                        let diff = lhs.sub(&rhs);
                        for c in 0..alg.dim(k) {
                            if !diff.column(c).is_empty() {
                                report.violations.push(Violation {
                                    kind: ViolationKind::Associativity,
                                    degrees: vec![i as i64, j as i64, k as i64],
                                    basis: vec![a, b, c],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    if alg.is_commutative() {
        for i in 0..=d {
            for j in i..=d - i {
                for a in 0..alg.dim(i) {
                    for b in 0..alg.dim(j) {
                        if i == j && b < a {
                            continue;
                        }
                        if alg.product(i, a, j, b) != alg.product(j, b, i, a) {
                            report.violations.push(Violation {
                                kind: ViolationKind::Commutativity,
                                degrees: vec![i as i64, j as i64],
                                basis: vec![a, b],
                            });
                        }
                    }
                }
            }
        }
    }
    if alg.is_unital() {
        for j in 0..=d {
            let left = alg.left_mul(0, 0, j).unwrap();
            if *left != SparseMatrix::identity(alg.dim(j)) {
                report.violations.push(Violation { kind: ViolationKind::Unit, degrees: vec![0, j as i64], basis: vec![0] });
            }
            for b in 0..alg.dim(j) {
                let right = alg.product(j, b, 0, 0).unwrap();
                if right != [(b, crate::Scalar::one())] {
                    report.violations.push(Violation {
                        kind: ViolationKind::Unit,
                        degrees: vec![j as i64, 0],
                        basis: vec![b],
                    });
                }
            }
        }
    }
    if let Some(deg) = first_ungenerated_degree(alg) {
        report.warnings.push(format!("declared generators do not generate A_{deg}"));
    }
    report
}

/// The lowest degree (>= 1) where the declared generators fail to span the algebra.
fn first_ungenerated_degree(alg: &GradedAlgebraTruncation) -> Option<usize> {
    let d = alg.max_degree();
    // spans[n] = matrix whose columns span the generated part of A_n
    let mut spans: Vec<SparseMatrix> = Vec::with_capacity(d + 1);
    spans.push(if alg.is_unital() {
        SparseMatrix::identity(alg.dim(0))
    } else {
        generator_columns(alg, 0)
    });
    for n in 1..=d {
        let mut s = generator_columns(alg, n);
        for g in alg.generators() {
            if g.degree == 0 || g.degree > n {
                continue;
            }
            let lm = alg.left_mul_element(g, n - g.degree).unwrap();
            s = s.hstack(&lm.mul(&spans[n - g.degree]));
        }
        if rank(&s) < alg.dim(n) {
            return Some(n);
        }
        spans.push(s);
    }
    None
}

fn generator_columns(alg: &GradedAlgebraTruncation, n: usize) -> SparseMatrix {
    let cols = alg
        .generators()
        .iter()
        .filter(|g| g.degree == n)
        .map(|g| g.coords.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    SparseMatrix::from_columns(alg.dim(n), cols)
}

pub fn validate_module(m: &GradedModuleWindow) -> ValidationReport {
    let mut report = ValidationReport::default();
    let alg = m.algebra();
    for j in m.degrees() {
        for i in 0..=alg.max_degree() {
            for k in 0..=alg.max_degree() - i {
                let t = j + (i + k) as i64;
                if !m.in_window(t) {
                    break;
                }
                // a (b m) = (ab) m for a ∈ A_i, b ∈ A_k
                for a in 0..alg.dim(i) {
                    for b in 0..alg.dim(k) {
                        let lhs = m.act(i, a, j + k as i64).unwrap().mul(m.act(k, b, j).unwrap());
                        let ab = alg.product(i, a, k, b).unwrap();
                        let mut rhs = SparseMatrix::zero(m.dim(t), m.dim(j));
                        for (c, coeff) in ab {
                            rhs = rhs.add(&m.act(i + k, *c, j).unwrap().scale(coeff));
                        }
                        let diff = lhs.sub(&rhs);
                        for col in 0..m.dim(j) {
                            if !diff.column(col).is_empty() {
                                report.violations.push(Violation {
                                    kind: ViolationKind::ModuleAssociativity,
                                    degrees: vec![i as i64, k as i64, j],
                                    basis: vec![a, b, col],
                                });
                            }
                        }
                    }
                }
            }
        }
        if alg.is_unital() && *m.act(0, 0, j).unwrap() != SparseMatrix::identity(m.dim(j)) {
            report.violations.push(Violation { kind: ViolationKind::ModuleUnit, degrees: vec![j], basis: vec![0] });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::test_fixtures::polynomial_ring;
    use crate::graded::{AlgebraElement, GradedModuleWindow};
    use crate::Scalar;
    use std::sync::Arc;

    #[test]
    fn polynomial_ring_is_valid() {
        let a = polynomial_ring(2, 3);
        let r = validate_algebra(&a);
        assert!(r.is_valid(), "{r:?}");
        assert!(r.warnings.is_empty());
        let m = GradedModuleWindow::algebra_window(Arc::new(a), 0, 3).unwrap();
        assert!(validate_module(&m).is_valid());
    }

    #[test]
    fn corrupted_entry_is_pinpointed() {
        // x * y = xy corrupted to 2 xy in A_1 x A_1 -> A_2; basis x, y and x^2, xy, y^2
        let a = polynomial_ring(2, 3).with_table_entry(1, 0, 1, 1, 1, Scalar::from_int(2));
        let r = validate_algebra(&a);
        assert!(!r.is_valid());
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Commutativity
            && v.degrees == vec![1, 1]
            && v.basis == vec![0, 1]));
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Associativity));
    }

    #[test]
    fn non_unital_nilpotent_is_valid() {
        // span{e}, e*e = 0, all in degree 0, no unit
        let a = GradedAlgebraTruncation::from_product_fn(
            vec![vec!["e".into()]],
            false,
            true,
            vec![AlgebraElement { degree: 0, coords: vec![Scalar::one()] }],
            |_, _, _, _| vec![],
        )
        .unwrap();
        let r = validate_algebra(&a);
        assert!(r.is_valid() && r.warnings.is_empty(), "{r:?}");
    }

    #[test]
    fn missing_generator_warns() {
        let a = polynomial_ring(2, 2);
        let stripped = GradedAlgebraTruncation::new(
            (0..=2).map(|i| a.basis(i).to_vec()).collect(),
            a.tables().clone(),
            true,
            true,
            vec![a.generators()[0].clone()],
        )
        .unwrap();
        let r = validate_algebra(&stripped);
        assert!(r.is_valid());
        assert_eq!(r.warnings.len(), 1);
    }
}
