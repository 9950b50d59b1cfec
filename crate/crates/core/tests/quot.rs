mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use dquot_core::graded::GradedModuleWindow;
use dquot_core::homalg::hom_direct;
use dquot_core::ingest::ideal_submodule;
use dquot_core::linalg::rank;
use dquot_core::quot::{
    chart_containing, chart_coordinates, chart_equations, chart_point, generate_from_bottom, is_submodule,
    tangent_classical, ChartSpec, QuotProblem,
};
use dquot_core::{Scalar, SparseMatrix};
use proptest::prelude::*;

/// `(nvars, window)` of the algebra as its own module; at most 6 dimensions per degree.
fn ambient() -> impl Strategy<Value = (usize, i64, i64)> {
    prop_oneof![(Just(1usize), 0i64..=1, 1i64..=3), (Just(2usize), 0i64..=1, 1i64..=2)]
        .prop_filter("low <= high", |(_, p, q)| p <= q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_equations_cut_out_submodules(
        (n, p, q) in ambient(),
        ranks in prop::collection::vec(0usize..=3, 4),
        values in prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -1i64..=1], 64),
    ) {
        let m = Arc::new(GradedModuleWindow::algebra_window(ring(n, q as usize).algebra().clone(), p, q).unwrap());
        let h: BTreeMap<i64, usize> = m.degrees().map(|j| (j, ranks[(j - p) as usize].min(m.dim(j)))).collect();
        let chart = ChartSpec { pivots: h.iter().map(|(j, k)| (*j, (0..*k).collect())).collect() };
        let qp = QuotProblem::new(m.clone(), h).unwrap();
        let eqs = chart_equations(&qp, &chart).unwrap();
        let x: Vec<Scalar> = values.iter().cycle().take(eqs.variables.len()).map(|v| Scalar::from_int(*v)).collect();
        let v = chart_point(&qp, &chart, &x).unwrap();
        let vanish = eqs.equations.iter().all(|e| e.eval(&x).is_zero());
        prop_assert_eq!(is_submodule(&v).holds, vanish);
        prop_assert_eq!(chart_coordinates(&qp, &chart, &v).unwrap(), Some(x));
    }

    #[test]
    fn generated_submodule_is_the_ideal(
        gens in prop::collection::vec(prop::collection::vec(0u32..=1, 2), 1..=3),
        width in 0i64..=2,
    ) {
        let gens: Vec<Vec<u32>> = gens.into_iter().map(|mut e| { e[0] = 1 - e[1]; e }).collect();
        let r = ring(2, 1 + width as usize);
        let m = Arc::new(GradedModuleWindow::algebra_window(r.algebra().clone(), 1, 1 + width).unwrap());
        let polys: Vec<_> = gens.iter().map(|e| mono(e)).collect();
        let ideal = ideal_submodule(&r, &polys, 1, 1 + width).unwrap();
        let cols = gens.iter().map(|e| vec![(r.standard_monomials(1).iter().position(|s| s == e).unwrap(), Scalar::one())]).collect();
        let w = SparseMatrix::from_columns(m.dim(1), cols);
        let generated = generate_from_bottom(m.clone(), 1, &w).unwrap();
        for j in m.degrees() {
            let (a, b) = (ideal.basis(j), generated.basis(j));
            prop_assert_eq!(rank(&a), rank(&b));
            prop_assert_eq!(rank(&a.hstack(&b)), rank(&a));
        }
    }
}

/// Monomial ideals: genuine points, inside the chart found for them, with the classical
/// tangent space equal to `Hom_A(V, M/V)`.
#[test]
fn monomial_ideal_points() {
    let cases: [(usize, &[&[u32]], i64, i64); 5] = [
        (2, &[&[1, 0]], 1, 3),
        (2, &[&[1, 1]], 2, 4),
        (2, &[&[2, 0], &[0, 2]], 2, 4),
        (3, &[&[1, 0, 0], &[0, 1, 0]], 1, 3),
        (3, &[&[2, 0, 0], &[1, 1, 0], &[0, 0, 2]], 2, 3),
    ];
    for (n, gens, p, q) in cases {
        let r = ring(n, q as usize);
        let polys: Vec<_> = gens.iter().map(|e| mono(e)).collect();
        let v = ideal_submodule(&r, &polys, p, q).unwrap();
        assert!(is_submodule(&v).holds);
        for j in p..=q {
            let g: Vec<Vec<u32>> = gens.iter().map(|e| e.to_vec()).collect();
            assert_eq!(v.dim(j), monomials(n, j as u32).len() - standard_count(n, &g, j as u32));
        }
        let qp = QuotProblem::new(v.ambient().clone(), v.dims()).unwrap();
        let chart = chart_containing(&v);
        let x = chart_coordinates(&qp, &chart, &v).unwrap().expect("point lies in its chart");
        assert!(chart_equations(&qp, &chart).unwrap().equations.iter().all(|e| e.eval(&x).is_zero()));
        let quotient = v.quotient().unwrap().module;
        let hom = hom_direct(&v.induced_module().unwrap(), &quotient).unwrap();
        assert_eq!(tangent_classical(&v).unwrap().dim, hom, "{gens:?}");
    }
}
