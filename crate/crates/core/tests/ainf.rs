mod common;

use std::collections::HashMap;

use common::*;
use dquot_core::dg::module_of_action;
use dquot_core::graded::GradedModuleWindow;
use dquot_core::homalg::{check_ainf_module, transport, AInfinityModuleStructure, BarComodule, TensorKey, Vector};
use dquot_core::Scalar;
use proptest::prelude::*;

fn out_degree(s: &AInfinityModuleStructure, key: &TensorKey) -> i64 {
    key.vdeg + key.algebra.iter().map(|k| s.aug().degree(*k) as i64).sum::<i64>()
}

/// Regular modules of `K[x]`, `K[x,y]` and of nilpotent algebras, on a window starting at 0.
fn module() -> impl Strategy<Value = GradedModuleWindow> {
    prop_oneof![
        (1usize..=4, 0i64..=2).prop_map(|(d, h)| GradedModuleWindow::algebra_window(ring(1, d).algebra().clone(), 0, h.min(d as i64)).unwrap()),
        (0i64..=1).prop_map(|h| GradedModuleWindow::algebra_window(ring(2, 2).algebra().clone(), 0, h).unwrap()),
        (1usize..=3).prop_map(|k| GradedModuleWindow::algebra_window(nilpotent(k), 0, 0).unwrap()),
        (1usize..=3, 1usize..=2).prop_map(|(k, n)| GradedModuleWindow::trivial(nilpotent(k), 0, &[n]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn modules_are_valid_and_round_trip(m in module()) {
        let s = AInfinityModuleStructure::from_module(&m, 3);
        prop_assert!(check_ainf_module(&s, 3).unwrap().is_valid());
        prop_assert_eq!(BarComodule::new(&s, 3).first_square_failure(&s).unwrap(), None);
        let back = module_of_action(&s).unwrap();
        for j in m.degrees() {
            for i in 0..=m.algebra().max_degree() {
                for a in 0..m.algebra().dim(i) {
                    prop_assert_eq!(back.act(i, a, j), m.act(i, a, j));
                }
            }
        }
    }

    #[test]
    fn transport_stays_valid(m in module(), coeffs in prop::collection::vec(-2i64..=2, 64)) {
        let s = AInfinityModuleStructure::from_module(&m, 3);
        let mut c = coeffs.into_iter().cycle();
        let f1: HashMap<TensorKey, Vector> = s
            .keys(1)
            .into_iter()
            .map(|k| {
                let v = (0..s.space().dim(out_degree(&s, &k)))
                    .map(|l| (l, Scalar::from_int(c.next().unwrap())))
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
                (k, v)
            })
            .collect();
        let t = transport(&s, &[f1], 3).unwrap();
        prop_assert!(check_ainf_module(&t, 3).unwrap().is_valid());
    }

    #[test]
    fn checker_agrees_with_bar_square(m in module(), pick in any::<prop::sample::Index>(), value in 1i64..=3) {
        let base = AInfinityModuleStructure::from_module(&m, 3);
        let entries: Vec<(usize, TensorKey, usize)> = (1..=3)
            .flat_map(|n| base.keys(n).into_iter().map(move |k| (n, k)))
            .flat_map(|(n, k)| (0..base.space().dim(out_degree(&base, &k))).map(move |l| (n, k.clone(), l)))
            .collect();
        prop_assume!(!entries.is_empty());
        let (n, key, l) = pick.get(&entries).clone();
        let mut s = base.clone();
        s.perturb(n, key, l, &Scalar::from_int(value));
        let checker = check_ainf_module(&s, 4).unwrap().first_failure();
        let bar = BarComodule::new(&s, 4).first_square_failure(&s).unwrap();
        prop_assert_eq!(checker, bar);
        if let Some(f) = checker {
            prop_assert!(f >= n);
        }
    }
}

#[test]
fn perturbations_of_the_trivial_dual_number_action_are_detected() {
    let m = GradedModuleWindow::trivial(nilpotent(1), 0, &[1]).unwrap();
    let base = AInfinityModuleStructure::from_module(&m, 3);
    for n in 1..=3 {
        for key in base.keys(n) {
            let mut s = base.clone();
            s.perturb(n, key, 0, &Scalar::one());
            let f = check_ainf_module(&s, 6).unwrap().first_failure();
            assert!(f.is_some_and(|f| f >= n), "μ_{n}: {f:?}");
        }
    }
}

/// Not every perturbation is an error: `ε` may act on `K^2` by a Jordan block instead of zero.
#[test]
fn some_perturbations_are_deformations() {
    let m = GradedModuleWindow::trivial(nilpotent(1), 0, &[2]).unwrap();
    let mut s = AInfinityModuleStructure::from_module(&m, 2);
    s.perturb(1, TensorKey { algebra: vec![0], vdeg: 0, v: 0 }, 1, &Scalar::one());
    assert!(check_ainf_module(&s, 4).unwrap().is_valid());
}
