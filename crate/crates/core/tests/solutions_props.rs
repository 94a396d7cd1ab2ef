use nws_core::model::residual_from_jet;
use nws_core::solutions::{constant_solution, fixtures, list_families, LambdaSign};
use nws_core::{CoefficientTriple, Grid, Interval, PdeInstance};
use proptest::prelude::*;

fn epsilon(sign: LambdaSign) -> i32 {
    match sign {
        LambdaSign::Any => 1,
        s => s.epsilon(),
    }
}

fn nonzero() -> impl Strategy<Value = f64> {
    (0.3..2.0f64, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Every point the predicate calls regular evaluates to a finite jet that
    /// satisfies the constant-coefficient equation.
    #[test]
    fn regular_points_evaluate_and_solve(idx in 0usize..15, c1 in nonzero(), c1p in nonzero(), c2 in -2.0..2.0f64,
                                         neg in any::<bool>()) {
        let fam = &list_families()[idx];
        let mut p = fam.default_params();
        for (name, v) in [("C1", c1), ("C1prime", c1p), ("C2", c2)] {
            if fam.param_names.contains(&name) {
                p = p.with(name, v);
            }
        }
        p.negate = neg;
        let eps = epsilon(fam.lambda_sign);
        let s = constant_solution(fam.id, eps, &p).unwrap();
        for i in 0..11 {
            for k in 0..41 {
                let (t, x) = (0.1 * i as f64, -3.0 + 0.15 * k as f64);
                if !s.is_regular(t, x) {
                    continue;
                }
                let j = s.jet(t, x);
                prop_assert!(j.is_ok(), "{} {:?} at ({t}, {x}): {:?}", fam.id, p, j);
                let j = j.unwrap();
                prop_assert!(j.is_finite());
                let r = residual_from_jet(&j, 1.0, eps as f64, 1.0);
                let scale = j.u_t.abs() + j.u_xx.abs() + j.u.abs() + j.u.abs().powi(3);
                prop_assert!(r.abs() <= 1e-8 * scale.max(1.0), "{} residual {r:e} at ({t}, {x})", fam.id);
            }
        }
    }
}

#[test]
fn negation_preserves_solutions() {
    for fx in fixtures() {
        let (s, n) = (fx.solution().unwrap(), fx.solution_with(true).unwrap());
        let grid = fx.grid(41, 81);
        let rep = fx.pde().unwrap().residual_stats(&n, &grid).unwrap();
        assert!(rep.max_abs <= 1e-8 && rep.n_poles == 0, "{}: {rep:?}", fx.name());
        for (t, x) in grid.points().into_iter().step_by(37) {
            assert_eq!(s.value(t, x).unwrap(), -n.value(t, x).unwrap());
        }
    }
}

#[test]
fn stationary_families_have_no_time_derivative() {
    for id in ["Z4", "Z5", "Z6"] {
        let s = constant_solution(id, 0, &Default::default()).unwrap();
        for i in 0..21 {
            for k in 0..41 {
                let (t, x) = (0.25 * i as f64, 0.2 + 0.1 * k as f64);
                if let Ok(j) = s.jet(t, x) {
                    assert_eq!(j.u_t, 0.0, "{id} at ({t}, {x})");
                }
            }
        }
    }
}

#[test]
fn grids_through_sn_zeros_skip_poles() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let c = CoefficientTriple::parse("1", "0", "1", iv).unwrap();
    let pde = PdeInstance::new(c);
    for id in ["Z5", "Z6"] {
        let s = constant_solution(id, 0, &Default::default()).unwrap();
        let rep = pde.residual_stats(&s, &Grid::new(iv, 5, Interval::new(-5.0, 5.0).unwrap(), 101)).unwrap();
        assert!(rep.n_poles > 0, "{id}");
        assert!(rep.max_abs <= 1e-8, "{id}: {rep:?}");
    }
}
