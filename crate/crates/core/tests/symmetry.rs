use nws_core::expr::{parse, EvalPoint, Expr, Var};
use nws_core::gauge_transform;
use nws_core::symmetry::{
    check_lie_invariance, classify_lie, classify_triple, lie_basis_ungauged, nonclassical_catalog, verify_nonclassical,
    x1_operator, CaseKind, CaseTag,
};
use nws_core::{CoefficientTriple, Interval, PdeInstance};
use proptest::prelude::*;

fn nonzero(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    prop_oneof![-hi..-lo, lo..hi]
}

fn power_instance(mu: f64, g: f64, d: f64, rho: f64) -> (Expr, Interval) {
    let c = Expr::num(mu) * (Expr::num(g) * Expr::t() + d).powf(rho);
    let root = -d / g;
    let i = if g > 0.0 { Interval::new(root + 0.5, root + 2.5) } else { Interval::new(root - 2.5, root - 0.5) };
    (c, i.unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn gauged_pde(c: &Expr, i: Interval) -> PdeInstance {
    PdeInstance::new(CoefficientTriple::new(Expr::one(), Expr::zero(), c.clone(), i).unwrap())
}

fn all_invariant(c: &Expr, i: Interval, basis: &[nws_core::VectorField]) -> bool {
    let p = gauged_pde(c, i);
    basis.iter().all(|v| check_lie_invariance(&p, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_parameters_recovered(mu in nonzero(0.2, 3.0), g in nonzero(0.2, 3.0), d in nonzero(0.2, 3.0), rho in nonzero(0.2, 3.0)) {
        let (c, i) = power_instance(mu, g, d, rho);
        let k = classify_lie(&c, i).unwrap();
        match k.kind {
            CaseKind::Power { mu: m, gamma, delta, rho: r } => {
                prop_assert!(rel(r, rho) < 1e-6);
                prop_assert_eq!(gamma, g.signum());
                prop_assert!(rel(delta, d / g.abs()) < 1e-6);
                prop_assert!(rel(m, mu * g.abs().powf(rho)) < 1e-6);
                for t in i.samples(16) {
                    let fit = m * (gamma * t + delta).powf(r);
                    prop_assert!(rel(fit, c.eval_t(t).unwrap()) < 1e-8);
                }
            }
            other => prop_assert!(false, "{:?}", other),
        }
        prop_assert!(all_invariant(&c, i, &k.basis));
    }

    #[test]
    fn exponential_parameters_recovered(mu in nonzero(0.2, 3.0), sigma in nonzero(0.2, 3.0), t0 in -2.0..2.0f64) {
        let c = Expr::num(mu) * (Expr::num(sigma) * Expr::t()).exp();
        let i = Interval::new(t0, t0 + 1.0).unwrap();
        let k = classify_lie(&c, i).unwrap();
        match k.kind {
            CaseKind::Exponential { mu: m, sigma: s } => {
                prop_assert!(rel(s, sigma) < 1e-6 && rel(m, mu) < 1e-6);
            }
            other => prop_assert!(false, "{:?}", other),
        }
        prop_assert!(all_invariant(&c, i, &k.basis));
    }

    #[test]
    fn scale_consistency(mu in nonzero(0.2, 3.0), sigma in nonzero(0.2, 3.0)) {
        let i = Interval::new(0.5, 1.5).unwrap();
        for c in [Expr::num(mu), Expr::num(mu) * (Expr::num(sigma) * Expr::t()).exp(), Expr::num(mu) * Expr::t().powf(sigma)] {
            let k1 = classify_lie(&c, i).unwrap();
            let k2 = classify_lie(&(Expr::num(2.0) * &c), i).unwrap();
            prop_assert_eq!(k1.tag(), k2.tag());
            prop_assert!((k2.kind.mu().unwrap() / k1.kind.mu().unwrap() - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn catalogue_operators_pass_and_perturbations_fail(mu in nonzero(0.3, 3.0), sigma in nonzero(0.3, 3.0)) {
        for kind in [CaseKind::Constant { mu }, CaseKind::Exponential { mu, sigma }] {
            let ops = nonclassical_catalog(&kind);
            prop_assert!(!ops.is_empty());
            for op in ops {
                let r = verify_nonclassical(&op.field.xi, &op.field.eta, &op.c).unwrap();
                prop_assert!(r.pass, "{} {:?}", op.name, r);
                let eta = &op.field.eta + Expr::num(0.01) * Expr::u();
                let r = verify_nonclassical(&op.field.xi, &eta, &op.c).unwrap();
                prop_assert!(!r.pass);
                let worst = r.equations.iter().map(|e| e.max_abs_residual).fold(0.0, f64::max);
                prop_assert!(worst >= 1e-3, "{} {}", op.name, worst);
            }
        }
    }
}

#[test]
fn x1_operator_for_both_exponential_signs() {
    for (alpha, sigma) in [(0.25, 1.0), (-0.25, -1.0)] {
        let op = x1_operator(alpha, 3.0 / 2f64.sqrt());
        let c = parse(&format!("exp({sigma}*t)"), &[Var::T]).unwrap();
        let p = EvalPoint::t(0.37);
        assert!((op.c.eval(&p).unwrap() - c.eval(&p).unwrap()).abs() < 1e-14);
        assert!(verify_nonclassical(&op.field.xi, &op.field.eta, &op.c).unwrap().pass);
    }
}

#[test]
fn ungauged_classification_cases() {
    let i = Interval::new(0.2, 1.4).unwrap();
    let cases = [
        ("exp(t)", "sin(t)", CaseKind::Power { mu: 1.5, gamma: 1.0, delta: 2.0, rho: 1.7 }),
        ("1+t^2", "t", CaseKind::Exponential { mu: -0.7, sigma: 1.3 }),
        ("exp(t)", "0", CaseKind::Constant { mu: 2.0 }),
        ("2+cos(t)", "1/(1+t)", CaseKind::Constant { mu: 0.5 }),
    ];
    for (a, b, kind) in cases {
        let shell = CoefficientTriple::parse(a, b, "1", i).unwrap();
        let a2 = shell.a().clone().powf(2.0);
        let big_t = nws_core::equivalence::antiderivative_expr(&a2, shell.t_ref());
        let big_b = nws_core::equivalence::antiderivative_expr(shell.b(), shell.t_ref());
        let c = &a2 * (Expr::num(-2.0) * big_b).exp() * kind.profile(&big_t).unwrap();
        let triple = CoefficientTriple::new(shell.a().clone(), shell.b().clone(), c, i).unwrap();
        let basis = lie_basis_ungauged(&triple, &kind).unwrap();
        let p = PdeInstance::new(triple.clone());
        for v in &basis {
            assert!(check_lie_invariance(&p, v).unwrap(), "{a} {b} {kind:?}: {v}");
        }
        let k = classify_triple(&triple).unwrap();
        assert_eq!(k.tag(), kind.tag());

        // the gauged image carries the same case
        let (_, gauged) = gauge_transform(&triple).unwrap();
        assert_eq!(classify_lie(gauged.c(), gauged.interval()).unwrap().tag(), kind.tag());
    }
}

#[test]
fn arbitrary_control() {
    let c = parse("exp(t^2)", &[Var::T]).unwrap();
    let k = classify_lie(&c, Interval::new(0.3, 2.0).unwrap()).unwrap();
    assert_eq!(k.tag(), CaseTag::Arbitrary);
    assert_eq!(k.basis.len(), 1);
    assert_eq!(nonclassical_catalog(&k.kind).len(), 0);
}
