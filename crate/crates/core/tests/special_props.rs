use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nws_core::special::{elliptic_k, jacobi_ds, jacobi_jet, EllipticJet};
use proptest::prelude::*;

type Channel = fn(&EllipticJet) -> f64;

const MODULI: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, FRAC_1_SQRT_2];

/// Incomplete integral F(φ, k) by composite Simpson.
fn incomplete_f(phi: f64, k: f64) -> f64 {
    let n = 2 * ((phi.abs() * 4000.0) as usize + 8);
    let h = phi / n as f64;
    let g = |th: f64| 1.0 / (1.0 - k * k * th.sin().powi(2)).sqrt();
    let mut s = g(0.0) + g(phi);
    for i in 1..n {
        s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Amplitude am(z, k): bisection on F(φ, k) = z over [k'z, z], then Newton.
fn amplitude(z: f64, k: f64) -> f64 {
    let (mut lo, mut hi) = (z * (1.0 - k * k).sqrt(), z);
    if lo > hi {
        (lo, hi) = (hi, lo);
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if incomplete_f(mid, k) < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut phi = 0.5 * (lo + hi);
    for _ in 0..50 {
        let step = (incomplete_f(phi, k) - z) * (1.0 - k * k * phi.sin().powi(2)).sqrt();
        phi -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    phi
}

fn agm_oracle(a: f64, b: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    while (a - b).abs() > 1e-15 * a {
        (a, b) = ((a + b) / 2.0, (a * b).sqrt());
    }
    a
}

#[test]
fn matches_amplitude_oracle() {
    for &k in &[0.05, 0.3, FRAC_1_SQRT_2, 0.9, 0.99] {
        for i in 0..21 {
            let z = -4.0 + 0.4 * i as f64;
            let phi = amplitude(z, k);
            let j = jacobi_jet(z, k);
            let dn = (1.0 - k * k * phi.sin().powi(2)).sqrt();
            assert!((j.sn - phi.sin()).abs() < 1e-10, "sn({z}, {k}) {} vs {}", j.sn, phi.sin());
            assert!((j.cn - phi.cos()).abs() < 1e-10, "cn({z}, {k})");
            assert!((j.dn - dn).abs() < 1e-10, "dn({z}, {k})");
        }
    }
}

#[test]
fn pythagorean_identities_and_derivative_rules() {
    for &k in &MODULI {
        for i in 0..1000 {
            let z = -10.0 + 20.0 * i as f64 / 999.0;
            let j = jacobi_jet(z, k);
            assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() <= 1e-12);
            assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() <= 1e-12);
            assert!((j.d1_sn - j.cn * j.dn).abs() <= 1e-11);
            assert!((j.d1_cn + j.sn * j.dn).abs() <= 1e-11);
            assert!((j.d1_dn + k * k * j.sn * j.cn).abs() <= 1e-11);
        }
    }
}

#[test]
fn periodicity() {
    for &k in &MODULI {
        let big_k = elliptic_k(k).unwrap();
        for i in 0..50 {
            let z = -5.0 + 0.2 * i as f64;
            let (a, b, c) = (jacobi_jet(z, k), jacobi_jet(z + 4.0 * big_k, k), jacobi_jet(z + 2.0 * big_k, k));
            assert!((a.sn - b.sn).abs() <= 1e-10);
            assert!((a.cn - b.cn).abs() <= 1e-10);
            assert!((a.dn - c.dn).abs() <= 1e-10);
        }
    }
}

#[test]
fn degenerate_moduli() {
    for i in 0..101 {
        let z = -5.0 + 0.1 * i as f64;
        for k in [0.0, 1e-9] {
            let j = jacobi_jet(z, k);
            assert!((j.sn - z.sin()).abs() <= 1e-10 && (j.cn - z.cos()).abs() <= 1e-10 && (j.dn - 1.0).abs() <= 1e-10);
        }
        let j = jacobi_jet(z, 1.0);
        let sech = 1.0 / z.cosh();
        assert!((j.sn - z.tanh()).abs() <= 1e-10 && (j.cn - sech).abs() <= 1e-10 && (j.dn - sech).abs() <= 1e-10);
    }
}

#[test]
fn complete_integral() {
    let k = FRAC_1_SQRT_2;
    // Γ(1/4)² / (4√π)
    let lemniscatic = 1.854_074_677_301_371_9;
    assert!((elliptic_k(k).unwrap() - lemniscatic).abs() <= 1e-13 * lemniscatic);
    for k in [0.0, 0.1, 0.5, k, 0.9, 0.999] {
        let oracle = FRAC_PI_2 / agm_oracle(1.0, (1.0 - k * k).sqrt());
        let quad = incomplete_f(FRAC_PI_2, k);
        let got = elliptic_k(k).unwrap();
        assert!((got - oracle).abs() <= 1e-14 * oracle);
        if k < 0.95 {
            assert!((got - quad).abs() <= 1e-10 * quad);
        }
    }
    assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
    assert!(elliptic_k(0.9).unwrap() > elliptic_k(0.5).unwrap());
    assert!(elliptic_k(1.0).is_err());
}

#[test]
fn quarter_period_and_ds() {
    for &k in &MODULI {
        let big_k = elliptic_k(k).unwrap();
        let j = jacobi_jet(big_k, k);
        assert!((j.sn - 1.0).abs() <= 1e-12 && j.cn.abs() <= 1e-12);
        let ds = jacobi_ds(big_k, k).unwrap();
        assert!((ds - (1.0 - k * k).sqrt()).abs() <= 1e-12);
        assert!(jacobi_ds(0.0, k).is_none());
        assert!(jacobi_ds(2.0 * big_k, k).is_none());
    }
    let j = jacobi_jet(0.0, FRAC_1_SQRT_2);
    assert_eq!((j.sn, j.cn, j.dn), (0.0, 1.0, 1.0));
    assert!((jacobi_jet(1.0, 1.0).sn - 1f64.tanh()).abs() < 1e-15);
    assert!((jacobi_ds(1.0, 1.0).unwrap() - 1.0 / 1f64.sinh()).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jet_matches_differences(z in -10.0..10.0f64, k in 0.0..1.0f64) {
        let j = jacobi_jet(z, k);
        let f = |h: f64| jacobi_jet(z + h, k);
        let h1 = 1e-5;
        let (p, m) = (f(h1), f(-h1));
        for (d1, vp, vm) in [(j.d1_sn, p.sn, m.sn), (j.d1_cn, p.cn, m.cn), (j.d1_dn, p.dn, m.dn)] {
            prop_assert!((d1 - (vp - vm) / (2.0 * h1)).abs() <= 1e-7);
        }
        // Richardson-extrapolated second difference, rounding in the value
        // channel swamps a plain stencil at small h
        let second = |h: f64, pick: fn(&EllipticJet) -> f64| {
            let d = |h: f64| (pick(&f(h)) - 2.0 * pick(&j) + pick(&f(-h))) / (h * h);
            (4.0 * d(h / 2.0) - d(h)) / 3.0
        };
        let picks: [(f64, Channel); 3] =
            [(j.d2_sn, |e| e.sn), (j.d2_cn, |e| e.cn), (j.d2_dn, |e| e.dn)];
        for (d2, pick) in picks {
            let fd = second(2e-3, pick);
            prop_assert!((d2 - fd).abs() <= 1e-7, "{d2} vs {fd}");
        }
        let h2 = 1e-4;
        let (p, m) = (f(h2), f(-h2));
        if let Some((v, d1, d2)) = j.ds() {
            if j.sn.abs() > 0.1 {
                let (vp, vm) = (p.ds().unwrap().0, m.ds().unwrap().0);
                let scale = v.abs().max(1.0).powi(3);
                prop_assert!((d1 - (vp - vm) / (2.0 * h2)).abs() <= 1e-6 * scale);
                prop_assert!((d2 - (vp - 2.0 * v + vm) / (h2 * h2)).abs() <= 1e-5 * scale);
            }
        }
    }

    #[test]
    fn identities_hold_everywhere(z in -50.0..50.0f64, k in 0.0..=1.0f64) {
        let j = jacobi_jet(z, k);
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() <= 1e-12);
        prop_assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() <= 1e-12);
        prop_assert!(j.dn > 0.0);
    }
}
