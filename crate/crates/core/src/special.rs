//! Jacobi elliptic functions of real argument and the complete elliptic
//! integral of the first kind.
//!
//! The modulus `k` is used throughout (not the parameter `m = k²`).
//! Values come from the descending Landen (arithmetic-geometric mean)
//! recursion; derivatives follow from the differential identities
//! `sn' = cn dn`, `cn' = -sn dn`, `dn' = -k² sn cn`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 16;

/// Threshold on `|sn|` below which `ds` is reported as a pole.
pub const DS_POLE_THRESHOLD: f64 = 1e-12;

/// `sn`, `cn`, `dn` with their first and second derivatives in `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticJet {
    pub k: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub d1_sn: f64,
    pub d1_cn: f64,
    pub d1_dn: f64,
    pub d2_sn: f64,
    pub d2_cn: f64,
    pub d2_dn: f64,
}

impl EllipticJet {
    fn from_values(k: f64, sn: f64, cn: f64, dn: f64) -> Self {
        let k2 = k * k;
        EllipticJet {
            k,
            sn,
            cn,
            dn,
            d1_sn: cn * dn,
            d1_cn: -sn * dn,
            d1_dn: -k2 * sn * cn,
            d2_sn: -(1.0 + k2) * sn + 2.0 * k2 * sn * sn * sn,
            d2_cn: cn * (2.0 * k2 * sn * sn - 1.0),
            d2_dn: -k2 * dn * (cn * cn - sn * sn),
        }
    }

    /// `ds = dn / sn` with first and second derivatives, or `None` at a pole.
    pub fn ds(&self) -> Option<(f64, f64, f64)> {
        if self.sn.abs() < DS_POLE_THRESHOLD {
            return None;
        }
        let (s, c, d) = (self.sn, self.cn, self.dn);
        let value = d / s;
        let d1 = -c / (s * s);
        let d2 = d * (s * s + 2.0 * c * c) / (s * s * s);
        Some((value, d1, d2))
    }
}

fn check_modulus(k: f64) {
    assert!((0.0..=1.0).contains(&k), "elliptic modulus {k} outside [0, 1]");
}

/// Jacobi `sn`, `cn`, `dn` at `z` with analytic first and second derivatives.
pub fn jacobi_jet(z: f64, k: f64) -> EllipticJet {
    check_modulus(k);
    if k == 0.0 {
        return EllipticJet::from_values(k, z.sin(), z.cos(), 1.0);
    }
    if k == 1.0 {
        let sech = 1.0 / z.cosh();
        return EllipticJet::from_values(k, z.tanh(), sech, sech);
    }
    // Descending Landen sequence a_n, c_n.
    let mut a = [0.0; AGM_MAX_ITER + 1];
    let mut c = [0.0; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    c[0] = k;
    let mut n = 0;
    while c[n].abs() > AGM_TOL && n < AGM_MAX_ITER {
        let an = a[n];
        a[n + 1] = 0.5 * (an + b);
        c[n + 1] = 0.5 * (an - b);
        b = (an * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * z;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    // dn > 0 for real argument and k < 1
    let dn = (1.0 - k * k * sn * sn).sqrt();
    EllipticJet::from_values(k, sn, cn, dn)
}

/// `ds(z, k) = dn / sn`, `None` where `|sn| < 1e-12`.
pub fn jacobi_ds(z: f64, k: f64) -> Option<f64> {
    jacobi_jet(z, k).ds().map(|(v, _, _)| v)
}

/// `ds` with its first and second derivatives.
pub fn jacobi_ds_jet(z: f64, k: f64) -> Option<(f64, f64, f64)> {
    jacobi_jet(z, k).ds()
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, `K(k) = π / (2 agm(1, k'))`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Parameter { name: "k".into(), reason: format!("modulus {k} outside [0, 1)") });
    }
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - k * k).sqrt()))
}

/// Distance from `z` to the nearest zero of `sn(·, k)`, the lattice `2K ℤ`.
pub fn distance_to_sn_zero(z: f64, k: f64) -> f64 {
    let two_k = 2.0 * elliptic_k(k).expect("modulus below one");
    let r = z.rem_euclid(two_k);
    r.min(two_k - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn origin_values() {
        let j = jacobi_jet(0.0, FRAC_1_SQRT_2);
        assert_eq!((j.sn, j.cn, j.dn), (0.0, 1.0, 1.0));
    }

    #[test]
    fn unit_modulus_is_hyperbolic() {
        let j = jacobi_jet(1.0, 1.0);
        assert!((j.sn - 0.761_594_155_955_764_9).abs() < 1e-15);
        let ds = jacobi_ds(1.0, 1.0).unwrap();
        assert!((ds - 1.0 / 1f64.sinh()).abs() < 1e-15);
        assert!((ds - 0.850_918_128_239_321_5).abs() < 1e-14);
    }

    #[test]
    fn quarter_period() {
        let k = FRAC_1_SQRT_2;
        let big_k = elliptic_k(k).unwrap();
        let j = jacobi_jet(big_k, k);
        assert!((j.sn - 1.0).abs() < 1e-12);
        assert!(j.cn.abs() < 1e-12);
        assert!((j.dn - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((jacobi_ds(big_k, k).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        for k in [0.1, 0.5, 0.9] {
            let kk = elliptic_k(k).unwrap();
            assert!((jacobi_ds(kk, k).unwrap() - (1.0 - k * k).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ds_pole_at_origin() {
        assert!(jacobi_ds(0.0, FRAC_1_SQRT_2).is_none());
        let two_k = 2.0 * elliptic_k(0.5).unwrap();
        assert!(jacobi_ds(two_k, 0.5).is_none());
    }

    #[test]
    fn complete_integral_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!((elliptic_k(FRAC_1_SQRT_2).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!(elliptic_k(0.9).unwrap() > elliptic_k(0.5).unwrap());
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(1.5).is_err());
    }

    #[test]
    fn zero_distance() {
        let k = FRAC_1_SQRT_2;
        let two_k = 2.0 * elliptic_k(k).unwrap();
        assert!(distance_to_sn_zero(two_k + 0.01, k) < 0.0100001);
        assert!(distance_to_sn_zero(-two_k - 0.02, k) > 0.0199999);
        assert!((distance_to_sn_zero(0.5 * two_k, k) - 0.5 * two_k).abs() < 1e-12);
    }
}
