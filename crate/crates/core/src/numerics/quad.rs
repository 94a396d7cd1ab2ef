//! Adaptive Gauss-Kronrod quadrature and memoized antiderivatives.

use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::expr::Expr;

// Kronrod nodes and weights as tabulated, beyond f64 precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 40;

/// Kronrod-15 value and the difference to the embedded Gauss-7 rule.
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, (kronrod - gauss) * half))
}

fn adapt<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (value, err) = gk15(f, a, b)?;
    if err.abs() <= tol.max(4.0 * f64::EPSILON * value.abs()) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature(format!("no convergence on [{a}, {b}]")));
    }
    let mid = 0.5 * (a + b);
    Ok(adapt(f, a, mid, 0.5 * tol, depth + 1)? + adapt(f, mid, b, 0.5 * tol, depth + 1)?)
}

/// Adaptive G7-K15 integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    adapt(&f, a, b, tol, 0)
}

/// Integral of an expression in `t`.
pub fn integrate_expr(f: &Expr, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate(|t| f.eval_t(t).map_err(|e| Error::Quadrature(format!("integrand at t = {t}: {e}"))), a, b, tol)
}

/// Checkpoints sit on the lattice `t_ref + k * CHECKPOINT_SPACING`.
pub const CHECKPOINT_SPACING: f64 = 1.0;
const MAX_CHECKPOINTS: usize = 100_000;

/// `F(t) = ∫_{t_ref}^t f(s) ds`, memoized on a lattice of checkpoints.
///
/// Checkpoint values are built by chaining lattice panels outward from
/// `t_ref`, so every query returns the same value regardless of the order
/// in which concurrent callers extend the table.
#[derive(Debug)]
pub struct Antiderivative {
    integrand: Expr,
    t_ref: f64,
    tol: f64,
    forward: RwLock<Vec<f64>>,
    backward: RwLock<Vec<f64>>,
}

/// Memoized antiderivative handle of `f` based at `t_ref`.
pub fn antiderivative(f: Expr, t_ref: f64, tol: f64) -> Arc<Antiderivative> {
    Arc::new(Antiderivative::new(f, t_ref, tol))
}

impl Antiderivative {
    pub fn new(integrand: Expr, t_ref: f64, tol: f64) -> Self {
        assert!(t_ref.is_finite() && tol > 0.0);
        Antiderivative {
            integrand,
            t_ref,
            tol,
            forward: RwLock::new(vec![0.0]),
            backward: RwLock::new(vec![0.0]),
        }
    }

    pub fn integrand(&self) -> &Expr {
        &self.integrand
    }

    pub fn t_ref(&self) -> f64 {
        self.t_ref
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn lattice(&self, k: usize, forward: bool) -> f64 {
        let step = k as f64 * CHECKPOINT_SPACING;
        if forward {
            self.t_ref + step
        } else {
            self.t_ref - step
        }
    }

    fn checkpoint(&self, k: usize, forward: bool) -> Result<f64> {
        let table = if forward { &self.forward } else { &self.backward };
        if let Some(v) = table.read().expect("checkpoint table poisoned").get(k) {
            return Ok(*v);
        }
        if k > MAX_CHECKPOINTS {
            return Err(Error::Quadrature(format!(
                "query {} lies too far from the base point {}",
                self.lattice(k, forward),
                self.t_ref
            )));
        }
        let mut guard = table.write().expect("checkpoint table poisoned");
        while guard.len() <= k {
            let j = guard.len();
            let panel = integrate_expr(&self.integrand, self.lattice(j - 1, forward), self.lattice(j, forward), self.tol)?;
            let next = guard[j - 1] + panel;
            guard.push(next);
        }
        Ok(guard[k])
    }

    /// `F(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Quadrature(format!("non-finite query {t}")));
        }
        let d = t - self.t_ref;
        let forward = d >= 0.0;
        let k = (d.abs() / CHECKPOINT_SPACING).floor() as usize;
        let base = self.checkpoint(k, forward)?;
        Ok(base + integrate_expr(&self.integrand, self.lattice(k, forward), t, self.tol)?)
    }

    /// Stored `(t, F(t))` pairs in increasing `t`.
    pub fn checkpoints(&self) -> Vec<(f64, f64)> {
        let back = self.backward.read().expect("checkpoint table poisoned");
        let fwd = self.forward.read().expect("checkpoint table poisoned");
        let mut out: Vec<(f64, f64)> =
            back.iter().enumerate().skip(1).rev().map(|(k, v)| (self.lattice(k, false), *v)).collect();
        out.extend(fwd.iter().enumerate().map(|(k, v)| (self.lattice(k, true), *v)));
        out
    }
}
