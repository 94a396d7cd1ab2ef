//! Probabilistic identically-zero test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{EvalError, EvalPoint, Expr, Var};
use crate::error::{Error, Result};

/// Default seed of the quasi-random sampler.
pub const DEFAULT_SEED: u64 = 0x6e77_735f_7365_6564;

const PRIMES: [u32; Var::COUNT] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Axis-aligned box of sample ranges, one per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    ranges: Vec<(Var, f64, f64)>,
}

impl SampleBox {
    pub fn new() -> Self {
        SampleBox { ranges: Vec::new() }
    }

    /// One-dimensional box in `t`.
    pub fn t(lo: f64, hi: f64) -> Self {
        Self::new().with(Var::T, lo, hi)
    }

    pub fn with(mut self, v: Var, lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty range for {v}: [{lo}, {hi}]");
        self.ranges.retain(|(w, ..)| *w != v);
        self.ranges.push((v, lo, hi));
        self
    }

    pub fn range(&self, v: Var) -> Option<(f64, f64)> {
        self.ranges.iter().find(|(w, ..)| *w == v).map(|&(_, lo, hi)| (lo, hi))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.ranges.iter().map(|(v, ..)| *v)
    }

    /// Quasi-random point sequence over the box: a Halton sequence with a
    /// seeded Cranley-Patterson rotation.
    pub fn sampler(&self, seed: u64) -> impl Iterator<Item = EvalPoint> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shifts: Vec<f64> = self.ranges.iter().map(|_| rng.gen::<f64>()).collect();
        (1u64..).map(move |i| {
            let mut p = EvalPoint::new();
            for (d, &(v, lo, hi)) in self.ranges.iter().enumerate() {
                let q = (radical_inverse(i, PRIMES[d]) + shifts[d]).fract();
                p.set(v, lo + q * (hi - lo));
            }
            p
        })
    }
}

impl Default for SampleBox {
    fn default() -> Self {
        Self::new()
    }
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTestConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ZeroTestConfig {
    fn default() -> Self {
        ZeroTestConfig { trials: 64, tol: 1e-9, seed: DEFAULT_SEED }
    }
}

impl ZeroTestConfig {
    pub fn with_tol(self, tol: f64) -> Self {
        ZeroTestConfig { tol, ..self }
    }

    pub fn with_trials(self, trials: usize) -> Self {
        ZeroTestConfig { trials, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ZeroTestConfig { seed, ..self }
    }
}

/// Statistics of one zero test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroTestOutcome {
    pub is_zero: bool,
    /// Largest `|e| / (1 + scale)` over the accepted points.
    pub max_scaled_residual: f64,
    /// Largest `|e|` over the accepted points.
    pub max_abs_residual: f64,
    pub evaluated: usize,
    pub poles: usize,
}

/// Sample `e` at `cfg.trials` pole-free points of the box and compare each
/// value against `cfg.tol * (1 + scale)`.
pub fn zero_test(e: &Expr, sample_box: &SampleBox, cfg: &ZeroTestConfig) -> Result<ZeroTestOutcome> {
    assert!(cfg.trials >= 1, "zero test needs at least one trial");
    if let Some(v) = e.variables().into_iter().find(|v| sample_box.range(*v).is_none()) {
        return Err(Error::Eval(EvalError::Unassigned(v)));
    }
    let max_draws = cfg.trials * 10;
    let mut out = ZeroTestOutcome {
        is_zero: true,
        max_scaled_residual: 0.0,
        max_abs_residual: 0.0,
        evaluated: 0,
        poles: 0,
    };
    for p in sample_box.sampler(cfg.seed).take(max_draws) {
        if out.evaluated == cfg.trials {
            break;
        }
        match e.eval_with_scale(&p) {
            Ok((v, scale)) => {
                out.evaluated += 1;
                let scaled = v.abs() / (1.0 + scale);
                out.max_scaled_residual = out.max_scaled_residual.max(scaled);
                out.max_abs_residual = out.max_abs_residual.max(v.abs());
            }
            Err(EvalError::Unassigned(v)) => return Err(Error::Eval(EvalError::Unassigned(v))),
            Err(_) => out.poles += 1,
        }
    }
    if out.evaluated < cfg.trials {
        return Err(Error::Inconclusive { poles: out.poles, draws: out.poles + out.evaluated });
    }
    out.is_zero = out.max_scaled_residual <= cfg.tol;
    Ok(out)
}

/// Whether `e` vanishes identically on the box, up to `tol`.
pub fn is_identically_zero(e: &Expr, sample_box: &SampleBox, trials: usize, tol: f64) -> Result<bool> {
    let cfg = ZeroTestConfig { trials, tol, ..Default::default() };
    zero_test(e, sample_box, &cfg).map(|o| o.is_zero)
}
