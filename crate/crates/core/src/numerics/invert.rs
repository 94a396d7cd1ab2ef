//! Inversion of strictly monotone functions of one variable.

use std::sync::Arc;

use crate::expr::{EvalError, Expr, Var};

/// Tolerance of the inversion, relative to `max(1, |s|)`.
pub const INVERSION_TOL: f64 = 1e-13;
const MAX_EXPANSIONS: usize = 6;

/// A strictly monotone function of `t` with its derivative and a bracket
/// on which the monotonicity is known.
#[derive(Debug)]
pub struct MonotoneMap {
    function: Expr,
    derivative: Expr,
    lo: f64,
    hi: f64,
}

impl MonotoneMap {
    pub fn new(function: Expr, lo: f64, hi: f64) -> Arc<MonotoneMap> {
        assert!(lo < hi, "empty bracket [{lo}, {hi}]");
        let derivative = function.differentiate(Var::T);
        Arc::new(MonotoneMap { function, derivative, lo, hi })
    }

    pub fn function(&self) -> &Expr {
        &self.function
    }

    pub fn derivative(&self) -> &Expr {
        &self.derivative
    }

    pub fn bracket(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// `s` with `function(s) = y`, by bracketed bisection refined by Newton.
    ///
    /// The bracket is widened a few times when `y` falls outside its image;
    /// failure to bracket is an [`EvalError::Inversion`].
    pub fn invert(&self, y: f64) -> Result<f64, EvalError> {
        invert_monotone(|s| self.function.eval_t(s), |s| self.derivative.eval_t(s), y, self.lo, self.hi)
    }
}

/// Solve `f(s) = y` for strictly monotone `f` on a bracket around `[lo, hi]`.
pub fn invert_monotone<F, D>(f: F, df: D, y: f64, lo: f64, hi: f64) -> Result<f64, EvalError>
where
    F: Fn(f64) -> Result<f64, EvalError>,
    D: Fn(f64) -> Result<f64, EvalError>,
{
    if !y.is_finite() {
        return Err(EvalError::Inversion(format!("non-finite target {y}")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut ga = f(a)? - y;
    let mut gb = f(b)? - y;
    let increasing = gb > ga;
    if gb == ga {
        return Err(EvalError::Inversion(format!("map is constant on [{lo}, {hi}]")));
    }
    let width = hi - lo;
    let mut expansions = 0;
    while ga.signum() == gb.signum() && ga != 0.0 && gb != 0.0 {
        if expansions == MAX_EXPANSIONS {
            return Err(EvalError::Inversion(format!("target {y} lies outside the image of [{a}, {b}]")));
        }
        expansions += 1;
        let step = width * (1 << expansions) as f64;
        // Below the image on an increasing map means moving left.
        if (ga > 0.0) == increasing {
            b = a;
            gb = ga;
            a -= step;
            ga = f(a)? - y;
        } else {
            a = b;
            ga = gb;
            b += step;
            gb = f(b)? - y;
        }
        if (gb > ga) != increasing {
            return Err(EvalError::Inversion(format!("map is not monotone on [{a}, {b}]")));
        }
    }
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    let mut s = a + (b - a) * (-ga) / (gb - ga);
    for _ in 0..200 {
        let g = f(s)? - y;
        if g == 0.0 {
            return Ok(s);
        }
        if g.signum() == ga.signum() {
            a = s;
            ga = g;
        } else {
            b = s;
        }
        let d = df(s).unwrap_or(f64::NAN);
        let mut next = s - g / d;
        if !next.is_finite() || next <= a.min(b) || next >= a.max(b) {
            next = 0.5 * (a + b);
        }
        let scale = s.abs().max(1.0);
        if (next - s).abs() <= INVERSION_TOL * scale || (b - a).abs() <= INVERSION_TOL * scale {
            return Ok(next);
        }
        s = next;
    }
    Err(EvalError::Inversion(format!("no convergence for target {y}")))
}
