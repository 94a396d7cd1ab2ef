//! Equations of the class `u_t = a²(t) u_xx + b(t) u - c(t) u³`, vector
//! fields, closed-form solutions and the residual operator.

mod jet;
mod solution;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

pub(crate) use jet::finite as finite_jet;
pub use jet::{Jet, JetResult};
pub use solution::{FieldFn, Solution, ValidityFn};

use crate::error::{Error, Result};
use crate::expr::{parse, EvalError, Expr, SampleBox, Var};

/// Number of interior samples used for nonvanishing and sign checks.
pub const CHECK_SAMPLES: usize = 64;

/// Closed real interval `[lo, hi]`, `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Invariant(format!("interval [{lo}, {hi}] is empty or unbounded")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// `n` midpoint samples of the interior.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.lo + (i as f64 + 0.5) / n as f64 * self.width()).collect()
    }

    /// `n` equally spaced points including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        linspace(self.lo, self.hi, n)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Parses `lo:hi`.
    fn from_str(s: &str) -> Result<Interval> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::Invariant(format!("interval `{s}` is not of the form lo:hi")))?;
        let num = |v: &str| {
            v.trim().parse::<f64>().map_err(|_| Error::Invariant(format!("interval bound `{v}` is not a number")))
        };
        Interval::new(num(lo)?, num(hi)?)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// The arbitrary elements `(a, b, c)` of one equation, as expressions in `t`,
/// together with the interval on which they are used.
#[derive(Debug, Clone)]
pub struct CoefficientTriple {
    a: Expr,
    b: Expr,
    c: Expr,
    interval: Interval,
    t_ref: f64,
}

impl CoefficientTriple {
    /// Checked construction: `a` and `c` must be pole-free and of constant
    /// nonzero sign at [`CHECK_SAMPLES`] interior points, `b` pole-free.
    pub fn new(a: Expr, b: Expr, c: Expr, interval: Interval) -> Result<Self> {
        let triple = Self::new_unchecked(a, b, c, interval);
        triple.validate()?;
        Ok(triple)
    }

    /// Construction without the nonvanishing checks, for test instances such
    /// as the linear heat equation with `c = 0`.
    pub fn new_unchecked(a: Expr, b: Expr, c: Expr, interval: Interval) -> Self {
        for (name, e) in [("a", &a), ("b", &b), ("c", &c)] {
            assert!(
                e.variables().iter().all(|v| *v == Var::T),
                "coefficient {name} must depend on t only"
            );
        }
        CoefficientTriple { a, b, c, interval, t_ref: interval.midpoint() }
    }

    /// Parse the three coefficients as expressions in `t`.
    pub fn parse(a: &str, b: &str, c: &str, interval: Interval) -> Result<Self> {
        let vars = [Var::T];
        Self::new(parse(a, &vars)?, parse(b, &vars)?, parse(c, &vars)?, interval)
    }

    /// Base point for antiderivatives; the interval midpoint by default.
    pub fn with_t_ref(mut self, t_ref: f64) -> Result<Self> {
        if !self.interval.contains(t_ref) {
            return Err(Error::Invariant(format!("base point {t_ref} outside {}", self.interval)));
        }
        self.t_ref = t_ref;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (name, e) in [("a", &self.a), ("c", &self.c)] {
            check_sign_definite(name, e, &self.interval)?;
        }
        for t in self.interval.samples(CHECK_SAMPLES) {
            self.b.eval_t(t).map_err(|e| Error::Invariant(format!("b is singular at t = {t}: {e}")))?;
        }
        Ok(())
    }

    pub fn a(&self) -> &Expr {
        &self.a
    }

    pub fn b(&self) -> &Expr {
        &self.b
    }

    pub fn c(&self) -> &Expr {
        &self.c
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn t_ref(&self) -> f64 {
        self.t_ref
    }

    /// `(a(t), b(t), c(t))`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64), EvalError> {
        Ok((self.a.eval_t(t)?, self.b.eval_t(t)?, self.c.eval_t(t)?))
    }

    /// Sample box over the interval, for zero tests of functions of `t`.
    pub fn time_box(&self) -> SampleBox {
        SampleBox::t(self.interval.lo, self.interval.hi)
    }
}

/// Checks `e` is finite, nonzero and of one sign at the interior samples;
/// returns that sign.
pub(crate) fn check_sign_definite(name: &str, e: &Expr, interval: &Interval) -> Result<f64> {
    let mut sign = 0.0;
    for t in interval.samples(CHECK_SAMPLES) {
        let v = e.eval_t(t).map_err(|err| Error::Invariant(format!("{name} is singular at t = {t}: {err}")))?;
        if v == 0.0 {
            return Err(Error::Invariant(format!("{name} vanishes at t = {t}")));
        }
        if sign == 0.0 {
            sign = v.signum();
        } else if v.signum() != sign {
            return Err(Error::Invariant(format!("{name} changes sign on {interval}")));
        }
    }
    Ok(sign)
}

/// One equation of the class.
#[derive(Debug, Clone)]
pub struct PdeInstance {
    pub coeffs: CoefficientTriple,
}

impl From<CoefficientTriple> for PdeInstance {
    fn from(coeffs: CoefficientTriple) -> Self {
        PdeInstance { coeffs }
    }
}

/// Rectangular `(t, x)` lattice with inclusive ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
}

impl Grid {
    pub fn new(t: Interval, nt: usize, x: Interval, nx: usize) -> Grid {
        Grid { t0: t.lo, t1: t.hi, nt, x0: x.lo, x1: x.hi, nx }
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order (`t` outer, `x` inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let ts = linspace(self.t0, self.t1, self.nt);
        let xs = linspace(self.x0, self.x1, self.nx);
        ts.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect()
    }
}

/// Aggregated residual over the pole-free points of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub rms: f64,
    pub n_evaluated: usize,
    pub n_poles: usize,
    pub grid: Grid,
}

impl PdeInstance {
    pub fn new(coeffs: CoefficientTriple) -> Self {
        PdeInstance { coeffs }
    }

    /// `u_t - a² u_xx - b u + c u³` from the solution jet at `(t, x)`.
    pub fn residual(&self, s: &Solution, t: f64, x: f64) -> Result<f64, EvalError> {
        if !s.is_regular(t, x) {
            return Err(EvalError::Pole { node: format!("{} at ({t}, {x})", s.family_id()) });
        }
        let j = s.jet(t, x)?;
        let (a, b, c) = self.coeffs.eval(t)?;
        Ok(residual_from_jet(&j, a, b, c))
    }

    /// Residual statistics over a grid. Points are evaluated in parallel and
    /// aggregated in grid order.
    pub fn residual_stats(&self, s: &Solution, grid: &Grid) -> Result<ResidualReport> {
        if grid.is_empty() {
            return Err(Error::Degenerate("empty residual grid".into()));
        }
        let values: Vec<Option<f64>> =
            grid.points().par_iter().map(|&(t, x)| self.residual(s, t, x).ok()).collect();
        let mut report = ResidualReport { max_abs: 0.0, rms: 0.0, n_evaluated: 0, n_poles: 0, grid: *grid };
        let mut sum_sq = 0.0;
        for v in values {
            match v {
                Some(r) => {
                    report.n_evaluated += 1;
                    report.max_abs = report.max_abs.max(r.abs());
                    sum_sq += r * r;
                }
                None => report.n_poles += 1,
            }
        }
        if report.n_evaluated == 0 {
            return Err(Error::AllPoles);
        }
        report.rms = (sum_sq / report.n_evaluated as f64).sqrt();
        Ok(report)
    }
}

/// Residual assembly from a jet and coefficient values.
pub fn residual_from_jet(j: &Jet, a: f64, b: f64, c: f64) -> f64 {
    j.u_t - a * a * j.u_xx - b * j.u + c * j.u * j.u * j.u
}

/// Vector field `τ ∂t + ξ ∂x + η ∂u` with coefficients in `(t, x, u)`.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub tau: Expr,
    pub xi: Expr,
    pub eta: Expr,
}

impl VectorField {
    pub fn new(tau: Expr, xi: Expr, eta: Expr) -> Self {
        assert!(
            !(tau.is_zero_literal() && xi.is_zero_literal()),
            "vector field needs a nonzero t or x component"
        );
        for e in [&tau, &xi, &eta] {
            assert!(e.variables().iter().all(|v| Var::TXU.contains(v)), "field coefficients use t, x, u only");
        }
        VectorField { tau, xi, eta }
    }

    pub fn parse(tau: &str, xi: &str, eta: &str) -> Result<Self> {
        let vf = VectorField { tau: parse(tau, &Var::TXU)?, xi: parse(xi, &Var::TXU)?, eta: parse(eta, &Var::TXU)? };
        if vf.tau.is_zero_literal() && vf.xi.is_zero_literal() {
            return Err(Error::Invariant("both t and x components are zero".into()));
        }
        Ok(vf)
    }

    /// `∂x`.
    pub fn space_translation() -> Self {
        VectorField::new(Expr::zero(), Expr::one(), Expr::zero())
    }

    /// `∂t`.
    pub fn time_translation() -> Self {
        VectorField::new(Expr::one(), Expr::zero(), Expr::zero())
    }

    /// Whether `τ` and `ξ` both vanish identically on the box.
    pub fn is_degenerate_on(&self, sample_box: &SampleBox) -> Result<bool> {
        let tau0 = crate::expr::is_identically_zero(&self.tau, sample_box, 64, 1e-12)?;
        let xi0 = crate::expr::is_identically_zero(&self.xi, sample_box, 64, 1e-12)?;
        Ok(tau0 && xi0)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, d) in [(&self.tau, "∂t"), (&self.xi, "∂x"), (&self.eta, "∂u")] {
            if coef.is_zero_literal() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if coef.is_num(1.0) {
                f.write_str(d)?;
            } else {
                write!(f, "({coef}){d}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
