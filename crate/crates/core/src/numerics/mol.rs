//! Method of lines: central differences in `x`, Dormand–Prince 5(4) in `t`,
//! Dirichlet data taken from a reference solution.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Interval, PdeInstance, Solution};

/// Smallest admissible `nx` (number of intervals).
pub const MIN_NX: usize = 16;

#[derive(Debug, Clone)]
pub struct MolConfig {
    pub nx: usize,
    pub rtol: f64,
    pub atol: f64,
    /// Output times inside the integration window; the final time is always
    /// included.
    pub outputs: Vec<f64>,
    pub max_steps: usize,
}

impl MolConfig {
    pub fn new(nx: usize) -> Self {
        MolConfig { nx, rtol: 1e-10, atol: 1e-12, outputs: Vec::new(), max_steps: 5_000_000 }
    }

    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn with_outputs(mut self, outputs: Vec<f64>) -> Self {
        self.outputs = outputs;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Solution values on `t_levels × x`, boundary nodes included.
#[derive(Debug, Clone, Serialize)]
pub struct NumericField {
    pub t_levels: Vec<f64>,
    pub x: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub stats: SolverStats,
}

impl NumericField {
    pub fn final_values(&self) -> &[f64] {
        self.values.last().expect("at least one level")
    }

    /// Max-abs difference from `exact` at output level `level`, skipping
    /// points where `exact` is singular.
    pub fn max_abs_error(&self, exact: &Solution, level: usize) -> Result<f64> {
        let t = self.t_levels[level];
        let mut worst = 0.0f64;
        let mut seen = 0;
        for (x, v) in self.x.iter().zip(&self.values[level]) {
            if let Some(e) = exact.value(t, *x) {
                worst = worst.max((v - e).abs());
                seen += 1;
            }
        }
        if seen == 0 {
            return Err(Error::AllPoles);
        }
        Ok(worst)
    }

    pub fn final_error(&self, exact: &Solution) -> Result<f64> {
        self.max_abs_error(exact, self.t_levels.len() - 1)
    }

    /// Rows `t,x,u`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,u")?;
        for (t, row) in self.t_levels.iter().zip(&self.values) {
            for (x, u) in self.x.iter().zip(row) {
                writeln!(w, "{t},{x},{u}")?;
            }
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Semi<'a> {
    p: &'a PdeInstance,
    init: &'a Solution,
    x0: f64,
    x1: f64,
    inv_h2: f64,
}

impl Semi<'_> {
    fn boundary(&self, t: f64) -> Result<(f64, f64)> {
        match (self.init.value(t, self.x0), self.init.value(t, self.x1)) {
            (Some(l), Some(r)) if l.is_finite() && r.is_finite() => Ok((l, r)),
            _ => Err(Error::BoundaryPole { t }),
        }
    }

    /// Interior right-hand side.
    fn rhs(&self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        let (a, b, c) = self.p.coeffs.eval(t)?;
        let (l, r) = self.boundary(t)?;
        let d = a * a * self.inv_h2;
        let n = y.len();
        for i in 0..n {
            let left = if i == 0 { l } else { y[i - 1] };
            let right = if i + 1 == n { r } else { y[i + 1] };
            let u = y[i];
            out[i] = d * (left - 2.0 * u + right) + b * u - c * u * u * u;
        }
        Ok(())
    }
}

/// Integrates `p` from the data of `init` at `t.lo` up to `t.hi` on `nx`
/// uniform intervals of `x`.
pub fn mol_solve(p: &PdeInstance, init: &Solution, t: Interval, x: Interval, cfg: &MolConfig) -> Result<NumericField> {
    if cfg.nx < MIN_NX {
        return Err(Error::Parameter { name: "nx".into(), reason: format!("must be at least {MIN_NX}") });
    }
    if !(cfg.rtol > 0.0 && cfg.atol > 0.0) {
        return Err(Error::Parameter { name: "tol".into(), reason: "tolerances must be positive".into() });
    }
    let h = x.width() / cfg.nx as f64;
    let nodes: Vec<f64> = (0..=cfg.nx).map(|i| if i == cfg.nx { x.hi } else { x.lo + h * i as f64 }).collect();
    let semi = Semi { p, init, x0: x.lo, x1: x.hi, inv_h2: 1.0 / (h * h) };

    let mut y = Vec::with_capacity(cfg.nx - 1);
    for &xi in &nodes[1..cfg.nx] {
        match init.value(t.lo, xi) {
            Some(v) if v.is_finite() => y.push(v),
            _ => return Err(Error::Parameter { name: "init".into(), reason: format!("singular at ({}, {xi})", t.lo) }),
        }
    }

    let mut outputs: Vec<f64> = cfg.outputs.iter().copied().filter(|&s| s > t.lo && s < t.hi).collect();
    outputs.push(t.hi);
    outputs.sort_by(f64::total_cmp);
    outputs.dedup();

    let full_row = |tt: f64, y: &[f64]| -> Result<Vec<f64>> {
        let (l, r) = semi.boundary(tt)?;
        let mut row = Vec::with_capacity(y.len() + 2);
        row.push(l);
        row.extend_from_slice(y);
        row.push(r);
        Ok(row)
    };

    let n = y.len();
    let mut stats = SolverStats::default();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut tt = t.lo;
    semi.rhs(tt, &y, &mut k[0])?;
    stats.rhs_evals += 1;

    // explicit stability bound of the diffusion stencil, then local control
    let (a0, _, _) = p.coeffs.eval(tt)?;
    let mut step = (0.5 * h * h / (a0 * a0).max(1e-300)).min(1e-3 * t.width()).min(t.width());

    let mut levels = vec![t.lo];
    let mut values = vec![full_row(tt, &y)?];
    for &target in &outputs {
        while tt < target {
            if stats.steps + stats.rejected >= cfg.max_steps {
                return Err(Error::StepUnderflow { t: tt });
            }
            let last = tt + step >= target;
            let dt = if last { target - tt } else { step };
            if dt <= 1e-14 * tt.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: tt });
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += dt * A[s][j] * kj[i];
                    }
                    stage[i] = acc;
                }
                semi.rhs(tt + C[s] * dt, &stage, &mut k[s])?;
                stats.rhs_evals += 1;
            }
            // stage 6 is the fifth-order solution (FSAL)
            y_new.copy_from_slice(&stage);
            let mut err2 = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let sc = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
                err2 += (dt * e / sc).powi(2);
            }
            let err = (err2 / n.max(1) as f64).sqrt();
            if !err.is_finite() {
                step = 0.2 * dt;
                stats.rejected += 1;
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                tt = if last { target } else { tt + dt };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                stats.steps += 1;
                if !last {
                    step = dt * factor;
                }
            } else {
                stats.rejected += 1;
                step = dt * factor.min(1.0);
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate(format!("non-finite values at t = {tt}")));
        }
        levels.push(tt);
        values.push(full_row(tt, &y)?);
    }
    Ok(NumericField { t_levels: levels, x: nodes, values, stats })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub errors: [f64; 3],
    pub orders: [f64; 2],
    /// Set when an error sits at the floor, making the ratios meaningless.
    pub degenerate: bool,
}

impl ConvergenceReport {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        !self.degenerate && self.orders.iter().all(|o| (lo..=hi).contains(o))
    }
}

/// Multiple of the time-integration tolerance below which spatial errors are
/// indistinguishable from time-stepping noise.
pub const ORDER_FLOOR_FACTOR: f64 = 100.0;

/// Observed orders from errors at `nx`, `2nx`, `4nx`; errors at or below
/// `floor` mark the report degenerate.
pub fn convergence_order(errors: [f64; 3], floor: f64) -> ConvergenceReport {
    let orders = [(errors[0] / errors[1]).log2(), (errors[1] / errors[2]).log2()];
    let degenerate = errors.iter().any(|e| !(e.is_finite() && *e > floor));
    ConvergenceReport { errors, orders, degenerate }
}

/// Final-time errors of three concurrent runs at `nx`, `2nx`, `4nx`.
pub fn convergence_study(
    p: &PdeInstance,
    exact: &Solution,
    t: Interval,
    x: Interval,
    nx: usize,
    cfg: &MolConfig,
) -> Result<ConvergenceReport> {
    let errors: Vec<f64> = [nx, 2 * nx, 4 * nx]
        .par_iter()
        .map(|&n| {
            let c = MolConfig { nx: n, ..cfg.clone() };
            mol_solve(p, exact, t, x, &c)?.final_error(exact)
        })
        .collect::<Result<_>>()?;
    let floor = ORDER_FLOOR_FACTOR * (cfg.rtol + cfg.atol);
    Ok(convergence_order([errors[0], errors[1], errors[2]], floor))
}
