//! Regular (`τ = 1`) nonclassical reduction operators of `u_t = u_xx - c(t)u³`.

use serde::Serialize;

use super::CaseKind;
use crate::error::Result;
use crate::expr::{zero_test, EvalError, EvalPoint, Expr, SampleBox, Var, ZeroTestConfig};
use crate::model::{Solution, VectorField};

/// Tolerance on the scaled residual of each determining equation.
pub const NONCLASSICAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquationVerdict {
    pub index: usize,
    pub max_scaled_residual: f64,
    pub max_abs_residual: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonclassicalReport {
    pub pass: bool,
    pub equations: Vec<EquationVerdict>,
}

/// `t ∈ [0, 1]`, `x ∈ [0.25, 1.5]`, `u ∈ [0.1, 2]`.
pub fn default_nonclassical_box() -> SampleBox {
    SampleBox::t(0.0, 1.0).with(Var::X, 0.25, 1.5).with(Var::U, 0.1, 2.0)
}

/// The four determining equations for `∂t + ξ∂x + η∂u`.
pub fn determining_equations(xi: &Expr, eta: &Expr, c: &Expr) -> [Expr; 4] {
    let d = |e: &Expr, v: Var| e.differentiate(v);
    let (u, n) = (Expr::u(), Expr::num);
    let u2 = u.clone().powf(2.0);
    let u3 = u.clone().powf(3.0);
    let xi_u = d(xi, Var::U);
    let xi_x = d(xi, Var::X);
    let eta_u = d(eta, Var::U);
    let e1 = d(&xi_u, Var::U);
    let e2 = d(&eta_u, Var::U) - n(2.0) * (d(&xi_x, Var::U) - xi * &xi_u);
    let e3 = d(eta, Var::T) - d(&d(eta, Var::X), Var::X)
        + n(2.0) * &xi_x * eta
        + (n(2.0) * &xi_x - &eta_u) * c * &u3
        + n(3.0) * eta * c * &u2
        + d(c, Var::T) * &u3;
    let e4 = d(xi, Var::T) - d(&xi_x, Var::X) + n(2.0) * xi * &xi_x - n(2.0) * &xi_u * eta
        + n(2.0) * d(&d(eta, Var::X), Var::U)
        - n(3.0) * &xi_u * c * &u3;
    [e1, e2, e3, e4]
}

/// Verification on the default box.
pub fn verify_nonclassical(xi: &Expr, eta: &Expr, c: &Expr) -> Result<NonclassicalReport> {
    verify_nonclassical_in(xi, eta, c, &default_nonclassical_box())
}

pub fn verify_nonclassical_in(xi: &Expr, eta: &Expr, c: &Expr, sample_box: &SampleBox) -> Result<NonclassicalReport> {
    verify_nonclassical_with(xi, eta, c, sample_box, &ZeroTestConfig::default().with_tol(NONCLASSICAL_TOL))
}

pub fn verify_nonclassical_with(
    xi: &Expr,
    eta: &Expr,
    c: &Expr,
    sample_box: &SampleBox,
    cfg: &ZeroTestConfig,
) -> Result<NonclassicalReport> {
    let mut equations = Vec::with_capacity(4);
    for (i, e) in determining_equations(xi, eta, c).iter().enumerate() {
        let o = zero_test(e, sample_box, cfg)?;
        equations.push(EquationVerdict {
            index: i + 1,
            max_scaled_residual: o.max_scaled_residual,
            max_abs_residual: o.max_abs_residual,
            verdict: o.is_zero,
        });
    }
    Ok(NonclassicalReport { pass: equations.iter().all(|e| e.verdict), equations })
}

/// A catalogued operator with the `c(t)` it belongs to.
#[derive(Debug, Clone)]
pub struct CatalogOperator {
    pub name: &'static str,
    pub field: VectorField,
    pub c: Expr,
}

/// `X₁ = ∂t + βe^{2αt}u∂x + (α - β²e^{4αt}u²/3)u∂u` for
/// `c = (2/9)β²e^{4αt}`.
pub fn x1_operator(alpha: f64, beta: f64) -> CatalogOperator {
    let (t, u) = (Expr::t(), Expr::u());
    let e2 = (Expr::num(2.0 * alpha) * &t).exp();
    let e4 = (Expr::num(4.0 * alpha) * &t).exp();
    let xi = Expr::num(beta) * e2 * &u;
    let eta = (Expr::num(alpha) - Expr::num(beta * beta / 3.0) * &e4 * u.clone().powf(2.0)) * &u;
    let c = Expr::num(2.0 * beta * beta / 9.0) * e4;
    CatalogOperator { name: "X1", field: VectorField::new(Expr::one(), xi, eta), c }
}

/// Operators for `c = μ` or `c = μe^{σt}`: `X₂` for constants; `X₃`, `X₄`
/// for `σ > 0`; `X₅` for `σ < 0`; `X₁` with `α = σ/4`,
/// `β = 3√(μ/2)` when `μ > 0`. Other cases have none.
pub fn nonclassical_catalog(kind: &CaseKind) -> Vec<CatalogOperator> {
    let (t, x, u) = (Expr::t(), Expr::x(), Expr::u());
    let n = Expr::num;
    match *kind {
        CaseKind::Constant { mu } => vec![CatalogOperator {
            name: "X2",
            field: VectorField::new(Expr::one(), n(-3.0) / &x, n(-3.0) * &u / x.clone().powf(2.0)),
            c: n(mu),
        }],
        CaseKind::Exponential { mu, sigma } => {
            let c = n(mu) * (n(sigma) * &t).exp();
            let mut ops = Vec::new();
            if mu > 0.0 {
                let mut x1 = x1_operator(sigma / 4.0, 3.0 * (mu / 2.0).sqrt());
                x1.c = c.clone();
                ops.push(x1);
            }
            if sigma > 0.0 {
                let s = sigma.sqrt();
                let arg = n(s / 2.0) * &x;
                for (name, f) in [("X3", arg.clone().tanh()), ("X4", arg.coth())] {
                    let xi = n(-1.5 * s) * &f;
                    let eta = n(-0.75 * sigma) * (f.powf(2.0) - 1.0 / 3.0) * &u;
                    ops.push(CatalogOperator { name, field: VectorField::new(Expr::one(), xi, eta), c: c.clone() });
                }
            } else {
                let s = (-sigma).sqrt();
                let f = (n(s / 2.0) * &x).tan();
                let xi = n(1.5 * s) * &f;
                let eta = n(0.75 * sigma) * (f.powf(2.0) + 1.0 / 3.0) * &u;
                ops.push(CatalogOperator { name: "X5", field: VectorField::new(Expr::one(), xi, eta), c });
            }
            ops
        }
        CaseKind::Power { .. } | CaseKind::Arbitrary => Vec::new(),
    }
}

/// `τu_t + ξu_x - η` along the solution at `(t, x)`.
pub fn invariant_surface_residual(v: &VectorField, s: &Solution, t: f64, x: f64) -> Result<f64, EvalError> {
    let j = s.jet(t, x)?;
    let p = EvalPoint::txu(t, x, j.u);
    Ok(v.tau.eval(&p)? * j.u_t + v.xi.eval(&p)? * j.u_x - v.eta.eval(&p)?)
}
