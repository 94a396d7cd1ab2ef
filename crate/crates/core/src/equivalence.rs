//! Point transformations `t̃ = θ(t)`, `x̃ = δ₁x + δ₂`, `ũ = φ(t)u` acting on
//! coefficient triples and on solutions, the reducibility criterion and the
//! gauge and to-constant transformations built from it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{zero_test, Expr, Node, SampleBox, Var, ZeroTestConfig};
use crate::model::{check_sign_definite, CoefficientTriple, Interval, Jet, Solution, CHECK_SAMPLES};
use crate::numerics::{antiderivative, MonotoneMap};

/// Quadrature tolerance of the antiderivatives built here.
pub const ANTIDERIVATIVE_TOL: f64 = 1e-13;

/// `|λ|` below this is treated as `λ = 0`.
pub const LAMBDA_ZERO_TOL: f64 = 1e-9;

/// A transformation `(θ, δ₁, δ₂, φ)` of the equivalence group, valid on a
/// source interval on which `θ_t > 0` and `φ ≠ 0`.
#[derive(Clone)]
pub struct EquivTransform {
    theta: Expr,
    theta_t: Expr,
    theta_inv: Expr,
    delta1: f64,
    delta2: f64,
    phi: Expr,
    phi_t: Expr,
    interval: Interval,
    image: Interval,
}

impl EquivTransform {
    pub fn new(theta: Expr, delta1: f64, delta2: f64, phi: Expr, interval: Interval) -> Result<Self> {
        if delta1 == 0.0 || !delta1.is_finite() || !delta2.is_finite() {
            return Err(Error::Invariant(format!("δ₁ = {delta1}, δ₂ = {delta2} not admissible")));
        }
        for e in [&theta, &phi] {
            if e.variables().iter().any(|v| *v != Var::T) {
                return Err(Error::Invariant(format!("`{e}` must depend on t only")));
            }
        }
        let theta_t = theta.differentiate(Var::T);
        if check_sign_definite("θ_t", &theta_t, &interval)? < 0.0 {
            return Err(Error::Invariant("θ must be increasing so that ã² > 0".into()));
        }
        check_sign_definite("φ", &phi, &interval)?;
        let lo = theta.eval_t(interval.lo)?;
        let hi = theta.eval_t(interval.hi)?;
        let image = Interval::new(lo, hi)?;
        let theta_inv = invert_theta(&theta, &theta_t, &interval)?;
        let phi_t = phi.differentiate(Var::T);
        Ok(EquivTransform { theta, theta_t, theta_inv, delta1, delta2, phi, phi_t, interval, image })
    }

    pub fn identity(interval: Interval) -> Self {
        EquivTransform::new(Expr::t(), 1.0, 0.0, Expr::one(), interval).expect("identity is admissible")
    }

    /// Element of the equivalence group of the gauged class:
    /// `t̃ = δ₁²t + δ₀`, `x̃ = δ₁x + δ₂`, `ũ = δ₃u`.
    pub fn gauged_group(delta0: f64, delta1: f64, delta2: f64, delta3: f64, interval: Interval) -> Result<Self> {
        if delta3 == 0.0 {
            return Err(Error::Invariant("δ₃ must be nonzero".into()));
        }
        let theta = Expr::num(delta1 * delta1) * Expr::t() + delta0;
        EquivTransform::new(theta, delta1, delta2, Expr::num(delta3), interval)
    }

    pub fn theta(&self) -> &Expr {
        &self.theta
    }

    pub fn theta_inverse(&self) -> &Expr {
        &self.theta_inv
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    pub fn phi(&self) -> &Expr {
        &self.phi
    }

    /// Source interval in `t`.
    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Image interval in `t̃`.
    pub fn image(&self) -> Interval {
        self.image
    }

    /// The inverse transformation, defined on the image interval.
    pub fn inverse(&self) -> Result<Self> {
        let phi = Expr::one() / self.phi.substitute(Var::T, &self.theta_inv);
        EquivTransform::new(self.theta_inv.clone(), 1.0 / self.delta1, -self.delta2 / self.delta1, phi, self.image)
    }

    /// Map a point `(t, x)` to `(θ(t), δ₁x + δ₂)`.
    pub fn map_point(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        Ok((self.theta.eval_t(t)?, self.delta1 * x + self.delta2))
    }

    /// Transformed coefficients as functions of the source time `t`.
    fn pushed_in_source_time(&self, c: &CoefficientTriple) -> (Expr, Expr, Expr) {
        let a = Expr::num(self.delta1.abs()) * c.a() / self.theta_t.clone().sqrt();
        let b = (&self.phi * c.b() + &self.phi_t) / (&self.phi * &self.theta_t);
        let cc = c.c() / (self.phi.clone().powf(2.0) * &self.theta_t);
        (a, b, cc)
    }
}

impl fmt::Debug for EquivTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquivTransform")
            .field("theta", &self.theta.to_text())
            .field("delta1", &self.delta1)
            .field("delta2", &self.delta2)
            .field("phi", &self.phi.to_text())
            .field("interval", &self.interval)
            .finish()
    }
}

/// JSON view of a transform.
#[derive(Debug, Clone, Serialize)]
pub struct TransformSummary {
    pub theta: String,
    pub delta1: f64,
    pub delta2: f64,
    pub phi: String,
    pub interval: Interval,
    pub image: Interval,
}

impl From<&EquivTransform> for TransformSummary {
    fn from(g: &EquivTransform) -> Self {
        TransformSummary {
            theta: g.theta.to_text(),
            delta1: g.delta1,
            delta2: g.delta2,
            phi: g.phi.to_text(),
            interval: g.interval,
            image: g.image,
        }
    }
}

/// `θ⁻¹` as an expression in `t` (standing for `t̃`): closed form for affine
/// `θ` and for `θ` that is itself an inversion, a numeric inverse otherwise.
fn invert_theta(theta: &Expr, theta_t: &Expr, interval: &Interval) -> Result<Expr> {
    if !theta_t.depends_on(Var::T) {
        let t0 = interval.midpoint();
        let slope = theta_t.eval_t(t0)?;
        let intercept = theta.eval_t(t0)? - slope * t0;
        return Ok((Expr::t() - intercept) / slope);
    }
    if let Node::Inverse { map, arg } = theta.node() {
        if matches!(arg.node(), Node::Var(Var::T)) {
            return Ok(map.function().clone());
        }
    }
    Ok(Expr::inverse(MonotoneMap::new(theta.clone(), interval.lo, interval.hi), Expr::t()))
}

/// `∫_{t_ref}^t f(s) ds`: exact for constant `f`, a memoized numeric
/// antiderivative otherwise.
pub fn antiderivative_expr(f: &Expr, t_ref: f64) -> Expr {
    match f.as_num() {
        Some(0.0) => Expr::zero(),
        Some(v) => Expr::num(v) * (Expr::t() - t_ref),
        None => Expr::integral(antiderivative(f.clone(), t_ref, ANTIDERIVATIVE_TOL), Expr::t()),
    }
}

/// Push a triple through `g`: `ã² = δ₁²a²/θ_t`, `b̃ = (φb + φ_t)/(φθ_t)`,
/// `c̃ = c/(φ²θ_t)`, expressed in `t̃`. Sign convention `ã = |δ₁|a/√θ_t`.
pub fn push_coefficients(g: &EquivTransform, c: &CoefficientTriple) -> Result<CoefficientTriple> {
    check_same_interval(g, c)?;
    let (a, b, cc) = g.pushed_in_source_time(c);
    let s = &g.theta_inv;
    let pushed = CoefficientTriple::new(
        a.substitute(Var::T, s),
        b.substitute(Var::T, s),
        cc.substitute(Var::T, s),
        g.image,
    )?;
    pushed.with_t_ref(g.theta.eval_t(c.t_ref())?.clamp(g.image.lo, g.image.hi))
}

fn check_same_interval(g: &EquivTransform, c: &CoefficientTriple) -> Result<()> {
    let (gi, ci) = (g.interval, c.interval());
    let tol = 1e-12 * (1.0 + gi.lo.abs().max(gi.hi.abs()));
    if (gi.lo - ci.lo).abs() > tol || (gi.hi - ci.hi).abs() > tol {
        return Err(Error::Invariant(format!("transform defined on {gi}, triple on {ci}")));
    }
    Ok(())
}

fn max_scaled(e: &Expr, sample_box: &SampleBox, cfg: &ZeroTestConfig) -> Result<f64> {
    Ok(zero_test(e, sample_box, cfg)?.max_scaled_residual)
}

/// The gauge transform `θ = ∫a²`, `φ = e^{-∫b}` and the gauged triple
/// `(1, 0, c e^{2∫b}/a²)` in the new time. Already gauged triples get the
/// identity.
pub fn gauge_transform(c: &CoefficientTriple) -> Result<(EquivTransform, CoefficientTriple)> {
    let interval = c.interval();
    let sample_box = c.time_box();
    let cfg = ZeroTestConfig::default();
    let a2 = c.a().clone().powf(2.0);
    let gauged = zero_test(&(&a2 - 1.0), &sample_box, &cfg)?.is_zero && zero_test(c.b(), &sample_box, &cfg)?.is_zero;
    if gauged {
        let g = EquivTransform::identity(interval);
        let triple = CoefficientTriple::new(Expr::one(), Expr::zero(), c.c().clone(), interval)?.with_t_ref(c.t_ref())?;
        return Ok((g, triple));
    }
    let big_b = antiderivative_expr(c.b(), c.t_ref());
    let theta = antiderivative_expr(&a2, c.t_ref());
    let g = EquivTransform::new(theta, 1.0, 0.0, (-big_b.clone()).exp(), interval)?;
    let (a, b, _) = g.pushed_in_source_time(c);
    let a_dev = max_scaled(&(a.powf(2.0) - 1.0), &sample_box, &cfg)?;
    let b_dev = max_scaled(&b, &sample_box, &cfg)?;
    if a_dev > 1e-12 || b_dev > 1e-12 {
        return Err(Error::Invariant(format!("gauge check failed: |ã²-1| = {a_dev:e}, |b̃| = {b_dev:e}")));
    }
    let c_new = (c.c() * (Expr::num(2.0) * big_b).exp() / a2).substitute(Var::T, &g.theta_inv);
    let triple = CoefficientTriple::new(Expr::one(), Expr::zero(), c_new, g.image)?.with_t_ref(0.0)?;
    Ok((g, triple))
}

/// One sample of the criterion function.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriterionSample {
    pub t: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

/// Outcome of the reducibility criterion.
#[derive(Debug, Clone, Serialize)]
pub struct ReducibilityResult {
    pub reducible: bool,
    pub lambda: Option<f64>,
    #[serde(skip)]
    pub lambda_expr: Expr,
    pub samples: Vec<CriterionSample>,
}

/// Number of witness samples reported with the criterion.
pub const WITNESS_POINTS: usize = 16;

/// `L(t) = b/a² + ½ (c/a²)_t / c`; reducible to constant coefficients iff
/// `L' ≡ 0`, in which case `λ = L(t_ref)`.
pub fn reducibility_lambda(c: &CoefficientTriple, tol: f64) -> Result<ReducibilityResult> {
    reducibility_with(c, &ZeroTestConfig::default().with_tol(tol))
}

/// [`reducibility_lambda`] with an explicit zero-test configuration.
pub fn reducibility_with(c: &CoefficientTriple, cfg: &ZeroTestConfig) -> Result<ReducibilityResult> {
    let a2 = c.a().clone().powf(2.0);
    let l = c.b() / &a2 + Expr::num(0.5) * (c.c() / &a2).differentiate(Var::T) / c.c();
    let dl = l.differentiate(Var::T);
    let reducible = zero_test(&dl, &c.time_box(), cfg)?.is_zero;
    let mut samples = Vec::with_capacity(WITNESS_POINTS);
    for t in c.interval().samples(WITNESS_POINTS) {
        samples.push(CriterionSample { t, l: l.eval_t(t)? });
    }
    let lambda = if reducible {
        let v = l.eval_t(c.t_ref())?;
        Some(if v.abs() < LAMBDA_ZERO_TOL { 0.0 } else { v })
    } else {
        None
    };
    Ok(ReducibilityResult { reducible, lambda, lambda_expr: l, samples })
}

/// The transformation to `u_t = u_xx + sign(λ)u - u³`: for `λ ≠ 0`
/// `θ = |λ|∫a²`, `δ₁ = √|λ|`, `φ = √(c/|λ|)/a`; for `λ = 0` `θ = ∫a²`,
/// `δ₁ = 1`, `φ = √c/a`.
pub fn to_constant_transform(c: &CoefficientTriple, r: &ReducibilityResult) -> Result<EquivTransform> {
    let lambda = match (r.reducible, r.lambda) {
        (true, Some(l)) => l,
        _ => return Err(Error::NotReducible),
    };
    for t in c.interval().samples(CHECK_SAMPLES) {
        if c.c().eval_t(t)? <= 0.0 {
            return Err(Error::NonPositiveC { t });
        }
    }
    let a2 = c.a().clone().powf(2.0);
    let big_a = antiderivative_expr(&a2, c.t_ref());
    let (theta, delta1, phi) = if lambda == 0.0 {
        (big_a, 1.0, c.c().clone().sqrt() / c.a())
    } else {
        let m = lambda.abs();
        (Expr::num(m) * big_a, m.sqrt(), (c.c() / m).sqrt() / c.a())
    };
    let g = EquivTransform::new(theta, delta1, 0.0, phi, c.interval())?;
    let (a, b, cc) = g.pushed_in_source_time(c);
    let sample_box = c.time_box();
    let cfg = ZeroTestConfig::default();
    let target_b = if lambda == 0.0 { 0.0 } else { lambda.signum() };
    let devs = [
        max_scaled(&(a.powf(2.0) - 1.0), &sample_box, &cfg)?,
        max_scaled(&(b - target_b), &sample_box, &cfg)?,
        max_scaled(&(cc - 1.0), &sample_box, &cfg)?,
    ];
    if devs.iter().any(|d| *d > cfg.tol) {
        return Err(Error::Invariant(format!("pushed triple is not constant: deviations {devs:?}")));
    }
    Ok(g)
}

/// Criterion, to-constant transform and the constant triple `(1, ±1|0, 1)`
/// on the image interval.
pub fn reduce_to_constant(c: &CoefficientTriple, tol: f64) -> Result<(EquivTransform, CoefficientTriple, f64)> {
    let r = reducibility_lambda(c, tol)?;
    let g = to_constant_transform(c, &r)?;
    let lambda = r.lambda.expect("reducible");
    let b = if lambda == 0.0 { 0.0 } else { lambda.signum() };
    let triple = CoefficientTriple::new(Expr::one(), Expr::num(b), Expr::one(), g.image)?;
    Ok((g, triple, lambda))
}

/// `u(t, x) = ũ(θ(t), δ₁x + δ₂) / φ(t)` with the jet carried by the chain rule.
pub fn pull_solution(g: &EquivTransform, s: &Solution) -> Solution {
    let field_g = Arc::new(g.clone());
    let src = s.clone();
    let field = {
        let g = field_g.clone();
        let src = src.clone();
        move |t: f64, x: f64| {
            let big_t = g.theta.eval_t(t)?;
            let theta_t = g.theta_t.eval_t(t)?;
            let phi = g.phi.eval_t(t)?;
            let phi_t = g.phi_t.eval_t(t)?;
            let w = src.jet(big_t, g.delta1 * x + g.delta2)?;
            let d1 = g.delta1;
            let jet = Jet {
                u: w.u / phi,
                u_t: w.u_t * theta_t / phi - w.u * phi_t / (phi * phi),
                u_x: d1 * w.u_x / phi,
                u_xx: d1 * d1 * w.u_xx / phi,
            };
            crate::model::finite_jet(jet)
        }
    };
    let validity = {
        let g = field_g.clone();
        move |t: f64, x: f64| match g.theta.eval_t(t) {
            Ok(big_t) => g.phi.eval_t(t).is_ok() && src.is_regular(big_t, g.delta1 * x + g.delta2),
            Err(_) => false,
        }
    };
    s.clone().with_parts(Arc::new(field), Arc::new(validity), g.clone())
}
