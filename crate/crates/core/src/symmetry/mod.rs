//! Lie symmetry classification of `u_t = a²u_xx + bu - c(t)u³` and
//! verification of regular nonclassical reduction operators.

mod nonclassical;

use serde::Serialize;

pub use nonclassical::{
    default_nonclassical_box, invariant_surface_residual, nonclassical_catalog, verify_nonclassical,
    verify_nonclassical_in, verify_nonclassical_with, x1_operator, CatalogOperator, EquationVerdict, NonclassicalReport,
};

use crate::equivalence::antiderivative_expr;
use crate::error::{Error, Result};
use crate::expr::{zero_test, Expr, SampleBox, Var, ZeroTestConfig, ZeroTestOutcome};
use crate::model::{CoefficientTriple, Interval, PdeInstance, VectorField};

/// Tolerance of the classification zero tests.
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    Arbitrary,
    Power,
    Exponential,
    Constant,
}

/// Parameters of a classification case. For power laws the representative
/// has `γ = ±1` with `γt + δ > 0` on the interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag")]
pub enum CaseKind {
    Arbitrary,
    Power { mu: f64, gamma: f64, delta: f64, rho: f64 },
    Exponential { mu: f64, sigma: f64 },
    Constant { mu: f64 },
}

impl CaseKind {
    pub fn tag(&self) -> CaseTag {
        match self {
            CaseKind::Arbitrary => CaseTag::Arbitrary,
            CaseKind::Power { .. } => CaseTag::Power,
            CaseKind::Exponential { .. } => CaseTag::Exponential,
            CaseKind::Constant { .. } => CaseTag::Constant,
        }
    }

    pub fn mu(&self) -> Option<f64> {
        match *self {
            CaseKind::Arbitrary => None,
            CaseKind::Power { mu, .. } | CaseKind::Exponential { mu, .. } | CaseKind::Constant { mu } => Some(mu),
        }
    }

    /// `c` rebuilt from the parameters as a function of `time`.
    pub fn profile(&self, time: &Expr) -> Option<Expr> {
        match *self {
            CaseKind::Arbitrary => None,
            CaseKind::Power { mu, gamma, delta, rho } => {
                Some(Expr::num(mu) * (Expr::num(gamma) * time + delta).powf(rho))
            }
            CaseKind::Exponential { mu, sigma } => Some(Expr::num(mu) * (Expr::num(sigma) * time).exp()),
            CaseKind::Constant { mu } => Some(Expr::num(mu)),
        }
    }

    /// Basis of the maximal Lie algebra of `u_t = u_xx - c(t)u³`.
    pub fn gauged_basis(&self) -> Vec<VectorField> {
        let (t, x, u) = (Expr::t(), Expr::x(), Expr::u());
        let mut basis = vec![VectorField::space_translation()];
        match *self {
            CaseKind::Arbitrary => {}
            CaseKind::Power { gamma, delta, rho, .. } => basis.push(VectorField::new(
                Expr::num(2.0) * (Expr::num(gamma) * &t + delta),
                Expr::num(gamma) * &x,
                Expr::num(-gamma * (rho + 1.0)) * &u,
            )),
            CaseKind::Exponential { sigma, .. } => {
                basis.push(VectorField::new(Expr::num(2.0), Expr::zero(), Expr::num(-sigma) * &u))
            }
            CaseKind::Constant { .. } => {
                basis.push(VectorField::time_translation());
                basis.push(VectorField::new(Expr::num(2.0) * &t, x, -u));
            }
        }
        basis
    }
}

/// Tag, parameters and basis of the maximal Lie symmetry algebra.
#[derive(Debug, Clone)]
pub struct ClassificationCase {
    pub kind: CaseKind,
    pub basis: Vec<VectorField>,
}

impl ClassificationCase {
    pub fn tag(&self) -> CaseTag {
        self.kind.tag()
    }
}

/// JSON view of a classification.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub tag: CaseTag,
    pub params: CaseKind,
    pub basis: Vec<FieldText>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldText {
    pub tau: String,
    pub xi: String,
    pub eta: String,
}

impl From<&VectorField> for FieldText {
    fn from(v: &VectorField) -> Self {
        FieldText { tau: v.tau.to_text(), xi: v.xi.to_text(), eta: v.eta.to_text() }
    }
}

impl From<&ClassificationCase> for ClassificationReport {
    fn from(c: &ClassificationCase) -> Self {
        ClassificationReport { tag: c.tag(), params: c.kind, basis: c.basis.iter().map(FieldText::from).collect() }
    }
}

fn default_cfg() -> ZeroTestConfig {
    ZeroTestConfig::default().with_tol(CLASSIFY_TOL)
}

fn is_zero(e: &Expr, sample_box: &SampleBox, cfg: &ZeroTestConfig) -> Result<bool> {
    Ok(zero_test(e, sample_box, cfg)?.is_zero)
}

/// Classifies the profile `q` regarded as a function of the time `τ(t)`
/// with `dτ/dt = rate`, at base point `t_ref`.
fn classify_profile(
    q: &Expr,
    rate: &Expr,
    time: &Expr,
    interval: Interval,
    t_ref: f64,
    cfg: &ZeroTestConfig,
) -> Result<CaseKind> {
    let sample_box = SampleBox::t(interval.lo, interval.hi);
    let d = |e: &Expr| e.differentiate(Var::T) / rate;
    let q_ref = q.eval_t(t_ref)?;
    let time_ref = time.eval_t(t_ref)?;
    let r = d(q) / q;
    if is_zero(&r, &sample_box, cfg)? {
        return Ok(CaseKind::Constant { mu: q_ref });
    }
    if is_zero(&d(&r), &sample_box, cfg)? {
        let sigma = r.eval_t(t_ref)?;
        return Ok(CaseKind::Exponential { mu: q_ref * (-sigma * time_ref).exp(), sigma });
    }
    let w = Expr::one() / &r;
    let w_1 = d(&w);
    if is_zero(&d(&w_1), &sample_box, cfg)? {
        let s = w_1.eval_t(t_ref)?;
        let rho = 1.0 / s;
        // 1/r = (τ + δ/γ)/ρ
        let shift = rho * w.eval_t(t_ref)? - time_ref;
        let gamma = (time_ref + shift).signum();
        let delta = gamma * shift;
        let mu = q_ref / (gamma * time_ref + delta).powf(rho);
        return Ok(CaseKind::Power { mu, gamma, delta, rho });
    }
    Ok(CaseKind::Arbitrary)
}

/// Classification of `u_t = u_xx - c(t)u³` from `c` alone.
pub fn classify_lie(c: &Expr, interval: Interval) -> Result<ClassificationCase> {
    classify_lie_with(c, interval, &default_cfg())
}

pub fn classify_lie_with(c: &Expr, interval: Interval, cfg: &ZeroTestConfig) -> Result<ClassificationCase> {
    crate::model::check_sign_definite("c", c, &interval)?;
    let kind = classify_profile(c, &Expr::one(), &Expr::t(), interval, interval.midpoint(), cfg)?;
    Ok(ClassificationCase { kind, basis: kind.gauged_basis() })
}

/// `T = ∫a²` and `B = ∫b` from the base point of the triple.
fn gauge_integrals(c: &CoefficientTriple) -> (Expr, Expr) {
    let a2 = c.a().clone().powf(2.0);
    (antiderivative_expr(&a2, c.t_ref()), antiderivative_expr(c.b(), c.t_ref()))
}

/// Classification of a full triple: the case of the gauged profile
/// `c e^{2∫b}/a²` as a function of `T = ∫a²`, with the basis of the
/// ungauged equation.
pub fn classify_triple(c: &CoefficientTriple) -> Result<ClassificationCase> {
    classify_triple_with(c, &default_cfg())
}

pub fn classify_triple_with(c: &CoefficientTriple, cfg: &ZeroTestConfig) -> Result<ClassificationCase> {
    let (big_t, big_b) = gauge_integrals(c);
    let a2 = c.a().clone().powf(2.0);
    let q = c.c() * (Expr::num(2.0) * &big_b).exp() / &a2;
    let kind = classify_profile(&q, &a2, &big_t, c.interval(), c.t_ref(), cfg)?;
    let basis = lie_basis_ungauged(c, &kind)?;
    Ok(ClassificationCase { kind, basis })
}

/// Basis of the maximal Lie algebra of the ungauged equation; `c` must be
/// of the form `a² e^{-2∫b} q(T)` with `q` given by the case.
pub fn lie_basis_ungauged(c: &CoefficientTriple, kind: &CaseKind) -> Result<Vec<VectorField>> {
    let (big_t, big_b) = gauge_integrals(c);
    let a2 = c.a().clone().powf(2.0);
    let b = c.b().clone();
    let (x, u) = (Expr::x(), Expr::u());
    let mut basis = vec![VectorField::space_translation()];
    let profile = match kind.profile(&big_t) {
        Some(p) => p,
        None => return Ok(basis),
    };
    let expected = &a2 * (Expr::num(-2.0) * &big_b).exp() * profile;
    let mismatch = c.c() - &expected;
    if !is_zero(&mismatch, &c.time_box(), &default_cfg())? {
        return Err(Error::PatternMismatch(format!("c = {} is not {}", c.c(), expected)));
    }
    let two_over_a2 = Expr::num(2.0) / &a2;
    match *kind {
        CaseKind::Arbitrary => {}
        CaseKind::Power { gamma, delta, rho, .. } => {
            let lin = Expr::num(gamma) * &big_t + delta;
            let tau = &two_over_a2 * &lin;
            basis.push(VectorField::new(
                tau.clone(),
                Expr::num(gamma) * &x,
                (tau * &b - gamma * (rho + 1.0)) * &u,
            ));
        }
        CaseKind::Exponential { sigma, .. } => {
            basis.push(VectorField::new(two_over_a2.clone(), Expr::zero(), (&two_over_a2 * &b - sigma) * &u));
        }
        CaseKind::Constant { .. } => {
            let inv = Expr::one() / &a2;
            basis.push(VectorField::new(inv.clone(), Expr::zero(), inv * &b * &u));
            let tau = &two_over_a2 * &big_t;
            basis.push(VectorField::new(tau.clone(), x, (tau * &b - 1.0) * &u));
        }
    }
    Ok(basis)
}

fn total_x(e: &Expr) -> Expr {
    let v = Expr::var;
    e.differentiate(Var::X)
        + v(Var::Ux) * e.differentiate(Var::U)
        + v(Var::Uxx) * e.differentiate(Var::Ux)
        + v(Var::Uxxx) * e.differentiate(Var::Uxx)
        + v(Var::Utx) * e.differentiate(Var::Ut)
}

fn total_t_point(e: &Expr) -> Expr {
    e.differentiate(Var::T) + Expr::var(Var::Ut) * e.differentiate(Var::U)
}

/// `X⁽²⁾(u_t - a²u_xx - bu + cu³)` with `u_t` and `u_tx` eliminated through
/// the equation, as an expression in `(t, x, u, u_x, u_xx, u_xxx)`.
pub fn lie_criterion(p: &PdeInstance, v: &VectorField) -> Expr {
    let c3 = &p.coeffs;
    let (a2, b, c) = (c3.a().clone().powf(2.0), c3.b().clone(), c3.c().clone());
    let var = Expr::var;
    let (ut, ux, uxx) = (var(Var::Ut), var(Var::Ux), var(Var::Uxx));
    let u = Expr::u();
    let eta_t = total_t_point(&v.eta) - &ut * total_t_point(&v.tau) - &ux * total_t_point(&v.xi);
    let eta_x = total_x(&v.eta) - &ut * total_x(&v.tau) - &ux * total_x(&v.xi);
    let eta_xx = total_x(&eta_x) - var(Var::Utx) * total_x(&v.tau) - &uxx * total_x(&v.xi);
    let criterion = &v.tau
        * (-(a2.differentiate(Var::T)) * &uxx - b.differentiate(Var::T) * &u
            + c.differentiate(Var::T) * u.clone().powf(3.0))
        + &v.eta * (-&b + Expr::num(3.0) * &c * u.clone().powf(2.0))
        + eta_t
        - &a2 * eta_xx;
    let u_t = &a2 * &uxx + &b * &u - &c * u.clone().powf(3.0);
    let u_tx = &a2 * var(Var::Uxxx) + &b * &ux - Expr::num(3.0) * &c * u.clone().powf(2.0) * &ux;
    criterion.substitute(Var::Utx, &u_tx).substitute(Var::Ut, &u_t)
}

/// Box for the invariance zero test: the triple's interval, `x` as given,
/// `u ∈ [0.1, 2]`, jet variables in `[-1, 1]`.
pub fn lie_box(p: &PdeInstance, x: (f64, f64)) -> SampleBox {
    let i = p.coeffs.interval();
    SampleBox::t(i.lo, i.hi)
        .with(Var::X, x.0, x.1)
        .with(Var::U, 0.1, 2.0)
        .with(Var::Ux, -1.0, 1.0)
        .with(Var::Uxx, -1.0, 1.0)
        .with(Var::Uxxx, -1.0, 1.0)
}

/// Zero test of the invariance criterion on an explicit `x` range.
pub fn lie_invariance_outcome(p: &PdeInstance, v: &VectorField, x: (f64, f64)) -> Result<ZeroTestOutcome> {
    zero_test(&lie_criterion(p, v), &lie_box(p, x), &default_cfg())
}

/// Whether `v` generates a Lie symmetry of `p` (`x ∈ [-2, 2]`).
pub fn check_lie_invariance(p: &PdeInstance, v: &VectorField) -> Result<bool> {
    Ok(lie_invariance_outcome(p, v, (-2.0, 2.0))?.is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn c(s: &str) -> Expr {
        parse(s, &[Var::T]).unwrap()
    }

    #[test]
    fn classification_examples() {
        let k = classify_lie(&c("1"), iv(0.0, 1.0)).unwrap();
        assert_eq!(k.kind, CaseKind::Constant { mu: 1.0 });
        assert_eq!(k.basis.len(), 3);
        assert_eq!(k.basis[2].to_string(), "(2*t)∂t + (x)∂x + (-u)∂u");

        let k = classify_lie(&c("3*(2*t+1)^2"), iv(0.0, 5.0)).unwrap();
        match k.kind {
            CaseKind::Power { mu, gamma, delta, rho } => {
                assert!((rho - 2.0).abs() < 1e-10);
                assert_eq!(gamma, 1.0);
                assert!((delta - 0.5).abs() < 1e-10 && (mu - 12.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }

        let k = classify_lie(&c("5*exp(-3*t)"), iv(0.0, 1.0)).unwrap();
        match k.kind {
            CaseKind::Exponential { mu, sigma } => {
                assert!((sigma + 3.0).abs() < 1e-12 && (mu - 5.0).abs() < 1e-10);
            }
            other => panic!("{other:?}"),
        }

        let k = classify_lie(&c("exp(t^2)"), iv(0.1, 2.0)).unwrap();
        assert_eq!(k.tag(), CaseTag::Arbitrary);
        assert_eq!(k.basis.len(), 1);
    }

    #[test]
    fn prolongation_examples() {
        let p = PdeInstance::new(CoefficientTriple::parse("1", "0", "t^2", iv(0.5, 2.0)).unwrap());
        assert!(check_lie_invariance(&p, &VectorField::space_translation()).unwrap());
        let good = VectorField::parse("2*t", "x", "-3*u").unwrap();
        assert!(check_lie_invariance(&p, &good).unwrap());
        let bad = VectorField::parse("2*t", "x", "-2*u").unwrap();
        assert!(!check_lie_invariance(&p, &bad).unwrap());
        assert!(!check_lie_invariance(&p, &VectorField::time_translation()).unwrap());
    }

    #[test]
    fn ungauged_bases() {
        let t = CoefficientTriple::parse("1", "0", "2*exp(3*t)", iv(-1.0, 1.0)).unwrap();
        let kind = CaseKind::Exponential { mu: 2.0, sigma: 3.0 };
        let basis = lie_basis_ungauged(&t, &kind).unwrap();
        let pt = crate::expr::EvalPoint::txu(0.3, 0.7, 1.5);
        assert_eq!(basis[1].tau.eval(&pt).unwrap(), 2.0);
        assert!((basis[1].eta.eval(&pt).unwrap() + 4.5).abs() < 1e-14);
        let p = PdeInstance::new(t.clone());
        assert!(check_lie_invariance(&p, &basis[1]).unwrap());

        let t = CoefficientTriple::parse("exp(t)", "0", "3*exp(2*t)", iv(0.0, 1.0)).unwrap();
        let k = classify_triple(&t).unwrap();
        assert_eq!(k.tag(), CaseTag::Constant);
        let p = PdeInstance::new(t);
        for v in &k.basis {
            assert!(check_lie_invariance(&p, v).unwrap(), "{v}");
        }
        let wrong = CaseKind::Exponential { mu: 3.0, sigma: 1.0 };
        assert!(matches!(lie_basis_ungauged(&p.coeffs, &wrong), Err(Error::PatternMismatch(_))));
    }
}
