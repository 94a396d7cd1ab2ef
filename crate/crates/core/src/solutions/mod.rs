//! Closed-form solutions of `u_t = u_xx + εu - u³` and their transport to
//! reducible variable-coefficient equations.
//!
//! Families are written in the constant-coefficient variables `(T, X)`; the
//! elliptic functions all use modulus `k = √2/2`.

mod fixtures;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use fixtures::{fixtures, Fixture, Instance, INSTANCES};

use crate::equivalence::{pull_solution, to_constant_transform, ReducibilityResult};
use crate::error::{Error, Result};
use crate::model::{CoefficientTriple, Grid, Jet, JetResult, Solution};
use crate::special::distance_to_sn_zero;

/// Elliptic modulus shared by every family.
pub const MODULUS: f64 = FRAC_1_SQRT_2;

/// Points closer than this to a predicted pole are flagged singular.
pub const POLE_MARGIN: f64 = 0.05;

/// Sign of `λ` a family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaSign {
    Positive,
    Negative,
    Zero,
    Any,
}

impl LambdaSign {
    pub fn of(lambda: f64) -> LambdaSign {
        if lambda > 0.0 {
            LambdaSign::Positive
        } else if lambda < 0.0 {
            LambdaSign::Negative
        } else {
            LambdaSign::Zero
        }
    }

    /// `ε` of the target equation `u_t = u_xx + εu - u³`.
    pub fn epsilon(self) -> i32 {
        match self {
            LambdaSign::Positive => 1,
            LambdaSign::Negative => -1,
            LambdaSign::Zero | LambdaSign::Any => 0,
        }
    }

    fn matches(self, other: LambdaSign) -> bool {
        self == LambdaSign::Any || self == other
    }
}

impl fmt::Display for LambdaSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaSign::Positive => "λ>0",
            LambdaSign::Negative => "λ<0",
            LambdaSign::Zero => "λ=0",
            LambdaSign::Any => "any λ",
        })
    }
}

type FamilyEval = fn(&FamilyParams, f64, f64) -> JetResult;
type FamilyRegular = fn(&FamilyParams, f64, f64) -> bool;

/// One catalogue entry.
#[derive(Clone, Copy, Serialize)]
pub struct SolutionFamily {
    pub id: &'static str,
    pub lambda_sign: LambdaSign,
    pub param_names: &'static [&'static str],
    /// Solution of the constant-coefficient equation in `(T, X)`.
    pub formula: &'static str,
    /// The same family for the reducible variable-coefficient equation,
    /// `T = |λ|∫a²dt` (`∫a²dt` for λ = 0).
    pub variable_formula: &'static str,
    #[serde(skip)]
    eval: FamilyEval,
    #[serde(skip)]
    regular: FamilyRegular,
    /// Parameters that must be nonzero.
    #[serde(skip)]
    nonzero: &'static [&'static str],
}

impl fmt::Debug for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionFamily").field("id", &self.id).field("lambda_sign", &self.lambda_sign).finish()
    }
}

impl SolutionFamily {
    /// Default parameter draw: `C1 = C1prime = 1`, `C2 = 0` except where that
    /// puts a pole through the origin of the test window.
    pub fn default_params(&self) -> FamilyParams {
        let mut p = FamilyParams::default();
        for &name in self.param_names {
            let v = match (self.id, name) {
                ("P3" | "P5" | "N1" | "N3", "C2") => 1.0,
                (_, "C2") => 0.0,
                _ => 1.0,
            };
            p.values.insert(name.to_string(), v);
        }
        p
    }

    fn check_params(&self, p: &FamilyParams) -> Result<()> {
        for (name, v) in &p.values {
            if !self.param_names.contains(&name.as_str()) {
                return Err(Error::Parameter {
                    name: name.clone(),
                    reason: format!("not a parameter of {} (expects {:?})", self.id, self.param_names),
                });
            }
            if !v.is_finite() {
                return Err(Error::Parameter { name: name.clone(), reason: "must be finite".into() });
            }
        }
        for &name in self.param_names {
            if !p.values.contains_key(name) {
                return Err(Error::Parameter { name: name.into(), reason: format!("missing for {}", self.id) });
            }
        }
        for &name in self.nonzero {
            if p.get(name) == 0.0 {
                return Err(Error::Parameter { name: name.into(), reason: format!("must be nonzero in {}", self.id) });
            }
        }
        if self.id == "P1" && p.get("C1") == 0.0 && p.get("C1prime") == 0.0 {
            return Err(Error::Parameter { name: "C1".into(), reason: "C1 and C1prime both zero".into() });
        }
        Ok(())
    }
}

/// Parameter values of a family and the sign flag `u ↦ -u`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FamilyParams {
    pub values: BTreeMap<String, f64>,
    pub negate: bool,
}

impl FamilyParams {
    pub fn get(&self, name: &str) -> f64 {
        self.values.get(name).copied().unwrap_or(0.0)
    }

    pub fn with(mut self, name: &str, v: f64) -> Self {
        self.values.insert(name.to_string(), v);
        self
    }

    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self
    }

    /// Overrides from `k=v,k=v`; `neg=1` sets the sign flag.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| Error::Parameter {
                name: item.to_string(),
                reason: "expected name=value".into(),
            })?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parameter { name: k.to_string(), reason: format!("`{v}` is not a number") })?;
            let k = k.trim();
            if k == "neg" {
                self.negate = v != 0.0;
            } else {
                self.values.insert(k.to_string(), v);
            }
        }
        Ok(self)
    }
}

const K: f64 = MODULUS;

fn hyper_profile(p: &FamilyParams, t: f64, x: f64, rate: f64) -> (Jet, Jet) {
    let amp = (Jet::time(t) * rate).exp() * p.get("C1");
    (amp, Jet::space(x) * FRAC_1_SQRT_2)
}

fn sn_regular(z: f64) -> bool {
    distance_to_sn_zero(z, K) >= POLE_MARGIN
}

fn tw(_: &FamilyParams, t: f64, x: f64) -> JetResult {
    let z = Jet::space(x) * (SQRT_2 / 4.0) - Jet::time(t) * 0.75;
    Ok(0.5 - z.tanh() * 0.5)
}

fn p1_parts(p: &FamilyParams, t: f64, x: f64) -> (Jet, Jet, Jet) {
    let xs = Jet::space(x) * FRAC_1_SQRT_2;
    let ep = xs.exp() * p.get("C1");
    let em = (-xs).exp() * p.get("C1prime");
    let et = (Jet::time(t) * -1.5).exp() * p.get("C2");
    (ep, em, et)
}

fn p1(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (ep, em, et) = p1_parts(p, t, x);
    (ep - em) / (et + ep + em)
}

fn p1_regular(p: &FamilyParams, t: f64, x: f64) -> bool {
    let (ep, em, et) = p1_parts(p, t, x);
    (et.u + ep.u + em.u).abs() >= POLE_MARGIN * (et.u.abs() + ep.u.abs() + em.u.abs())
}

fn p2(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (a, xs) = hyper_profile(p, t, x, 1.5);
    Ok(a * xs.sinh() * (a * xs.cosh() + p.get("C2")).ds(K)?)
}

fn p2_regular(p: &FamilyParams, t: f64, x: f64) -> bool {
    let (a, xs) = hyper_profile(p, t, x, 1.5);
    sn_regular(a.u * xs.u.cosh() + p.get("C2"))
}

fn p3(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (a, xs) = hyper_profile(p, t, x, 1.5);
    Ok(a * xs.cosh() * (a * xs.sinh() + p.get("C2")).ds(K)?)
}

fn p3_regular(p: &FamilyParams, t: f64, x: f64) -> bool {
    let (a, xs) = hyper_profile(p, t, x, 1.5);
    sn_regular(a.u * xs.u.sinh() + p.get("C2"))
}

fn p4(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (a, xs) = hyper_profile(p, t, x, 1.5);
    Ok(a * xs.sinh() * 0.5 * (a * xs.cosh() + p.get("C2")).one_plus_cn_over_sn(K)?)
}

fn p5(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (a, xs) = hyper_profile(p, t, x, 1.5);
    Ok(a * xs.cosh() * 0.5 * (a * xs.sinh() + p.get("C2")).one_plus_cn_over_sn(K)?)
}

fn n1_denominator(p: &FamilyParams, t: f64, x: f64) -> Jet {
    (Jet::time(t) * 1.5).exp() * p.get("C2") + (Jet::space(x) * FRAC_1_SQRT_2).cos()
}

fn n1(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    (Jet::space(x) * FRAC_1_SQRT_2).sin() / n1_denominator(p, t, x)
}

fn n1_regular(p: &FamilyParams, t: f64, x: f64) -> bool {
    let d = n1_denominator(p, t, x).u;
    d.abs() >= POLE_MARGIN * (p.get("C2").abs() * (1.5 * t).exp() + 1.0)
}

fn n2(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (b, xs) = hyper_profile(p, t, x, -1.5);
    Ok(b * xs.sin() * (b * xs.cos() + p.get("C2")).ds(K)?)
}

fn n2_regular(p: &FamilyParams, t: f64, x: f64) -> bool {
    let (b, xs) = hyper_profile(p, t, x, -1.5);
    sn_regular(b.u * xs.u.cos() + p.get("C2"))
}

fn n3(p: &FamilyParams, t: f64, x: f64) -> JetResult {
    let (b, xs) = hyper_profile(p, t, x, -1.5);
    Ok(b * xs.cos() * 0.5 * (b * xs.sin() + p.get("C2")).one_plus_cn_over_sn(K)?)
}

fn n3_regular(p: &FamilyParams, t: f64, x: f64) -> bool {
    let (b, xs) = hyper_profile(p, t, x, -1.5);
    sn_regular(b.u * xs.u.sin() + p.get("C2"))
}

fn heat_argument(t: f64, x: f64) -> Jet {
    let xj = Jet::space(x);
    xj * xj + Jet::time(t) * 6.0
}

fn z1(_: &FamilyParams, t: f64, x: f64) -> JetResult {
    Ok(Jet::space(x) * (2.0 * SQRT_2) * heat_argument(t, x).ds(K)?)
}

fn z2(_: &FamilyParams, t: f64, x: f64) -> JetResult {
    Ok(Jet::space(x) * SQRT_2 * heat_argument(t, x).one_plus_cn_over_sn(K)?)
}

fn z12_regular(_: &FamilyParams, t: f64, x: f64) -> bool {
    sn_regular(x * x + 6.0 * t)
}

fn z3(_: &FamilyParams, t: f64, x: f64) -> JetResult {
    Jet::space(x) * (2.0 * SQRT_2) / heat_argument(t, x)
}

fn z3_regular(_: &FamilyParams, t: f64, x: f64) -> bool {
    (x * x + 6.0 * t).abs() >= POLE_MARGIN
}

fn z4(_: &FamilyParams, _: f64, x: f64) -> JetResult {
    Ok(Jet::space(x).recip()? * SQRT_2)
}

fn z4_regular(_: &FamilyParams, _: f64, x: f64) -> bool {
    x.abs() >= POLE_MARGIN
}

fn z5(_: &FamilyParams, _: f64, x: f64) -> JetResult {
    Ok(Jet::space(x).ds(K)? * SQRT_2)
}

fn z6(_: &FamilyParams, _: f64, x: f64) -> JetResult {
    Ok(Jet::space(x).one_plus_cn_over_sn(K)? * FRAC_1_SQRT_2)
}

fn z56_regular(_: &FamilyParams, _: f64, x: f64) -> bool {
    sn_regular(x)
}

fn always(_: &FamilyParams, _: f64, _: f64) -> bool {
    true
}

const C1_C2: &[&str] = &["C1", "C2"];
const C1: &[&str] = &["C1"];

static CATALOG: [SolutionFamily; 15] = [
    SolutionFamily {
        id: "TW",
        lambda_sign: LambdaSign::Positive,
        param_names: &[],
        formula: "u = 1/2 - 1/2*tanh(sqrt(2)/4*X - 3/4*T)",
        variable_formula: "u = 1/2*a*sqrt(λ/c)*(1 - tanh(sqrt(2λ)/4*x - 3/4*T))",
        eval: tw,
        regular: always,
        nonzero: &[],
    },
    SolutionFamily {
        id: "P1",
        lambda_sign: LambdaSign::Positive,
        param_names: &["C1", "C1prime", "C2"],
        formula: "u = (C1*exp(X/sqrt(2)) - C1'*exp(-X/sqrt(2))) / (C2*exp(-3/2*T) + C1*exp(X/sqrt(2)) + C1'*exp(-X/sqrt(2)))",
        variable_formula: "u = a*sqrt(λ/c)*(C1*exp(sqrt(2λ)/2*x) - C1'*exp(-sqrt(2λ)/2*x)) / (C2*exp(-3/2*T) + C1*exp(sqrt(2λ)/2*x) + C1'*exp(-sqrt(2λ)/2*x))",
        eval: p1,
        regular: p1_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "P2",
        lambda_sign: LambdaSign::Positive,
        param_names: C1_C2,
        formula: "u = C1*exp(3/2*T)*sinh(X/sqrt(2))*ds(C1*exp(3/2*T)*cosh(X/sqrt(2)) + C2, sqrt(2)/2)",
        variable_formula: "u = a*sqrt(λ/c)*C1*exp(3/2*T)*sinh(sqrt(2λ)/2*x)*ds(C1*exp(3/2*T)*cosh(sqrt(2λ)/2*x) + C2, sqrt(2)/2)",
        eval: p2,
        regular: p2_regular,
        nonzero: C1,
    },
    SolutionFamily {
        id: "P3",
        lambda_sign: LambdaSign::Positive,
        param_names: C1_C2,
        formula: "u = C1*exp(3/2*T)*cosh(X/sqrt(2))*ds(C1*exp(3/2*T)*sinh(X/sqrt(2)) + C2, sqrt(2)/2)",
        variable_formula: "u = a*sqrt(λ/c)*C1*exp(3/2*T)*cosh(sqrt(2λ)/2*x)*ds(C1*exp(3/2*T)*sinh(sqrt(2λ)/2*x) + C2, sqrt(2)/2)",
        eval: p3,
        regular: p3_regular,
        nonzero: C1,
    },
    SolutionFamily {
        id: "P4",
        lambda_sign: LambdaSign::Positive,
        param_names: C1_C2,
        formula: "u = C1/2*exp(3/2*T)*sinh(X/sqrt(2))*(1 + cn(z))/sn(z), z = C1*exp(3/2*T)*cosh(X/sqrt(2)) + C2",
        variable_formula: "u = a*sqrt(λ/c)*C1/2*exp(3/2*T)*sinh(sqrt(2λ)/2*x)*(1 + cn(z))/sn(z), z = C1*exp(3/2*T)*cosh(sqrt(2λ)/2*x) + C2",
        eval: p4,
        regular: p2_regular,
        nonzero: C1,
    },
    SolutionFamily {
        id: "P5",
        lambda_sign: LambdaSign::Positive,
        param_names: C1_C2,
        formula: "u = C1/2*exp(3/2*T)*cosh(X/sqrt(2))*(1 + cn(z))/sn(z), z = C1*exp(3/2*T)*sinh(X/sqrt(2)) + C2",
        variable_formula: "u = a*sqrt(λ/c)*C1/2*exp(3/2*T)*cosh(sqrt(2λ)/2*x)*(1 + cn(z))/sn(z), z = C1*exp(3/2*T)*sinh(sqrt(2λ)/2*x) + C2",
        eval: p5,
        regular: p3_regular,
        nonzero: C1,
    },
    SolutionFamily {
        id: "N1",
        lambda_sign: LambdaSign::Negative,
        param_names: &["C2"],
        formula: "u = sin(X/sqrt(2)) / (C2*exp(3/2*T) + cos(X/sqrt(2)))",
        variable_formula: "u = a*sqrt(-λ/c)*sin(sqrt(-2λ)/2*x) / (C2*exp(3/2*T) + cos(sqrt(-2λ)/2*x))",
        eval: n1,
        regular: n1_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "N2",
        lambda_sign: LambdaSign::Negative,
        param_names: C1_C2,
        formula: "u = C1*exp(-3/2*T)*sin(X/sqrt(2))*ds(C1*exp(-3/2*T)*cos(X/sqrt(2)) + C2, sqrt(2)/2)",
        variable_formula: "u = a*sqrt(-λ/c)*C1*exp(-3/2*T)*sin(sqrt(-2λ)/2*x)*ds(C1*exp(-3/2*T)*cos(sqrt(-2λ)/2*x) + C2, sqrt(2)/2)",
        eval: n2,
        regular: n2_regular,
        nonzero: C1,
    },
    SolutionFamily {
        id: "N3",
        lambda_sign: LambdaSign::Negative,
        param_names: C1_C2,
        formula: "u = C1/2*exp(-3/2*T)*cos(X/sqrt(2))*(1 + cn(z))/sn(z), z = C1*exp(-3/2*T)*sin(X/sqrt(2)) + C2",
        variable_formula: "u = a*sqrt(-λ/c)*C1/2*exp(-3/2*T)*cos(sqrt(-2λ)/2*x)*(1 + cn(z))/sn(z), z = C1*exp(-3/2*T)*sin(sqrt(-2λ)/2*x) + C2",
        eval: n3,
        regular: n3_regular,
        nonzero: C1,
    },
    SolutionFamily {
        id: "Z1",
        lambda_sign: LambdaSign::Zero,
        param_names: &[],
        formula: "u = 2*sqrt(2)*X*ds(X^2 + 6*T, sqrt(2)/2)",
        variable_formula: "u = 2*sqrt(2)*x*a/sqrt(c)*ds(x^2 + 6*T, sqrt(2)/2)",
        eval: z1,
        regular: z12_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "Z2",
        lambda_sign: LambdaSign::Zero,
        param_names: &[],
        formula: "u = sqrt(2)*X*(1 + cn(X^2 + 6*T))/sn(X^2 + 6*T)",
        variable_formula: "u = sqrt(2)*x*a/sqrt(c)*(1 + cn(x^2 + 6*T))/sn(x^2 + 6*T)",
        eval: z2,
        regular: z12_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "Z3",
        lambda_sign: LambdaSign::Zero,
        param_names: &[],
        formula: "u = 2*sqrt(2)*X/(X^2 + 6*T)",
        variable_formula: "u = a/sqrt(c)*2*sqrt(2)*x/(x^2 + 6*T)",
        eval: z3,
        regular: z3_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "Z4",
        lambda_sign: LambdaSign::Zero,
        param_names: &[],
        formula: "u = sqrt(2)/X",
        variable_formula: "u = a/sqrt(c)*sqrt(2)/x",
        eval: z4,
        regular: z4_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "Z5",
        lambda_sign: LambdaSign::Zero,
        param_names: &[],
        formula: "u = sqrt(2)*ds(X, sqrt(2)/2)",
        variable_formula: "u = sqrt(2)*a/sqrt(c)*ds(x, sqrt(2)/2)",
        eval: z5,
        regular: z56_regular,
        nonzero: &[],
    },
    SolutionFamily {
        id: "Z6",
        lambda_sign: LambdaSign::Zero,
        param_names: &[],
        formula: "u = sqrt(2)/2*(1 + cn(X))/sn(X)",
        variable_formula: "u = sqrt(2)/2*a/sqrt(c)*(1 + cn(x))/sn(x)",
        eval: z6,
        regular: z56_regular,
        nonzero: &[],
    },
];

/// The catalogue, in a fixed order.
pub fn list_families() -> &'static [SolutionFamily] {
    &CATALOG
}

pub fn family(id: &str) -> Result<&'static SolutionFamily> {
    CATALOG.iter().find(|f| f.id.eq_ignore_ascii_case(id)).ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// A family member as a solution of `u_t = u_xx + εu - u³`.
pub fn constant_solution(id: &str, epsilon: i32, params: &FamilyParams) -> Result<Solution> {
    let fam = family(id)?;
    let got = match epsilon {
        1 => LambdaSign::Positive,
        -1 => LambdaSign::Negative,
        0 => LambdaSign::Zero,
        e => return Err(Error::Parameter { name: "epsilon".into(), reason: format!("{e} is not -1, 0 or 1") }),
    };
    if !fam.lambda_sign.matches(got) {
        return Err(Error::SignMismatch {
            family: fam.id.into(),
            expected: fam.lambda_sign.to_string(),
            got: got.to_string(),
        });
    }
    fam.check_params(params)?;
    let p = Arc::new(params.clone());
    let (eval, regular) = (fam.eval, fam.regular);
    let sign = if params.negate { -1.0 } else { 1.0 };
    let pe = p.clone();
    Ok(Solution::new(
        fam.id,
        params.values.clone(),
        Arc::new(move |t, x| eval(&pe, t, x).map(|j| j * sign)),
        Arc::new(move |t, x| regular(&p, t, x)),
    ))
}

/// A family member transported to the reducible equation `c`.
pub fn instantiate(id: &str, c: &CoefficientTriple, r: &ReducibilityResult, params: &FamilyParams) -> Result<Solution> {
    let fam = family(id)?;
    let lambda = match (r.reducible, r.lambda) {
        (true, Some(l)) => l,
        _ => return Err(Error::NotReducible),
    };
    let got = LambdaSign::of(lambda);
    if !fam.lambda_sign.matches(got) {
        return Err(Error::SignMismatch {
            family: fam.id.into(),
            expected: fam.lambda_sign.to_string(),
            got: got.to_string(),
        });
    }
    let g = to_constant_transform(c, r)?;
    let s = constant_solution(id, got.epsilon(), params)?;
    Ok(pull_solution(&g, &s))
}

/// One sampled value; `None` at a pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRow {
    pub t: f64,
    pub x: f64,
    pub u: Option<f64>,
}

/// Values on a grid in row-major order.
pub fn sample(s: &Solution, grid: &Grid) -> Vec<SampleRow> {
    grid.points().par_iter().map(|&(t, x)| SampleRow { t, x, u: s.value(t, x) }).collect()
}

/// CSV with header `t,x,u`; poles leave `u` empty.
pub fn write_sample_csv<W: Write>(mut w: W, rows: &[SampleRow]) -> std::io::Result<()> {
    writeln!(w, "t,x,u")?;
    for r in rows {
        match r.u {
            Some(u) => writeln!(w, "{},{},{}", r.t, r.x, u)?,
            None => writeln!(w, "{},{},", r.t, r.x)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::reducibility_lambda;
    use crate::model::{Interval, PdeInstance};

    fn constant_instance(eps: f64) -> PdeInstance {
        let i = Interval::new(-1.0, 1.0).unwrap();
        PdeInstance::new(CoefficientTriple::parse("1", &eps.to_string(), "1", i).unwrap())
    }

    #[test]
    fn catalog_shape() {
        let ids: Vec<_> = list_families().iter().map(|f| f.id).collect();
        assert_eq!(ids.len(), 15);
        assert_eq!(ids, ["TW", "P1", "P2", "P3", "P4", "P5", "N1", "N2", "N3", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6"]);
        let z4 = family("Z4").unwrap();
        assert_eq!(z4.variable_formula, "u = a/sqrt(c)*sqrt(2)/x");
        assert_eq!(family("P1").unwrap().param_names, ["C1", "C1prime", "C2"]);
        assert!(matches!(family("Q9"), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn constant_coefficient_residuals_at_sample_points() {
        let pts = [(-0.4, 0.3), (0.2, -0.9), (0.6, 1.7), (-0.9, -2.2)];
        for fam in list_families() {
            let eps = fam.lambda_sign.epsilon();
            let s = constant_solution(fam.id, eps, &fam.default_params()).unwrap();
            let p = constant_instance(eps as f64);
            let mut checked = 0;
            for &(t, x) in &pts {
                if !s.is_regular(t, x) {
                    continue;
                }
                let r = p.residual(&s, t, x).unwrap();
                let scale = s.jet(t, x).unwrap().u_xx.abs().max(1.0);
                assert!(r.abs() <= 1e-12 * scale, "{} at ({t}, {x}): {r}", fam.id);
                checked += 1;
            }
            assert!(checked >= 2, "{}", fam.id);
        }
    }

    #[test]
    fn sign_and_parameter_errors() {
        assert!(matches!(constant_solution("TW", -1, &FamilyParams::default()), Err(Error::SignMismatch { .. })));
        let p = family("P2").unwrap().default_params().with("C1", 0.0);
        assert!(matches!(constant_solution("P2", 1, &p), Err(Error::Parameter { .. })));
        let p = FamilyParams::default().with("C7", 1.0);
        assert!(matches!(constant_solution("Z4", 0, &p), Err(Error::Parameter { .. })));
        let p = FamilyParams::default().with("C1", f64::NAN).with("C2", 0.0);
        assert!(matches!(constant_solution("P3", 1, &p), Err(Error::Parameter { .. })));
    }

    #[test]
    fn z4_is_inverse_profile() {
        let s = constant_solution("Z4", 0, &FamilyParams::default()).unwrap();
        let j = s.jet(0.3, 2.0).unwrap();
        assert!((j.u - SQRT_2 / 2.0).abs() < 1e-15);
        assert_eq!(j.u_t, 0.0);
        let r = constant_instance(0.0).residual(&s, 1.0, 2.0).unwrap();
        assert!(r.abs() < 1e-12);
        let neg = constant_solution("Z4", 0, &FamilyParams::default().negated()).unwrap();
        assert_eq!(neg.jet(0.3, 2.0).unwrap().u, -j.u);
    }

    #[test]
    fn traveling_wave_on_variable_instance() {
        let i = Interval::new(0.0, 2.0).unwrap();
        let c = CoefficientTriple::parse("1", "0.5", "exp(t)", i).unwrap();
        let r = reducibility_lambda(&c, 1e-9).unwrap();
        let s = instantiate("TW", &c, &r, &FamilyParams::default()).unwrap();
        let lambda = r.lambda.unwrap();
        let t_ref = c.t_ref();
        for (t, x) in [(0.2f64, -3.0f64), (1.5, 2.5)] {
            let big_t = lambda * (t - t_ref);
            let expect = 0.5 * (lambda / t.exp()).sqrt() * (1.0 - ((2.0 * lambda).sqrt() / 4.0 * x - 0.75 * big_t).tanh());
            assert!((s.value(t, x).unwrap() - expect).abs() < 1e-12);
        }
        assert!(matches!(instantiate("N1", &c, &r, &family("N1").unwrap().default_params()), Err(Error::SignMismatch { .. })));
    }

    #[test]
    fn parameter_overrides() {
        let p = family("P1").unwrap().default_params().apply_overrides("C2=2.5, neg=1").unwrap();
        assert_eq!(p.get("C2"), 2.5);
        assert!(p.negate);
        assert!(FamilyParams::default().apply_overrides("C1").is_err());
        assert!(FamilyParams::default().apply_overrides("C1=abc").is_err());
    }

    #[test]
    fn csv_marks_poles_with_empty_field() {
        let s = constant_solution("Z4", 0, &FamilyParams::default()).unwrap();
        let grid = Grid { t0: 0.0, t1: 0.0, nt: 1, x0: -1.0, x1: 1.0, nx: 3 };
        let rows = sample(&s, &grid);
        let mut out = Vec::new();
        write_sample_csv(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, format!("t,x,u\n0,-1,{}\n0,0,\n0,1,{}\n", -SQRT_2, SQRT_2));
    }
}
