use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use nws_core::equivalence::{reducibility_with, to_constant_transform, TransformSummary};
use nws_core::expr::{SampleBox, ZeroTestConfig};
use nws_core::numerics::{convergence_study, mol_solve, ConvergenceReport, MolConfig, SolverStats};
use nws_core::solutions::{
    family, fixtures, instantiate, list_families, sample, write_sample_csv, FamilyParams, LambdaSign,
};
use nws_core::symmetry::{classify_lie_with, classify_triple_with, verify_nonclassical_with, ClassificationReport};
use nws_core::{
    gauge_transform, parse, push_coefficients, CoefficientTriple, Error, Expr, Grid, Interval, PdeInstance,
    ResidualReport, Solution, Var,
};

use crate::{Cli, Coeffs, Command, FamilyArgs, Format, Outcome, RunArgs, TransformKind};

/// Default zero-test tolerance.
const ZERO_TOL: f64 = 1e-9;
/// Default pass threshold for exact-solution residuals.
const RESIDUAL_TOL: f64 = 1e-8;
/// Default pass threshold for the simulation error.
const SIMULATION_TOL: f64 = 1e-3;
/// Agreement required between `--lambda` and the computed λ.
const LAMBDA_MATCH_TOL: f64 = 1e-8;

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn expr(flag: &str, text: &str, vars: &[Var]) -> Result<Expr> {
    parse(text, vars).map_err(|e| anyhow!("--{flag}: {e}"))
}

fn interval(flag: &str, text: &str) -> Result<Interval> {
    text.parse::<Interval>().map_err(|e| anyhow!("--{flag}: {e}"))
}

fn triple(a: &str, b: &str, c: &str, t: &str) -> Result<CoefficientTriple> {
    let vars = [Var::T];
    let i = interval("t", t)?;
    let (a, b, c) = (expr("a", a, &vars)?, expr("b", b, &vars)?, expr("c", c, &vars)?);
    Ok(CoefficientTriple::new(a, b, c, i)?)
}

fn coeff_triple(c: &Coeffs) -> Result<CoefficientTriple> {
    triple(&c.a, &c.b, &c.c, &c.t)
}

fn zero_cfg(run: &RunArgs) -> Result<ZeroTestConfig> {
    let tol = positive("tol", run.tol.unwrap_or(ZERO_TOL))?;
    Ok(ZeroTestConfig::default().with_tol(tol).with_seed(run.seed))
}

fn positive(flag: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        bail!("--{flag}: must be positive, got {v}")
    }
}

/// Errors that express a mathematical verdict rather than a failure.
fn is_verdict(e: &Error) -> bool {
    matches!(e, Error::NotReducible | Error::SignMismatch { .. })
}

#[derive(Serialize)]
struct Refusal {
    pass: bool,
    reason: String,
}

fn refusal(e: Error) -> Result<Outcome> {
    if is_verdict(&e) {
        Ok(Outcome { body: json(&Refusal { pass: false, reason: e.to_string() })?, pass: false })
    } else {
        Err(e.into())
    }
}

fn supports_csv(c: &Command) -> bool {
    matches!(c, Command::Criterion { .. } | Command::Simulate { .. } | Command::Sample { .. } | Command::ListSolutions { .. })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let run = &cli.run;
    if run.format == Format::Csv && !supports_csv(&cli.command) {
        bail!("--format: csv output is not available for this subcommand");
    }
    match &cli.command {
        Command::ParseCheck { a, b, c, xi, eta, expr } => parse_check(a, b, c, xi, eta, expr),
        Command::Classify { a, b, c, t } => classify(run, a.as_deref(), b.as_deref(), c, t),
        Command::Criterion { coeffs, lambda } => criterion(run, coeffs, *lambda),
        Command::Transform { kind, coeffs } => transform(run, *kind, coeffs),
        Command::VerifySolution { family, a, b, c, t, x, params, nt, nx, all } => {
            if *all {
                verify_all(run, *nt, *nx)
            } else {
                let family = family.as_deref().context("--family is required unless --all is given")?;
                let c = c.as_deref().context("--c is required unless --all is given")?;
                let coeffs = Coeffs {
                    a: a.clone().unwrap_or_else(|| "1".into()),
                    b: b.clone().unwrap_or_else(|| "0".into()),
                    c: c.into(),
                    t: t.clone().unwrap_or_else(|| "0:1".into()),
                };
                let fam = FamilyArgs {
                    family: family.into(),
                    params: params.clone(),
                    x: x.clone().unwrap_or_else(|| "-4:4".into()),
                };
                verify_one(run, &coeffs, &fam, *nt, *nx)
            }
        }
        Command::VerifyOperator { xi, eta, c, t, x } => verify_operator(run, xi, eta, c, t, x),
        Command::Simulate { coeffs, family, nx, study } => simulate(run, coeffs, family, *nx, *study),
        Command::Sample { coeffs, family, nt, nx } => sample_cmd(run, coeffs, family, *nt, *nx),
        Command::ListSolutions { lambda } => list(run, *lambda),
    }
}

#[derive(Serialize)]
struct Parsed {
    flag: String,
    input: String,
    canonical: String,
    variables: Vec<&'static str>,
}

fn parse_check(
    a: &Option<String>,
    b: &Option<String>,
    c: &Option<String>,
    xi: &Option<String>,
    eta: &Option<String>,
    extra: &[String],
) -> Result<Outcome> {
    let mut inputs: Vec<(String, &String, &[Var])> = Vec::new();
    for (flag, v) in [("a", a), ("b", b), ("c", c)] {
        if let Some(v) = v {
            inputs.push((flag.into(), v, &[Var::T]));
        }
    }
    for (flag, v) in [("xi", xi), ("eta", eta)] {
        if let Some(v) = v {
            inputs.push((flag.into(), v, &Var::TXU));
        }
    }
    for v in extra {
        inputs.push(("expr".into(), v, &Var::TXU));
    }
    if inputs.is_empty() {
        bail!("nothing to parse: give --a, --b, --c, --xi, --eta or --expr");
    }
    let mut out = Vec::new();
    for (flag, text, vars) in inputs {
        let e = expr(&flag, text, vars)?;
        let variables = e.variables().into_iter().map(Var::name).collect();
        out.push(Parsed { flag, input: text.clone(), canonical: e.to_text(), variables });
    }
    Ok(Outcome { body: json(&out)?, pass: true })
}

fn classify(run: &RunArgs, a: Option<&str>, b: Option<&str>, c: &str, t: &str) -> Result<Outcome> {
    let cfg = zero_cfg(run)?;
    let case = if a.is_some() || b.is_some() {
        classify_triple_with(&triple(a.unwrap_or("1"), b.unwrap_or("0"), c, t)?, &cfg)?
    } else {
        classify_lie_with(&expr("c", c, &[Var::T])?, interval("t", t)?, &cfg)?
    };
    Ok(Outcome { body: json(&ClassificationReport::from(&case))?, pass: true })
}

#[derive(Serialize)]
struct CriterionReport {
    reducible: bool,
    lambda: Option<f64>,
    expected_lambda: Option<f64>,
    pass: bool,
    samples: Vec<nws_core::equivalence::CriterionSample>,
}

fn criterion(run: &RunArgs, coeffs: &Coeffs, expected: Option<f64>) -> Result<Outcome> {
    let r = reducibility_with(&coeff_triple(coeffs)?, &zero_cfg(run)?)?;
    let matches = match (expected, r.lambda) {
        (Some(want), Some(got)) => (want - got).abs() <= LAMBDA_MATCH_TOL * (1.0 + want.abs()),
        (Some(_), None) => false,
        (None, _) => true,
    };
    let pass = r.reducible && matches;
    if run.format == Format::Csv {
        let mut body = String::from("t,L\n");
        for p in &r.samples {
            body.push_str(&format!("{},{}\n", p.t, p.l));
        }
        return Ok(Outcome { body, pass });
    }
    let report =
        CriterionReport { reducible: r.reducible, lambda: r.lambda, expected_lambda: expected, pass, samples: r.samples };
    Ok(Outcome { body: json(&report)?, pass })
}

#[derive(Serialize)]
struct TargetSample {
    t: f64,
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Serialize)]
struct TransformReport {
    kind: &'static str,
    lambda: Option<f64>,
    transform: TransformSummary,
    target: TargetTriple,
}

#[derive(Serialize)]
struct TargetTriple {
    a: String,
    b: String,
    c: String,
    interval: Interval,
    samples: Vec<TargetSample>,
}

fn transform(run: &RunArgs, kind: TransformKind, coeffs: &Coeffs) -> Result<Outcome> {
    let src = coeff_triple(coeffs)?;
    let (name, lambda, g, target) = match kind {
        TransformKind::Gauge => {
            let (g, target) = gauge_transform(&src)?;
            ("gauge", None, g, target)
        }
        TransformKind::ToConstant => {
            let r = reducibility_with(&src, &zero_cfg(run)?)?;
            let g = match to_constant_transform(&src, &r) {
                Ok(g) => g,
                Err(e) => return refusal(e),
            };
            let target = push_coefficients(&g, &src)?;
            ("to-constant", r.lambda, g, target)
        }
    };
    let mut samples = Vec::new();
    for t in target.interval().samples(5) {
        let (a, b, c) = target.eval(t)?;
        samples.push(TargetSample { t, a, b, c });
    }
    let report = TransformReport {
        kind: name,
        lambda,
        transform: TransformSummary::from(&g),
        target: TargetTriple {
            a: target.a().to_text(),
            b: target.b().to_text(),
            c: target.c().to_text(),
            interval: target.interval(),
            samples,
        },
    };
    Ok(Outcome { body: json(&report)?, pass: true })
}

fn solution(run: &RunArgs, src: &CoefficientTriple, fam: &FamilyArgs) -> Result<std::result::Result<Solution, Error>> {
    let params = family(&fam.family)?
        .default_params()
        .apply_overrides(&fam.params)
        .map_err(|e| anyhow!("--params: {e}"))?;
    let r = reducibility_with(src, &zero_cfg(run)?)?;
    Ok(instantiate(&fam.family, src, &r, &params))
}

#[derive(Serialize)]
struct ResidualEntry {
    name: String,
    family: String,
    params: String,
    pass: bool,
    report: ResidualReport,
}

fn residual_entry(name: String, family: &str, params: &FamilyParams, s: &Solution, p: &PdeInstance, grid: &Grid, tol: f64) -> Result<ResidualEntry> {
    let report = p.residual_stats(s, grid)?;
    let pass = report.max_abs <= tol && report.n_evaluated > 0;
    let params = params.values.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
    Ok(ResidualEntry { name, family: family.into(), params, pass, report })
}

fn verify_one(run: &RunArgs, coeffs: &Coeffs, fam: &FamilyArgs, nt: usize, nx: usize) -> Result<Outcome> {
    let tol = positive("tol", run.tol.unwrap_or(RESIDUAL_TOL))?;
    let src = coeff_triple(coeffs)?;
    let x = interval("x", &fam.x)?;
    let s = match solution(run, &src, fam)? {
        Ok(s) => s,
        Err(e) => return refusal(e),
    };
    let params = family(&fam.family)?.default_params().apply_overrides(&fam.params)?;
    let grid = Grid::new(src.interval(), nt, x, nx);
    let entry = residual_entry(fam.family.to_uppercase(), &fam.family.to_uppercase(), &params, &s, &PdeInstance::new(src), &grid, tol)?;
    let pass = entry.pass;
    Ok(Outcome { body: json(&entry)?, pass })
}

#[derive(Serialize)]
struct AllReport {
    pass: bool,
    tol: f64,
    fixtures: Vec<ResidualEntry>,
}

fn verify_all(run: &RunArgs, nt: usize, nx: usize) -> Result<Outcome> {
    let tol = positive("tol", run.tol.unwrap_or(RESIDUAL_TOL))?;
    let entries = fixtures()
        .par_iter()
        .map(|fx| {
            let s = fx.solution()?;
            let params = fx.params()?;
            residual_entry(fx.name(), fx.family, &params, &s, &fx.pde()?, &fx.grid(nt, nx), tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(Outcome { body: json(&AllReport { pass, tol, fixtures: entries })?, pass })
}

fn verify_operator(run: &RunArgs, xi: &str, eta: &str, c: &str, t: &str, x: &str) -> Result<Outcome> {
    let (xi, eta) = (expr("xi", xi, &Var::TXU)?, expr("eta", eta, &Var::TXU)?);
    let c = expr("c", c, &[Var::T])?;
    let (t, x) = (interval("t", t)?, interval("x", x)?);
    let sample_box = SampleBox::t(t.lo, t.hi).with(Var::X, x.lo, x.hi).with(Var::U, 0.1, 2.0);
    let report = verify_nonclassical_with(&xi, &eta, &c, &sample_box, &zero_cfg(run)?)?;
    let pass = report.pass;
    Ok(Outcome { body: json(&report)?, pass })
}

#[derive(Serialize)]
struct SimulationReport {
    family: String,
    nx: usize,
    t: Interval,
    x: Interval,
    max_abs_error: f64,
    tol: f64,
    pass: bool,
    stats: SolverStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence: Option<ConvergenceReport>,
}

fn simulate(run: &RunArgs, coeffs: &Coeffs, fam: &FamilyArgs, nx: usize, study: bool) -> Result<Outcome> {
    let tol = positive("tol", run.tol.unwrap_or(SIMULATION_TOL))?;
    let src = coeff_triple(coeffs)?;
    let (t, x) = (src.interval(), interval("x", &fam.x)?);
    let s = match solution(run, &src, fam)? {
        Ok(s) => s,
        Err(e) => return refusal(e),
    };
    let p = PdeInstance::new(src);
    let cfg = MolConfig::new(nx);
    let field = mol_solve(&p, &s, t, x, &cfg)?;
    let err = field.final_error(&s)?;
    if run.format == Format::Csv {
        let mut buf = Vec::new();
        field.write_csv(&mut buf)?;
        return Ok(Outcome { body: String::from_utf8(buf)?, pass: err <= tol });
    }
    let convergence = if study { Some(convergence_study(&p, &s, t, x, nx, &cfg)?) } else { None };
    let pass = err <= tol && convergence.is_none_or(|c| !c.degenerate);
    let report = SimulationReport {
        family: fam.family.to_uppercase(),
        nx,
        t,
        x,
        max_abs_error: err,
        tol,
        pass,
        stats: field.stats,
        convergence,
    };
    Ok(Outcome { body: json(&report)?, pass })
}

fn sample_cmd(run: &RunArgs, coeffs: &Coeffs, fam: &FamilyArgs, nt: usize, nx: usize) -> Result<Outcome> {
    let src = coeff_triple(coeffs)?;
    let x = interval("x", &fam.x)?;
    let s = match solution(run, &src, fam)? {
        Ok(s) => s,
        Err(e) => return refusal(e),
    };
    let rows = sample(&s, &Grid::new(src.interval(), nt, x, nx));
    let body = match run.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_sample_csv(&mut buf, &rows)?;
            String::from_utf8(buf)?
        }
        Format::Json => json(&rows)?,
    };
    Ok(Outcome { body, pass: true })
}

fn list(run: &RunArgs, lambda: Option<f64>) -> Result<Outcome> {
    let keep = |sign: LambdaSign| match lambda {
        None => true,
        Some(l) => sign == LambdaSign::Any || sign == LambdaSign::of(l),
    };
    let families: Vec<_> = list_families().iter().filter(|f| keep(f.lambda_sign)).collect();
    let body = match run.format {
        Format::Json => json(&families)?,
        Format::Csv => {
            let mut s = String::from("id,lambda_sign,params,formula\n");
            for f in &families {
                s.push_str(&format!("{},{},{},\"{}\"\n", f.id, f.lambda_sign, f.param_names.join(" "), f.formula));
            }
            s
        }
    };
    Ok(Outcome { body, pass: true })
}
