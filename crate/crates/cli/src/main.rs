//! `nws`: command-line front end for the reaction-diffusion toolkit.

mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "nws", version, about = "Symmetry, reduction and exact solutions of u_t = a²u_xx + bu - cu³")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunArgs,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Tolerance: zero-test tolerance, or the pass threshold for residual and
    /// simulation reports.
    #[arg(long, allow_hyphen_values = true, global = true)]
    pub tol: Option<f64>,
    /// Seed of the zero-test sampler.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Coeffs {
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    /// Time interval `lo:hi`.
    #[arg(long, allow_hyphen_values = true, default_value = "0:1")]
    pub t: String,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub family: String,
    /// Parameter overrides `k=v,…`; `neg=1` flips the sign.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    pub params: String,
    /// Space window `lo:hi`.
    #[arg(long, allow_hyphen_values = true, default_value = "-4:4")]
    pub x: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Gauge,
    ToConstant,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse expressions and print their canonical form.
    ParseCheck {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        /// Further expressions in t, x, u.
        #[arg(long, allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Lie symmetry classification from c, or from the full triple when a or
    /// b is given.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0:1")]
        t: String,
    },
    /// Reducibility to constant coefficients.
    Criterion {
        #[command(flatten)]
        coeffs: Coeffs,
        /// Expected λ; a mismatch is a negative verdict.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
    },
    /// Gauge to a = 1, b = 0, or map to constant coefficients.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        #[command(flatten)]
        coeffs: Coeffs,
    },
    /// Residual statistics of an instantiated solution family.
    VerifySolution {
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 41)]
        nt: usize,
        #[arg(long, default_value_t = 81)]
        nx: usize,
        /// Run every catalogued fixture.
        #[arg(long, conflicts_with_all = ["family", "a", "b", "c", "t", "x"])]
        all: bool,
    },
    /// Check a regular nonclassical operator ∂t + ξ∂x + η∂u of u_t = u_xx - cu³.
    VerifyOperator {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0:1")]
        t: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.25:1.5")]
        x: String,
    },
    /// Method-of-lines solution seeded with exact data, compared to the exact solution.
    Simulate {
        #[command(flatten)]
        coeffs: Coeffs,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        /// Also run nx, 2nx, 4nx and report the observed order.
        #[arg(long)]
        study: bool,
    },
    /// Sample an instantiated solution on a grid.
    Sample {
        #[command(flatten)]
        coeffs: Coeffs,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 11)]
        nt: usize,
        #[arg(long, default_value_t = 21)]
        nx: usize,
    },
    /// List the catalogued solution families.
    ListSolutions {
        /// Keep only families matching the sign of this λ.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
    },
}

/// A serialized report and whether its mathematical verdict is positive.
pub struct Outcome {
    pub body: String,
    pub pass: bool,
}

fn emit(run: &RunArgs, body: &str) -> anyhow::Result<()> {
    match &run.out {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli).and_then(|o| emit(&cli.run, &o.body).map(|_| o.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
