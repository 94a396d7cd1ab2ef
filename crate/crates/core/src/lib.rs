//! Classification, equivalence transformations, exact solutions and numerical
//! cross-checks for reaction-diffusion equations
//! `u_t = a²(t) u_xx + b(t) u - c(t) u³`.

pub mod equivalence;
pub mod error;
pub mod expr;
pub mod model;
pub mod numerics;
pub mod solutions;
pub mod special;
pub mod symmetry;

pub use equivalence::{
    gauge_transform, pull_solution, push_coefficients, reducibility_lambda, reducibility_with, to_constant_transform,
    EquivTransform,
    ReducibilityResult,
};
pub use error::{Error, Result};
pub use expr::{parse, EvalPoint, Expr, Var};
pub use model::{CoefficientTriple, Grid, Interval, Jet, PdeInstance, ResidualReport, Solution, VectorField};
