//! Quadrature, monotone inversion and the method-of-lines integrator.

mod invert;
mod mol;
mod quad;

pub use invert::{invert_monotone, MonotoneMap, INVERSION_TOL};
pub use mol::{
    convergence_order, convergence_study, mol_solve, ConvergenceReport, MolConfig, NumericField, SolverStats, MIN_NX,
    ORDER_FLOOR_FACTOR,
};
pub use quad::{antiderivative, integrate, integrate_expr, Antiderivative, CHECKPOINT_SPACING};
