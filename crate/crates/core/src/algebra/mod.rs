//! Exact arithmetic: rational polynomials, linear systems and power series.

mod linsolve;
mod scalar;
mod series;

pub use linsolve::{determinant, solve_linear_exact, LinearSolution};
pub use scalar::{qbinom, rat, Monomial, Scalar, ScalarRatio, Var, MAX_COUPLING, NUM_VARS};
pub use series::{foissy_series, series_compose, PowerSeries, Ring};
