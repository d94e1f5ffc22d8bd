//! Outer approximation for convex mixed-integer programs whose objective and
//! constraints are sums of pointwise maxima of affine functions.
//!
//! Every numeric component is generic over [`scalar::Scalar`]; the aliases
//! below fix the two common choices.

pub mod cli;
pub mod instances;
pub mod io;
pub mod lp;
pub mod master;
pub mod milp;
pub mod oa;
pub mod oracle;
pub mod problem;
pub mod pwl;
pub mod scalar;
pub mod solution;
pub mod subproblems;

pub use num_rational::BigRational;

pub type Rational = BigRational;

pub type PwlFunctionF64 = pwl::PwlFunction<f64>;
pub type PwlFunctionQ = pwl::PwlFunction<Rational>;
pub type LpProblemF64 = lp::LpProblem<f64>;
pub type LpProblemQ = lp::LpProblem<Rational>;
pub type MilpProblemF64 = milp::MilpProblem<f64>;
pub type MilpProblemQ = milp::MilpProblem<Rational>;
pub type MinlpProblemF64 = problem::MinlpProblem<f64>;
pub type MinlpProblemQ = problem::MinlpProblem<Rational>;
pub type OaResultF64 = oa::OaResult<f64>;
pub type OaResultQ = oa::OaResult<Rational>;
