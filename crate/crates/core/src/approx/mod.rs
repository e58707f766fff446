mod best;
mod cauchy;
mod functions;
mod glue;
mod jackson;
mod poly;
mod runge;

pub use best::{best_approx, ApproxMethod, ApproxResult, Approximator};
pub use cauchy::{
    cauchy_kernel_bracket, lagrange_interp, lagrange_interp_cauchy, lemma33_bound, CauchyBracket,
    InterpolationBound,
};
pub use functions::TestFunction;
pub use glue::{glue_union_approx, GlueOptions, GlueResult, GlueTerm};
pub use jackson::{jackson_from_errors, jackson_norm, JacksonNormValue};
pub use poly::ComplexPoly;
pub use runge::{runge_approximant, runge_constant, ContourPartition, ContourPiece, RungeOptions, RungeResult};
