//! Potential theory and polynomial approximation on compact plane sets.
//!
//! The crate is layered bottom-up:
//! - [`sets`]: set descriptions, exact distances, meshes, square covers, closed-form Green's functions.
//! - [`extremal`]: Leja/Fekete nodes, the Newton basis, the complex minimax solver, Φₙ and Green estimates.
//! - [`approx`]: best approximation, Jackson norms and the constructive approximation schemes.
//! - [`regularity`]: exponent fits and the Jackson-property grid check.
//! - [`cli`]: spec files, run configs, node cache and the batch commands.

pub mod approx;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod regularity;
pub mod sets;

pub use error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Least-squares slope/intercept of `y` against `x`, with coefficient of determination.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}
