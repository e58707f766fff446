use std::sync::Arc;

use nalgebra::DVector;

use super::functions::check_finite;
use super::poly::ComplexPoly;
use crate::extremal::{complex_minimax, MeshBasis, MinimaxOptions, NodeSequence};
use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxMethod {
    Lawson,
    Truncation,
    Interpolation,
    Runge,
    Glue,
}

impl ApproxMethod {
    pub fn name(self) -> &'static str {
        match self {
            ApproxMethod::Lawson => "lawson",
            ApproxMethod::Truncation => "truncation",
            ApproxMethod::Interpolation => "interpolation",
            ApproxMethod::Runge => "runge",
            ApproxMethod::Glue => "glue",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub approximant: ComplexPoly,
    /// `max |f − p|` over the mesh, recomputed from the approximant.
    pub error: f64,
    /// Certified lower bound on the mesh best-approximation error (0 if unknown).
    pub lower_bound: f64,
    pub method: ApproxMethod,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub stalled: bool,
}

pub(crate) fn sup_error(p: &ComplexPoly, points: &[Complex], f: &[Complex]) -> f64 {
    points
        .iter()
        .zip(f)
        .map(|(&z, &v)| (v - p.eval(z)).norm())
        .fold(0.0, f64::max)
}

/// Best uniform approximation on a fixed mesh and basis.
#[derive(Clone, Debug)]
pub struct Approximator {
    pub space: Arc<MeshBasis>,
    pub options: MinimaxOptions,
}

impl Approximator {
    /// Basis on the first `max_degree + 1` nodes; their mesh needs `8·max_degree` points.
    pub fn new(nodes: Arc<NodeSequence>, max_degree: usize) -> Result<Self> {
        let m = nodes.source.len();
        if m < 8 * max_degree {
            return Err(Error::MeshInadequate(format!(
                "degree {max_degree} needs at least {} mesh points, got {m}",
                8 * max_degree
            )));
        }
        Ok(Self::from_space(Arc::new(MeshBasis::from_nodes(nodes, max_degree)?)))
    }

    pub fn from_space(space: Arc<MeshBasis>) -> Self {
        Self {
            space,
            options: MinimaxOptions::default(),
        }
    }

    pub fn best(&self, f: &[Complex], n: usize) -> Result<ApproxResult> {
        let pts = self.space.points();
        if f.len() != pts.len() {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a mesh of {} points",
                f.len(),
                pts.len()
            )));
        }
        check_finite(f)?;
        if n > self.space.degree() {
            return Err(Error::IllConditioned {
                requested: n,
                achieved: self.space.degree(),
            });
        }
        let cols = self.space.columns.columns(0, n + 1).into_owned();
        let target = DVector::from_column_slice(f);
        let sol = complex_minimax(&cols, &target, &self.options);
        let approximant = ComplexPoly::new(self.space.basis.clone(), sol.coeffs.iter().copied().collect())?;
        let error = sup_error(&approximant, pts, f);
        Ok(ApproxResult {
            approximant,
            error,
            lower_bound: sol.lower.min(error),
            method: ApproxMethod::Lawson,
            iterations: sol.iterations,
            residual_history: sol.history,
            stalled: sol.stalled,
        })
    }

    /// Results for `n = 0..=n_max`; a degree that fails to beat its predecessor keeps the
    /// predecessor's approximant, so the errors are nonincreasing.
    pub fn sequence(&self, f: &[Complex], n_max: usize) -> Result<Vec<ApproxResult>> {
        let mut out: Vec<ApproxResult> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut r = self.best(f, n)?;
            if let Some(prev) = out.last() {
                if prev.error < r.error {
                    r.approximant = prev.approximant.clone();
                    r.error = prev.error;
                }
                r.lower_bound = r.lower_bound.min(r.error);
            }
            out.push(r);
        }
        Ok(out)
    }
}

/// One-shot best approximation of mesh samples by `𝒫ₙ`.
pub fn best_approx(f: &[Complex], n: usize, nodes: &NodeSequence) -> Result<ApproxResult> {
    Approximator::new(Arc::new(nodes.clone()), n)?.best(f, n)
}
