use std::sync::Arc;

use super::best::Approximator;
use crate::extremal::{level_set, ExtremalSolver, ExtremalValue, GreenSource, MeshBasis, NodeSequence};
use crate::sets::{build_mesh, CompactSetSpec, MeshRole};
use crate::{Complex, Error, Result};

/// Two-sided bound on `dist_E(f_ζ, 𝒫ₙ)` for the Cauchy kernel `f_ζ = 1/(ζ − z)`.
#[derive(Clone, Debug)]
pub struct CauchyBracket {
    pub zeta: Complex,
    pub n: usize,
    /// `1/((dist + diam)·Φ_{n+1}(ζ))` with the certified upper value of `Φ_{n+1}`.
    pub lower: f64,
    /// `1/(dist·Φ_{n+1}(ζ))` with the witness value of `Φ_{n+1}`.
    pub upper: f64,
    pub measured: f64,
    pub phi: ExtremalValue,
    pub dist: f64,
    pub diam: f64,
}

impl CauchyBracket {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower <= self.measured && self.measured <= self.upper * (1.0 + tol)
    }
}

/// Evaluate the bracket on the mesh carried by `space`, which needs degree `n + 1`.
pub fn cauchy_kernel_bracket(
    spec: &CompactSetSpec,
    space: &Arc<MeshBasis>,
    zeta: Complex,
    n: usize,
) -> Result<CauchyBracket> {
    let dist = spec.distance(zeta);
    if !(dist > 0.0) {
        return Err(Error::InvalidArgument(format!("ζ = {zeta} lies on the set")));
    }
    let diam = spec.diameter();
    let phi = ExtremalSolver::from_space(space.clone()).phi(n + 1, zeta)?;
    let f: Vec<Complex> = space.points().iter().map(|&z| 1.0 / (zeta - z)).collect();
    let best = Approximator::from_space(space.clone()).best(&f, n)?;
    Ok(CauchyBracket {
        zeta,
        n,
        lower: 1.0 / ((dist + diam) * phi.upper),
        upper: 1.0 / (dist * phi.value),
        measured: best.error,
        phi,
        dist,
        diam,
    })
}

/// Newton-form interpolant of `values` at `nodes`, evaluated at `z`.
pub fn lagrange_interp(nodes: &[Complex], values: &[Complex], z: Complex) -> Result<Complex> {
    if nodes.is_empty() || nodes.len() != values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} nodes for {} values",
            nodes.len(),
            values.len()
        )));
    }
    let mut dd = values.to_vec();
    let n = nodes.len();
    for k in 1..n {
        for i in (k..n).rev() {
            let h = nodes[i] - nodes[i - k];
            if h == Complex::new(0.0, 0.0) {
                return Err(Error::InvalidArgument("interpolation nodes must be distinct".into()));
            }
            dd[i] = (dd[i] - dd[i - 1]) / h;
        }
    }
    let mut acc = dd[n - 1];
    for i in (0..n - 1).rev() {
        acc = acc * (z - nodes[i]) + dd[i];
    }
    Ok(acc)
}

/// `L f_η(z) = (ω(η) − ω(z))/(ω(η)(η − z))` for the Cauchy kernel, in product form.
pub fn lagrange_interp_cauchy(nodes: &[Complex], eta: Complex, z: Complex) -> Result<Complex> {
    if z == eta {
        return Err(Error::Pole { z });
    }
    if nodes.contains(&eta) {
        return Err(Error::Pole { z: eta });
    }
    let ratio: Complex = nodes.iter().map(|&x| (z - x) / (eta - x)).product();
    Ok((1.0 - ratio) / (eta - z))
}

/// Interpolation error bound at `n + 1` nodes against its measured counterpart.
#[derive(Clone, Debug)]
pub struct InterpolationBound {
    pub n: usize,
    pub rho: f64,
    pub bound: f64,
    pub measured: f64,
    /// `bound / measured`; at least 1 when the bound holds.
    pub slack: f64,
    /// `c = 2d + diam E`.
    pub c: f64,
    pub d: f64,
    /// `dist(C(E, ρ), E)`.
    pub level_dist: f64,
    /// `Φ_E(ζ)` from the Green source.
    pub phi_zeta: f64,
}

/// Compare `‖f_ζ − L f_ζ‖` on the node mesh with the Lagrange-interpolation bound
/// `(n+1)c/(dist(C(E,ρ),E)·dist(ζ,E))·(ρ/Φ(ζ))^{n+1}`.
pub fn lemma33_bound(
    spec: &CompactSetSpec,
    nodes: &NodeSequence,
    source: &GreenSource,
    zeta: Complex,
    rho: f64,
    n: usize,
    level_resolution: f64,
) -> Result<InterpolationBound> {
    if n > nodes.degree() {
        return Err(Error::IllConditioned {
            requested: n,
            achieved: nodes.degree(),
        });
    }
    let dist_zeta = spec.distance(zeta);
    let phi_zeta = source.eval(zeta)?.exp();
    if !(rho > 1.0) || rho > phi_zeta * (1.0 + 1e-12) || !(dist_zeta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 1 < rho <= Φ(ζ) = {phi_zeta} and ζ off the set, got rho = {rho}"
        )));
    }
    // ‖Φ_E‖ on the closed unit neighbourhood is attained on its outer boundary
    let shell = build_mesh(spec, MeshRole::Shell(1.0), 0.02_f64.min(level_resolution * 4.0))?;
    let mut g1: f64 = 0.0;
    for &z in &shell.points {
        g1 = g1.max(source.eval(z)?);
    }
    let outer = level_set(spec, source, g1.exp(), level_resolution, None)?;
    let inner = level_set(spec, source, rho, level_resolution, None)?;
    let d = outer.max_dist;
    let c = 2.0 * d + spec.diameter();
    let level_dist = inner.min_dist;
    let bound = (n + 1) as f64 * c / (level_dist * dist_zeta) * (rho / phi_zeta).powi(n as i32 + 1);

    let knots = &nodes.nodes[..=n];
    let mut measured: f64 = 0.0;
    for &z in &nodes.source.points {
        let l = lagrange_interp_cauchy(knots, zeta, z)?;
        measured = measured.max((1.0 / (zeta - z) - l).norm());
    }
    Ok(InterpolationBound {
        n,
        rho,
        bound,
        measured,
        slack: bound / measured,
        c,
        d,
        level_dist,
        phi_zeta,
    })
}
