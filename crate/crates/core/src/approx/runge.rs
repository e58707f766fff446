use std::f64::consts::PI;
use std::sync::Arc;

use super::best::{sup_error, ApproxMethod, ApproxResult};
use super::functions::check_finite;
use super::poly::ComplexPoly;
use crate::extremal::{
    phi_shell_inf, phi_shell_inf_screened, ExtremalSolver, GreenSource, NewtonBasis,
};
use crate::sets::{build_mesh, square_cover_of_neighborhood, CompactSetSpec, MeshRole, SquareCover};
use crate::{Complex, Error, Result};

#[derive(Clone, Debug)]
pub struct ContourPiece {
    pub start: Complex,
    pub end: Complex,
    /// Arclength midpoint of the piece.
    pub zeta: Complex,
    /// `f(ζ)·(end − start)/(2πi)`.
    pub coeff: Complex,
    /// Index into the contour's directed edge list.
    pub edge: usize,
}

/// The oriented contour around `E_{bδ}` cut into pieces of equal length.
#[derive(Clone, Debug)]
pub struct ContourPartition {
    pub contour: SquareCover,
    pub piece_len: f64,
    pub pieces_per_edge: usize,
    pub pieces: Vec<ContourPiece>,
}

impl ContourPartition {
    pub fn total_length(&self) -> f64 {
        self.pieces.iter().map(|p| (p.end - p.start).norm()).sum()
    }

    /// Evaluate the Riemann-sum rational function `R(z) = Σ c_j/(ζ_j − z)`.
    pub fn rational(&self, z: Complex) -> Complex {
        self.pieces.iter().map(|p| p.coeff / (p.zeta - z)).sum()
    }
}

#[derive(Clone, Debug)]
pub struct RungeOptions {
    pub mesh_resolution: f64,
    pub shell_resolution: f64,
    /// Shell candidates screened for the infimum of `Φ_{n+1}`; 0 scans every shell point.
    pub shell_candidates: usize,
    pub max_pieces: usize,
}

impl Default for RungeOptions {
    fn default() -> Self {
        Self {
            mesh_resolution: 0.01,
            shell_resolution: 0.02,
            shell_candidates: 12,
            max_pieces: 2_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RungeResult {
    /// `None` for finite sets, which are interpolated exactly.
    pub partition: Option<ContourPartition>,
    pub approx: ApproxResult,
    pub certified_bound: f64,
    /// `φ_{n+1}(bδ)`, infinite for finite sets.
    pub phi_value: f64,
    /// `‖f‖` on the δ-neighbourhood.
    pub f_norm: f64,
    /// `c = 28/π·(2 + diam E)²`.
    pub constant: f64,
    /// Smallest `|q(ζ_j)|` over the pieces; the bound assumes it is at least `φ_{n+1}(bδ)`.
    pub min_witness_value: f64,
}

pub fn runge_constant(spec: &CompactSetSpec) -> f64 {
    28.0 / PI * (2.0 + spec.diameter()).powi(2)
}

/// Polynomial approximant of `f` built by discretizing the Cauchy integral over the boundary
/// of a square cover of `E_{bδ}` and converting each simple fraction to a polynomial.
pub fn runge_approximant(
    spec: &CompactSetSpec,
    f: &dyn Fn(Complex) -> Complex,
    delta: f64,
    b: f64,
    n: usize,
    opts: &RungeOptions,
) -> Result<RungeResult> {
    if !(delta > 0.0 && delta <= 1.0) || !(0.5..1.0).contains(&b) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < δ <= 1 and 1/2 <= b < 1, got δ = {delta}, b = {b}"
        )));
    }
    let constant = runge_constant(spec);
    if let Some(pts) = spec.finite_points() {
        if pts.len() <= n + 1 {
            return interpolate_finite(&pts, f, n, constant);
        }
    }

    let mesh = build_mesh(spec, MeshRole::Boundary, opts.mesh_resolution)?;
    let samples: Vec<Complex> = mesh.points.iter().map(|&z| f(z)).collect();
    check_finite(&samples)?;
    let solver = ExtremalSolver::new(&mesh, n + 1)?;

    let shell = build_mesh(spec, MeshRole::Shell(b * delta), opts.shell_resolution)?;
    let phi_value = if opts.shell_candidates == 0 || spec.oracle.is_none() {
        phi_shell_inf(&solver, n + 1, &shell)?.value
    } else {
        let src = GreenSource::Oracle(spec.clone());
        let proxy = |z: Complex| src.eval(z).unwrap_or(f64::INFINITY);
        phi_shell_inf_screened(&solver, n + 1, &shell, &proxy, opts.shell_candidates)?.value
    };

    let h = (1.0 - b) * delta / 4.0;
    let cover = square_cover_of_neighborhood(spec, b * delta, h)?;
    let edges = cover.edges();
    let per_edge = phi_value.ceil().max(1.0);
    if per_edge * edges.len() as f64 > opts.max_pieces as f64 {
        return Err(Error::InvalidArgument(format!(
            "{} edges × {per_edge} pieces exceeds the limit of {}",
            edges.len(),
            opts.max_pieces
        )));
    }
    let per_edge = per_edge as usize;

    let space = &solver.space;
    let knots = &space.basis.nodes[..=n];
    let two_pi_i = Complex::new(0.0, 2.0 * PI);
    let mut at_knots = vec![Complex::new(0.0, 0.0); n + 1];
    let mut pieces = Vec::with_capacity(edges.len() * per_edge);
    let mut min_witness = f64::INFINITY;
    for (e, &(p, q)) in edges.iter().enumerate() {
        // one witness per edge, taken at its midpoint
        let w = solver.phi(n + 1, (p + q) * 0.5)?.witness;
        let q_knots: Vec<Complex> = knots.iter().map(|&x| w.eval(x)).collect();
        for j in 0..per_edge {
            let start = p + (q - p) * (j as f64 / per_edge as f64);
            let end = p + (q - p) * ((j + 1) as f64 / per_edge as f64);
            let zeta = (start + end) * 0.5;
            let fz = f(zeta);
            if !(fz.re.is_finite() && fz.im.is_finite()) {
                return Err(Error::NonFiniteSample(pieces.len()));
            }
            let coeff = fz * (end - start) / two_pi_i;
            let q_zeta = w.eval(zeta);
            min_witness = min_witness.min(q_zeta.norm());
            for (k, &x) in knots.iter().enumerate() {
                at_knots[k] += coeff * (q_zeta - q_knots[k]) / ((zeta - x) * q_zeta);
            }
            pieces.push(ContourPiece {
                start,
                end,
                zeta,
                coeff,
                edge: e,
            });
        }
    }
    let approximant = ComplexPoly::interpolate(space.basis.clone(), &at_knots)?;
    let error = sup_error(&approximant, &mesh.points, &samples);

    let nbhd = build_mesh(spec, MeshRole::Neighborhood(delta), opts.mesh_resolution * 2.0)?;
    let mut f_norm: f64 = 0.0;
    for &z in &nbhd.points {
        let v = f(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("f is not finite at {z} in the δ-neighbourhood")));
        }
        f_norm = f_norm.max(v.norm());
    }
    let certified_bound = constant * f_norm / ((1.0 - b) * delta * delta * phi_value);

    Ok(RungeResult {
        partition: Some(ContourPartition {
            contour: cover,
            piece_len: h / per_edge as f64,
            pieces_per_edge: per_edge,
            pieces,
        }),
        approx: ApproxResult {
            approximant,
            error,
            lower_bound: 0.0,
            method: ApproxMethod::Runge,
            iterations: edges.len(),
            residual_history: Vec::new(),
            stalled: false,
        },
        certified_bound,
        phi_value,
        f_norm,
        constant,
        min_witness_value: min_witness,
    })
}

fn interpolate_finite(
    pts: &[Complex],
    f: &dyn Fn(Complex) -> Complex,
    n: usize,
    constant: f64,
) -> Result<RungeResult> {
    let values: Vec<Complex> = pts.iter().map(|&z| f(z)).collect();
    check_finite(&values)?;
    let (basis, _) = NewtonBasis::build(pts, pts)?;
    let basis = Arc::new(basis);
    let approximant = ComplexPoly::interpolate(basis, &values)?;
    let error = sup_error(&approximant, pts, &values);
    debug_assert!(approximant.degree() <= n);
    Ok(RungeResult {
        partition: None,
        approx: ApproxResult {
            approximant,
            error,
            lower_bound: 0.0,
            method: ApproxMethod::Interpolation,
            iterations: 0,
            residual_history: Vec::new(),
            stalled: false,
        },
        certified_bound: 0.0,
        phi_value: f64::INFINITY,
        f_norm: values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        constant,
        min_witness_value: f64::INFINITY,
    })
}
