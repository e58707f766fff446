use std::sync::Arc;

use super::best::Approximator;
use super::jackson::{jackson_from_errors, JacksonNormValue};
use super::poly::ComplexPoly;
use crate::extremal::{green_estimate, leja_points, MeshBasis, NewtonBasis};
use crate::sets::{build_mesh, CompactSetSpec, Mesh, MeshRole};
use crate::{linear_fit, Complex, Error, Result};

/// Required margin on `ρ̂ᵏ/x̂`.
const K_MARGIN: f64 = 1.1;

#[derive(Clone, Debug)]
pub struct GlueOptions {
    pub resolution: f64,
    /// Degrees used for the geometric-decay fit of `dist(χ_B, 𝒫ₙ)`.
    pub fit_from: usize,
    pub min_r2: f64,
    /// Degree of the Leja nodes behind the estimate of `‖Φ_A‖_B`.
    pub nodal_degree: usize,
    /// Number of glued terms `r₁..r_terms` (capped by what the union mesh supports at degree `k·n`).
    pub terms: usize,
}

impl Default for GlueOptions {
    fn default() -> Self {
        Self {
            resolution: 0.01,
            fit_from: 5,
            min_r2: 0.98,
            nodal_degree: 200,
            terms: 6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GlueTerm {
    pub n: usize,
    /// `rₙ = pₙ·(1 − q_{kn})`, interpolated in a Leja basis of the union.
    pub r: ComplexPoly,
    /// `‖f − rₙ‖` over `A ∪ B`.
    pub error: f64,
    pub error_a: f64,
    /// `‖rₙ‖_B`.
    pub error_b: f64,
    /// `‖f − pₙ‖_A`.
    pub p_error: f64,
    /// `‖pₙ‖_B`.
    pub p_norm_b: f64,
    /// `dist(χ_B, 𝒫_{kn})` on the union.
    pub chi_error: f64,
}

#[derive(Clone, Debug)]
pub struct GlueResult {
    pub k: usize,
    /// Fitted geometric rate of `dist(χ_B, 𝒫ₙ)`.
    pub rho_hat: f64,
    pub chi_r2: f64,
    /// Estimate of `‖Φ_A‖_B`.
    pub x_hat: f64,
    pub chi_errors: Vec<f64>,
    pub terms: Vec<GlueTerm>,
    /// Slope and R² of `log ‖f − rₙ‖` against `n`.
    pub glue_slope: f64,
    pub glue_r2: f64,
    pub jackson_union: JacksonNormValue,
    pub jackson_a: JacksonNormValue,
    /// `|f|_ℓ` on `A ∪ B` over `|f|_ℓ` on `A` (1 when both vanish).
    pub norm_ratio: f64,
}

fn union_mesh(a: &Mesh, b: &Mesh, spec: CompactSetSpec) -> Mesh {
    let mut points = a.points.clone();
    points.extend_from_slice(&b.points);
    Mesh {
        points,
        role: MeshRole::Boundary,
        resolution: a.resolution.min(b.resolution),
        parent: spec,
        coarse_warning: a.coarse_warning || b.coarse_warning,
    }
}

/// Approximate `f` on `A ∪ B` (with `f = 0` on `B`) by `rₙ = pₙ(1 − q_{kn})`, where `pₙ`
/// approximates `f` on `A` and `q_m` approximates the indicator of `B` on the union.
pub fn glue_union_approx(
    spec_a: &CompactSetSpec,
    spec_b: &CompactSetSpec,
    f_a: &dyn Fn(Complex) -> Complex,
    ell: f64,
    n_max: usize,
    opts: &GlueOptions,
) -> Result<GlueResult> {
    if !spec_a.is_polynomially_convex() || !spec_b.is_polynomially_convex() {
        return Err(Error::InvalidArgument("both sets must be polynomially convex".into()));
    }
    let mesh_a = build_mesh(spec_a, MeshRole::Boundary, opts.resolution)?;
    let mesh_b = build_mesh(spec_b, MeshRole::Boundary, opts.resolution)?;
    let gap = mesh_b.points.iter().map(|&z| spec_a.distance(z)).fold(f64::INFINITY, f64::min);
    if !(gap > 10.0 * opts.resolution) {
        return Err(Error::InvalidArgument(format!(
            "the sets must be disjoint, distance is about {gap}"
        )));
    }
    let union_spec = CompactSetSpec::union(vec![spec_a.clone(), spec_b.clone()]);
    let union = union_mesh(&mesh_a, &mesh_b, union_spec);
    let in_b: Vec<bool> = (0..union.len()).map(|i| i >= mesh_a.len()).collect();

    // dist(χ_B, 𝒫ₙ) on the union
    let chi: Vec<Complex> = in_b.iter().map(|&b| Complex::new(if b { 1.0 } else { 0.0 }, 0.0)).collect();
    let cap = n_max.max(union.len() / 8);
    let nodes_u = Arc::new(leja_points(&union, cap)?);
    let chi_seq = Approximator::new(nodes_u.clone(), n_max)?.sequence(&chi, n_max)?;
    let chi_errors: Vec<f64> = chi_seq.iter().map(|r| r.error).collect();
    let fit_n: Vec<f64> = (opts.fit_from..=n_max).map(|n| n as f64).collect();
    if fit_n.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} leaves fewer than 3 degrees for the decay fit"
        )));
    }
    let fit_y: Vec<f64> = (opts.fit_from..=n_max).map(|n| chi_errors[n].max(1e-300).ln()).collect();
    let (slope, _, chi_r2) = linear_fit(&fit_n, &fit_y);
    let rho_hat = (-slope).exp();
    if !(rho_hat > 1.0) || chi_r2 < opts.min_r2 {
        return Err(Error::NotGeometric { rate: rho_hat, r2: chi_r2 });
    }

    // ‖Φ_A‖_B from a Leja-based Green estimate for A
    let nodes_a = leja_points(&mesh_a, opts.nodal_degree.min(mesh_a.len() - 1))?;
    let x_hat = mesh_b
        .points
        .iter()
        .map(|&z| green_estimate(&nodes_a, z))
        .fold(0.0, f64::max)
        .exp();
    let mut k = 1;
    while rho_hat.powi(k as i32) / x_hat <= K_MARGIN {
        k += 1;
        if k > n_max {
            return Err(Error::NotGeometric { rate: rho_hat, r2: chi_r2 });
        }
    }
    let n_r = opts.terms.min(cap / k).min(n_max);
    if n_r == 0 {
        return Err(Error::MeshInadequate(format!(
            "k = {k} needs degree {k} on the union, the mesh supports {cap}"
        )));
    }
    let big = Approximator::new(nodes_u.clone(), (k * n_r).max(n_max))?;
    let mut q_polys = Vec::with_capacity(n_r + 1);
    let mut q_errors = Vec::with_capacity(n_r + 1);
    for n in 0..=n_r {
        let m = k * n;
        let r = if m <= n_max { chi_seq[m].clone() } else { big.best(&chi, m)? };
        // keep the sequence monotone, as in `Approximator::sequence`
        let r = match q_errors.last() {
            Some(&e) if e < r.error => (q_polys.last().cloned().unwrap(), e),
            _ => (r.approximant, r.error),
        };
        q_polys.push(r.0);
        q_errors.push(r.1);
    }

    // pₙ on A, for n up to n_max so the Jackson norm on A has the same truncation
    let f_on_a: Vec<Complex> = mesh_a.points.iter().map(|&z| f_a(z)).collect();
    let nodes_a_deg = Arc::new(leja_points(&mesh_a, n_max)?);
    let space_a = Arc::new(MeshBasis::from_nodes(nodes_a_deg, n_max)?);
    let p_seq = Approximator::from_space(space_a).sequence(&f_on_a, n_max)?;

    let top = n_r * (k + 1);
    let interp_nodes = if top <= nodes_u.degree() {
        nodes_u.nodes[..=top].to_vec()
    } else {
        leja_points(&union, top)?.nodes
    };
    let (interp_basis, _) = NewtonBasis::build(&interp_nodes, &union.points)?;
    let interp_basis = Arc::new(interp_basis);

    let mut terms = Vec::with_capacity(n_r + 1);
    for n in 0..=n_r {
        let p = &p_seq[n].approximant;
        let q = &q_polys[n];
        let r_at = |z: Complex| p.eval(z) * (1.0 - q.eval(z));
        let (mut err_a, mut err_b, mut p_norm_b) = (0.0_f64, 0.0_f64, 0.0_f64);
        for (i, &z) in union.points.iter().enumerate() {
            if in_b[i] {
                err_b = err_b.max(r_at(z).norm());
                p_norm_b = p_norm_b.max(p.eval(z).norm());
            } else {
                err_a = err_a.max((f_on_a[i] - r_at(z)).norm());
            }
        }
        let values: Vec<Complex> = interp_nodes[..=n * (k + 1)].iter().map(|&z| r_at(z)).collect();
        terms.push(GlueTerm {
            n,
            r: ComplexPoly::interpolate(interp_basis.clone(), &values)?,
            error: err_a.max(err_b),
            error_a: err_a,
            error_b: err_b,
            p_error: p_seq[n].error,
            p_norm_b,
            chi_error: q_errors[n],
        });
    }
    let xs: Vec<f64> = terms.iter().skip(1).map(|t| t.n as f64).collect();
    let ys: Vec<f64> = terms.iter().skip(1).map(|t| t.error.max(1e-300).ln()).collect();
    let (glue_slope, glue_r2) = if xs.len() >= 2 {
        let (s, _, r2) = linear_fit(&xs, &ys);
        (s, r2)
    } else {
        (f64::NAN, f64::NAN)
    };

    // Jackson norms of f on A and of its zero extension on the union
    let sup_a = f_on_a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let errs_a: Vec<f64> = p_seq.iter().map(|r| r.error).collect();
    let f_union: Vec<Complex> = (0..union.len())
        .map(|i| if in_b[i] { Complex::new(0.0, 0.0) } else { f_on_a[i] })
        .collect();
    let errs_u: Vec<f64> = Approximator::new(nodes_u, n_max)?
        .sequence(&f_union, n_max)?
        .iter()
        .map(|r| r.error)
        .collect();
    let jackson_a = jackson_from_errors(sup_a, &errs_a, ell, n_max)?;
    let jackson_union = jackson_from_errors(sup_a, &errs_u, ell, n_max)?;
    let norm_ratio = if jackson_a.value > 0.0 {
        jackson_union.value / jackson_a.value
    } else {
        1.0
    };

    Ok(GlueResult {
        k,
        rho_hat,
        chi_r2,
        x_hat,
        chi_errors,
        terms,
        glue_slope,
        glue_r2,
        jackson_union,
        jackson_a,
        norm_ratio,
    })
}
