use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::basis::MeshBasis;
use super::minimax::{complex_minimax, MinimaxOptions};
use crate::approx::ComplexPoly;
use crate::sets::Mesh;
use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `z` lies on the set: the value 1 is exact by the maximum principle.
    UpperFeasible,
    /// Witness value only; the dual bracket did not close.
    LowerWitness,
    /// Witness and dual bound agree to the solver tolerance.
    Converged,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::UpperFeasible => "upper-feasible",
            Certificate::LowerWitness => "lower-witness",
            Certificate::Converged => "converged",
        }
    }
}

/// Estimate of `Φₙ(z)` bracketed by a witness polynomial and a dual bound.
#[derive(Clone, Debug)]
pub struct ExtremalValue {
    pub n: usize,
    pub z: Complex,
    /// `|q(z)|` for the witness `q`, at least 1.
    pub value: f64,
    /// Certified upper bound on the mesh extremal function.
    pub upper: f64,
    pub certificate: Certificate,
    /// Relative width `1 − value/upper` of the bracket.
    pub residual: f64,
    /// `‖q‖_mesh = 1` and `|q(z)| = value`.
    pub witness: ComplexPoly,
    pub iterations: usize,
}

/// Solves `Φₙ(z) = 1 / min{‖p‖_mesh : p ∈ 𝒫ₙ, p(z) = 1}` on a fixed mesh and basis.
#[derive(Clone, Debug)]
pub struct ExtremalSolver {
    pub space: Arc<MeshBasis>,
    pub options: MinimaxOptions,
}

impl ExtremalSolver {
    /// Leja basis of the mesh up to `max_degree`; the mesh needs at least `8·max_degree` points.
    pub fn new(mesh: &Mesh, max_degree: usize) -> Result<Self> {
        if mesh.len() < 8 * max_degree {
            return Err(Error::MeshInadequate(format!(
                "degree {max_degree} needs at least {} mesh points, got {}",
                8 * max_degree,
                mesh.len()
            )));
        }
        Ok(Self::from_space(Arc::new(MeshBasis::from_mesh(mesh, max_degree)?)))
    }

    pub fn from_space(space: Arc<MeshBasis>) -> Self {
        Self {
            space,
            options: MinimaxOptions::default(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.space.degree()
    }

    pub fn phi(&self, n: usize, z: Complex) -> Result<ExtremalValue> {
        let space = &self.space;
        if n > space.degree() {
            return Err(Error::IllConditioned {
                requested: n,
                achieved: space.degree(),
            });
        }
        let basis = space.basis.clone();
        let one = |cert| ExtremalValue {
            n,
            z,
            value: 1.0,
            upper: 1.0,
            certificate: cert,
            residual: 0.0,
            witness: ComplexPoly::constant(basis.clone(), Complex::new(1.0, 0.0)),
            iterations: 0,
        };
        let parent = &space.mesh().parent;
        if parent.distance(z) <= 1e-12 * (1.0 + z.norm()) {
            return Ok(one(Certificate::UpperFeasible));
        }
        if n == 0 {
            return Ok(one(Certificate::Converged));
        }
        if (z - parent.centroid()).norm() > 10.0 * parent.diameter().max(1e-300) {
            return Ok(self.nodal_bound(n, z));
        }

        let a = basis.eval_all(z);
        let a = &a[..=n];
        let j = (0..=n)
            .max_by(|&p, &q| a[p].norm().total_cmp(&a[q].norm()))
            .unwrap();
        let m = space.columns.nrows();
        let cols = space.columns.columns(0, n + 1);
        // eliminate c_j through p(z) = 1
        let target = DVector::from_fn(m, |i, _| -cols[(i, j)] / a[j]);
        let free: Vec<usize> = (0..=n).filter(|&k| k != j).collect();
        let reduced = DMatrix::from_fn(m, n, |i, q| {
            let kk = free[q];
            cols[(i, kk)] - cols[(i, j)] * a[kk] / a[j]
        });
        let sol = complex_minimax(&reduced, &target, &self.options);
        let mut full = vec![Complex::new(0.0, 0.0); n + 1];
        let mut acc = Complex::new(0.0, 0.0);
        for (q, &kk) in free.iter().enumerate() {
            full[kk] = sol.coeffs[q];
            acc += a[kk] * sol.coeffs[q];
        }
        full[j] = (Complex::new(1.0, 0.0) - acc) / a[j];
        let cvec = DVector::from_vec(full.clone());
        let norm = (cols * cvec).iter().map(|w| w.norm()).fold(0.0, f64::max);
        let pz = basis.eval(&full, z).norm();
        let value = pz / norm;
        let upper = if sol.lower > 0.0 {
            (1.0 / sol.lower).max(value)
        } else {
            f64::INFINITY
        };
        if !(value.is_finite()) || value < 1.0 {
            let mut v = one(Certificate::LowerWitness);
            v.upper = upper.max(1.0);
            v.residual = 1.0 - 1.0 / v.upper;
            v.certificate = if sol.converged {
                Certificate::Converged
            } else {
                Certificate::LowerWitness
            };
            return Ok(v);
        }
        let scale = Complex::new(1.0 / norm, 0.0);
        Ok(ExtremalValue {
            n,
            z,
            value,
            upper,
            certificate: if sol.converged {
                Certificate::Converged
            } else {
                Certificate::LowerWitness
            },
            residual: 1.0 - value / upper,
            witness: ComplexPoly::new(basis, full)?.scaled(scale),
            iterations: sol.iterations,
        })
    }

    /// Far from the set the scaled nodal polynomial `b_n` is used as witness.
    fn nodal_bound(&self, n: usize, z: Complex) -> ExtremalValue {
        let basis = self.space.basis.clone();
        let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex::new(1.0, 0.0);
        let witness = ComplexPoly::new(basis, coeffs).expect("degree checked by caller");
        let value = witness.eval(z).norm().max(1.0);
        ExtremalValue {
            n,
            z,
            value,
            upper: f64::INFINITY,
            certificate: Certificate::LowerWitness,
            residual: 1.0,
            witness,
            iterations: 0,
        }
    }
}

/// One-shot `Φₙ(z)` on a mesh of `E`.
pub fn phi_n(mesh_e: &Mesh, n: usize, z: Complex) -> Result<ExtremalValue> {
    ExtremalSolver::new(mesh_e, n)?.phi(n, z)
}

/// Infimum of `Φₙ` over a shell, with the point where it was attained.
#[derive(Clone, Debug)]
pub struct ShellInfimum {
    pub n: usize,
    pub t: f64,
    pub value: f64,
    pub argmin: Complex,
    pub evaluations: usize,
}

/// Exhaustive minimum of the witness values over every shell point.
pub fn phi_shell_inf(solver: &ExtremalSolver, n: usize, shell: &Mesh) -> Result<ShellInfimum> {
    let mut best = (f64::INFINITY, Complex::new(0.0, 0.0));
    for &z in &shell.points {
        let v = solver.phi(n, z)?.value;
        if v < best.0 {
            best = (v, z);
        }
    }
    Ok(ShellInfimum {
        n,
        t: shell.role.parameter(),
        value: best.0,
        argmin: best.1,
        evaluations: shell.len(),
    })
}

/// Minimum over the `candidates` shell points ranked lowest by `proxy` (a Green's function),
/// followed by a walk along the shell ordering until no neighbour improves.
pub fn phi_shell_inf_screened(
    solver: &ExtremalSolver,
    n: usize,
    shell: &Mesh,
    proxy: &dyn Fn(Complex) -> f64,
    candidates: usize,
) -> Result<ShellInfimum> {
    let score: Vec<f64> = shell.points.iter().map(|&z| proxy(z)).collect();
    phi_shell_inf_ranked(solver, n, shell, &score, candidates)
}

/// As [`phi_shell_inf_screened`] with the proxy already evaluated at every shell point.
pub fn phi_shell_inf_ranked(
    solver: &ExtremalSolver,
    n: usize,
    shell: &Mesh,
    score: &[f64],
    candidates: usize,
) -> Result<ShellInfimum> {
    let pts = &shell.points;
    if score.len() != pts.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores for {} shell points",
            score.len(),
            pts.len()
        )));
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
    let mut seen = vec![f64::NAN; pts.len()];
    let mut evals = 0;
    let mut eval = |i: usize, seen: &mut Vec<f64>| -> Result<f64> {
        if seen[i].is_nan() {
            seen[i] = solver.phi(n, pts[i])?.value;
            evals += 1;
        }
        Ok(seen[i])
    };
    let mut best = (f64::INFINITY, 0usize);
    for &i in order.iter().take(candidates.max(1)) {
        let v = eval(i, &mut seen)?;
        if v < best.0 {
            best = (v, i);
        }
    }
    let np = pts.len();
    loop {
        let i = best.1;
        let mut moved = false;
        for j in [(i + np - 1) % np, (i + 1) % np] {
            let v = eval(j, &mut seen)?;
            if v < best.0 {
                best = (v, j);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    Ok(ShellInfimum {
        n,
        t: shell.role.parameter(),
        value: best.0,
        argmin: pts[best.1],
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::sets::{build_mesh, CompactSetSpec, MeshRole};

    fn disk_solver(n: usize) -> ExtremalSolver {
        let mesh =
            build_mesh(&CompactSetSpec::unit_disk(), MeshRole::Boundary, 2.0 * PI / 512.0).unwrap();
        ExtremalSolver::new(&mesh, n).unwrap()
    }

    #[test]
    fn disk_cube() {
        let v = disk_solver(3).phi(3, Complex::new(2.0, 0.0)).unwrap();
        assert!((v.value - 8.0).abs() < 1e-7, "{}", v.value);
        assert_eq!(v.certificate, Certificate::Converged);
    }

    #[test]
    fn on_set_is_one() {
        let v = disk_solver(4).phi(4, Complex::new(0.3, 0.2)).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn chebyshev_extremality() {
        let s = CompactSetSpec::interval(-2.0, 2.0);
        let mesh = build_mesh(&s, MeshRole::Boundary, 0.005).unwrap();
        let v = phi_n(&mesh, 2, Complex::new(3.0, 0.0)).unwrap();
        assert!((v.value - 3.5).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn witness_is_consistent() {
        let solver = disk_solver(6);
        let z = Complex::new(1.2, 0.7);
        let v = solver.phi(6, z).unwrap();
        let pts = solver.space.points();
        let nrm = pts.iter().map(|&x| v.witness.eval(x).norm()).fold(0.0, f64::max);
        assert!(nrm <= 1.0 + 1e-9);
        assert!((v.witness.eval(z).norm() - v.value).abs() <= 1e-9 * v.value);
        assert!(v.value <= v.upper);
    }

    #[test]
    fn upper_bound_survives_refinement() {
        // the witness from a coarse mesh, rescaled by its norm on the fine mesh, is feasible
        // there, so the fine upper bound cannot fall below it
        let spec = CompactSetSpec::star(4);
        let z = Complex::new(0.9, 0.3);
        let coarse = build_mesh(&spec, MeshRole::Boundary, 0.005).unwrap();
        let fine = build_mesh(&spec, MeshRole::Boundary, 0.0025).unwrap();
        let c = ExtremalSolver::new(&coarse, 11).unwrap().phi(11, z).unwrap();
        let f = ExtremalSolver::new(&fine, 11).unwrap().phi(11, z).unwrap();
        let norm = fine.points.iter().map(|&x| c.witness.eval(x).norm()).fold(0.0, f64::max);
        assert!(f.upper >= c.value / norm * (1.0 - 1e-9), "{} < {}", f.upper, c.value / norm);
    }
}
