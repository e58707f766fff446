use std::sync::Arc;

use super::exponents::diverges;
use crate::extremal::{
    leja_points, phi_shell_inf_ranked, ExtremalSolver, GreenSource,
};
use crate::sets::{build_mesh, CompactSetSpec, Mesh, MeshRole};
use crate::{linear_fit, Complex, Error, Result};

#[derive(Clone, Debug)]
pub struct JpOptions {
    pub ell_grid: Vec<f64>,
    /// Scales, coarse to fine.
    pub t_grid: Vec<f64>,
    /// Degrees `n` of the left-hand side `n^ℓ/φ_{n+1}(t)`.
    pub n_grid: Vec<usize>,
    pub s_candidates: Vec<f64>,
    pub v_candidates: Vec<u32>,
    /// Boundary mesh resolution; `None` picks one giving at least `8·(n_max + 1)` points.
    pub mesh_resolution: Option<f64>,
    pub shell_divisor: f64,
    pub shell_candidates: usize,
    /// Relative slack on the growth exponent.
    pub tol: f64,
}

impl Default for JpOptions {
    fn default() -> Self {
        Self {
            ell_grid: vec![1.0, 2.0, 4.0, 8.0],
            t_grid: (2..=6).map(|k| 2f64.powi(-k)).collect(),
            n_grid: vec![1, 2, 3, 4, 6, 8, 11, 16, 22, 30, 40, 50, 60],
            s_candidates: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0],
            v_candidates: vec![1, 2],
            mesh_resolution: None,
            shell_divisor: 20.0,
            shell_candidates: 8,
            tol: 0.15,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhiNode {
    pub t: f64,
    pub n: usize,
    /// Screened shell minimum of `Φ_{n+1}`.
    pub raw: f64,
    /// `raw` made nondecreasing in `t` and in `n`; used for the left-hand side.
    pub value: f64,
    pub argmin: Complex,
}

#[derive(Clone, Debug)]
pub struct LhsNode {
    pub ell: f64,
    pub t: f64,
    pub n: usize,
    /// `ℓ·log n − log φ_{n+1}(t)`.
    pub log_lhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// The inequality fails at a grid node with the constant fitted on the coarser scales.
    Grid { ell: f64, t: f64, log_lhs: f64, log_rhs: f64 },
    /// The left-hand side grows faster in `log(1/t)` than any constant allows.
    Asymptotic { ell: f64, growth: f64 },
}

#[derive(Clone, Debug)]
pub struct Feasibility {
    pub s: f64,
    pub v: u32,
    /// Smallest `c̃` satisfying every grid node (infinite if none does).
    pub c_tilde: f64,
    /// The same, fitted without the finest scale.
    pub c_tilde_coarse: f64,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug)]
pub struct JpReport {
    pub ell_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub phi: Vec<PhiNode>,
    pub lhs: Vec<LhsNode>,
    /// `(ℓ, t, L)` with `L` an upper bound on `sup_n log(n^ℓ/φ_{n+1}(t))` over all `n`.
    pub sup_bound: Vec<(f64, f64, f64)>,
    /// `(ℓ, κ_ℓ)`: slope of `L/ℓ` against `log(1/t)` over the three finest scales.
    pub growth: Vec<(f64, f64)>,
    /// `max_ℓ κ_ℓ`, the exponent the grid supports.
    pub s_hat: f64,
    pub unbounded_growth: bool,
    pub candidates: Vec<Feasibility>,
    pub minimal_s: Option<f64>,
    /// Finite sets satisfy the condition trivially.
    pub trivial: bool,
}

impl JpReport {
    pub fn feasibility(&self, s: f64, v: u32) -> Option<&Feasibility> {
        self.candidates.iter().find(|f| f.s == s && f.v == v)
    }

    pub fn phi_at(&self, t: f64, n: usize) -> Option<&PhiNode> {
        self.phi.iter().find(|p| p.t == t && p.n == n)
    }
}

/// A boundary mesh of `spec` with at least `min_points` points.
pub fn adequate_boundary_mesh(spec: &CompactSetSpec, min_points: usize) -> Result<Mesh> {
    let length: f64 = spec
        .atoms()
        .iter()
        .flat_map(|a| a.boundary_curves())
        .map(|c| c.length())
        .sum();
    let mut res = (length / (1.1 * min_points as f64)).max(1e-9);
    for _ in 0..30 {
        let mesh = build_mesh(spec, MeshRole::Boundary, res)?;
        if mesh.coarse_warning {
            return Err(Error::MeshInadequate(format!(
                "resolution {res} is coarser than the smallest feature of the set"
            )));
        }
        if mesh.len() >= min_points {
            return Ok(mesh);
        }
        res *= 0.8;
    }
    Err(Error::MeshInadequate(format!(
        "could not reach {min_points} boundary points"
    )))
}

/// Smallest `c > 0` with `lhs ≤ (ℓ + c)(log c + k)`; the right side increases in `c`.
fn c_required(lhs: f64, ell: f64, k: f64) -> f64 {
    let rhs = |c: f64| (ell + c) * (c.ln() + k);
    if !lhs.is_finite() {
        return f64::INFINITY;
    }
    let (mut lo, mut hi) = (1e-12, 1.0);
    if rhs(lo) >= lhs {
        return lo;
    }
    while rhs(hi) < lhs {
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rhs(mid) >= lhs {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

/// Upper bound on `sup_{n≥1} (ℓ log n − log φ_{n+1})` from values on a sorted degree grid.
/// Between grid degrees `φ` is nondecreasing; beyond the grid `log φ_{j}` is superadditive
/// in `j`, so `log φ_{j} ≥ ⌊j/m⌋·log φ_m` for every grid index `m`.
pub(crate) fn sup_over_n(ell: f64, ns: &[usize], phis: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut prev_log_phi = 0.0;
    let mut prev_n = 0;
    for (&n, &p) in ns.iter().zip(phis) {
        // degrees in (prev_n, n]: at most ℓ log n − log φ at the previous grid degree
        if n > prev_n + 1 {
            best = best.max(ell * (n as f64).ln() - prev_log_phi);
        }
        best = best.max(ell * (n as f64).ln() - p.ln());
        prev_log_phi = p.ln();
        prev_n = n;
    }
    let n_top = *ns.last().unwrap() as f64;
    let mut tail = f64::INFINITY;
    for (&n, &p) in ns.iter().zip(phis) {
        let m = (n + 1) as f64;
        let a = p.ln();
        if !(a > 0.0) {
            continue;
        }
        // φ_{j+1} ≥ exp(a·(j + 2 − m)/m) for j > n_top
        let jstar = (ell * m / a).max(n_top + 1.0);
        let bound = ell * jstar.ln() - a * (jstar + 2.0 - m) / m;
        tail = tail.min(bound);
    }
    best.max(tail)
}

/// Tabulate `n^ℓ/φ_{n+1}(t)` and test `n^ℓ/φ_{n+1}(t) ≤ (c̃ℓ^v/t^s)^{ℓ+c̃}` on the grids.
pub fn jp_condition5_check(spec: &CompactSetSpec, opts: &JpOptions) -> Result<JpReport> {
    validate(opts)?;
    let mut t_grid = opts.t_grid.clone();
    t_grid.sort_by(|a, b| b.total_cmp(a));
    let mut n_grid = opts.n_grid.clone();
    n_grid.sort_unstable();
    n_grid.dedup();
    let n_max = *n_grid.last().unwrap();

    if spec.finite_points().is_some() {
        return Ok(JpReport {
            ell_grid: opts.ell_grid.clone(),
            t_grid,
            n_grid,
            phi: Vec::new(),
            lhs: Vec::new(),
            sup_bound: Vec::new(),
            growth: Vec::new(),
            s_hat: 0.0,
            unbounded_growth: false,
            candidates: Vec::new(),
            minimal_s: opts.s_candidates.iter().copied().reduce(f64::min),
            trivial: true,
        });
    }

    let mesh = match opts.mesh_resolution {
        Some(r) => build_mesh(spec, MeshRole::Boundary, r)?,
        None => adequate_boundary_mesh(spec, 8 * (n_max + 1))?,
    };
    let solver = ExtremalSolver::new(&mesh, n_max + 1)?;
    let proxy_source = match spec.oracle {
        Some(_) => GreenSource::Oracle(spec.clone()),
        None => {
            let deg = 200.min(mesh.len() - 1);
            GreenSource::Nodal(Arc::new(leja_points(&mesh, deg)?))
        }
    };
    let phi = shell_table(spec, &solver, &proxy_source, &t_grid, &n_grid, opts)?;
    Ok(assemble(opts, t_grid, n_grid, phi))
}

fn validate(opts: &JpOptions) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
    if opts.ell_grid.is_empty() || opts.ell_grid.iter().any(|&l| !(l >= 1.0)) {
        return bad("ℓ grid must be nonempty with ℓ >= 1");
    }
    if opts.t_grid.len() < 3 || opts.t_grid.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return bad("t grid needs at least 3 scales in (0, 1]");
    }
    if opts.n_grid.is_empty() || opts.n_grid.contains(&0) {
        return bad("n grid must be nonempty with n >= 1");
    }
    if opts.s_candidates.is_empty() || opts.v_candidates.is_empty() {
        return bad("need at least one s and one v candidate");
    }
    Ok(())
}

fn shell_table(
    spec: &CompactSetSpec,
    solver: &ExtremalSolver,
    proxy_source: &GreenSource,
    t_grid: &[f64],
    n_grid: &[usize],
    opts: &JpOptions,
) -> Result<Vec<PhiNode>> {
    let mut out = Vec::with_capacity(t_grid.len() * n_grid.len());
    for &t in t_grid {
        let shell = build_mesh(spec, MeshRole::Shell(t), t / opts.shell_divisor)?;
        let proxy: Vec<f64> = shell
            .points
            .iter()
            .map(|&z| proxy_source.eval(z))
            .collect::<Result<_>>()?;
        let mut prev: Option<usize> = None;
        for &n in n_grid {
            // previous argmin first, then the proxy ranking
            let mut score = proxy.clone();
            if let Some(i) = prev {
                score[i] = f64::NEG_INFINITY;
            }
            let k = if prev.is_some() { 3 } else { opts.shell_candidates };
            let inf = phi_shell_inf_ranked(solver, n + 1, &shell, &score, k)?;
            prev = shell.points.iter().position(|&w| w == inf.argmin);
            out.push(PhiNode {
                t,
                n,
                raw: inf.value,
                value: inf.value,
                argmin: inf.argmin,
            });
        }
    }
    // monotone envelope: nondecreasing in n, then in t
    let nn = n_grid.len();
    for ti in 0..t_grid.len() {
        for ni in 1..nn {
            let p = out[ti * nn + ni - 1].value;
            let cur = &mut out[ti * nn + ni];
            cur.value = cur.value.max(p);
        }
    }
    for ti in (0..t_grid.len() - 1).rev() {
        for ni in 0..nn {
            let coarser = out[ti * nn + ni].value;
            let finer = out[(ti + 1) * nn + ni].value;
            out[(ti + 1) * nn + ni].value = finer.min(coarser);
        }
    }
    Ok(out)
}

fn assemble(opts: &JpOptions, t_grid: Vec<f64>, n_grid: Vec<usize>, phi: Vec<PhiNode>) -> JpReport {
    let nn = n_grid.len();
    let mut lhs = Vec::new();
    let mut sup_bound = Vec::new();
    for &ell in &opts.ell_grid {
        for (ti, &t) in t_grid.iter().enumerate() {
            let row = &phi[ti * nn..(ti + 1) * nn];
            for p in row {
                lhs.push(LhsNode {
                    ell,
                    t,
                    n: p.n,
                    log_lhs: ell * (p.n as f64).ln() - p.value.ln(),
                });
            }
            let vals: Vec<f64> = row.iter().map(|p| p.value).collect();
            sup_bound.push((ell, t, sup_over_n(ell, &n_grid, &vals)));
        }
    }
    let big_l = |ell: f64, ti: usize| {
        let li = opts.ell_grid.iter().position(|&l| l == ell).unwrap();
        sup_bound[li * t_grid.len() + ti].2
    };

    let nt = t_grid.len();
    let mut growth = Vec::new();
    let mut unbounded = false;
    for &ell in &opts.ell_grid {
        let xs: Vec<f64> = (nt - 3..nt).map(|ti| (1.0 / t_grid[ti]).ln()).collect();
        let ys: Vec<f64> = (nt - 3..nt).map(|ti| big_l(ell, ti) / ell).collect();
        let kappa = if ys.iter().all(|y| y.is_finite()) {
            linear_fit(&xs, &ys).0
        } else {
            f64::INFINITY
        };
        let local: Vec<f64> = (1..nt)
            .map(|ti| {
                (big_l(ell, ti) - big_l(ell, ti - 1))
                    / (ell * (t_grid[ti - 1] / t_grid[ti]).ln())
            })
            .collect();
        if !kappa.is_finite() || jp_diverges(&local) {
            unbounded = true;
        }
        growth.push((ell, kappa));
    }
    let s_hat = if unbounded {
        f64::INFINITY
    } else {
        growth.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max)
    };

    let mut candidates = Vec::new();
    for &s in &opts.s_candidates {
        for &v in &opts.v_candidates {
            let k = |ell: f64, t: f64| v as f64 * ell.ln() + s * (1.0 / t).ln();
            let mut c_all: f64 = 0.0;
            let mut c_coarse: f64 = 0.0;
            for &ell in &opts.ell_grid {
                for (ti, &t) in t_grid.iter().enumerate() {
                    let c = c_required(big_l(ell, ti), ell, k(ell, t));
                    c_all = c_all.max(c);
                    if ti + 1 < nt {
                        c_coarse = c_coarse.max(c);
                    }
                }
            }
            let mut violations = Vec::new();
            let t_fine = t_grid[nt - 1];
            for &ell in &opts.ell_grid {
                let l = big_l(ell, nt - 1);
                let rhs = (ell + c_coarse) * (c_coarse.ln() + k(ell, t_fine));
                if l > rhs {
                    violations.push(Violation::Grid {
                        ell,
                        t: t_fine,
                        log_lhs: l,
                        log_rhs: rhs,
                    });
                }
            }
            for &(ell, kappa) in &growth {
                if !(kappa <= s * (1.0 + opts.tol)) {
                    violations.push(Violation::Asymptotic { ell, growth: kappa });
                }
            }
            let feasible = c_all.is_finite()
                && !unbounded
                && !violations.iter().any(|v| matches!(v, Violation::Asymptotic { .. }));
            candidates.push(Feasibility {
                s,
                v,
                c_tilde: c_all,
                c_tilde_coarse: c_coarse,
                feasible,
                violations,
            });
        }
    }
    let minimal_s = candidates
        .iter()
        .filter(|f| f.feasible)
        .map(|f| f.s)
        .reduce(f64::min);
    JpReport {
        ell_grid: opts.ell_grid.clone(),
        t_grid,
        n_grid,
        phi,
        lhs,
        sup_bound,
        growth,
        s_hat,
        unbounded_growth: unbounded,
        candidates,
        minimal_s,
        trivial: false,
    }
}

/// Growth rates increasing over the three finest scale pairs, finest above twice the coarsest.
fn jp_diverges(local: &[f64]) -> bool {
    let k = local.len();
    if k < 3 {
        return false;
    }
    let tail = &local[k - 3..];
    tail.windows(2).all(|w| w[1] > w[0]) && local[k - 1] > 2.0 * local[0].max(1e-12)
        || diverges(local) && !local[k - 1].is_finite()
}
