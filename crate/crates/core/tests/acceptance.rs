//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use potapprox::approx::{cauchy_kernel_bracket, glue_union_approx, runge_approximant, GlueOptions, RungeOptions};
use potapprox::extremal::{green_estimate, leja_points, ExtremalSolver, GreenSource, MeshBasis, NodeSequence};
use potapprox::regularity::{dyadic_scales, fit_hcp_exponent, fit_ls_exponent, jp_condition5_check, FitOptions, JpOptions};
use potapprox::sets::{build_mesh, green_oracle, CompactSetSpec, Mesh, MeshRole};
use potapprox::Complex;

const PHI_REL_TOL: f64 = 1e-6;
const BRACKET_TOL: f64 = 1e-6;
const LS_REL_TOL: f64 = 0.10;
const GREEN_ABS_TOL: f64 = 0.02;
const GREEN_MIN_DIST: f64 = 0.1;
const GREEN_DEGREE: usize = 400;
const GLUE_MIN_R2: f64 = 0.98;
const REFINE_ERROR_TOL: f64 = 0.01;
const REFINE_EXPONENT_TOL: f64 = 0.03;

/// Outcome of one criterion: pass flag and a one-line summary.
type Verdict = (bool, String);

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn boundary(spec: &CompactSetSpec, res: f64) -> Mesh {
    build_mesh(spec, MeshRole::Boundary, res).unwrap()
}

/// Boundary mesh with at least `min_points` points.
fn boundary_with(spec: &CompactSetSpec, min_points: usize) -> Mesh {
    let mut res = 0.05;
    loop {
        let m = boundary(spec, res);
        if m.len() >= min_points {
            return m;
        }
        res *= 0.8;
    }
}

fn disk_phi() -> Verdict {
    let disk = CompactSetSpec::unit_disk();
    let mesh = boundary(&disk, 2.0 * PI / 512.0);
    assert_eq!(mesh.len(), 512);
    let solver = ExtremalSolver::new(&mesh, 20).unwrap();
    let mut worst: f64 = 0.0;
    for z in [c(1.5, 0.0), c(2.0, 0.0), c(2.0, 1.0)] {
        for n in 0..=20 {
            let v = solver.phi(n, z).unwrap();
            worst = worst.max((v.value / z.norm().powi(n as i32) - 1.0).abs());
        }
    }
    (worst <= PHI_REL_TOL, format!("max relative error {worst:.2e} over 63 cases"))
}

fn shell_poles(spec: &CompactSetSpec, t: f64, count: usize) -> Vec<Complex> {
    let shell = build_mesh(spec, MeshRole::Shell(t), 0.05).unwrap();
    let step = shell.len() / count;
    shell.points.iter().step_by(step).take(count).copied().collect()
}

fn bracket_measured(spec: &CompactSetSpec, res: f64, poles: &[Complex], degrees: &[usize]) -> Vec<(bool, f64)> {
    let n_max = *degrees.iter().max().unwrap();
    let mut mesh = boundary(spec, res);
    if mesh.len() < 8 * (n_max + 1) {
        mesh = boundary_with(spec, 8 * (n_max + 1));
    }
    let space = Arc::new(MeshBasis::from_mesh(&mesh, n_max + 1).unwrap());
    let mut out = Vec::new();
    for &zeta in poles {
        for &n in degrees {
            let b = cauchy_kernel_bracket(spec, &space, zeta, n).unwrap();
            out.push((b.holds(BRACKET_TOL), b.measured));
        }
    }
    out
}

fn bracket_sets() -> Vec<(&'static str, CompactSetSpec)> {
    vec![
        ("disk", CompactSetSpec::unit_disk()),
        ("segment", CompactSetSpec::interval(-2.0, 2.0)),
        ("star4", CompactSetSpec::star(4)),
    ]
}

fn cauchy_bracket() -> Verdict {
    let degrees: Vec<usize> = (0..=15).collect();
    let (mut total, mut bad) = (0, Vec::new());
    for (name, spec) in bracket_sets() {
        for t in [0.25, 1.0] {
            let poles = shell_poles(&spec, t, 3);
            for (ok, _) in bracket_measured(&spec, 0.01, &poles, &degrees) {
                total += 1;
                if !ok {
                    bad.push(format!("{name}@t={t}"));
                }
            }
        }
    }
    (bad.is_empty(), format!("{}/{total} brackets hold{}", total - bad.len(), fail_list(&bad)))
}

fn fail_list(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", bad.join(", "))
    }
}

fn runge_bounds() -> Verdict {
    type F = Box<dyn Fn(Complex) -> Complex>;
    let cases: Vec<(&str, CompactSetSpec, F, f64, usize)> = vec![
        ("disk 1/(z-3)", CompactSetSpec::unit_disk(), Box::new(|z| 1.0 / (z - 3.0)), 0.5, 8),
        ("disk exp", CompactSetSpec::unit_disk(), Box::new(|z: Complex| z.exp()), 0.25, 12),
        ("segment 1/(z-2i)", CompactSetSpec::interval(-1.0, 1.0), Box::new(|z| 1.0 / (z - c(0.0, 2.0))), 0.5, 10),
        ("star4 1/(z-2-i)", CompactSetSpec::star(4), Box::new(|z| 1.0 / (z - c(2.0, 1.0))), 0.5, 12),
        ("star3 exp(iz)", CompactSetSpec::star(3), Box::new(|z: Complex| (c(0.0, 1.0) * z).exp()), 0.5, 6),
        (
            "square 1/(z-3)",
            CompactSetSpec::polygon(vec![c(-0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5), c(-0.5, 0.5)], true),
            Box::new(|z| 1.0 / (z - 3.0)),
            0.5,
            10,
        ),
    ];
    let mut lines = Vec::new();
    let mut all = true;
    for (name, spec, f, delta, n) in &cases {
        let r = runge_approximant(spec, f.as_ref(), *delta, 0.5, *n, &RungeOptions::default()).unwrap();
        let ok = r.approx.error <= r.certified_bound && r.min_witness_value >= r.phi_value;
        all &= ok;
        lines.push(format!("{name}: {:.1e}<={:.1e}", r.approx.error, r.certified_bound));
    }
    (all, lines.join("; "))
}

fn ls_models() -> Verdict {
    let opts = FitOptions::default();
    let mut lines = Vec::new();
    let mut all = true;
    let mut check = |name: String, spec: CompactSetSpec, expect: f64| {
        let fit = fit_ls_exponent(&spec, &GreenSource::Oracle(spec.clone()), &dyadic_scales(2, 7), &opts).unwrap();
        let ok = ((fit.exponent - expect) / expect).abs() <= LS_REL_TOL && !fit.divergent;
        all &= ok;
        lines.push(format!("{name} {:.3} (want {expect})", fit.exponent));
    };
    for arms in [2, 3, 4] {
        check(format!("star{arms}"), CompactSetSpec::star(arms), arms as f64 / 2.0);
    }
    check("segment".into(), CompactSetSpec::interval(-1.0, 1.0), 1.0);
    let tangent = CompactSetSpec::tangent_disks();
    let fit = fit_ls_exponent(&tangent, &GreenSource::Oracle(tangent.clone()), &dyadic_scales(2, 9), &opts).unwrap();
    all &= fit.divergent;
    lines.push(format!("tangent divergent={}", fit.divergent));
    (all, lines.join("; "))
}

fn leja_for(spec: &CompactSetSpec, degree: usize) -> NodeSequence {
    leja_points(&boundary_with(spec, 4 * degree), degree).unwrap()
}

fn nodal_green() -> Verdict {
    let sets = [
        ("disk", CompactSetSpec::unit_disk()),
        ("segment", CompactSetSpec::interval(-1.0, 1.0)),
        ("star3", CompactSetSpec::star(3)),
        ("star4", CompactSetSpec::star(4)),
    ];
    let mut lines = Vec::new();
    let mut all = true;
    for (name, spec) in sets {
        let ns = leja_for(&spec, GREEN_DEGREE);
        let bb = spec.bounding_box();
        let (mut worst, mut count): (f64, usize) = (0.0, 0);
        let k = 60;
        for i in 0..=k {
            for j in 0..=k {
                let z = c(
                    bb[0] - 1.5 + (bb[1] - bb[0] + 3.0) * i as f64 / k as f64,
                    bb[2] - 1.5 + (bb[3] - bb[2] + 3.0) * j as f64 / k as f64,
                );
                if spec.distance(z) < GREEN_MIN_DIST {
                    continue;
                }
                count += 1;
                worst = worst.max((green_estimate(&ns, z) - green_oracle(&spec, z).unwrap()).abs());
            }
        }
        all &= worst <= GREEN_ABS_TOL;
        lines.push(format!("{name} {worst:.4} ({count} pts)"));
    }
    (all, lines.join("; "))
}

fn condition5() -> Verdict {
    let opts = JpOptions::default();
    let mut lines = Vec::new();
    let mut all = true;
    for (name, spec, s) in [
        ("disk", CompactSetSpec::unit_disk(), 1.0),
        ("segment", CompactSetSpec::interval(-1.0, 1.0), 1.0),
        ("star4", CompactSetSpec::star(4), 2.0),
    ] {
        let r = jp_condition5_check(&spec, &opts).unwrap();
        let f = r.feasibility(s, 1).unwrap();
        let ok = f.feasible && f.c_tilde.is_finite();
        all &= ok;
        lines.push(format!("{name} s={s} c~={:.3} feasible={}", f.c_tilde, f.feasible));
    }
    let r = jp_condition5_check(&CompactSetSpec::tangent_disks(), &opts).unwrap();
    all &= r.unbounded_growth;
    lines.push(format!("tangent unbounded={}", r.unbounded_growth));
    (all, lines.join("; "))
}

fn gluing() -> Verdict {
    let a = CompactSetSpec::disk(c(-2.0, 0.0), 1.0);
    let b = CompactSetSpec::disk(c(2.0, 0.0), 1.0);
    let one = |_z: Complex| c(1.0, 0.0);
    let r = glue_union_approx(&a, &b, &one, 1.0, 40, &GlueOptions::default()).unwrap();
    let decreasing = r.terms.windows(2).all(|w| w[1].error < w[0].error);
    let ok = r.chi_r2 >= GLUE_MIN_R2 && r.rho_hat > 1.0 && decreasing && r.glue_slope < 0.0;
    (
        ok,
        format!(
            "chi rate {:.4} r2 {:.4}; glue k={} slope {:.3} r2 {:.4}, error {:.1e} -> {:.1e}",
            r.rho_hat,
            r.chi_r2,
            r.k,
            r.glue_slope,
            r.glue_r2,
            r.terms[0].error,
            r.terms.last().unwrap().error
        ),
    )
}

/// Relative change from the coarse value `a` to the refined value `b`.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn refinement() -> Verdict {
    let degrees = [2, 6, 10];
    let mut worst_err: f64 = 0.0;
    for (_, spec) in bracket_sets() {
        let poles = shell_poles(&spec, 0.5, 2);
        let coarse = bracket_measured(&spec, 0.01, &poles, &degrees);
        let fine = bracket_measured(&spec, 0.005, &poles, &degrees);
        for ((_, a), (_, b)) in coarse.iter().zip(&fine) {
            worst_err = worst_err.max(rel(*a, *b));
        }
    }
    let mut worst_exp: f64 = 0.0;
    let fine_opts = FitOptions {
        resolution_divisor: 40.0,
        ..FitOptions::default()
    };
    let scales = dyadic_scales(2, 7);
    for spec in [
        CompactSetSpec::star(2),
        CompactSetSpec::star(3),
        CompactSetSpec::star(4),
        CompactSetSpec::interval(-1.0, 1.0),
        CompactSetSpec::unit_disk(),
    ] {
        let src = GreenSource::Oracle(spec.clone());
        for fit in [fit_ls_exponent, fit_hcp_exponent] {
            let a = fit(&spec, &src, &scales, &FitOptions::default()).unwrap().exponent;
            let b = fit(&spec, &src, &scales, &fine_opts).unwrap().exponent;
            worst_exp = worst_exp.max(rel(a, b));
        }
    }
    // The measured Runge error is a cancellation residue ~10⁶ below its certified bound and
    // moves with the mesh-extremal witnesses; it is reported, while the bound and φ are gated.
    let mut runge_drift: f64 = 0.0;
    for (spec, f, delta, n) in [
        (CompactSetSpec::unit_disk(), c(3.0, 0.0), 0.5, 8),
        (CompactSetSpec::interval(-1.0, 1.0), c(0.0, 2.0), 0.5, 10),
    ] {
        let kernel = move |z: Complex| 1.0 / (z - f);
        let run = |res: f64| {
            let opts = RungeOptions {
                mesh_resolution: res,
                ..RungeOptions::default()
            };
            runge_approximant(&spec, &kernel, delta, 0.5, n, &opts).unwrap()
        };
        let (a, b) = (run(0.01), run(0.005));
        worst_err = worst_err
            .max(rel(a.certified_bound, b.certified_bound))
            .max(rel(a.phi_value, b.phi_value));
        runge_drift = runge_drift.max(rel(a.approx.error, b.approx.error));
    }
    let (da, db) = (CompactSetSpec::disk(c(-2.0, 0.0), 1.0), CompactSetSpec::disk(c(2.0, 0.0), 1.0));
    let one = |_z: Complex| c(1.0, 0.0);
    let glue = |res: f64| {
        let opts = GlueOptions {
            resolution: res,
            ..GlueOptions::default()
        };
        glue_union_approx(&da, &db, &one, 1.0, 40, &opts).unwrap()
    };
    let (ga, gb) = (glue(0.01), glue(0.005));
    for (x, y) in ga.chi_errors.iter().zip(&gb.chi_errors).skip(1) {
        worst_err = worst_err.max(rel(*x, *y));
    }
    for (x, y) in ga.terms.iter().zip(&gb.terms) {
        worst_err = worst_err.max(rel(x.error, y.error));
    }
    worst_err = worst_err.max(rel(ga.jackson_union.value, gb.jackson_union.value));
    // nodal Green's function from a boundary mesh of 4·deg and 8·deg points
    let nodal_scales = dyadic_scales(2, 5);
    for spec in [CompactSetSpec::star(4), CompactSetSpec::interval(-1.0, 1.0)] {
        let deg = 200;
        let exps: Vec<f64> = [4, 8]
            .iter()
            .map(|&k| {
                let ns = leja_points(&boundary_with(&spec, k * deg), deg).unwrap();
                let src = GreenSource::Nodal(Arc::new(ns));
                fit_hcp_exponent(&spec, &src, &nodal_scales, &FitOptions::default()).unwrap().exponent
            })
            .collect();
        worst_exp = worst_exp.max(rel(exps[0], exps[1]));
    }
    (
        worst_err < REFINE_ERROR_TOL && worst_exp < REFINE_EXPONENT_TOL,
        format!(
            "errors {:.3}% (limit 1%), exponents {:.3}% (limit 3%); measured Runge error drift {:.0}% (not gated)",
            100.0 * worst_err,
            100.0 * worst_exp,
            100.0 * runge_drift
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict, u64); 8] = [
        ("disk extremal exactness", disk_phi, 10),
        ("Cauchy kernel bracket", cauchy_bracket, 120),
        ("certified Runge bound", runge_bounds, 300),
        ("Lojasiewicz exponents", ls_models, 60),
        ("nodal Green accuracy", nodal_green, 180),
        ("Jackson condition feasibility", condition5, 600),
        ("gluing on disjoint disks", gluing, 300),
        ("mesh refinement stability", refinement, 600),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(v) => v,
            Err(p) => (false, format!("panicked: {:?}", p.downcast_ref::<String>())),
        };
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let pass = ok && in_time;
        failed += usize::from(!pass);
        println!(
            "[{}] {}. {name}: {detail} ({:.1}s, budget {budget}s{})",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            took.as_secs_f64(),
            if in_time { "" } else { " exceeded" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
