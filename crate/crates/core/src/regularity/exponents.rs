use crate::extremal::GreenSource;
use crate::sets::{build_mesh, CompactSetSpec, MeshRole};
use crate::{linear_fit, Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentKind {
    /// Lower bound `g ≥ M·dist^s`: worst case is the shell minimum.
    Lojasiewicz,
    /// Upper bound `g ≤ M·dist^{1/k}`: worst case is the shell maximum.
    Holder,
}

impl ExponentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExponentKind::Lojasiewicz => "ls",
            ExponentKind::Holder => "hcp",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScaleSample {
    pub t: f64,
    /// Worst-case Green's function value over the shell.
    pub g: f64,
    /// Where it was attained.
    pub at: Complex,
    pub shell_points: usize,
}

#[derive(Clone, Debug)]
pub struct ExponentFit {
    pub kind: ExponentKind,
    pub source: &'static str,
    /// `ŝ` for the lower bound, `k̂` for the upper bound; infinite when divergent.
    pub exponent: f64,
    /// Regression slope of `log g` against `log t`.
    pub slope: f64,
    pub m_hat: f64,
    pub samples: Vec<ScaleSample>,
    /// `((t₁, t₂), log(g₁/g₂)/log(t₁/t₂))` for consecutive scales, coarse to fine.
    pub local: Vec<((f64, f64), f64)>,
    /// RMS residual of the regression.
    pub residual: f64,
    pub r2: f64,
    pub divergent: bool,
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    /// Shell resolution is `t / resolution_divisor`.
    pub resolution_divisor: f64,
    /// Cap on points per shell; the resolution is coarsened beyond it.
    pub max_shell_points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            resolution_divisor: 20.0,
            max_shell_points: 400_000,
        }
    }
}

/// `2⁻ᵃ..2⁻ᵇ`, coarse to fine.
pub fn dyadic_scales(coarsest: i32, finest: i32) -> Vec<f64> {
    (coarsest..=finest).map(|k| 2f64.powi(-k)).collect()
}

pub fn fit_ls_exponent(
    spec: &CompactSetSpec,
    source: &GreenSource,
    scales: &[f64],
    opts: &FitOptions,
) -> Result<ExponentFit> {
    fit(spec, source, scales, opts, ExponentKind::Lojasiewicz)
}

pub fn fit_hcp_exponent(
    spec: &CompactSetSpec,
    source: &GreenSource,
    scales: &[f64],
    opts: &FitOptions,
) -> Result<ExponentFit> {
    fit(spec, source, scales, opts, ExponentKind::Holder)
}

/// Local exponents increase over the three finest scale pairs and the finest exceeds four
/// times the coarsest.
pub(crate) fn diverges(local: &[f64]) -> bool {
    let k = local.len();
    if k < 3 {
        return false;
    }
    let tail = &local[k - 3..];
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let first = local[0];
    let last = local[k - 1];
    increasing && (!last.is_finite() || (first > 0.0 && last > 4.0 * first) || first <= 0.0 && last > 0.0)
}

fn shell_sample(
    spec: &CompactSetSpec,
    source: &GreenSource,
    t: f64,
    opts: &FitOptions,
    kind: ExponentKind,
) -> Result<ScaleSample> {
    let perimeter = rough_shell_length(spec, t);
    let res = (t / opts.resolution_divisor).max(perimeter / opts.max_shell_points as f64);
    let shell = build_mesh(spec, MeshRole::Shell(t), res)?;
    let mut best: Option<(f64, Complex)> = None;
    for &z in &shell.points {
        let g = source.eval(z)?;
        let better = match (best, kind) {
            (None, _) => true,
            (Some((b, _)), ExponentKind::Lojasiewicz) => g < b,
            (Some((b, _)), ExponentKind::Holder) => g > b,
        };
        if better {
            best = Some((g, z));
        }
    }
    let (g, at) = best.ok_or(Error::ShellLeak { t })?;
    if !(g > 0.0) {
        return Err(Error::ShellLeak { t });
    }
    Ok(ScaleSample {
        t,
        g,
        at,
        shell_points: shell.len(),
    })
}

fn rough_shell_length(spec: &CompactSetSpec, t: f64) -> f64 {
    spec.atoms()
        .iter()
        .flat_map(|a| a.boundary_curves())
        .map(|c| c.length())
        .sum::<f64>()
        * 2.0
        + 2.0 * std::f64::consts::PI * t * spec.atoms().len() as f64
}

fn fit(
    spec: &CompactSetSpec,
    source: &GreenSource,
    scales: &[f64],
    opts: &FitOptions,
    kind: ExponentKind,
) -> Result<ExponentFit> {
    if scales.len() < 4 || scales.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::InvalidArgument(
            "exponent fits need at least 4 scales in (0, 1]".into(),
        ));
    }
    let mut ts = scales.to_vec();
    ts.sort_by(|a, b| b.total_cmp(a));
    let samples = ts
        .iter()
        .map(|&t| shell_sample(spec, source, t, opts, kind))
        .collect::<Result<Vec<_>>>()?;
    let local: Vec<((f64, f64), f64)> = samples
        .windows(2)
        .map(|w| ((w[0].t, w[1].t), (w[0].g / w[1].g).ln() / (w[0].t / w[1].t).ln()))
        .collect();
    // the coarsest scale is transient and left out of the regression
    let x: Vec<f64> = samples[1..].iter().map(|s| s.t.ln()).collect();
    let y: Vec<f64> = samples[1..].iter().map(|s| s.g.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&x, &y);
    let residual = (x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum::<f64>()
        / x.len() as f64)
        .sqrt();
    let local_vals: Vec<f64> = local.iter().map(|l| l.1).collect();
    let divergent = kind == ExponentKind::Lojasiewicz && diverges(&local_vals);
    let exponent = match kind {
        _ if divergent => f64::INFINITY,
        ExponentKind::Lojasiewicz => slope,
        ExponentKind::Holder => 1.0 / slope,
    };
    Ok(ExponentFit {
        kind,
        source: source.name(),
        exponent,
        slope,
        m_hat: intercept.exp(),
        samples,
        local,
        residual,
        r2,
        divergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_exponents_are_one() {
        let spec = CompactSetSpec::unit_disk();
        let src = GreenSource::Oracle(spec.clone());
        let scales = dyadic_scales(2, 7);
        let ls = fit_ls_exponent(&spec, &src, &scales, &FitOptions::default()).unwrap();
        let hcp = fit_hcp_exponent(&spec, &src, &scales, &FitOptions::default()).unwrap();
        assert!((ls.exponent - 1.0).abs() < 0.05, "{}", ls.exponent);
        assert!((hcp.exponent - 1.0).abs() < 0.05, "{}", hcp.exponent);
        assert!(!ls.divergent);
        // local exponents recomputable from the stored samples
        let (s0, s1) = (&ls.samples[2], &ls.samples[3]);
        let loc = (s0.g / s1.g).ln() / (s0.t / s1.t).ln();
        assert_eq!(loc, ls.local[2].1);
    }

    #[test]
    fn divergence_rule() {
        assert!(diverges(&[1.0, 1.5, 2.5, 5.0]));
        assert!(!diverges(&[1.0, 1.01, 1.02, 1.03]));
        assert!(!diverges(&[1.0, 5.0, 4.0, 6.0]));
    }

    #[test]
    fn too_few_scales() {
        let spec = CompactSetSpec::unit_disk();
        let src = GreenSource::Oracle(spec.clone());
        assert!(fit_ls_exponent(&spec, &src, &[0.5, 0.25, 0.125], &FitOptions::default()).is_err());
    }
}
