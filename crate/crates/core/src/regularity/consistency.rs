use std::f64::consts::E;
use std::sync::Arc;

use super::exponents::{dyadic_scales, fit_hcp_exponent, fit_ls_exponent, ExponentFit, FitOptions};
use super::jp::{adequate_boundary_mesh, jp_condition5_check, JpOptions, JpReport};
use crate::extremal::{leja_points, GreenSource};
use crate::sets::CompactSetSpec;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The hypothesis does not hold on the grid, so there is nothing to check.
    Vacuous,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyOptions {
    pub scales: Vec<f64>,
    pub fit: FitOptions,
    pub jp: JpOptions,
    pub tol: f64,
    /// Leja degree for the nodal Green estimate when the set has no oracle.
    pub nodal_degree: usize,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        Self {
            scales: dyadic_scales(2, 7),
            fit: FitOptions::default(),
            jp: JpOptions::default(),
            tol: 0.15,
            nodal_degree: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub ls: ExponentFit,
    pub hcp: ExponentFit,
    pub jp: JpReport,
    /// Lower-bound exponent with a Hölder upper bound implies the Jackson exponent: `ŝ_JP ≤ ŝ_LS(1+tol)`.
    pub forward: Outcome,
    /// Jackson exponent implies the lower-bound exponent: `ŝ_LS ≤ ŝ_JP(1+tol)`.
    pub backward: Outcome,
    /// A divergent lower-bound fit must come with unbounded growth of the Jackson left-hand side.
    pub contrapositive: Outcome,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        [self.forward, self.backward, self.contrapositive]
            .iter()
            .all(|o| *o != Outcome::Fail)
    }
}

pub(crate) fn green_source(spec: &CompactSetSpec, nodal_degree: usize) -> Result<GreenSource> {
    Ok(match spec.oracle {
        Some(_) => GreenSource::Oracle(spec.clone()),
        None => {
            let mesh = adequate_boundary_mesh(spec, 4 * nodal_degree)?;
            GreenSource::Nodal(Arc::new(leja_points(&mesh, nodal_degree)?))
        }
    })
}

/// Fit both exponents, run the grid check, and compare the three in both directions.
pub fn theorem14_consistency(spec: &CompactSetSpec, opts: &ConsistencyOptions) -> Result<ConsistencyReport> {
    let src = green_source(spec, opts.nodal_degree)?;
    let ls = fit_ls_exponent(spec, &src, &opts.scales, &opts.fit)?;
    let hcp = fit_hcp_exponent(spec, &src, &opts.scales, &opts.fit)?;
    let jp = jp_condition5_check(spec, &opts.jp)?;
    let tol = opts.tol;
    let forward = if ls.divergent || !hcp.exponent.is_finite() {
        Outcome::Vacuous
    } else {
        Outcome::from_bool(jp.s_hat <= ls.exponent * (1.0 + tol))
    };
    let backward = if jp.unbounded_growth {
        Outcome::Vacuous
    } else {
        Outcome::from_bool(ls.exponent <= jp.s_hat * (1.0 + tol))
    };
    let contrapositive = if ls.divergent {
        Outcome::from_bool(jp.unbounded_growth)
    } else {
        Outcome::Vacuous
    };
    Ok(ConsistencyReport {
        ls,
        hcp,
        jp,
        forward,
        backward,
        contrapositive,
    })
}

#[derive(Clone, Debug)]
pub struct UnionReport {
    pub a: JpReport,
    pub b: JpReport,
    pub union: JpReport,
    /// `max(ŝ_A, ŝ_B)`.
    pub expected: f64,
    pub passed: bool,
}

/// The union of two disjoint sets should need the larger of the two exponents.
pub fn union_jp_check(a: &CompactSetSpec, b: &CompactSetSpec, opts: &JpOptions, tol: f64) -> Result<UnionReport> {
    if !a.is_polynomially_convex() || !b.is_polynomially_convex() {
        return Err(Error::InvalidArgument("both sets must be polynomially convex".into()));
    }
    let union = CompactSetSpec::union(vec![a.clone(), b.clone()]);
    // rejects sets too small to resolve before any expensive work
    let n_max = opts.n_grid.iter().copied().max().unwrap_or(1);
    for s in [a, b, &union] {
        adequate_boundary_mesh(s, 8 * (n_max + 1))?;
    }
    let probe = adequate_boundary_mesh(b, 64)?;
    let gap = probe.points.iter().map(|&z| a.distance(z)).fold(f64::INFINITY, f64::min);
    if !(gap > 0.0) {
        return Err(Error::InvalidArgument("the sets must be disjoint".into()));
    }
    let ra = jp_condition5_check(a, opts)?;
    let rb = jp_condition5_check(b, opts)?;
    let ru = jp_condition5_check(&union, opts)?;
    let expected = ra.s_hat.max(rb.s_hat);
    let passed = !ru.unbounded_growth && (ru.s_hat - expected).abs() <= tol * expected;
    Ok(UnionReport {
        a: ra,
        b: rb,
        union: ru,
        expected,
        passed,
    })
}

/// The Green's function lower bound obtained from the grid inequality by a choice of degree.
#[derive(Clone, Debug)]
pub struct GreenLowerBound {
    /// Smallest integer `n ≥ e(c̃ℓ^v/t^s)^{1+c̃/ℓ}`.
    pub n: usize,
    /// `log(n^ℓ (t^s/(c̃ℓ^v))^{ℓ+c̃})/(n+1)`.
    pub at_n: f64,
    /// `ℓ/(2 + e(c̃ℓ^v)^{1+c̃/ℓ})·t^{s(1+c̃/ℓ)}`.
    pub closed: f64,
}

pub fn green_lower_bound(c: f64, ell: f64, v: u32, s: f64, t: f64) -> GreenLowerBound {
    let base = c * ell.powi(v as i32);
    let x = E * (base / t.powf(s)).powf(1.0 + c / ell);
    let n = x.ceil().max(1.0) as usize;
    let nf = n as f64;
    let at_n = (ell * nf.ln() + (ell + c) * (s * t.ln() - base.ln())) / (nf + 1.0);
    let closed = ell / (2.0 + E * base.powf(1.0 + c / ell)) * t.powf(s * (1.0 + c / ell));
    GreenLowerBound { n, at_n, closed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_green_lower_bound() {
        // the disk satisfies the grid inequality with s = v = c̃ = 1 for every n
        let c = 1.0;
        for &t in &[0.5, 0.1, 0.01] {
            for &ell in &[1.0, 3.0, 10.0] {
                let rhs = (ell + c) * (c * ell / t as f64).ln();
                let worst = (1..200_000)
                    .map(|n| ell * (n as f64).ln() - (n as f64 + 1.0) * (1.0_f64 + t).ln())
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(worst <= rhs);
                let b = green_lower_bound(c, ell, 1, 1.0, t);
                let g = (1.0_f64 + t).ln();
                assert!(g >= b.at_n && b.at_n >= b.closed, "t={t} ℓ={ell}: {g} {b:?}");
            }
        }
    }
}
