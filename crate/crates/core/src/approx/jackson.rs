use std::sync::Arc;

use super::best::Approximator;
use crate::extremal::NodeSequence;
use crate::{Complex, Error, Result};

/// Truncated Jackson norm `‖f‖ + max_{1≤n≤N} n^ℓ·dist(f, 𝒫ₙ)`.
#[derive(Clone, Debug)]
pub struct JacksonNormValue {
    pub ell: f64,
    pub value: f64,
    pub n_max: usize,
    pub attained_at: usize,
    /// The maximum sits at `n_max`, so the truncation is not trustworthy.
    pub tail_flag: bool,
    pub sup_norm: f64,
    pub sup_term: f64,
}

/// Relative size below which an approximation error counts as exact.
const EXACT: f64 = 1e-11;

/// Jackson norm from precomputed errors `errors[n] = dist(f, 𝒫ₙ)`, `n = 0..`.
pub fn jackson_from_errors(sup_norm: f64, errors: &[f64], ell: f64, n_max: usize) -> Result<JacksonNormValue> {
    if n_max < 4 || errors.len() <= n_max {
        return Err(Error::InvalidArgument(format!(
            "Jackson norm needs n_max >= 4 and errors up to n_max, got n_max = {n_max} with {} errors",
            errors.len()
        )));
    }
    let mut best = (0.0, 1);
    for (n, &e) in errors.iter().enumerate().take(n_max + 1).skip(1) {
        let e = if e <= EXACT * sup_norm.max(f64::MIN_POSITIVE) { 0.0 } else { e };
        let term = (n as f64).powf(ell) * e;
        if term > best.0 {
            best = (term, n);
        }
    }
    Ok(JacksonNormValue {
        ell,
        value: sup_norm + best.0,
        n_max,
        attained_at: best.1,
        tail_flag: best.0 > 0.0 && best.1 == n_max,
        sup_norm,
        sup_term: best.0,
    })
}

pub fn jackson_norm(
    f: &[Complex],
    ell: f64,
    n_max: usize,
    nodes: Arc<NodeSequence>,
) -> Result<JacksonNormValue> {
    let approx = Approximator::new(nodes, n_max)?;
    let errors: Vec<f64> = approx.sequence(f, n_max)?.iter().map(|r| r.error).collect();
    let sup = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    jackson_from_errors(sup, &errors, ell, n_max)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::extremal::leja_points;
    use crate::sets::{build_mesh, CompactSetSpec, MeshRole};

    #[test]
    fn identity_on_disk() {
        let mesh =
            build_mesh(&CompactSetSpec::unit_disk(), MeshRole::Boundary, 2.0 * PI / 128.0).unwrap();
        let ns = Arc::new(leja_points(&mesh, 8).unwrap());
        let f: Vec<Complex> = mesh.points.clone();
        let j = jackson_norm(&f, 2.0, 8, ns).unwrap();
        assert!((j.value - 1.0).abs() < 1e-12);
        assert_eq!(j.sup_term, 0.0);
        assert!(!j.tail_flag);
    }

    #[test]
    fn abs_on_disk_flags_tail() {
        let mesh =
            build_mesh(&CompactSetSpec::unit_disk(), MeshRole::InteriorFill, 0.1).unwrap();
        let ns = Arc::new(leja_points(&mesh, 8).unwrap());
        let f: Vec<Complex> = mesh.points.iter().map(|z| Complex::new(z.norm(), 0.0)).collect();
        let j = jackson_norm(&f, 1.0, 8, ns).unwrap();
        assert!(j.tail_flag && j.attained_at == 8);
    }

    #[test]
    fn monotone_in_ell() {
        let errors = [1.0, 0.5, 0.2, 0.05, 0.01, 0.001];
        let mut prev = 0.0;
        for ell in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let j = jackson_from_errors(1.0, &errors, ell, 5).unwrap();
            assert!(j.value >= prev);
            prev = j.value;
        }
    }
}
