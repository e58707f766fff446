use std::f64::consts::PI;

use super::spec::{CompactSetSpec, OracleTag, SetKind};
use crate::{Complex, Error, Result};

/// Closed-form Green's function with pole at infinity; 0 on the polynomial hull.
pub fn green_oracle(spec: &CompactSetSpec, z: Complex) -> Result<f64> {
    let tag = spec.oracle.ok_or(Error::OracleUnavailable)?;
    let g = match (&spec.kind, tag) {
        (SetKind::Affine { a, b, inner }, _) => return green_oracle(inner, (z - b) / a),
        (SetKind::Disk { center, radius }, OracleTag::Disk) => {
            ((z - center).norm() / radius).ln()
        }
        (SetKind::Segment { a, b }, OracleTag::Joukowski) => {
            joukowski((2.0 * z - (a + b)) / (b - a))
        }
        (SetKind::Star { n }, OracleTag::StarPullback) => {
            let w = z.powu(*n);
            joukowski(2.0 * w - 1.0) / *n as f64
        }
        (SetKind::Union { .. }, OracleTag::TangentDisks) => tangent_disks(z),
        _ => return Err(Error::OracleUnavailable),
    };
    Ok(if g.is_nan() { 0.0 } else { g.max(0.0) })
}

/// Green's function of `[-1, 1]`: `log|w + √(w²−1)|` on the branch with modulus ≥ 1.
fn joukowski(w: Complex) -> f64 {
    let s = (w - 1.0).sqrt() * (w + 1.0).sqrt();
    let (p, m) = (w + s, w - s);
    p.norm().max(m.norm()).ln()
}

/// `−log|tan(π/(2z))|` outside the disks `|z ∓ 1| ≤ 1`.
fn tangent_disks(z: Complex) -> f64 {
    if (z - 1.0).norm() <= 1.0 || (z + 1.0).norm() <= 1.0 {
        return 0.0;
    }
    let w = PI / (2.0 * z);
    let (a, b) = (w.re, w.im);
    let sh = b.sinh();
    if !sh.is_finite() {
        return 0.0;
    }
    // |tan w|² = (sin²a + sinh²b)/(cos²a + sinh²b)
    0.5 * ((2.0 * a).cos() / (a.sin().powi(2) + sh * sh)).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn disk_and_segment_values() {
        let g = green_oracle(&CompactSetSpec::unit_disk(), c(2.0, 0.0)).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-15);
        let g = green_oracle(&CompactSetSpec::interval(-1.0, 1.0), c(2.0, 0.0)).unwrap();
        assert!((g - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        assert_eq!(
            green_oracle(&CompactSetSpec::unit_disk(), c(0.3, 0.1)).unwrap(),
            0.0
        );
    }

    #[test]
    fn joukowski_branch_is_symmetric() {
        let s = CompactSetSpec::interval(-1.0, 1.0);
        for z in [c(0.0, 1.0), c(0.0, -1.0), c(-2.0, 0.0), c(0.5, 1e-8), c(0.5, -1e-8)] {
            let g = green_oracle(&s, z).unwrap();
            let gc = green_oracle(&s, z.conj()).unwrap();
            let gm = green_oracle(&s, -z).unwrap();
            assert!((g - gc).abs() < 1e-14 && (g - gm).abs() < 1e-14);
        }
        // g(i) = log(1 + √2)
        let g = green_oracle(&s, c(0.0, 1.0)).unwrap();
        assert!((g - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-14);
    }

    #[test]
    fn star_two_is_segment() {
        let star = CompactSetSpec::star(2);
        let seg = CompactSetSpec::interval(-1.0, 1.0);
        for z in [c(0.3, 0.4), c(2.0, 1.0), c(-0.1, 3.0), c(1.5, -0.2)] {
            let a = green_oracle(&star, z).unwrap();
            let b = green_oracle(&seg, z).unwrap();
            assert!((a - b).abs() < 1e-10, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn tangent_disks_tiny_near_pinch() {
        let s = CompactSetSpec::tangent_disks();
        let g = green_oracle(&s, c(0.0, 0.1)).unwrap();
        let want = -((PI / 0.2).tanh()).ln();
        assert!((g - want).abs() <= 1e-3 * want);
        assert!(g > 0.0 && g < 1e-12);
        // far away g ~ log|z| + const
        let g = green_oracle(&s, c(100.0, 0.0)).unwrap();
        assert!((g - (100.0 * 2.0 / PI).ln()).abs() < 1e-3);
    }

    #[test]
    fn no_oracle_for_polygon() {
        let p = CompactSetSpec::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], true);
        assert!(matches!(green_oracle(&p, c(2.0, 2.0)), Err(Error::OracleUnavailable)));
    }
}
