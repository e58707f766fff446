use super::green::GreenSource;
use crate::sets::CompactSetSpec;
use crate::{Complex, Error, Result};

/// Polyline approximation of `C(E, ρ) = {Φ_E = ρ}`.
#[derive(Clone, Debug)]
pub struct LevelSet {
    pub rho: f64,
    pub segments: Vec<(Complex, Complex)>,
    /// `dist(C(E, ρ), E)`.
    pub min_dist: f64,
    /// `max_{z ∈ C(E, ρ)} dist(z, E)`.
    pub max_dist: f64,
    /// `[xmin, xmax, ymin, ymax]`.
    pub window: [f64; 4],
}

fn window_clear(source: &GreenSource, w: [f64; 4], level: f64) -> Result<bool> {
    let k = 64;
    for i in 0..=k {
        let s = i as f64 / k as f64;
        let x = w[0] + (w[1] - w[0]) * s;
        let y = w[2] + (w[3] - w[2]) * s;
        for z in [
            Complex::new(x, w[2]),
            Complex::new(x, w[3]),
            Complex::new(w[0], y),
            Complex::new(w[1], y),
        ] {
            if source.eval(z)? <= level {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest window (bounding box plus a doubling margin) whose boundary lies outside `C(E, ρ)`.
pub fn suggest_window(spec: &CompactSetSpec, source: &GreenSource, rho: f64) -> Result<[f64; 4]> {
    let bb = spec.bounding_box();
    let mut margin = 0.25 * spec.diameter().max(0.5);
    for _ in 0..16 {
        let w = [bb[0] - margin, bb[1] + margin, bb[2] - margin, bb[3] + margin];
        if window_clear(source, w, rho.ln())? {
            return Ok(w);
        }
        margin *= 2.0;
    }
    Err(Error::InvalidArgument(format!(
        "no window up to margin {margin} encloses the level set at rho = {rho}"
    )))
}

/// Marching-squares extraction of `g = log ρ` on a grid of pitch `resolution`.
pub fn level_set(
    spec: &CompactSetSpec,
    source: &GreenSource,
    rho: f64,
    resolution: f64,
    window: Option<[f64; 4]>,
) -> Result<LevelSet> {
    if !(rho > 1.0) || !(resolution > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "level set needs rho > 1 and resolution > 0, got {rho}, {resolution}"
        )));
    }
    let level = rho.ln();
    let w = match window {
        Some(w) => {
            if !window_clear(source, w, level)? {
                return Err(Error::LevelSetOutsideWindow {
                    suggested: suggest_window(spec, source, rho)?,
                });
            }
            w
        }
        None => suggest_window(spec, source, rho)?,
    };
    let nx = ((w[1] - w[0]) / resolution).ceil() as usize;
    let ny = ((w[3] - w[2]) / resolution).ceil() as usize;
    let hx = (w[1] - w[0]) / nx as f64;
    let hy = (w[3] - w[2]) / ny as f64;
    let at = |i: usize, j: usize| Complex::new(w[0] + i as f64 * hx, w[2] + j as f64 * hy);
    let mut v = vec![0.0; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            v[j * (nx + 1) + i] = source.eval(at(i, j))? - level;
        }
    }
    let val = |i: usize, j: usize| v[j * (nx + 1) + i];
    let cross = |p: Complex, q: Complex, a: f64, b: f64| p + (q - p) * (a / (a - b));
    let mut segments = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let vals = c.map(|(a, b)| val(a, b));
            let mut pts = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (vals[e], vals[(e + 1) % 4]);
                if (a < 0.0) != (b < 0.0) {
                    let (p, q) = (at(c[e].0, c[e].1), at(c[(e + 1) % 4].0, c[(e + 1) % 4].1));
                    pts.push(cross(p, q, a, b));
                }
            }
            match pts.len() {
                2 => segments.push((pts[0], pts[1])),
                4 => {
                    // saddle: pair crossings around the corner sharing the centre's sign
                    let centre = vals.iter().sum::<f64>() / 4.0;
                    if (centre < 0.0) == (vals[0] < 0.0) {
                        segments.push((pts[0], pts[1]));
                        segments.push((pts[2], pts[3]));
                    } else {
                        segments.push((pts[3], pts[0]));
                        segments.push((pts[1], pts[2]));
                    }
                }
                _ => {}
            }
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &(a, b) in &segments {
        for z in [a, b] {
            let d = spec.distance(z);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    Ok(LevelSet {
        rho,
        segments,
        min_dist: lo,
        max_dist: hi,
        window: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_level_two() {
        let s = CompactSetSpec::unit_disk();
        let ls = level_set(&s, &GreenSource::Oracle(s.clone()), 2.0, 0.01, None).unwrap();
        assert!((ls.min_dist - 1.0).abs() < 0.01);
        assert!((ls.max_dist - 1.0).abs() < 0.01);
    }

    #[test]
    fn segment_ellipse() {
        let s = CompactSetSpec::interval(-1.0, 1.0);
        let rho: f64 = 3.0;
        let ls = level_set(&s, &GreenSource::Oracle(s.clone()), rho, 0.005, None).unwrap();
        let want = 0.5 * (rho + 1.0 / rho) - 1.0;
        assert!((ls.min_dist - want).abs() < 0.01, "{} vs {want}", ls.min_dist);
    }

    #[test]
    fn tight_window_is_rejected_with_suggestion() {
        let s = CompactSetSpec::unit_disk();
        let r = level_set(&s, &GreenSource::Oracle(s.clone()), 2.0, 0.05, Some([-1.5, 1.5, -1.5, 1.5]));
        assert!(matches!(r, Err(Error::LevelSetOutsideWindow { .. })));
    }
}
