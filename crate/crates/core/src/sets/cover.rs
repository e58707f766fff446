use std::collections::{BTreeMap, BTreeSet};

use super::atom::Rect;
use super::spec::CompactSetSpec;
use crate::{Complex, Error, Result};

/// Union of origin-anchored δ-grid squares, with its oriented boundary.
#[derive(Clone, Debug)]
pub struct SquareCover {
    pub delta: f64,
    /// `(i, j)` stands for `[iδ,(i+1)δ]×[jδ,(j+1)δ]`.
    pub squares: Vec<(i64, i64)>,
    /// Closed loops of grid vertices (last vertex joins the first). Outer loops run
    /// counter-clockwise and holes clockwise, so the cover lies to the left.
    pub boundary: Vec<Vec<Complex>>,
}

impl SquareCover {
    pub fn boundary_length(&self) -> f64 {
        self.boundary.iter().map(|l| l.len() as f64 * self.delta).sum()
    }

    /// Directed boundary edges in loop order.
    pub fn edges(&self) -> Vec<(Complex, Complex)> {
        let mut out = Vec::new();
        for lp in &self.boundary {
            for k in 0..lp.len() {
                out.push((lp[k], lp[(k + 1) % lp.len()]));
            }
        }
        out
    }

    pub fn contains(&self, z: Complex) -> bool {
        let i = (z.re / self.delta).floor() as i64;
        let j = (z.im / self.delta).floor() as i64;
        // closed squares: check the neighbors a boundary point could belong to
        let set: BTreeSet<_> = self.squares.iter().copied().collect();
        for di in -1..=0 {
            for dj in -1..=0 {
                let (a, b) = (i + di, j + dj);
                if set.contains(&(a, b)) {
                    let r = rect(a, b, self.delta);
                    if z.re >= r.x0 && z.re <= r.x1 && z.im >= r.y0 && z.im <= r.y1 {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn rect(i: i64, j: i64, d: f64) -> Rect {
    Rect {
        x0: i as f64 * d,
        x1: (i + 1) as f64 * d,
        y0: j as f64 * d,
        y1: (j + 1) as f64 * d,
    }
}

/// `K(E, δ)`: all closed δ-squares of the origin-anchored grid meeting `E`.
pub fn square_cover(spec: &CompactSetSpec, delta: f64) -> Result<SquareCover> {
    square_cover_of_neighborhood(spec, 0.0, delta)
}

/// `K(E_r, δ)`: squares meeting the closed r-neighborhood of `E`.
pub fn square_cover_of_neighborhood(
    spec: &CompactSetSpec,
    r: f64,
    delta: f64,
) -> Result<SquareCover> {
    spec.validate()?;
    if !(delta.is_finite() && delta > 0.0) || !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "square cover needs delta > 0 and r >= 0, got delta = {delta}, r = {r}"
        )));
    }
    let atoms = spec.atoms();
    let bb = spec.bounding_box();
    let pad = r + delta;
    let i0 = ((bb[0] - pad) / delta).floor() as i64;
    let i1 = ((bb[1] + pad) / delta).ceil() as i64;
    let j0 = ((bb[2] - pad) / delta).floor() as i64;
    let j1 = ((bb[3] + pad) / delta).ceil() as i64;
    let eps = 1e-12 * delta.max(1.0);
    let mut squares = Vec::new();
    for i in i0..=i1 {
        for j in j0..=j1 {
            let q = rect(i, j, delta);
            if atoms.iter().any(|a| a.dist_rect(&q) <= r + eps) {
                squares.push((i, j));
            }
        }
    }
    let boundary = trace_boundary(&squares, delta);
    Ok(SquareCover {
        delta,
        squares,
        boundary,
    })
}

const STEP: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn trace_boundary(squares: &[(i64, i64)], delta: f64) -> Vec<Vec<Complex>> {
    let set: BTreeSet<(i64, i64)> = squares.iter().copied().collect();
    // outgoing boundary edges keyed by start vertex; value = direction index
    let mut out: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for &(i, j) in &set {
        if !set.contains(&(i, j - 1)) {
            out.entry((i, j)).or_default().push(0);
        }
        if !set.contains(&(i + 1, j)) {
            out.entry((i + 1, j)).or_default().push(1);
        }
        if !set.contains(&(i, j + 1)) {
            out.entry((i + 1, j + 1)).or_default().push(2);
        }
        if !set.contains(&(i - 1, j)) {
            out.entry((i, j + 1)).or_default().push(3);
        }
    }
    let mut loops = Vec::new();
    while let Some((&start, dirs)) = out.iter().next() {
        let mut dir = dirs[0];
        let mut v = start;
        let mut lp = Vec::new();
        loop {
            take(&mut out, v, dir);
            lp.push(Complex::new(v.0 as f64 * delta, v.1 as f64 * delta));
            v = (v.0 + STEP[dir].0, v.1 + STEP[dir].1);
            let Some(avail) = out.get(&v) else { break };
            // prefer left turns so squares touching at a corner stay separate loops
            dir = [(dir + 1) % 4, dir, (dir + 3) % 4]
                .into_iter()
                .find(|d| avail.contains(d))
                .unwrap_or(avail[0]);
        }
        loops.push(lp);
    }
    loops
}

fn take(out: &mut BTreeMap<(i64, i64), Vec<usize>>, v: (i64, i64), dir: usize) {
    if let Some(list) = out.get_mut(&v) {
        list.retain(|&d| d != dir);
        if list.is_empty() {
            out.remove(&v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_cover() {
        let s = CompactSetSpec::points(vec![Complex::new(0.0, 0.0)]);
        let k = square_cover(&s, 1.0).unwrap();
        assert_eq!(k.squares.len(), 4);
        assert_eq!(k.boundary.len(), 1);
        assert!((k.boundary_length() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn outer_loop_is_counter_clockwise() {
        let k = square_cover(&CompactSetSpec::unit_disk(), 0.5).unwrap();
        let mut area = 0.0;
        for (a, b) in k.edges() {
            area += a.re * b.im - b.re * a.im;
        }
        assert!(area > 0.0);
        assert!((0.5 * area - k.squares.len() as f64 * 0.25).abs() < 1e-12);
    }

    #[test]
    fn annulus_has_hole_loop() {
        // the 1/4-neighbourhood of a square outline leaves a hole in the middle
        let v = vec![
            Complex::new(0.0, 0.0),
            Complex::new(4.0, 0.0),
            Complex::new(4.0, 4.0),
            Complex::new(0.0, 4.0),
        ];
        let k = square_cover(&CompactSetSpec::polygon(v, false), 1.0).unwrap();
        assert_eq!(k.boundary.len(), 2);
        let signed: Vec<f64> = k
            .boundary
            .iter()
            .map(|lp| {
                (0..lp.len())
                    .map(|i| {
                        let (a, b) = (lp[i], lp[(i + 1) % lp.len()]);
                        a.re * b.im - b.re * a.im
                    })
                    .sum()
            })
            .collect();
        assert!(signed.iter().any(|&a| a > 0.0) && signed.iter().any(|&a| a < 0.0));
    }
}
