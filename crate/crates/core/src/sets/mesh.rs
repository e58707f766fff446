use std::collections::HashMap;

use super::atom::{Atom, Curve};
use super::spec::CompactSetSpec;
use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeshRole {
    InteriorFill,
    Boundary,
    /// `dE_t = {z : dist(z, E) = t}`.
    Shell(f64),
    /// `E_δ = {z : dist(z, E) ≤ δ}`.
    Neighborhood(f64),
}

impl MeshRole {
    pub fn name(&self) -> &'static str {
        match self {
            MeshRole::InteriorFill => "interior",
            MeshRole::Boundary => "boundary",
            MeshRole::Shell(_) => "shell",
            MeshRole::Neighborhood(_) => "neighborhood",
        }
    }

    /// The shell distance or neighborhood radius; 0 otherwise.
    pub fn parameter(&self) -> f64 {
        match *self {
            MeshRole::Shell(t) | MeshRole::Neighborhood(t) => t,
            _ => 0.0,
        }
    }
}

/// A deterministic point cloud sampling some part of a set.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub points: Vec<Complex>,
    pub role: MeshRole,
    pub resolution: f64,
    pub parent: CompactSetSpec,
    /// The resolution is coarser than the set's smallest feature.
    pub coarse_warning: bool,
}

impl Mesh {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Max of `|f|` over the mesh.
    pub fn sup_norm<F: Fn(Complex) -> f64>(&self, f: F) -> f64 {
        self.points.iter().map(|&z| f(z)).fold(0.0, f64::max)
    }

    /// Concatenation of two meshes of the same kind, deduplicated; the parent is the union.
    pub fn merged(&self, other: &Mesh) -> Mesh {
        let parent = CompactSetSpec::union(vec![self.parent.clone(), other.parent.clone()]);
        let res = self.resolution.min(other.resolution);
        let mut pts = self.points.clone();
        pts.extend_from_slice(&other.points);
        Mesh {
            points: dedup(pts, res / 100.0),
            role: self.role,
            resolution: res,
            parent,
            coarse_warning: self.coarse_warning || other.coarse_warning,
        }
    }
}

/// Build a mesh of the given role; identical inputs give identical point lists.
pub fn build_mesh(spec: &CompactSetSpec, role: MeshRole, resolution: f64) -> Result<Mesh> {
    spec.validate()?;
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let atoms = spec.atoms();
    let points = match role {
        MeshRole::Boundary => boundary_points(&atoms, resolution),
        MeshRole::Shell(t) => {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidArgument(format!("shell needs t > 0, got {t}")));
            }
            shell_points(spec, &atoms, t, resolution)
        }
        MeshRole::InteriorFill => {
            let mut pts = grid_points(spec, 0.0, resolution, |d| d == 0.0);
            pts.extend(boundary_points(&atoms, resolution));
            pts
        }
        MeshRole::Neighborhood(delta) => {
            if !(delta.is_finite() && delta > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "neighborhood needs delta > 0, got {delta}"
                )));
            }
            let mut pts = grid_points(spec, delta, resolution, |d| d <= delta);
            pts.extend(boundary_points(&atoms, resolution));
            pts.extend(shell_points(spec, &atoms, delta, resolution));
            pts
        }
    };
    // sub-resolution features keep their own points; they are flagged instead
    let points = dedup(points, resolution.min(spec.feature_size()) / 100.0);
    Ok(Mesh {
        points,
        role,
        resolution,
        parent: spec.clone(),
        coarse_warning: resolution > spec.feature_size(),
    })
}

fn boundary_points(atoms: &[Atom], res: f64) -> Vec<Complex> {
    let mut out = Vec::new();
    for (i, atom) in atoms.iter().enumerate() {
        for curve in atom.boundary_curves() {
            for s in curve.parameters(res) {
                let z = curve.point(s);
                let hidden = atoms
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.strictly_contains(z, res / 10.0));
                if !hidden {
                    out.push(z);
                }
            }
        }
    }
    out
}

fn shell_points(spec: &CompactSetSpec, atoms: &[Atom], t: f64, res: f64) -> Vec<Complex> {
    let tol = 1e-9 * (1.0 + t);
    let keep = |z: Complex| spec.distance(z) >= t - tol;
    let mut out = Vec::new();
    for atom in atoms {
        for curve in atom.offset_curves(t) {
            let params = curve.parameters(res);
            let flags: Vec<bool> = params.iter().map(|&s| keep(curve.point(s))).collect();
            for k in 0..params.len() {
                if flags[k] {
                    out.push(curve.point(params[k]));
                }
                // closed circles wrap around; other curves stop at the last sample
                let next = match curve {
                    Curve::Circle { .. } => Some(((k + 1) % params.len(), 1.0)),
                    _ if k + 1 < params.len() => Some((k + 1, params[k + 1])),
                    _ => None,
                };
                if let Some((k2, s2)) = next {
                    if flags[k] != flags[k2] {
                        out.push(junction(&curve, params[k], s2, flags[k], &keep));
                    }
                }
            }
        }
    }
    out
}

/// Bisect along the curve for the last kept point between a kept and a dropped sample.
fn junction<F: Fn(Complex) -> bool>(
    curve: &Curve,
    s0: f64,
    s1: f64,
    first_kept: bool,
    keep: &F,
) -> Complex {
    let (mut lo, mut hi) = if first_kept { (s0, s1) } else { (s1, s0) };
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if keep(curve.point(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    curve.point(lo)
}

fn grid_points<F: Fn(f64) -> bool>(
    spec: &CompactSetSpec,
    margin: f64,
    res: f64,
    accept: F,
) -> Vec<Complex> {
    let bb = spec.bounding_box();
    let i0 = ((bb[0] - margin) / res).floor() as i64;
    let i1 = ((bb[1] + margin) / res).ceil() as i64;
    let j0 = ((bb[2] - margin) / res).floor() as i64;
    let j1 = ((bb[3] + margin) / res).ceil() as i64;
    let mut out = Vec::new();
    for j in j0..=j1 {
        for i in i0..=i1 {
            let z = Complex::new(i as f64 * res, j as f64 * res);
            if accept(spec.distance(z)) {
                out.push(z);
            }
        }
    }
    out
}

/// Drop points within `eps` of an earlier point, preserving order.
pub(crate) fn dedup(points: Vec<Complex>, eps: f64) -> Vec<Complex> {
    let key = |z: Complex| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<Complex>> = HashMap::new();
    let mut out = Vec::with_capacity(points.len());
    for z in points {
        let (i, j) = key(z);
        let mut dup = false;
        'search: for di in -1..=1 {
            for dj in -1..=1 {
                if let Some(list) = cells.get(&(i + di, j + dj)) {
                    if list.iter().any(|w| (w - z).norm() < eps) {
                        dup = true;
                        break 'search;
                    }
                }
            }
        }
        if !dup {
            cells.entry((i, j)).or_default().push(z);
            out.push(z);
        }
    }
    out
}
