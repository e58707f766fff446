use std::f64::consts::PI;

use super::atom::Atom;
use crate::{Complex, Error, Result};

/// Closed-form Green's function attached to a set description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleTag {
    Disk,
    Joukowski,
    StarPullback,
    TangentDisks,
}

impl OracleTag {
    pub fn name(self) -> &'static str {
        match self {
            OracleTag::Disk => "disk",
            OracleTag::Joukowski => "joukowski",
            OracleTag::StarPullback => "star-pullback",
            OracleTag::TangentDisks => "tangent-disks",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "disk" => OracleTag::Disk,
            "joukowski" => OracleTag::Joukowski,
            "star-pullback" => OracleTag::StarPullback,
            "tangent-disks" => OracleTag::TangentDisks,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SetKind {
    Disk { center: Complex, radius: f64 },
    Segment { a: Complex, b: Complex },
    /// `{r·e^{2πij/n} : 0 ≤ r ≤ 1, j = 1..n}`.
    Star { n: u32 },
    Polygon { vertices: Vec<Complex>, filled: bool },
    /// Explicitly flagged finite point set.
    Points { points: Vec<Complex> },
    /// Image of `inner` under `z ↦ a·z + b`.
    Affine {
        a: Complex,
        b: Complex,
        inner: Box<CompactSetSpec>,
    },
    Union { members: Vec<CompactSetSpec> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompactSetSpec {
    pub kind: SetKind,
    pub oracle: Option<OracleTag>,
}

impl CompactSetSpec {
    pub fn new(kind: SetKind, oracle: Option<OracleTag>) -> Result<Self> {
        let spec = Self { kind, oracle };
        spec.validate()?;
        Ok(spec)
    }

    pub fn disk(center: Complex, radius: f64) -> Self {
        Self {
            kind: SetKind::Disk { center, radius },
            oracle: Some(OracleTag::Disk),
        }
    }

    pub fn unit_disk() -> Self {
        Self::disk(Complex::new(0.0, 0.0), 1.0)
    }

    pub fn segment(a: Complex, b: Complex) -> Self {
        Self {
            kind: SetKind::Segment { a, b },
            oracle: Some(OracleTag::Joukowski),
        }
    }

    /// Real interval `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Self {
        Self::segment(Complex::new(a, 0.0), Complex::new(b, 0.0))
    }

    pub fn star(n: u32) -> Self {
        Self {
            kind: SetKind::Star { n },
            oracle: Some(OracleTag::StarPullback),
        }
    }

    pub fn polygon(vertices: Vec<Complex>, filled: bool) -> Self {
        Self {
            kind: SetKind::Polygon { vertices, filled },
            oracle: None,
        }
    }

    pub fn points(points: Vec<Complex>) -> Self {
        Self {
            kind: SetKind::Points { points },
            oracle: None,
        }
    }

    /// The two closed unit disks centred at ±1, tangent at the origin.
    pub fn tangent_disks() -> Self {
        Self {
            kind: SetKind::Union {
                members: vec![
                    Self::disk(Complex::new(-1.0, 0.0), 1.0),
                    Self::disk(Complex::new(1.0, 0.0), 1.0),
                ],
            },
            oracle: Some(OracleTag::TangentDisks),
        }
    }

    pub fn union(members: Vec<CompactSetSpec>) -> Self {
        Self {
            kind: SetKind::Union { members },
            oracle: None,
        }
    }

    /// Image under `z ↦ a·z + b`; an oracle of `inner` carries over.
    pub fn affine(a: Complex, b: Complex, inner: CompactSetSpec) -> Self {
        let oracle = inner.oracle;
        Self {
            kind: SetKind::Affine {
                a,
                b,
                inner: Box::new(inner),
            },
            oracle,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::DegenerateSet(m));
        match &self.kind {
            SetKind::Disk { radius, center } => {
                if !(radius.is_finite() && *radius > 0.0) || !finite(*center) {
                    return bad(format!("disk radius must be positive, got {radius}"));
                }
            }
            SetKind::Segment { a, b } => {
                if !(finite(*a) && finite(*b)) || a == b {
                    return bad("segment endpoints must be distinct and finite".into());
                }
            }
            SetKind::Star { n } => {
                if *n < 2 {
                    return bad(format!("star needs n >= 2, got {n}"));
                }
            }
            SetKind::Polygon { vertices, .. } => {
                if vertices.len() < 3 || !vertices.iter().all(|&v| finite(v)) {
                    return bad("polygon needs at least 3 finite vertices".into());
                }
            }
            SetKind::Points { points } => {
                if points.is_empty() || !points.iter().all(|&v| finite(v)) {
                    return bad("point set must be nonempty and finite".into());
                }
            }
            SetKind::Affine { a, b, inner } => {
                if a.norm() == 0.0 || !finite(*a) || !finite(*b) {
                    return bad("affine map needs finite a != 0".into());
                }
                inner.validate()?;
            }
            SetKind::Union { members } => {
                if members.is_empty() {
                    return bad("empty union".into());
                }
                for m in members {
                    m.validate()?;
                }
            }
        }
        if let Some(tag) = self.oracle {
            let ok = match (&self.kind, tag) {
                (SetKind::Affine { inner, .. }, _) => inner.oracle == Some(tag),
                (SetKind::Disk { .. }, OracleTag::Disk) => true,
                (SetKind::Segment { .. }, OracleTag::Joukowski) => true,
                (SetKind::Star { .. }, OracleTag::StarPullback) => true,
                (SetKind::Union { .. }, OracleTag::TangentDisks) => {
                    self.atoms() == CompactSetSpec::tangent_disks().atoms()
                }
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "oracle `{}` does not describe this set",
                    tag.name()
                )));
            }
        }
        Ok(())
    }

    /// Primitive pieces in world coordinates.
    pub fn atoms(&self) -> Vec<Atom> {
        match &self.kind {
            SetKind::Disk { center, radius } => vec![Atom::Disk {
                center: *center,
                radius: *radius,
            }],
            SetKind::Segment { a, b } => vec![Atom::Segment { a: *a, b: *b }],
            SetKind::Star { n } => (1..=*n)
                .map(|j| Atom::Segment {
                    a: Complex::new(0.0, 0.0),
                    b: Complex::from_polar(1.0, 2.0 * PI * j as f64 / *n as f64),
                })
                .collect(),
            SetKind::Polygon { vertices, filled } => vec![Atom::Polygon {
                vertices: vertices.clone(),
                filled: *filled,
            }],
            SetKind::Points { points } => points.iter().map(|&p| Atom::Point(p)).collect(),
            SetKind::Affine { a, b, inner } => {
                inner.atoms().iter().map(|at| at.map(*a, *b)).collect()
            }
            SetKind::Union { members } => members.iter().flat_map(|m| m.atoms()).collect(),
        }
    }

    pub fn distance(&self, z: Complex) -> f64 {
        distance(self, z)
    }

    pub fn diameter(&self) -> f64 {
        let g: Vec<(Complex, f64)> = self.atoms().iter().flat_map(|a| a.generators()).collect();
        let mut d: f64 = 0.0;
        for (i, &(p, r)) in g.iter().enumerate() {
            for &(q, s) in &g[i..] {
                d = d.max((p - q).norm() + r + s);
            }
        }
        d
    }

    /// `[xmin, xmax, ymin, ymax]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        let mut bb = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for (c, r) in self.atoms().iter().flat_map(|a| a.generators()) {
            bb[0] = bb[0].min(c.re - r);
            bb[1] = bb[1].max(c.re + r);
            bb[2] = bb[2].min(c.im - r);
            bb[3] = bb[3].max(c.im + r);
        }
        bb
    }

    pub fn centroid(&self) -> Complex {
        let bb = self.bounding_box();
        Complex::new(0.5 * (bb[0] + bb[1]), 0.5 * (bb[2] + bb[3]))
    }

    pub fn feature_size(&self) -> f64 {
        let atoms = self.atoms();
        let mut f = atoms.iter().map(|a| a.feature_size()).fold(f64::INFINITY, f64::min);
        let pts: Vec<Complex> = atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Point(p) => Some(*p),
                _ => None,
            })
            .collect();
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                f = f.min((p - q).norm());
            }
        }
        f
    }

    /// Finite point sets: polynomials of degree ≥ count − 1 interpolate anything.
    pub fn finite_points(&self) -> Option<Vec<Complex>> {
        let atoms = self.atoms();
        let mut pts = Vec::new();
        for a in &atoms {
            match a {
                Atom::Point(p) => {
                    if !pts.contains(p) {
                        pts.push(*p)
                    }
                }
                _ => return None,
            }
        }
        Some(pts)
    }

    /// False for boundary-only polygons, whose hull is strictly larger.
    pub fn is_polynomially_convex(&self) -> bool {
        !self
            .atoms()
            .iter()
            .any(|a| matches!(a, Atom::Polygon { filled: false, .. }))
    }

    /// Stable textual fingerprint; `{:?}` on floats round-trips exactly.
    pub fn fingerprint(&self) -> String {
        format!("{self:?}")
    }
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Euclidean distance from `z` to the set.
pub fn distance(spec: &CompactSetSpec, z: Complex) -> f64 {
    match &spec.kind {
        SetKind::Affine { a, b, inner } => a.norm() * distance(inner, (z - b) / a),
        _ => spec
            .atoms()
            .iter()
            .map(|a| a.distance(z))
            .fold(f64::INFINITY, f64::min),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(CompactSetSpec::unit_disk().distance(c(2.0, 0.0)), 1.0);
        assert_eq!(CompactSetSpec::interval(-1.0, 1.0).distance(c(0.0, 1.0)), 1.0);
        let z = Complex::from_polar(0.5, PI / 4.0);
        let d = CompactSetSpec::star(4).distance(z);
        // brute force over a dense sampling of the four arms
        let mut brute = f64::INFINITY;
        for j in 1..=4 {
            let tip = Complex::from_polar(1.0, 2.0 * PI * j as f64 / 4.0);
            for k in 0..=100_000 {
                brute = brute.min((z - tip * (k as f64 / 1e5)).norm());
            }
        }
        assert!((d - brute).abs() < 1e-9);
        assert!((d - 0.5 * (PI / 4.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn diameters() {
        assert_eq!(CompactSetSpec::unit_disk().diameter(), 2.0);
        assert!((CompactSetSpec::star(4).diameter() - 2.0).abs() < 1e-15);
        let d3 = CompactSetSpec::star(3).diameter();
        assert!((d3 - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(CompactSetSpec::tangent_disks().diameter(), 4.0);
        let u = CompactSetSpec::union(vec![
            CompactSetSpec::disk(c(-2.0, 0.0), 1.0),
            CompactSetSpec::disk(c(2.0, 0.0), 1.0),
        ]);
        assert_eq!(u.diameter(), 6.0);
    }

    #[test]
    fn validation() {
        assert!(CompactSetSpec::union(vec![]).validate().is_err());
        assert!(CompactSetSpec::new(
            SetKind::Disk {
                center: c(0.0, 0.0),
                radius: 0.0
            },
            None
        )
        .is_err());
        let mut s = CompactSetSpec::unit_disk();
        s.oracle = Some(OracleTag::Joukowski);
        assert!(s.validate().is_err());
        assert!(CompactSetSpec::tangent_disks().validate().is_ok());
    }

    #[test]
    fn affine_distance_scales() {
        let a = Complex::from_polar(2.0, PI / 7.0);
        let b = c(1.0, 1.0);
        let s = CompactSetSpec::affine(a, b, CompactSetSpec::unit_disk());
        assert!((s.distance(b + a * 3.0) - 4.0).abs() < 1e-12);
        // atoms and recursive distance agree
        let z = c(0.3, -2.0);
        let via_atoms = s.atoms()[0].distance(z);
        assert!((s.distance(z) - via_atoms).abs() < 1e-12);
    }
}
