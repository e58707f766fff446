use std::f64::consts::PI;

use crate::Complex;

/// A primitive piece of a set, in world coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Point(Complex),
    Disk { center: Complex, radius: f64 },
    Segment { a: Complex, b: Complex },
    Polygon { vertices: Vec<Complex>, filled: bool },
}

/// Share of uniform spacing blended into cosine-graded lines; keeps end gaps above the
/// deduplication threshold.
const GRADE_MIX: f64 = 0.05;

/// Parametrized piece of curve; `point(s)` for `s ∈ [0, 1]`.
#[derive(Clone, Debug)]
pub(crate) enum Curve {
    Single(Complex),
    Arc {
        center: Complex,
        radius: f64,
        theta0: f64,
        sweep: f64,
    },
    /// Closed full circle; the endpoint `s = 1` is not sampled.
    Circle { center: Complex, radius: f64 },
    Line { a: Complex, b: Complex, graded: bool },
}

impl Curve {
    pub(crate) fn point(&self, s: f64) -> Complex {
        match *self {
            Curve::Single(z) => z,
            Curve::Arc {
                center,
                radius,
                theta0,
                sweep,
            } => center + Complex::from_polar(radius, theta0 + sweep * s),
            Curve::Circle { center, radius } => center + Complex::from_polar(radius, 2.0 * PI * s),
            Curve::Line { a, b, graded } => {
                let u = if graded {
                    (1.0 - GRADE_MIX) * 0.5 * (1.0 - (PI * s).cos()) + GRADE_MIX * s
                } else {
                    s
                };
                a + (b - a) * u
            }
        }
    }

    pub(crate) fn length(&self) -> f64 {
        match *self {
            Curve::Single(_) => 0.0,
            Curve::Arc { radius, sweep, .. } => radius * sweep.abs(),
            Curve::Circle { radius, .. } => 2.0 * PI * radius,
            Curve::Line { a, b, .. } => (b - a).norm(),
        }
    }

    /// Parameter values with max gap ≤ `res` along the curve.
    pub(crate) fn parameters(&self, res: f64) -> Vec<f64> {
        let len = self.length();
        match self {
            Curve::Single(_) => vec![0.0],
            Curve::Circle { .. } => {
                let n = intervals(len, res).max(8);
                (0..n).map(|k| k as f64 / n as f64).collect()
            }
            Curve::Line { graded: true, .. } => {
                // widest gap is at the middle, narrowest at the ends (≈ GRADE_MIX·res)
                let n = even(intervals(len * ((1.0 - GRADE_MIX) * PI / 2.0 + GRADE_MIX), res).max(2));
                (0..=n).map(|k| k as f64 / n as f64).collect()
            }
            _ => {
                let n = even(intervals(len, res).max(2));
                (0..=n).map(|k| k as f64 / n as f64).collect()
            }
        }
    }
}

fn intervals(len: f64, res: f64) -> usize {
    ((len / res) - 1e-9).ceil().max(1.0) as usize
}

fn even(n: usize) -> usize {
    n + n % 2
}

pub(crate) fn dist_point_segment(z: Complex, a: Complex, b: Complex) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let s = (((z - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (z - (a + d * s)).norm()
}

/// Even-odd rule; points on an edge may land on either side.
pub(crate) fn point_in_polygon(z: Complex, v: &[Complex]) -> bool {
    let mut inside = false;
    let n = v.len();
    let mut j = n - 1;
    for i in 0..n {
        let (vi, vj) = (v[i], v[j]);
        if (vi.im > z.im) != (vj.im > z.im) {
            let x = vj.re + (z.im - vj.im) * (vi.re - vj.re) / (vi.im - vj.im);
            if z.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn cross(a: Complex, b: Complex) -> f64 {
    a.re * b.im - a.im * b.re
}

pub(crate) fn segments_intersect(p1: Complex, p2: Complex, q1: Complex, q2: Complex) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Complex, b: Complex, p: Complex| dist_point_segment(p, a, b) == 0.0;
    on(q1, q2, p1) || on(q1, q2, p2) || on(p1, p2, q1) || on(p1, p2, q2)
}

fn dist_segment_segment(p1: Complex, p2: Complex, q1: Complex, q2: Complex) -> f64 {
    if segments_intersect(p1, p2, q1, q2) {
        return 0.0;
    }
    dist_point_segment(p1, q1, q2)
        .min(dist_point_segment(p2, q1, q2))
        .min(dist_point_segment(q1, p1, p2))
        .min(dist_point_segment(q2, p1, p2))
}

/// Axis-aligned closed rectangle `[x0,x1]×[y0,y1]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn corners(&self) -> [Complex; 4] {
        [
            Complex::new(self.x0, self.y0),
            Complex::new(self.x1, self.y0),
            Complex::new(self.x1, self.y1),
            Complex::new(self.x0, self.y1),
        ]
    }

    fn edges(&self) -> [(Complex, Complex); 4] {
        let c = self.corners();
        [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]
    }

    fn dist_point(&self, z: Complex) -> f64 {
        let dx = (self.x0 - z.re).max(0.0).max(z.re - self.x1);
        let dy = (self.y0 - z.im).max(0.0).max(z.im - self.y1);
        dx.hypot(dy)
    }

    fn dist_segment(&self, a: Complex, b: Complex) -> f64 {
        if self.dist_point(a) == 0.0 || self.dist_point(b) == 0.0 {
            return 0.0;
        }
        self.edges()
            .iter()
            .map(|&(p, q)| dist_segment_segment(a, b, p, q))
            .fold(f64::INFINITY, f64::min)
    }
}

impl Atom {
    pub fn distance(&self, z: Complex) -> f64 {
        match self {
            Atom::Point(p) => (z - p).norm(),
            Atom::Disk { center, radius } => ((z - center).norm() - radius).max(0.0),
            Atom::Segment { a, b } => dist_point_segment(z, *a, *b),
            Atom::Polygon { vertices, filled } => {
                if *filled && point_in_polygon(z, vertices) {
                    return 0.0;
                }
                polygon_edges(vertices)
                    .map(|(a, b)| dist_point_segment(z, a, b))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// True when `z` lies in the interior of the atom, at least `tol` from its boundary.
    pub(crate) fn strictly_contains(&self, z: Complex, tol: f64) -> bool {
        match self {
            Atom::Disk { center, radius } => (z - center).norm() < radius - tol,
            Atom::Polygon {
                vertices,
                filled: true,
            } => {
                point_in_polygon(z, vertices)
                    && polygon_edges(vertices).all(|(a, b)| dist_point_segment(z, a, b) > tol)
            }
            _ => false,
        }
    }

    pub(crate) fn dist_rect(&self, r: &Rect) -> f64 {
        match self {
            Atom::Point(p) => r.dist_point(*p),
            Atom::Disk { center, radius } => (r.dist_point(*center) - radius).max(0.0),
            Atom::Segment { a, b } => r.dist_segment(*a, *b),
            Atom::Polygon { vertices, filled } => {
                if *filled && r.corners().iter().any(|&c| point_in_polygon(c, vertices)) {
                    return 0.0;
                }
                polygon_edges(vertices)
                    .map(|(a, b)| r.dist_segment(a, b))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Points whose convex hull, widened by the radii, contains the atom.
    pub(crate) fn generators(&self) -> Vec<(Complex, f64)> {
        match self {
            Atom::Point(p) => vec![(*p, 0.0)],
            Atom::Disk { center, radius } => vec![(*center, *radius)],
            Atom::Segment { a, b } => vec![(*a, 0.0), (*b, 0.0)],
            Atom::Polygon { vertices, .. } => vertices.iter().map(|&v| (v, 0.0)).collect(),
        }
    }

    /// Smallest length scale the atom resolves; infinite for a single point.
    pub(crate) fn feature_size(&self) -> f64 {
        match self {
            Atom::Point(_) => f64::INFINITY,
            Atom::Disk { radius, .. } => 2.0 * radius,
            Atom::Segment { a, b } => (b - a).norm(),
            Atom::Polygon { vertices, .. } => polygon_edges(vertices)
                .map(|(a, b)| (b - a).norm())
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub(crate) fn boundary_curves(&self) -> Vec<Curve> {
        match self {
            Atom::Point(p) => vec![Curve::Single(*p)],
            Atom::Disk { center, radius } => vec![Curve::Circle {
                center: *center,
                radius: *radius,
            }],
            Atom::Segment { a, b } => vec![Curve::Line {
                a: *a,
                b: *b,
                graded: true,
            }],
            Atom::Polygon { vertices, .. } => polygon_edges(vertices)
                .map(|(a, b)| Curve::Line { a, b, graded: true })
                .collect(),
        }
    }

    /// Curves covering `{z : dist(z, atom) = t}`, possibly with extra points closer to other atoms.
    pub(crate) fn offset_curves(&self, t: f64) -> Vec<Curve> {
        match self {
            Atom::Point(p) => vec![Curve::Circle {
                center: *p,
                radius: t,
            }],
            Atom::Disk { center, radius } => vec![Curve::Circle {
                center: *center,
                radius: radius + t,
            }],
            Atom::Segment { a, b } => stadium(*a, *b, t),
            Atom::Polygon { vertices, .. } => polygon_edges(vertices)
                .flat_map(|(a, b)| stadium(a, b, t))
                .collect(),
        }
    }

    pub(crate) fn map(&self, a: Complex, b: Complex) -> Atom {
        let f = |z: Complex| a * z + b;
        match self {
            Atom::Point(p) => Atom::Point(f(*p)),
            Atom::Disk { center, radius } => Atom::Disk {
                center: f(*center),
                radius: radius * a.norm(),
            },
            Atom::Segment { a: p, b: q } => Atom::Segment { a: f(*p), b: f(*q) },
            Atom::Polygon { vertices, filled } => Atom::Polygon {
                vertices: vertices.iter().map(|&v| f(v)).collect(),
                filled: *filled,
            },
        }
    }
}

pub(crate) fn polygon_edges(v: &[Complex]) -> impl Iterator<Item = (Complex, Complex)> + '_ {
    (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
}

/// Boundary of the t-neighborhood of a segment, counter-clockwise.
fn stadium(a: Complex, b: Complex, t: f64) -> Vec<Curve> {
    let len = (b - a).norm();
    if len == 0.0 {
        return vec![Curve::Circle { center: a, radius: t }];
    }
    let u = (b - a) / len;
    let nrm = Complex::i() * u;
    let phi = nrm.arg();
    vec![
        Curve::Line {
            a: a - nrm * t,
            b: b - nrm * t,
            graded: false,
        },
        Curve::Arc {
            center: b,
            radius: t,
            theta0: phi - PI,
            sweep: PI,
        },
        Curve::Line {
            a: b + nrm * t,
            b: a + nrm * t,
            graded: false,
        },
        Curve::Arc {
            center: a,
            radius: t,
            theta0: phi,
            sweep: PI,
        },
    ]
}
