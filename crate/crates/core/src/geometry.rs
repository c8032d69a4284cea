//! Planar primitives used by the sensors, the planners and the auditors.
//!
//! Angles handed to the planners are *compass* angles: 0° points along +y
//! and angles grow clockwise, so 90° is +x. Polygons are stored
//! counterclockwise, which puts the outward normal of edge `a -> b` on its
//! right-hand side.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance (meters) for on-boundary and intersection degeneracy tests.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate segment ({0}) - ({1})")]
    DegenerateSegment(Point2, Point2),
    #[error("ray origin {0} lies inside obstacle {1}")]
    OriginInsideObstacle(Point2, usize),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(PolygonDefect),
    #[error("offset distance {0} must be non-negative and finite")]
    NegativeOffset(f64),
    #[error("offset by {0} m collapses or self-intersects the polygon")]
    OffsetTooLarge(f64),
    #[error("{0}° is not one of the eight lattice directions")]
    NotLatticeDirection(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn minus(self, other: Point2) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }

    pub fn offset(self, dx: f64, dy: f64) -> Point2 {
        Point2::new(self.x + dx, self.y + dy)
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

/// Twice the signed area of triangle `a b c`; positive when counterclockwise.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    cross(b.minus(a), c.minus(a))
}

/// Heading measured clockwise from north, normalized to `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CompassAngle(f64);

impl CompassAngle {
    /// The eight planner headings in sensor order `I_1 .. I_8`.
    pub const LATTICE: [CompassAngle; 8] = [
        CompassAngle(0.0),
        CompassAngle(45.0),
        CompassAngle(90.0),
        CompassAngle(135.0),
        CompassAngle(180.0),
        CompassAngle(225.0),
        CompassAngle(270.0),
        CompassAngle(315.0),
    ];

    pub fn new(degrees: f64) -> Self {
        let mut d = degrees.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        if d >= 360.0 {
            d = 0.0;
        }
        Self(d)
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    /// Unit vector `(dx, dy)` in world coordinates.
    pub fn unit(self) -> (f64, f64) {
        let r = self.0.to_radians();
        (r.sin(), r.cos())
    }

    pub fn opposite(self) -> Self {
        Self::new(self.0 + 180.0)
    }

    /// Position of this heading in [`Self::LATTICE`], if it is one of them.
    pub fn lattice_index(self) -> Option<usize> {
        Self::LATTICE
            .iter()
            .position(|l| circular_diff(*l, self) <= 1e-9)
    }

    /// Compass heading of the vector `(dx, dy)`.
    pub fn of_vector(dx: f64, dy: f64) -> Self {
        math_to_compass(dy.atan2(dx).to_degrees())
    }
}

impl fmt::Display for CompassAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.0)
    }
}

/// Smallest angle between two headings, in `[0, 180]`.
pub fn circular_diff(a: CompassAngle, b: CompassAngle) -> f64 {
    let d = (a.0 - b.0).abs();
    d.min(360.0 - d)
}

/// Converts a counterclockwise-from-+x angle into a compass heading.
pub fn math_to_compass(math_degrees: f64) -> CompassAngle {
    CompassAngle::new(90.0 - math_degrees)
}

/// Inverse of [`math_to_compass`], normalized to `[0, 360)`.
pub fn compass_to_math(angle: CompassAngle) -> f64 {
    (90.0 - angle.0).rem_euclid(360.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection {
    /// Single crossing or touching point.
    Point(Point2),
    /// The segments are collinear and share the sub-segment between these points.
    Collinear(Point2, Point2),
}

/// Intersection of closed segments `a1-a2` and `b1-b2`.
pub fn segment_intersection(
    a1: Point2,
    a2: Point2,
    b1: Point2,
    b2: Point2,
) -> Result<Option<SegmentIntersection>, GeometryError> {
    let r = a2.minus(a1);
    let s = b2.minus(b1);
    let r_len = r.0.hypot(r.1);
    let s_len = s.0.hypot(s.1);
    if r_len <= EPS_GEOM {
        return Err(GeometryError::DegenerateSegment(a1, a2));
    }
    if s_len <= EPS_GEOM {
        return Err(GeometryError::DegenerateSegment(b1, b2));
    }
    let qp = b1.minus(a1);
    let denom = cross(r, s);

    if denom.abs() <= EPS_GEOM * r_len * s_len {
        // parallel: collinear only if b1 sits on the line through a
        if (cross(qp, r) / r_len).abs() > EPS_GEOM {
            return Ok(None);
        }
        let rr = dot(r, r);
        let t0 = dot(qp, r) / rr;
        let t1 = dot(b2.minus(a1), r) / rr;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        let tol = EPS_GEOM / r_len;
        if lo > hi + tol {
            return Ok(None);
        }
        if hi - lo <= tol {
            return Ok(Some(SegmentIntersection::Point(a1.lerp(a2, lo.min(1.0)))));
        }
        return Ok(Some(SegmentIntersection::Collinear(
            a1.lerp(a2, lo),
            a1.lerp(a2, hi),
        )));
    }

    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    let tol_t = EPS_GEOM / r_len;
    let tol_u = EPS_GEOM / s_len;
    if t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u {
        return Ok(None);
    }
    Ok(Some(SegmentIntersection::Point(
        a1.lerp(a2, t.clamp(0.0, 1.0)),
    )))
}

/// Distance from `p` to the closed segment `a-b`, and the closest point.
pub fn closest_point_on_segment(p: Point2, a: Point2, b: Point2) -> (f64, Point2) {
    let ab = b.minus(a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return (p.distance(a), a);
    }
    let t = (dot(p.minus(a), ab) / len2).clamp(0.0, 1.0);
    let q = a.lerp(b, t);
    (p.distance(q), q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    OnBoundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonDefect {
    #[error("fewer than 3 vertices")]
    TooFewVertices,
    #[error("non-finite vertex coordinate")]
    NonFinite,
    #[error("zero or negative area")]
    Degenerate,
    #[error("vertices are ordered clockwise")]
    Clockwise,
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
}

/// Simple polygon with counterclockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Builds a validated polygon. Clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.len() >= 3 && signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let poly = Self { vertices };
        match poly.defects().into_iter().next() {
            Some(defect) => Err(GeometryError::InvalidPolygon(defect)),
            None => Ok(poly),
        }
    }

    /// Wraps vertices without validation; [`Polygon::defects`] reports problems.
    pub fn new_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    /// Axis-aligned rectangle from two opposite corners.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let (xa, xb) = (x0.min(x1), x0.max(x1));
        let (ya, yb) = (y0.min(y1), y0.max(y1));
        Self::new_unchecked(vec![
            Point2::new(xa, ya),
            Point2::new(xb, ya),
            Point2::new(xb, yb),
            Point2::new(xa, yb),
        ])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs, closing back to the first vertex.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v.offset(dx, dy)).collect(),
        }
    }

    /// Every violated polygon invariant, empty when the polygon is valid.
    pub fn defects(&self) -> Vec<PolygonDefect> {
        let v = &self.vertices;
        if v.len() < 3 {
            return vec![PolygonDefect::TooFewVertices];
        }
        if v.iter().any(|p| !p.is_finite()) {
            return vec![PolygonDefect::NonFinite];
        }
        let mut out = Vec::new();
        let area = signed_area(v);
        if area.abs() <= EPS_GEOM {
            out.push(PolygonDefect::Degenerate);
        } else if area < 0.0 {
            out.push(PolygonDefect::Clockwise);
        }
        if let Some((i, j)) = first_self_intersection(v) {
            out.push(PolygonDefect::SelfIntersecting(i, j));
        }
        out
    }

    pub fn contains(&self, p: Point2) -> Containment {
        point_in_polygon(p, self)
    }

    pub fn edge_len(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        self.vertices[i].distance(self.vertices[(i + 1) % n])
    }
}

fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        / 2.0
}

fn first_self_intersection(v: &[Point2]) -> Option<(usize, usize)> {
    let n = v.len();
    for i in 0..n {
        let (a1, a2) = (v[i], v[(i + 1) % n]);
        if a1.distance(a2) <= EPS_GEOM {
            return Some((i, i));
        }
        for j in (i + 1)..n {
            let (b1, b2) = (v[j], v[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            match segment_intersection(a1, a2, b1, b2) {
                Ok(Some(SegmentIntersection::Collinear(..))) => return Some((i, j)),
                Ok(Some(SegmentIntersection::Point(p))) => {
                    if !adjacent {
                        return Some((i, j));
                    }
                    // adjacent edges may only share their common vertex
                    let shared = if j == i + 1 { a2 } else { a1 };
                    if p.distance(shared) > EPS_GEOM {
                        return Some((i, j));
                    }
                }
                Ok(None) => {}
                Err(_) => return Some((i, j)),
            }
        }
    }
    None
}

/// Classifies `p` against `poly` with an [`EPS_GEOM`] boundary band.
pub fn point_in_polygon(p: Point2, poly: &Polygon) -> Containment {
    let mut inside = false;
    for (a, b) in poly.edges() {
        if closest_point_on_segment(p, a, b).0 <= EPS_GEOM {
            return Containment::OnBoundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    pub distance: f64,
    pub point: Point2,
    /// Index of the obstacle that was hit.
    pub obstacle: usize,
}

/// Nearest obstacle edge hit by a ray of length `max_range`.
pub fn ray_cast<'a, I>(
    origin: Point2,
    dir: CompassAngle,
    max_range: f64,
    obstacles: I,
) -> Result<Option<RayHit>, GeometryError>
where
    I: IntoIterator<Item = &'a Polygon>,
{
    let (ux, uy) = dir.unit();
    let end = origin.offset(ux * max_range, uy * max_range);
    let mut best: Option<RayHit> = None;
    let (rlo, rhi) = (
        Point2::new(origin.x.min(end.x), origin.y.min(end.y)),
        Point2::new(origin.x.max(end.x), origin.y.max(end.y)),
    );
    for (k, poly) in obstacles.into_iter().enumerate() {
        let (lo, hi) = poly.bbox();
        if lo.x > rhi.x || hi.x < rlo.x || lo.y > rhi.y || hi.y < rlo.y {
            continue;
        }
        if point_in_polygon(origin, poly) == Containment::Inside {
            return Err(GeometryError::OriginInsideObstacle(origin, k));
        }
        for (a, b) in poly.edges() {
            let hit = match segment_intersection(origin, end, a, b)? {
                None => continue,
                Some(SegmentIntersection::Point(p)) => p,
                Some(SegmentIntersection::Collinear(p, q)) => {
                    if origin.distance(p) <= origin.distance(q) {
                        p
                    } else {
                        q
                    }
                }
            };
            let distance = origin.distance(hit);
            if best.is_none_or(|b| distance < b.distance) {
                best = Some(RayHit {
                    distance,
                    point: hit,
                    obstacle: k,
                });
            }
        }
    }
    Ok(best)
}

/// True when the closed segment `a-b` touches the closed region of `poly`.
pub fn segment_touches_polygon(a: Point2, b: Point2, poly: &Polygon) -> bool {
    if point_in_polygon(a, poly) != Containment::Outside
        || point_in_polygon(b, poly) != Containment::Outside
    {
        return true;
    }
    if a.distance(b) <= EPS_GEOM {
        return false;
    }
    poly.edges()
        .any(|(p, q)| matches!(segment_intersection(a, b, p, q), Ok(Some(_))))
}

/// Distance from `p` to the closed region of `poly` (zero inside).
pub fn point_polygon_distance(p: Point2, poly: &Polygon) -> f64 {
    if point_in_polygon(p, poly) != Containment::Outside {
        return 0.0;
    }
    poly.edges()
        .map(|(a, b)| closest_point_on_segment(p, a, b).0)
        .fold(f64::INFINITY, f64::min)
}

/// Gap between two closed polygonal regions (zero when they meet).
pub fn polygon_distance(a: &Polygon, b: &Polygon) -> f64 {
    let crossing = a
        .edges()
        .any(|(p, q)| b.edges().any(|(r, s)| matches!(segment_intersection(p, q, r, s), Ok(Some(_)))));
    if crossing {
        return 0.0;
    }
    let one_way = |x: &Polygon, y: &Polygon| {
        x.vertices()
            .iter()
            .map(|&v| point_polygon_distance(v, y))
            .fold(f64::INFINITY, f64::min)
    };
    one_way(a, b).min(one_way(b, a))
}

/// Outward offset of a counterclockwise polygon with mitered joins.
pub fn polygon_offset(poly: &Polygon, c: f64) -> Result<Polygon, GeometryError> {
    if !c.is_finite() || c < 0.0 {
        return Err(GeometryError::NegativeOffset(c));
    }
    if let Some(defect) = poly.defects().into_iter().next() {
        return Err(GeometryError::InvalidPolygon(defect));
    }
    if c == 0.0 {
        return Ok(poly.clone());
    }
    let v = poly.vertices();
    let n = v.len();
    // each edge shifted along its right-hand (outward) normal
    let lines: Vec<(Point2, (f64, f64))> = (0..n)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            let d = b.minus(a);
            let len = d.0.hypot(d.1);
            let normal = (d.1 / len, -d.0 / len);
            (a.offset(normal.0 * c, normal.1 * c), d)
        })
        .collect();

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (p0, d0) = lines[(i + n - 1) % n];
        let (p1, d1) = lines[i];
        let denom = cross(d0, d1);
        let scale = d0.0.hypot(d0.1) * d1.0.hypot(d1.1);
        if denom.abs() <= 1e-12 * scale {
            // collinear neighbours: shift the shared vertex along the normal
            out.push(p1);
        } else {
            let t = cross(p1.minus(p0), d1) / denom;
            out.push(Point2::new(p0.x + d0.0 * t, p0.y + d0.1 * t));
        }
    }

    // an edge that flips direction means the offset swallowed it
    for i in 0..n {
        let orig = v[(i + 1) % n].minus(v[i]);
        let new = out[(i + 1) % n].minus(out[i]);
        if dot(orig, new) <= 0.0 {
            return Err(GeometryError::OffsetTooLarge(c));
        }
    }
    let result = Polygon::new_unchecked(out);
    if !result.defects().is_empty() {
        return Err(GeometryError::OffsetTooLarge(c));
    }
    Ok(result)
}

/// First parameter in `[0, 1]` at which segment `a-b` enters the interior
/// of `poly`. Starting on the boundary and moving outward or along it is
/// not an entry.
pub fn first_entry(a: Point2, b: Point2, poly: &Polygon) -> Option<f64> {
    let len = a.distance(b);
    if len <= EPS_GEOM {
        return None;
    }
    let mut ts = vec![0.0, 1.0];
    for (p, q) in poly.edges() {
        match segment_intersection(a, b, p, q) {
            Ok(Some(SegmentIntersection::Point(x))) => ts.push(a.distance(x) / len),
            Ok(Some(SegmentIntersection::Collinear(x, y))) => {
                ts.push(a.distance(x) / len);
                ts.push(a.distance(y) / len);
            }
            _ => {}
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|x, y| (*x - *y).abs() * len <= EPS_GEOM);
    ts.windows(2).find_map(|w| {
        let mid = a.lerp(b, (w[0] + w[1]) / 2.0);
        (point_in_polygon(mid, poly) == Containment::Inside).then_some(w[0])
    })
}
