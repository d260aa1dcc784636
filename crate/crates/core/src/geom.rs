//! Circle geometry: placements tangent to circular boundaries, cone angles,
//! overlap predicates and the inscribed disk used when the container shrinks.
//!
//! Angles are polar angles measured counterclockwise from the positive x-axis
//! and normalized to `[0, 2π)`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Roundoff allowed on inverse-trig arguments before clamping to `[-1, 1]`.
pub const TRIG_SLACK: f64 = 1e-12;

/// Disks whose centers are closer than `r1 + r2 - CONTACT_EPS` overlap.
pub const CONTACT_EPS: f64 = 1e-11;

/// Residual below which two circles count as tangent.
pub const TANGENCY_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("disk of radius {radius} does not fit across a ring of width {width}")]
    TooWide { radius: f64, width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Point at `distance` from `center` in direction `angle`.
    pub fn polar(center: Point, distance: f64, angle: f64) -> Self {
        Self {
            x: center.x + distance * angle.cos(),
            y: center.y + distance * angle.sin(),
        }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Polar angle of `self` seen from `center`, in `[0, 2π)`.
    pub fn angle_from(self, center: Point) -> f64 {
        let d = self - center;
        normalize_angle(d.y.atan2(d.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedDisk {
    pub center: Point,
    pub radius: f64,
}

impl PlacedDisk {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    /// True when the interiors intersect (touching is allowed).
    pub fn overlaps(&self, other: &PlacedDisk) -> bool {
        self.center.distance(other.center) < self.radius + other.radius - CONTACT_EPS
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainerDisk {
    pub center: Point,
    pub radius: f64,
}

impl ContainerDisk {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn unit() -> Self {
        Self::new(Point::ORIGIN, 1.0)
    }

    /// True when `disk` has interior points inside this container.
    pub fn meets(&self, disk: &PlacedDisk) -> bool {
        self.center.distance(disk.center) < self.radius + disk.radius - CONTACT_EPS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingShape {
    pub center: Point,
    pub r_out: f64,
    pub r_in: f64,
}

impl RingShape {
    pub fn new(center: Point, r_out: f64, r_in: f64) -> Result<Self, GeomError> {
        if !(r_in >= 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(GeomError::Domain(format!(
                "ring needs 0 <= r_in < r_out, got R[{r_out}, {r_in}]"
            )));
        }
        Ok(Self { center, r_out, r_in })
    }

    pub fn width(&self) -> f64 {
        self.r_out - self.r_in
    }

    /// True when `disk` has interior points inside the closed annulus.
    pub fn meets(&self, disk: &PlacedDisk) -> bool {
        let d = self.center.distance(disk.center);
        d - disk.radius < self.r_out - CONTACT_EPS && d + disk.radius > self.r_in + CONTACT_EPS
    }

    /// Rings either nest or have disjoint interiors.
    pub fn nested_or_disjoint(&self, other: &RingShape) -> bool {
        let eps = 1e-12;
        let disjoint = self.r_in >= other.r_out - eps || other.r_in >= self.r_out - eps;
        let inside = |a: &RingShape, b: &RingShape| a.r_out <= b.r_out + eps && a.r_in >= b.r_in - eps;
        disjoint || inside(self, other) || inside(other, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Outer,
    Inner,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Outer => Side::Inner,
            Side::Inner => Side::Outer,
        }
    }
}

pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed angle difference wrapped to `(-π, π]`.
fn wrap_pi(a: f64) -> f64 {
    let r = normalize_angle(a);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn clamp_unit(x: f64, what: &str) -> Result<f64, GeomError> {
    if x.is_nan() || !(-1.0 - TRIG_SLACK..=1.0 + TRIG_SLACK).contains(&x) {
        return Err(GeomError::Infeasible(format!("{what}: argument {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Half the opening angle of the cone from the apex to a disk of radius `r`
/// whose center lies at distance `d`: `asin(r / d)`.
pub fn tangent_half_angle(d: f64, r: f64) -> Result<f64, GeomError> {
    if !(d > 0.0) || !(r > 0.0) {
        return Err(GeomError::Domain(format!("tangent_half_angle needs d, r > 0 (d={d}, r={r})")));
    }
    let s = r / d;
    if s > 1.0 + TRIG_SLACK {
        return Err(GeomError::Domain(format!("radius {r} exceeds center distance {d}")));
    }
    Ok(s.min(1.0).asin())
}

/// Angle at the origin between two points at distances `d1`, `d2` whose
/// mutual distance is `gap` (law of cosines).
pub fn angular_separation(d1: f64, d2: f64, gap: f64) -> Result<f64, GeomError> {
    if !(d1 > 0.0) || !(d2 > 0.0) || !(gap >= 0.0) {
        return Err(GeomError::Domain(format!(
            "angular_separation needs d1, d2 > 0 and gap >= 0 (d1={d1}, d2={d2}, gap={gap})"
        )));
    }
    let c = (d1 * d1 + d2 * d2 - gap * gap) / (2.0 * d1 * d2);
    Ok(clamp_unit(c, "angular_separation")?.acos())
}

/// Smallest polar angle `β` in `[floor, 2π)` such that a disk of radius `r`
/// centered at distance `anchor` from `center` overlaps none of `prev`.
fn first_free_angle(center: Point, anchor: f64, floor: f64, r: f64, prev: &[PlacedDisk]) -> Option<f64> {
    if !(0.0..TAU).contains(&floor) {
        return None;
    }
    // Precompute the blocking arc of every disk that can interfere at all.
    let mut arcs = Vec::new();
    for q in prev {
        let dq = q.center.distance(center);
        let reach = r + q.radius - CONTACT_EPS;
        if (anchor - dq).abs() >= reach {
            continue;
        }
        if anchor + dq < reach {
            return None;
        }
        let half = angular_separation(anchor, dq, r + q.radius).unwrap_or(PI);
        arcs.push((q, q.center.angle_from(center), half));
    }

    let mut beta = floor;
    loop {
        let mut moved = false;
        for &(q, theta, half) in &arcs {
            let p = Point::polar(center, anchor, beta);
            if p.distance(q.center) >= r + q.radius - CONTACT_EPS {
                continue;
            }
            let step = half - wrap_pi(beta - theta);
            beta += if step > 0.0 { step } else { 1e-15_f64.max(beta * f64::EPSILON) };
            moved = true;
            if beta >= TAU {
                return None;
            }
        }
        if !moved {
            return Some(beta);
        }
    }
}

/// Place a disk of radius `r` touching the boundary of `boundary` from the
/// inside at the smallest polar angle `>= angle_floor` that overlaps no disk
/// in `prev`. `Ok(None)` means the disk does not fit.
pub fn place_tangent(
    boundary: &ContainerDisk,
    r: f64,
    angle_floor: f64,
    prev: &[PlacedDisk],
) -> Result<Option<PlacedDisk>, GeomError> {
    if !(r > 0.0) || r > boundary.radius {
        return Err(GeomError::Domain(format!(
            "disk of radius {r} cannot touch a container of radius {}",
            boundary.radius
        )));
    }
    let anchor = boundary.radius - r;
    Ok(place_on_anchor(boundary.center, anchor, angle_floor, r, prev))
}

fn place_on_anchor(center: Point, anchor: f64, floor: f64, r: f64, prev: &[PlacedDisk]) -> Option<PlacedDisk> {
    if anchor <= 0.0 {
        // The disk is concentric with the boundary; only the floor angle matters.
        let disk = PlacedDisk::new(center, r);
        return (!prev.iter().any(|q| disk.overlaps(q))).then_some(disk);
    }
    first_free_angle(center, anchor, floor, r, prev).map(|beta| PlacedDisk::new(Point::polar(center, anchor, beta), r))
}

/// Place a disk of radius `r` inside `ring` touching its outer or inner
/// boundary at the smallest polar angle `>= angle_floor` free of `prev`.
pub fn place_in_ring(
    ring: &RingShape,
    side: Side,
    angle_floor: f64,
    prev: &[PlacedDisk],
    r: f64,
) -> Result<Option<PlacedDisk>, GeomError> {
    if !(r > 0.0) {
        return Err(GeomError::Domain(format!("radius must be positive, got {r}")));
    }
    if 2.0 * r > ring.width() + 1e-12 {
        return Err(GeomError::TooWide { radius: r, width: ring.width() });
    }
    let anchor = match side {
        Side::Outer => ring.r_out - r,
        Side::Inner => ring.r_in + r,
    };
    Ok(place_on_anchor(ring.center, anchor, angle_floor, r, prev))
}

/// The disk internally tangent to `c` and externally tangent to `d1` and
/// `d2`, on the empty side. When `d1`, `d2` and `c` are not mutually tangent
/// the guaranteed disk of radius `c.radius / 5` is returned instead, touching
/// `c` on the diameter perpendicular to the `d1`–`d2` axis.
pub fn inscribed_disk_after_two(c: &ContainerDisk, d1: &PlacedDisk, d2: &PlacedDisk) -> ContainerDisk {
    descartes_disk(c, d1, d2).unwrap_or_else(|| fallback_disk(c, d1, d2))
}

fn internally_tangent(c: &ContainerDisk, d: &PlacedDisk) -> bool {
    (c.center.distance(d.center) + d.radius - c.radius).abs() <= TANGENCY_EPS
}

/// Unit normal to the right of the directed axis `d1 -> d2`.
fn right_normal(d1: &PlacedDisk, d2: &PlacedDisk) -> Option<Point> {
    let axis = d2.center - d1.center;
    let len = axis.norm();
    (len > 0.0).then(|| Point::new(axis.y / len, -axis.x / len))
}

fn descartes_disk(c: &ContainerDisk, d1: &PlacedDisk, d2: &PlacedDisk) -> Option<ContainerDisk> {
    if !internally_tangent(c, d1) || !internally_tangent(c, d2) {
        return None;
    }
    if (d1.center.distance(d2.center) - d1.radius - d2.radius).abs() > TANGENCY_EPS {
        return None;
    }
    let k0 = -1.0 / c.radius;
    let k1 = 1.0 / d1.radius;
    let k2 = 1.0 / d2.radius;
    let disc = k0 * k1 + k1 * k2 + k2 * k0;
    let root = if disc >= -1e-9 { disc.max(0.0).sqrt() } else { return None };
    let sum = k0 + k1 + k2;
    // The smaller curvature is the larger disk on the open side.
    let mut curvatures = [sum - 2.0 * root, sum + 2.0 * root];
    curvatures.sort_by(|a, b| a.total_cmp(b));
    let right = right_normal(d1, d2)?;

    for k in curvatures.into_iter().filter(|k| *k > 0.0) {
        let rho = 1.0 / k;
        let Some(candidates) = circle_intersections(c.center, c.radius - rho, d1.center, d1.radius + rho) else {
            continue;
        };
        let residual = |p: Point| {
            let r0 = (p.distance(c.center) - (c.radius - rho)).abs();
            let r1 = (p.distance(d1.center) - (d1.radius + rho)).abs();
            let r2 = (p.distance(d2.center) - (d2.radius + rho)).abs();
            r0.max(r1).max(r2)
        };
        let side = |p: Point| {
            let v = p - c.center;
            v.x * right.x + v.y * right.y
        };
        let [a, b] = candidates;
        let (ra, rb) = (residual(a), residual(b));
        let best = if (ra - rb).abs() <= 1e-12 {
            if side(a) >= side(b) {
                a
            } else {
                b
            }
        } else if ra < rb {
            a
        } else {
            b
        };
        if residual(best) <= TANGENCY_EPS {
            return Some(ContainerDisk::new(best, rho));
        }
    }
    None
}

fn fallback_disk(c: &ContainerDisk, d1: &PlacedDisk, d2: &PlacedDisk) -> ContainerDisk {
    let radius = c.radius / 5.0;
    let normal = right_normal(d1, d2).unwrap_or(Point::new(0.0, 1.0));
    let mid = Point::new(
        (d1.center.x + d2.center.x) / 2.0 - c.center.x,
        (d1.center.y + d2.center.y) / 2.0 - c.center.y,
    );
    let toward = mid.x * normal.x + mid.y * normal.y;
    let dir = if toward > 1e-12 { Point::new(-normal.x, -normal.y) } else { normal };
    let dist = c.radius - radius;
    ContainerDisk::new(Point::new(c.center.x + dir.x * dist, c.center.y + dir.y * dist), radius)
}

/// Intersection points of two circles, `None` when they do not meet.
fn circle_intersections(c0: Point, r0: f64, c1: Point, r1: f64) -> Option<[Point; 2]> {
    let d = c0.distance(c1);
    if d == 0.0 || d > r0 + r1 + TANGENCY_EPS || d < (r0 - r1).abs() - TANGENCY_EPS {
        return None;
    }
    let a = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d);
    let h = (r0 * r0 - a * a).max(0.0).sqrt();
    let ux = (c1.x - c0.x) / d;
    let uy = (c1.y - c0.y) / d;
    let base = Point::new(c0.x + a * ux, c0.y + a * uy);
    Some([
        Point::new(base.x - h * uy, base.y + h * ux),
        Point::new(base.x + h * uy, base.y - h * ux),
    ])
}

/// How deep the center of `c` lies inside the placed disks covering it:
/// the minimum of `radius - distance` over disks strictly containing it.
pub fn center_penetration(c: &ContainerDisk, placed: &[PlacedDisk]) -> f64 {
    placed
        .iter()
        .filter_map(|d| {
            let gap = d.radius - d.center.distance(c.center);
            (gap > 0.0).then_some(gap)
        })
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))))
        .unwrap_or(0.0)
}
