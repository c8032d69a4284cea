//! Scenario model: bounds, start/goal, polygonal obstacles (optionally
//! moving) and the robot parameters the sensors and planners read.

mod builtin;
mod format;
mod generate;

use std::fmt;

use thiserror::Error;

use crate::geometry::{point_in_polygon, Containment, Point2, Polygon, PolygonDefect};

pub use builtin::{builtin_scenario, BuiltinId, FIXTURE_VERSION};
pub use format::{parse_scenario, serialize_scenario, ScenarioError};
pub use generate::{generate_world, ObstacleKind, WorldSpec};

/// Robot length used when a scenario file omits `delta`.
pub const DEFAULT_DELTA: f64 = 0.5;
/// Sensor range used when a scenario file omits `sensor_range`.
pub const DEFAULT_SENSOR_RANGE: f64 = 1.0;
/// Robot speed used when a scenario file omits `speed`.
pub const DEFAULT_SPEED: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Bounds {
    pub const fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Self {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn contains_strictly(&self, p: Point2) -> bool {
        p.x > self.xmin && p.x < self.xmax && p.y > self.ymin && p.y < self.ymax
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    /// The bounding rectangle as a counterclockwise polygon.
    pub fn to_polygon(&self) -> Polygon {
        Polygon::rect(self.xmin, self.ymin, self.xmax, self.ymax)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub shape: Polygon,
    /// Constant velocity `(vx, vy)` in m/s; `None` for static obstacles.
    pub velocity: Option<(f64, f64)>,
}

impl Obstacle {
    pub fn fixed(shape: Polygon) -> Self {
        Self {
            shape,
            velocity: None,
        }
    }

    pub fn moving(shape: Polygon, vx: f64, vy: f64) -> Self {
        Self {
            shape,
            velocity: Some((vx, vy)),
        }
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(self.velocity, Some((vx, vy)) if vx != 0.0 || vy != 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub bounds: Bounds,
    pub start: Point2,
    pub goal: Point2,
    pub obstacles: Vec<Obstacle>,
    /// Robot length δ (m). One lattice step is δ/2 per axis.
    pub delta: f64,
    /// Sensor range d (m).
    pub sensor_range: f64,
    /// Robot speed V (m/s).
    pub speed: f64,
}

impl Scenario {
    pub fn shapes(&self) -> impl Iterator<Item = &Polygon> + Clone {
        self.obstacles.iter().map(|o| &o.shape)
    }

    pub fn is_dynamic(&self) -> bool {
        self.obstacles.iter().any(Obstacle::is_dynamic)
    }

    /// Index of the first obstacle whose closed region contains `p`.
    pub fn obstacle_at(&self, p: Point2) -> Option<usize> {
        self.obstacles
            .iter()
            .position(|o| point_in_polygon(p, &o.shape) != Containment::Outside)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("field `{0}` is not a finite number")]
    NonFinite(&'static str),
    #[error("bounds are empty (min must be below max on both axes)")]
    EmptyBounds,
    #[error("{0} point {1} lies outside the bounds")]
    OutsideBounds(&'static str, Point2),
    #[error("{0} point {1} is not strictly outside obstacle OB{2}")]
    InsideObstacle(&'static str, Point2, usize),
    #[error("robot length must be positive")]
    NonPositiveDelta,
    #[error("robot length must be below sensor range (delta {delta}, sensor range {range})")]
    DeltaNotBelowRange { delta: f64, range: f64 },
    #[error("speed must be positive")]
    NonPositiveSpeed,
    #[error("obstacle OB{0}: {1}")]
    BadPolygon(usize, PolygonDefect),
    #[error("obstacle OB{0}: velocity is not finite")]
    BadVelocity(usize),
}

/// Every violated scenario invariant; empty means the scenario is valid.
///
/// Reachability of the goal is not checked here.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let b = &s.bounds;
    for (name, v) in [
        ("bounds.xmin", b.xmin),
        ("bounds.ymin", b.ymin),
        ("bounds.xmax", b.xmax),
        ("bounds.ymax", b.ymax),
        ("start", s.start.x + s.start.y),
        ("goal", s.goal.x + s.goal.y),
        ("delta", s.delta),
        ("sensor_range", s.sensor_range),
        ("speed", s.speed),
    ] {
        if !v.is_finite() {
            out.push(Violation::NonFinite(name));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if b.xmin >= b.xmax || b.ymin >= b.ymax {
        out.push(Violation::EmptyBounds);
    }
    for (label, p) in [("start", s.start), ("goal", s.goal)] {
        if !b.contains_strictly(p) {
            out.push(Violation::OutsideBounds(label, p));
        }
    }
    if s.delta <= 0.0 {
        out.push(Violation::NonPositiveDelta);
    } else if s.delta >= s.sensor_range {
        out.push(Violation::DeltaNotBelowRange {
            delta: s.delta,
            range: s.sensor_range,
        });
    }
    if s.speed <= 0.0 {
        out.push(Violation::NonPositiveSpeed);
    }
    for (i, ob) in s.obstacles.iter().enumerate() {
        let defects = ob.shape.defects();
        let valid = defects.is_empty();
        out.extend(defects.into_iter().map(|d| Violation::BadPolygon(i + 1, d)));
        if let Some((vx, vy)) = ob.velocity {
            if !vx.is_finite() || !vy.is_finite() {
                out.push(Violation::BadVelocity(i + 1));
            }
        }
        if !valid {
            continue;
        }
        for (label, p) in [("start", s.start), ("goal", s.goal)] {
            if point_in_polygon(p, &ob.shape) != Containment::Outside {
                out.push(Violation::InsideObstacle(label, p, i + 1));
            }
        }
    }
    out
}

/// Advances every moving obstacle by `velocity * dt`.
///
/// An obstacle whose bounding box would leave the world bounds is pushed
/// back inside and its velocity component on that axis is reflected.
pub fn step_dynamics(s: &Scenario, dt: f64) -> Scenario {
    let mut next = s.clone();
    for ob in &mut next.obstacles {
        let Some((mut vx, mut vy)) = ob.velocity else {
            continue;
        };
        let moved = ob.shape.translated(vx * dt, vy * dt);
        let (lo, hi) = moved.bbox();
        let b = &s.bounds;
        let mut fix_x = 0.0;
        let mut fix_y = 0.0;
        if lo.x < b.xmin {
            fix_x = b.xmin - lo.x;
            vx = vx.abs();
        } else if hi.x > b.xmax {
            fix_x = b.xmax - hi.x;
            vx = -vx.abs();
        }
        if lo.y < b.ymin {
            fix_y = b.ymin - lo.y;
            vy = vy.abs();
        } else if hi.y > b.ymax {
            fix_y = b.ymax - hi.y;
            vy = -vy.abs();
        }
        ob.shape = if fix_x != 0.0 || fix_y != 0.0 {
            moved.translated(fix_x, fix_y)
        } else {
            moved
        };
        ob.velocity = Some((vx, vy));
    }
    next
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} obstacles, start {}, goal {})",
            self.name,
            self.obstacles.len(),
            self.start,
            self.goal
        )
    }
}
