//! Eight fixed-direction range sensors.
//!
//! Sensor `I_i` (stored at index `i - 1`) looks along compass heading
//! `(i - 1) * 45°`. Each reading carries the first-hit distance clipped to
//! the sensor range `d`, and a free flag that is cleared only when the hit
//! lies within one lattice step plus a quarter robot length.

use thiserror::Error;

use crate::geometry::{ray_cast, CompassAngle, GeometryError, Point2};
use crate::world::{Bounds, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensingError {
    #[error("robot at {0} is inside obstacle OB{1}")]
    InsideObstacle(Point2, usize),
    #[error("sensor range {range} must exceed robot length {delta} > 0")]
    BadParameters { range: f64, delta: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading {
    pub free: bool,
    /// First-hit distance, clipped to the sensor range.
    pub dist: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorScan {
    pub readings: [Reading; 8],
}

impl SensorScan {
    /// Scan with every sensor free and reading `range`.
    pub fn open(range: f64) -> Self {
        Self {
            readings: [Reading {
                free: true,
                dist: range,
            }; 8],
        }
    }

    /// Reading for a lattice heading; `None` for off-lattice angles.
    pub fn reading(&self, dir: CompassAngle) -> Option<Reading> {
        dir.lattice_index().map(|i| self.readings[i])
    }

    pub fn is_free(&self, dir: CompassAngle) -> bool {
        self.reading(dir).is_some_and(|r| r.free)
    }

    /// Boolean outputs `I_1 .. I_8`.
    pub fn flags(&self) -> [bool; 8] {
        self.readings.map(|r| r.free)
    }
}

/// Distance below which a hit along sensor `index` blocks that heading.
pub fn blocking_threshold(index: usize, delta: f64) -> f64 {
    let step = if index.is_multiple_of(2) {
        delta / 2.0
    } else {
        delta * std::f64::consts::SQRT_2 / 2.0
    };
    step + delta / 4.0
}

/// Distance from an interior point to the bounds rectangle along `dir`.
fn bounds_distance(pos: Point2, dir: CompassAngle, bounds: &Bounds) -> Option<f64> {
    if !bounds.contains_strictly(pos) {
        return None;
    }
    let (ux, uy) = dir.unit();
    let mut t = f64::INFINITY;
    if ux > 1e-12 {
        t = t.min((bounds.xmax - pos.x) / ux);
    } else if ux < -1e-12 {
        t = t.min((bounds.xmin - pos.x) / ux);
    }
    if uy > 1e-12 {
        t = t.min((bounds.ymax - pos.y) / uy);
    } else if uy < -1e-12 {
        t = t.min((bounds.ymin - pos.y) / uy);
    }
    Some(t)
}

/// Reads all eight sensors at `pos` against the current world state.
///
/// The world bounds act as walls.
pub fn scan(pos: Point2, world: &Scenario, d: f64, delta: f64) -> Result<SensorScan, SensingError> {
    if !(delta > 0.0 && d > delta) {
        return Err(SensingError::BadParameters { range: d, delta });
    }
    let mut readings = [Reading {
        free: true,
        dist: d,
    }; 8];
    for (i, dir) in CompassAngle::LATTICE.iter().enumerate() {
        let mut hit = ray_cast(pos, *dir, d, world.shapes())
            .map_err(|e| match e {
                GeometryError::OriginInsideObstacle(p, k) => SensingError::InsideObstacle(p, k + 1),
                other => other.into(),
            })?
            .map(|h| h.distance);
        if let Some(wall) = bounds_distance(pos, *dir, &world.bounds) {
            hit = Some(hit.map_or(wall, |h| h.min(wall)));
        }
        let tau = blocking_threshold(i, delta);
        readings[i] = match hit {
            Some(h) if h <= tau => Reading {
                free: false,
                dist: h.min(d),
            },
            Some(h) => Reading {
                free: true,
                dist: h.min(d),
            },
            None => Reading { free: true, dist: d },
        };
    }
    Ok(SensorScan { readings })
}
