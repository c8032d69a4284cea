//! JSON scenario files.
//!
//! ```json
//! {
//!   "name": "demo",
//!   "bounds": { "xmin": -2, "ymin": -2, "xmax": 27, "ymax": 27 },
//!   "start": [0, 0],
//!   "goal": [25, 25],
//!   "delta": 0.5,
//!   "sensor_range": 1.0,
//!   "speed": 10.0,
//!   "obstacles": [{ "vertices": [[5.8, 1], [7.5, 1], [7.5, 9.8]], "velocity": [1, 0] }]
//! }
//! ```
//!
//! `delta`, `sensor_range`, `speed` and `obstacles` may be omitted. Unknown
//! fields are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    validate_scenario, Bounds, Obstacle, Scenario, Violation, DEFAULT_DELTA,
    DEFAULT_SENSOR_RANGE, DEFAULT_SPEED,
};
use crate::geometry::{Point2, Polygon};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
    #[error("world generation failed: {0}")]
    Generation(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsFile {
    xmin: f64,
    ymin: f64,
    xmax: f64,
    ymax: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleFile {
    vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    velocity: Option<[f64; 2]>,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}
fn default_range() -> f64 {
    DEFAULT_SENSOR_RANGE
}
fn default_speed() -> f64 {
    DEFAULT_SPEED
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    bounds: BoundsFile,
    start: [f64; 2],
    goal: [f64; 2],
    #[serde(default = "default_delta")]
    delta: f64,
    #[serde(default = "default_range")]
    sensor_range: f64,
    #[serde(default = "default_speed")]
    speed: f64,
    #[serde(default)]
    obstacles: Vec<ObstacleFile>,
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obstacles = file
        .obstacles
        .into_iter()
        .map(|o| {
            let mut vertices: Vec<Point2> =
                o.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect();
            // accept clockwise files; stored polygons are counterclockwise
            if vertices.len() >= 3 && Polygon::new_unchecked(vertices.clone()).area() < 0.0 {
                vertices.reverse();
            }
            Obstacle {
                shape: Polygon::new_unchecked(vertices),
                velocity: o.velocity.map(|[vx, vy]| (vx, vy)),
            }
        })
        .collect();
    let b = file.bounds;
    let scenario = Scenario {
        name: file.name,
        bounds: Bounds::new(b.xmin, b.ymin, b.xmax, b.ymax),
        start: Point2::new(file.start[0], file.start[1]),
        goal: Point2::new(file.goal[0], file.goal[1]),
        obstacles,
        delta: file.delta,
        sensor_range: file.sensor_range,
        speed: file.speed,
    };
    let violations = validate_scenario(&scenario);
    if violations.is_empty() {
        Ok(scenario)
    } else {
        Err(ScenarioError::Invalid(violations))
    }
}

/// Pretty-printed JSON that [`parse_scenario`] reads back field-exact.
pub fn serialize_scenario(s: &Scenario) -> String {
    let file = ScenarioFile {
        name: s.name.clone(),
        bounds: BoundsFile {
            xmin: s.bounds.xmin,
            ymin: s.bounds.ymin,
            xmax: s.bounds.xmax,
            ymax: s.bounds.ymax,
        },
        start: [s.start.x, s.start.y],
        goal: [s.goal.x, s.goal.y],
        delta: s.delta,
        sensor_range: s.sensor_range,
        speed: s.speed,
        obstacles: s
            .obstacles
            .iter()
            .map(|o| ObstacleFile {
                vertices: o.shape.vertices().iter().map(|p| [p.x, p.y]).collect(),
                velocity: o.velocity.map(|(vx, vy)| [vx, vy]),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scenario is serializable");
    text.push('\n');
    text
}
