//! Sensor-driven mobile robot navigation among polygonal obstacles.
//!
//! The crate models a point robot with eight range sensors on a 2D plane
//! and provides an eight-direction step planner with loop-escape rules,
//! Bug1/Bug2 baselines, a tick-based simulator and reference checks
//! (collision audit and a grid shortest-path oracle).
//!
//! ```
//! use nspmr::{builtin_scenario, run, BuiltinId, Outcome, PlannerKind};
//!
//! let s = builtin_scenario(BuiltinId::Scenario1);
//! let (_, result) = run(&s, PlannerKind::Nspmr, 100_000).unwrap();
//! assert_eq!(result.outcome, Outcome::GoalReached);
//! ```

pub mod geometry;
pub mod planner;
pub mod sensing;
pub mod sim;
pub mod trajectory;
pub mod world;

pub use geometry::{CompassAngle, Point2, Polygon};
pub use planner::{NspmrState, Rules, StepKind};
pub use sensing::{scan, SensorScan};
pub use sim::{
    audit_collisions, grid_oracle, run, run_with, termination_ceiling, Outcome, PlannerKind, RunConfig, RunResult,
    SimError,
};
pub use trajectory::{path_length, Trajectory, Waypoint, WaypointEvent};
pub use world::{
    builtin_scenario, generate_world, parse_scenario, serialize_scenario, validate_scenario, Bounds, BuiltinId,
    Obstacle, Scenario, ScenarioError, WorldSpec,
};
