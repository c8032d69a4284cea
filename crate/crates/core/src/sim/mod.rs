//! Simulation loop, run metrics and the reference checks used to judge runs.
//!
//! One planner step happens per tick of `dt = (δ/2) / V`. Moving obstacles
//! advance between ticks. Every move is checked against the obstacles and
//! a hit aborts the run with [`SimError::Collision`]; it signals a bug, not
//! a planner outcome.

mod audit;
mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use audit::{audit_collisions, CollisionViolation};
pub use oracle::{grid_oracle, sensor_reachable};

use crate::planner::bug::{bug1_run, bug2_run, BugError, BugOutcome};
use crate::planner::nspmr::{quantize, CellId, NspmrState, PlannerError, Rules, StepKind};
use crate::trajectory::{path_length, Trajectory, WaypointEvent};
use crate::world::{step_dynamics, validate_scenario, Scenario, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlannerKind {
    Nspmr,
    Bug1,
    Bug2,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 3] = [Self::Nspmr, Self::Bug1, Self::Bug2];

    pub fn name(self) -> &'static str {
        match self {
            Self::Nspmr => "nspmr",
            Self::Bug1 => "bug1",
            Self::Bug2 => "bug2",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown planner `{s}` (expected nspmr, bug1 or bug2)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    GoalReached,
    Stuck,
    IterationLimit,
    Unreachable,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::GoalReached => "goal_reached",
            Self::Stuck => "stuck",
            Self::IterationLimit => "iteration_limit",
            Self::Unreachable => "unreachable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub outcome: Outcome,
    pub length: f64,
    pub travel_time: f64,
    pub iterations: u64,
    pub max_departures_per_cell: u32,
    pub backtrack_count: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("max_iters must be positive")]
    NoIterations,
    #[error("collision: {0}")]
    Collision(CollisionViolation),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error(transparent)]
    Bug(#[from] BugError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    /// `None` uses [`default_max_iters`].
    pub max_iters: Option<u64>,
    /// Loop-escape rules for the step planner; ignored by the Bug planners.
    pub rules: Rules,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_iters: None,
            rules: Rules::ALL,
        }
    }
}

/// Number of δ/2 lattice nodes inside the bounds.
pub fn lattice_cells(s: &Scenario) -> u64 {
    let step = s.delta / 2.0;
    let nx = (s.bounds.width() / step).floor() as u64 + 1;
    let ny = (s.bounds.height() / step).floor() as u64 + 1;
    nx * ny
}

/// Upper bound on step planner iterations: each cell is left at most once
/// per heading.
pub fn termination_ceiling(s: &Scenario) -> u64 {
    8 * lattice_cells(s)
}

pub fn default_max_iters(s: &Scenario) -> u64 {
    10 * termination_ceiling(s)
}

pub fn run(s: &Scenario, planner: PlannerKind, max_iters: u64) -> Result<(Trajectory, RunResult), SimError> {
    run_with(
        s,
        planner,
        RunConfig {
            max_iters: Some(max_iters),
            ..RunConfig::default()
        },
    )
}

pub fn run_with(s: &Scenario, planner: PlannerKind, cfg: RunConfig) -> Result<(Trajectory, RunResult), SimError> {
    let violations = validate_scenario(s);
    if !violations.is_empty() {
        return Err(SimError::Invalid(violations));
    }
    let max_iters = cfg.max_iters.unwrap_or_else(|| default_max_iters(s));
    if max_iters == 0 {
        return Err(SimError::NoIterations);
    }
    let (traj, outcome, backtracks) = match planner {
        PlannerKind::Nspmr => run_nspmr(s, max_iters, cfg.rules)?,
        PlannerKind::Bug1 | PlannerKind::Bug2 => {
            let r = if planner == PlannerKind::Bug1 {
                bug1_run(s, max_iters)?
            } else {
                bug2_run(s, max_iters)?
            };
            if let Some(v) = audit_collisions(&r.trajectory, s).into_iter().next() {
                return Err(SimError::Collision(v));
            }
            let outcome = match r.outcome {
                BugOutcome::GoalReached => Outcome::GoalReached,
                BugOutcome::Unreachable => Outcome::Unreachable,
                BugOutcome::IterationLimit => Outcome::IterationLimit,
            };
            (r.trajectory, outcome, 0)
        }
    };
    let length = path_length(&traj);
    let result = RunResult {
        outcome,
        length,
        travel_time: length / s.speed,
        iterations: (traj.len() - 1) as u64,
        max_departures_per_cell: departures_per_cell(&traj, s.delta).into_values().max().unwrap_or(0),
        backtrack_count: backtracks,
    };
    Ok((traj, result))
}

fn run_nspmr(s: &Scenario, max_iters: u64, rules: Rules) -> Result<(Trajectory, Outcome, u64), SimError> {
    let dt = (s.delta / 2.0) / s.speed;
    let mut world = s.clone();
    let mut state = NspmrState::with_rules(s.start, s.delta, rules);
    let mut traj = Trajectory::new(s.start, dt);
    let mut backtracks = 0;
    let outcome = loop {
        if traj.len() as u64 > max_iters {
            break if state.pos.distance(s.goal) <= s.delta / 2.0 + 1e-9 {
                Outcome::GoalReached
            } else {
                Outcome::IterationLimit
            };
        }
        let ev = state.step(&world)?;
        let event = match ev.kind {
            StepKind::GoalReached => break Outcome::GoalReached,
            StepKind::Stuck => break Outcome::Stuck,
            StepKind::Moved => WaypointEvent::Move,
            StepKind::Backtracked => {
                backtracks += 1;
                WaypointEvent::Backtrack
            }
        };
        let from = traj.last();
        let next = if world.is_dynamic() {
            step_dynamics(&world, dt)
        } else {
            world.clone()
        };
        if let Some(k) = audit::touched(&world, &next, from, ev.new_pos) {
            return Err(SimError::Collision(CollisionViolation {
                segment: traj.len() - 1,
                time: traj.waypoints.last().map_or(0.0, |w| w.time),
                obstacle: k + 1,
                from,
                to: ev.new_pos,
            }));
        }
        traj.push(ev.new_pos, event, ev.direction);
        world = next;
    };
    Ok((traj, outcome, backtracks))
}

/// How often the trajectory leaves each δ/2 lattice cell.
pub fn departures_per_cell(t: &Trajectory, delta: f64) -> HashMap<CellId, u32> {
    let mut out = HashMap::new();
    for (a, b) in t.segments() {
        if a.pos != b.pos {
            *out.entry(quantize(a.pos, delta)).or_default() += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::world::{builtin_scenario, Bounds, BuiltinId};
    use approx::assert_abs_diff_eq;

    fn empty() -> Scenario {
        Scenario {
            name: "empty".into(),
            bounds: Bounds::new(-2.0, -2.0, 27.0, 27.0),
            start: Point2::new(0.0, 0.0),
            goal: Point2::new(25.0, 25.0),
            obstacles: vec![],
            delta: 0.5,
            sensor_range: 1.0,
            speed: 10.0,
        }
    }

    #[test]
    fn empty_world_is_the_diagonal() {
        let (t, r) = run(&empty(), PlannerKind::Nspmr, 10_000).unwrap();
        assert_eq!(r.outcome, Outcome::GoalReached);
        assert_abs_diff_eq!(r.length, 25.0 * 2f64.sqrt(), epsilon = 1e-9);
        assert_eq!(r.iterations, 100);
        assert_eq!(t.last(), Point2::new(25.0, 25.0));
        assert_abs_diff_eq!(r.travel_time * 10.0, r.length, epsilon = 1e-9);
    }

    #[test]
    fn ceiling_counts_lattice_nodes() {
        let s = empty();
        // 29 m at 0.25 m gives 117 nodes per axis
        assert_eq!(lattice_cells(&s), 117 * 117);
        assert_eq!(termination_ceiling(&s), 8 * 117 * 117);
        assert_eq!(default_max_iters(&s), 80 * 117 * 117);
    }

    #[test]
    fn zero_iterations_rejected() {
        assert_eq!(run(&empty(), PlannerKind::Nspmr, 0).unwrap_err(), SimError::NoIterations);
    }

    #[test]
    fn invalid_scenarios_rejected() {
        let mut s = empty();
        s.delta = 2.0;
        assert!(matches!(run(&s, PlannerKind::Nspmr, 10), Err(SimError::Invalid(_))));
    }

    #[test]
    fn iteration_limit_reported() {
        let (t, r) = run(&empty(), PlannerKind::Nspmr, 5).unwrap();
        assert_eq!(r.outcome, Outcome::IterationLimit);
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn scenario1_runs_are_clean() {
        let s = builtin_scenario(BuiltinId::Scenario1);
        for p in PlannerKind::ALL {
            let (t, r) = run_with(&s, p, RunConfig::default()).unwrap();
            assert_eq!(r.outcome, Outcome::GoalReached, "{p}");
            assert!(audit_collisions(&t, &s).is_empty());
        }
    }

    #[test]
    fn planner_names_parse() {
        for p in PlannerKind::ALL {
            assert_eq!(p.name().parse::<PlannerKind>().unwrap(), p);
        }
        assert!("astar".parse::<PlannerKind>().is_err());
    }
}
