//! Eight-direction step planner with loop-escape rules.
//!
//! Each step picks, among the headings whose sensor reports free, the one
//! closest (circularly) to the bearing of the goal. Three rules keep the
//! robot out of cycles:
//!
//! 1. never reverse the previous heading;
//! 2. never leave a lattice cell twice along the same heading;
//! 3. when nothing is left, mark the cell dead and step back along the
//!    trail; dead cells are never entered again by a regular move.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::geometry::{circular_diff, segment_touches_polygon, CompassAngle, GeometryError, Point2};
use crate::sensing::{scan, SensingError, SensorScan};
use crate::world::Scenario;

/// Headings closer than this (degrees, or meters for the range tie-break) tie.
const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlannerError {
    #[error("robot already sits on the goal {0}; desired heading is undefined")]
    AtGoal(Point2),
    #[error("no candidate heading to choose from")]
    NoCandidates,
    #[error(transparent)]
    Sensing(#[from] SensingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Lattice node of a position, at spacing δ/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub ix: i64,
    pub iy: i64,
}

pub fn quantize(pos: Point2, delta: f64) -> CellId {
    let step = delta / 2.0;
    CellId {
        ix: (pos.x / step).round() as i64,
        iy: (pos.y / step).round() as i64,
    }
}

/// Bearing of the goal as seen from `pos`.
pub fn desired_angle(pos: Point2, goal: Point2) -> Result<CompassAngle, PlannerError> {
    let (dx, dy) = goal.minus(pos);
    if dx == 0.0 && dy == 0.0 {
        return Err(PlannerError::AtGoal(pos));
    }
    Ok(CompassAngle::of_vector(dx, dy))
}

/// Lattice displacement `(sx, sy)` of heading index `i`, in units of δ/2.
const STEPS: [(f64, f64); 8] = [
    (0.0, 1.0),
    (1.0, 1.0),
    (1.0, 0.0),
    (1.0, -1.0),
    (0.0, -1.0),
    (-1.0, -1.0),
    (-1.0, 0.0),
    (-1.0, 1.0),
];

/// Next lattice position when moving one step along `dir`.
pub fn apply_move(pos: Point2, dir: CompassAngle, delta: f64) -> Result<Point2, PlannerError> {
    let i = dir
        .lattice_index()
        .ok_or(GeometryError::NotLatticeDirection(dir.degrees()))?;
    let (sx, sy) = STEPS[i];
    let half = delta / 2.0;
    Ok(pos.offset(sx * half, sy * half))
}

/// Which loop-escape rules are active. All on by default; switching them
/// off leaves the bare greedy sensor-driven selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rules {
    pub no_reversal: bool,
    pub direction_memory: bool,
    pub dead_ends: bool,
}

impl Default for Rules {
    fn default() -> Self {
        Self::ALL
    }
}

impl Rules {
    pub const ALL: Rules = Rules {
        no_reversal: true,
        direction_memory: true,
        dead_ends: true,
    };
    pub const NONE: Rules = Rules {
        no_reversal: false,
        direction_memory: false,
        dead_ends: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Moved,
    Backtracked,
    GoalReached,
    Stuck,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepEvent {
    pub kind: StepKind,
    pub direction: Option<CompassAngle>,
    pub new_pos: Point2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NspmrState {
    pub pos: Point2,
    pub prev_dir: Option<CompassAngle>,
    pub iteration: u64,
    /// Departure headings already used per cell, one bit per lattice index.
    pub used: HashMap<CellId, u8>,
    pub dead: HashSet<CellId>,
    /// Visited positions; the last entry is the current position.
    pub trail: Vec<Point2>,
    pub delta: f64,
    pub rules: Rules,
}

impl NspmrState {
    pub fn new(start: Point2, delta: f64) -> Self {
        Self::with_rules(start, delta, Rules::ALL)
    }

    pub fn with_rules(start: Point2, delta: f64, rules: Rules) -> Self {
        Self {
            pos: start,
            prev_dir: None,
            iteration: 0,
            used: HashMap::new(),
            dead: HashSet::new(),
            trail: vec![start],
            delta,
            rules,
        }
    }

    pub fn cell(&self) -> CellId {
        quantize(self.pos, self.delta)
    }

    fn is_used(&self, cell: CellId, index: usize) -> bool {
        self.used.get(&cell).is_some_and(|m| m & (1 << index) != 0)
    }

    fn mark_used(&mut self, cell: CellId, dir: CompassAngle) {
        if let Some(i) = dir.lattice_index() {
            *self.used.entry(cell).or_default() |= 1 << i;
        }
    }

    /// Advances the planner by one iteration against the current world.
    pub fn step(&mut self, world: &Scenario) -> Result<StepEvent, PlannerError> {
        let goal = world.goal;
        if self.pos.distance(goal) <= self.delta / 2.0 + 1e-9 {
            return Ok(StepEvent {
                kind: StepKind::GoalReached,
                direction: None,
                new_pos: self.pos,
            });
        }
        let readings = scan(self.pos, world, world.sensor_range, self.delta)?;
        let theta_d = desired_angle(self.pos, goal)?;
        let candidates = filter_candidates(&readings, self, self.delta);

        if !candidates.is_empty() {
            let dir = select_direction(&candidates, theta_d, &readings)?;
            let cell = self.cell();
            self.mark_used(cell, dir);
            self.pos = apply_move(self.pos, dir, self.delta)?;
            self.trail.push(self.pos);
            self.prev_dir = Some(dir);
            self.iteration += 1;
            return Ok(StepEvent {
                kind: StepKind::Moved,
                direction: Some(dir),
                new_pos: self.pos,
            });
        }

        if self.rules.dead_ends && self.trail.len() > 1 {
            let back_to = self.trail[self.trail.len() - 2];
            let (dx, dy) = back_to.minus(self.pos);
            let dir = CompassAngle::of_vector(dx, dy);
            // the way back was clear when taken; only a moving obstacle can block it
            if !world.shapes().any(|p| segment_touches_polygon(self.pos, back_to, p)) {
                let cell = self.cell();
                if cell != quantize(goal, self.delta) {
                    self.dead.insert(cell);
                }
                self.mark_used(cell, dir);
                self.trail.pop();
                self.pos = back_to;
                self.prev_dir = Some(dir);
                self.iteration += 1;
                return Ok(StepEvent {
                    kind: StepKind::Backtracked,
                    direction: Some(dir),
                    new_pos: self.pos,
                });
            }
        }

        Ok(StepEvent {
            kind: StepKind::Stuck,
            direction: None,
            new_pos: self.pos,
        })
    }
}

/// Functional form of [`NspmrState::step`].
pub fn nspmr_step(
    mut state: NspmrState,
    world: &Scenario,
) -> Result<(NspmrState, StepEvent), PlannerError> {
    let ev = state.step(world)?;
    Ok((state, ev))
}

/// Headings allowed by the sensors and the active rules, in sensor order.
pub fn filter_candidates(readings: &SensorScan, state: &NspmrState, delta: f64) -> Vec<CompassAngle> {
    let cell = quantize(state.pos, delta);
    CompassAngle::LATTICE
        .iter()
        .enumerate()
        .filter(|&(i, dir)| {
            if !readings.readings[i].free {
                return false;
            }
            if state.rules.no_reversal {
                if let Some(prev) = state.prev_dir {
                    if (circular_diff(*dir, prev) - 180.0).abs() <= TIE_EPS {
                        return false;
                    }
                }
            }
            if state.rules.direction_memory && state.is_used(cell, i) {
                return false;
            }
            if state.rules.dead_ends {
                let (sx, sy) = STEPS[i];
                let next = state.pos.offset(sx * delta / 2.0, sy * delta / 2.0);
                if state.dead.contains(&quantize(next, delta)) {
                    return false;
                }
            }
            true
        })
        .map(|(_, dir)| *dir)
        .collect()
}

/// Candidate closest to `theta_d`; ties go to the longer range reading,
/// then to the lower sensor index.
pub fn select_direction(
    candidates: &[CompassAngle],
    theta_d: CompassAngle,
    readings: &SensorScan,
) -> Result<CompassAngle, PlannerError> {
    let key = |dir: &CompassAngle| {
        let index = dir.lattice_index().unwrap_or(usize::MAX);
        let dist = readings.reading(*dir).map_or(0.0, |r| r.dist);
        (circular_diff(*dir, theta_d), dist, index)
    };
    let mut best: Option<(CompassAngle, (f64, f64, usize))> = None;
    for dir in candidates {
        let k = key(dir);
        let better = match &best {
            None => true,
            Some((_, b)) => {
                if (k.0 - b.0).abs() > TIE_EPS {
                    k.0 < b.0
                } else if (k.1 - b.1).abs() > TIE_EPS {
                    k.1 > b.1
                } else {
                    k.2 < b.2
                }
            }
        };
        if better {
            best = Some((*dir, k));
        }
    }
    best.map(|(d, _)| d).ok_or(PlannerError::NoCandidates)
}
