//! Bug1 and Bug2 reference planners.
//!
//! Both move straight toward the goal in δ/2 steps. Obstacles are inflated
//! by a clearance of δ/4 and the robot follows the inflated outline when it
//! runs into one. Bug1 circles the whole outline, returns along the shorter
//! arc to the outline point nearest the goal and departs from there. Bug2
//! turns left at the hit point (the obstacle stays on its right, i.e. the
//! outline is walked clockwise) and departs at the first crossing of the
//! start-goal line that is closer to the goal than the hit point.

use thiserror::Error;

use crate::geometry::{
    closest_point_on_segment, first_entry, polygon_distance, polygon_offset, segment_intersection, GeometryError,
    Point2, Polygon, SegmentIntersection, EPS_GEOM,
};
use crate::trajectory::{Trajectory, WaypointEvent};
use crate::world::Scenario;

/// Tolerance used to locate points on an inflated outline.
const ON_BOUNDARY: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BugError {
    #[error("Bug planners need a static world; scenario `{0}` has moving obstacles")]
    DynamicScenario(String),
    #[error("point {0} is not on the inflated outline of OB{1}")]
    EntryNotOnBoundary(Point2, usize),
    #[error("cannot inflate OB{0}: {1}")]
    Inflate(usize, GeometryError),
    #[error("inflated outlines of OB{0} and OB{1} overlap; boundary following needs them apart")]
    OutlinesOverlap(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkDirection {
    /// Along the stored (counterclockwise) vertex order.
    CounterClockwise,
    Clockwise,
}

impl WalkDirection {
    pub fn reversed(self) -> Self {
        match self {
            Self::CounterClockwise => Self::Clockwise,
            Self::Clockwise => Self::CounterClockwise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkEnd {
    Stopped,
    Circumnavigated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryWalk {
    pub obstacle: usize,
    pub entry: Point2,
    pub direction: WalkDirection,
    /// Points along the inflated outline, starting at `entry`.
    pub polyline: Vec<Point2>,
    pub end: WalkEnd,
}

impl BoundaryWalk {
    pub fn length(&self) -> f64 {
        crate::trajectory::polyline_length(self.polyline.iter().copied())
    }
}

/// Clearance between obstacles and the outline the Bug planners follow.
pub fn clearance(delta: f64) -> f64 {
    delta / 4.0
}

/// Inflated outline of obstacle `index` (0-based).
pub fn inflated(world: &Scenario, index: usize) -> Result<Polygon, BugError> {
    polygon_offset(&world.obstacles[index].shape, clearance(world.delta))
        .map_err(|e| BugError::Inflate(index + 1, e))
}

/// Stop rule adapter for plain point predicates.
pub fn stop_when(mut pred: impl FnMut(Point2) -> bool) -> impl FnMut(Point2, Point2) -> Option<Point2> {
    move |_, to| pred(to).then_some(to)
}

/// Stop rule that fires when the walk passes through `target`.
pub fn stop_at(target: Point2) -> impl FnMut(Point2, Point2) -> Option<Point2> {
    move |from, to| {
        if from == to {
            return (from.distance(target) <= ON_BOUNDARY).then_some(target);
        }
        (closest_point_on_segment(target, from, to).0 <= ON_BOUNDARY).then_some(target)
    }
}

/// Position of `p` along the outline as `(edge index, offset along edge)`.
fn locate(outline: &Polygon, p: Point2) -> Option<(usize, f64)> {
    outline
        .edges()
        .enumerate()
        .map(|(i, (a, b))| (i, closest_point_on_segment(p, a, b).0, a))
        .filter(|&(_, d, _)| d <= ON_BOUNDARY)
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _, a)| (i, a.distance(p)))
}

/// Outline points visited when walking once around from `entry`, with
/// vertices included. Consecutive points are at most `step` apart.
fn walk_points(outline: &Polygon, entry: Point2, dir: WalkDirection, step: f64) -> Option<Vec<Point2>> {
    let (edge, _) = locate(outline, entry)?;
    let v = outline.vertices();
    let n = v.len();
    // corner sequence in walking order, beginning with the first corner ahead
    let corners: Vec<Point2> = match dir {
        WalkDirection::CounterClockwise => (1..=n).map(|k| v[(edge + k) % n]).collect(),
        WalkDirection::Clockwise => (0..n).map(|k| v[(edge + n - k) % n]).collect(),
    };
    let mut out = vec![entry];
    let mut cur = entry;
    for target in corners.into_iter().chain(std::iter::once(entry)) {
        let len = cur.distance(target);
        if len <= EPS_GEOM {
            continue;
        }
        let pieces = (len / step).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            out.push(cur.lerp(target, k as f64 / pieces as f64));
        }
        cur = target;
    }
    Some(out)
}

/// Walks the inflated outline of obstacle `obstacle` (0-based) from
/// `entry` until `stop` fires or the walk returns to `entry`.
///
/// `stop(from, to)` is asked about every step and returns the first point
/// of that step at which to halt. It is first asked about `(entry, entry)`.
pub fn follow_boundary(
    world: &Scenario,
    obstacle: usize,
    entry: Point2,
    dir: WalkDirection,
    mut stop: impl FnMut(Point2, Point2) -> Option<Point2>,
) -> Result<BoundaryWalk, BugError> {
    let outline = inflated(world, obstacle)?;
    let points = walk_points(&outline, entry, dir, world.delta / 2.0)
        .ok_or(BugError::EntryNotOnBoundary(entry, obstacle + 1))?;
    let mut walk = BoundaryWalk {
        obstacle,
        entry,
        direction: dir,
        polyline: vec![entry],
        end: WalkEnd::Circumnavigated,
    };
    if stop(entry, entry).is_some() {
        walk.end = WalkEnd::Stopped;
        return Ok(walk);
    }
    for pair in points.windows(2) {
        if let Some(p) = stop(pair[0], pair[1]) {
            if p.distance(pair[0]) > EPS_GEOM {
                walk.polyline.push(p);
            }
            walk.end = WalkEnd::Stopped;
            return Ok(walk);
        }
        walk.polyline.push(pair[1]);
    }
    Ok(walk)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BugOutcome {
    GoalReached,
    Unreachable,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BugRun {
    pub trajectory: Trajectory,
    pub outcome: BugOutcome,
    /// `(hit, leave)` pairs, one per obstacle encounter that was left.
    pub encounters: Vec<(Point2, Point2)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Bug1,
    Bug2,
}

/// Options for the Bug runs; `relaxed_leave` lets Bug2 depart at any
/// start-goal line crossing, which can cycle forever.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BugOptions {
    pub relaxed_leave: bool,
}

pub fn bug1_run(s: &Scenario, max_iters: u64) -> Result<BugRun, BugError> {
    run(s, max_iters, Variant::Bug1, BugOptions::default())
}

pub fn bug2_run(s: &Scenario, max_iters: u64) -> Result<BugRun, BugError> {
    run(s, max_iters, Variant::Bug2, BugOptions::default())
}

pub fn bug2_run_with(s: &Scenario, max_iters: u64, opts: BugOptions) -> Result<BugRun, BugError> {
    run(s, max_iters, Variant::Bug2, opts)
}

struct Runner {
    outlines: Vec<Polygon>,
    traj: Trajectory,
    max_iters: u64,
    encounters: Vec<(Point2, Point2)>,
}

impl Runner {
    fn iters(&self) -> u64 {
        (self.traj.len() - 1) as u64
    }

    fn exhausted(&self) -> bool {
        self.iters() >= self.max_iters
    }

    fn pos(&self) -> Point2 {
        self.traj.last()
    }

    /// Earliest outline entered by the segment `a-b`: `(obstacle, t)`.
    fn first_hit(&self, a: Point2, b: Point2) -> Option<(usize, f64)> {
        self.outlines
            .iter()
            .enumerate()
            .filter_map(|(k, o)| first_entry(a, b, o).map(|t| (k, t)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }

    /// Appends the walk's points, honouring the iteration budget.
    fn follow(&mut self, walk: &BoundaryWalk) -> bool {
        for p in walk.polyline.iter().skip(1) {
            if self.exhausted() {
                return false;
            }
            self.traj.push_step(*p, WaypointEvent::Follow);
        }
        true
    }
}

fn run(s: &Scenario, max_iters: u64, variant: Variant, opts: BugOptions) -> Result<BugRun, BugError> {
    if s.is_dynamic() {
        return Err(BugError::DynamicScenario(s.name.clone()));
    }
    let outlines = (0..s.obstacles.len())
        .map(|k| inflated(s, k))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, a) in outlines.iter().enumerate() {
        for (j, b) in outlines.iter().enumerate().skip(i + 1) {
            if polygon_distance(a, b) <= EPS_GEOM {
                return Err(BugError::OutlinesOverlap(i + 1, j + 1));
            }
        }
    }
    let mut r = Runner {
        outlines,
        traj: Trajectory::new(s.start, (s.delta / 2.0) / s.speed),
        max_iters,
        encounters: Vec::new(),
    };
    let step = s.delta / 2.0;
    let goal = s.goal;
    let finish = |r: Runner, outcome| BugRun {
        trajectory: r.traj,
        outcome,
        encounters: r.encounters,
    };

    loop {
        let pos = r.pos();
        let remaining = pos.distance(goal);
        if remaining <= EPS_GEOM {
            return Ok(finish(r, BugOutcome::GoalReached));
        }
        if r.exhausted() {
            return Ok(finish(r, BugOutcome::IterationLimit));
        }
        let next = pos.lerp(goal, (step / remaining).min(1.0));
        let Some((k, t)) = r.first_hit(pos, next) else {
            r.traj.push_step(next, WaypointEvent::Move);
            continue;
        };
        let hit = pos.lerp(next, t);
        if t * pos.distance(next) > EPS_GEOM {
            r.traj.push_step(hit, WaypointEvent::Move);
        }
        let hit_dist = hit.distance(goal);

        let leave = match variant {
            Variant::Bug1 => {
                let around = follow_boundary(s, k, hit, WalkDirection::Clockwise, |_, _| None)?;
                if !r.follow(&around) {
                    return Ok(finish(r, BugOutcome::IterationLimit));
                }
                let Some((leave, arc)) = nearest_on_polyline(&around.polyline, goal) else {
                    return Ok(finish(r, BugOutcome::Unreachable));
                };
                if leave.distance(goal) >= hit_dist - EPS_GEOM {
                    return Ok(finish(r, BugOutcome::Unreachable));
                }
                let perimeter = around.length();
                let dir = if arc <= perimeter - arc {
                    WalkDirection::Clockwise
                } else {
                    WalkDirection::CounterClockwise
                };
                let back = follow_boundary(s, k, hit, dir, stop_at(leave))?;
                if !r.follow(&back) {
                    return Ok(finish(r, BugOutcome::IterationLimit));
                }
                leave
            }
            Variant::Bug2 => {
                let outline = &r.outlines[k];
                let rule = mline_leave(s.start, goal, hit_dist, step, outline, opts.relaxed_leave);
                let walk = follow_boundary(s, k, hit, WalkDirection::Clockwise, rule)?;
                if !r.follow(&walk) {
                    return Ok(finish(r, BugOutcome::IterationLimit));
                }
                if walk.end == WalkEnd::Circumnavigated {
                    return Ok(finish(r, BugOutcome::Unreachable));
                }
                r.pos()
            }
        };
        r.encounters.push((hit, leave));

        // leaving straight back into the same outline means the goal is enclosed
        let remaining = leave.distance(goal);
        if remaining > EPS_GEOM {
            let probe = leave.lerp(goal, (step / remaining).min(1.0));
            if matches!(r.first_hit(leave, probe), Some((j, t)) if j == k && t * leave.distance(probe) <= EPS_GEOM)
            {
                return Ok(finish(r, BugOutcome::Unreachable));
            }
        }
    }
}

/// Point of a polyline nearest to `goal`, with its arc length from the start.
fn nearest_on_polyline(poly: &[Point2], goal: Point2) -> Option<(Point2, f64)> {
    let mut best: Option<(Point2, f64, f64)> = None;
    let mut arc = 0.0;
    for w in poly.windows(2) {
        let (d, q) = closest_point_on_segment(goal, w[0], w[1]);
        if best.is_none_or(|b| d < b.2 - EPS_GEOM) {
            best = Some((q, arc + w[0].distance(q), d));
        }
        arc += w[0].distance(w[1]);
    }
    best.map(|(q, a, _)| (q, a))
}

/// Bug2 departure rule: first point of a step on the start-goal line that
/// is strictly closer to the goal than the hit point, from which the next
/// step toward the goal does not re-enter the outline.
fn mline_leave(
    start: Point2,
    goal: Point2,
    hit_dist: f64,
    step: f64,
    outline: &Polygon,
    relaxed: bool,
) -> impl FnMut(Point2, Point2) -> Option<Point2> + '_ {
    move |from, to| {
        if from == to {
            return None;
        }
        let candidates: Vec<Point2> = match segment_intersection(from, to, start, goal) {
            Ok(Some(SegmentIntersection::Point(p))) => vec![p],
            Ok(Some(SegmentIntersection::Collinear(p, q))) => {
                if from.distance(p) <= from.distance(q) {
                    vec![p, q]
                } else {
                    vec![q, p]
                }
            }
            _ => return None,
        };
        candidates.into_iter().find(|&p| {
            if p.distance(from) <= EPS_GEOM {
                // crossing at the start of the step was already examined
                return false;
            }
            let dist = p.distance(goal);
            if !relaxed && dist >= hit_dist - EPS_GEOM {
                return false;
            }
            if dist <= EPS_GEOM {
                return true;
            }
            let probe = p.lerp(goal, (step / dist).min(1.0));
            first_entry(p, probe, outline).is_none()
        })
    }
}
