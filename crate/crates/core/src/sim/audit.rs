use std::fmt;

use crate::geometry::{point_in_polygon, segment_touches_polygon, Containment, Point2};
use crate::trajectory::Trajectory;
use crate::world::{step_dynamics, Scenario};

/// A trajectory segment that touched an obstacle.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionViolation {
    /// Index of the segment's first waypoint.
    pub segment: usize,
    pub time: f64,
    /// 1-based obstacle number.
    pub obstacle: usize,
    pub from: Point2,
    pub to: Point2,
}

impl fmt::Display for CollisionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "segment {} ({} -> {}) at t = {:.3} s touches OB{}",
            self.segment, self.from, self.to, self.time, self.obstacle
        )
    }
}

/// Obstacle (0-based) touched by the move `from -> to`, checking the path
/// against the poses before the move and the endpoint against the poses
/// after it.
pub(crate) fn touched(before: &Scenario, after: &Scenario, from: Point2, to: Point2) -> Option<usize> {
    before
        .shapes()
        .position(|p| segment_touches_polygon(from, to, p))
        .or_else(|| {
            after
                .shapes()
                .position(|p| point_in_polygon(to, p) != Containment::Outside)
        })
}

/// Replays the obstacle motion along `t` and reports every segment that
/// touches an obstacle's closed region.
pub fn audit_collisions(t: &Trajectory, s: &Scenario) -> Vec<CollisionViolation> {
    let mut out = Vec::new();
    let mut world = s.clone();
    if let Some(k) = world.obstacle_at(s.start) {
        out.push(CollisionViolation {
            segment: 0,
            time: 0.0,
            obstacle: k + 1,
            from: s.start,
            to: s.start,
        });
    }
    for (i, (a, b)) in t.segments().enumerate() {
        let next = if world.is_dynamic() {
            step_dynamics(&world, t.dt)
        } else {
            world.clone()
        };
        if let Some(k) = touched(&world, &next, a.pos, b.pos) {
            out.push(CollisionViolation {
                segment: i,
                time: a.time,
                obstacle: k + 1,
                from: a.pos,
                to: b.pos,
            });
        }
        world = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::WaypointEvent;
    use crate::world::{builtin_scenario, BuiltinId, Obstacle};
    use crate::geometry::Polygon;

    #[test]
    fn crossing_ob1_is_reported() {
        let s = builtin_scenario(BuiltinId::Scenario1);
        let mut t = Trajectory::new(Point2::new(5.0, 5.0), 0.025);
        t.push_step(Point2::new(8.0, 5.0), WaypointEvent::Move);
        let v = audit_collisions(&t, &s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].obstacle, 1);
        assert!(v[0].to_string().contains("OB1"));
    }

    #[test]
    fn clear_path_is_clean() {
        let s = builtin_scenario(BuiltinId::Scenario1);
        let mut t = Trajectory::new(Point2::new(0.0, 0.0), 0.025);
        t.push_step(Point2::new(3.0, 3.0), WaypointEvent::Move);
        assert!(audit_collisions(&t, &s).is_empty());
    }

    #[test]
    fn moving_obstacle_is_checked_at_its_pose() {
        let mut s = builtin_scenario(BuiltinId::Scenario1);
        s.obstacles = vec![Obstacle::moving(Polygon::rect(1.0, -1.0, 2.0, 1.0), -20.0, 0.0)];
        // standing still at the origin; the block arrives after two ticks of 0.025 s
        let mut t = Trajectory::new(Point2::new(0.0, 0.0), 0.025);
        for _ in 0..3 {
            t.push_step(Point2::new(0.0, 0.0), WaypointEvent::Move);
        }
        let v = audit_collisions(&t, &s);
        assert_eq!(v.first().map(|c| c.segment), Some(1));
    }
}
