use std::fmt;

use crate::geometry::{CompassAngle, Point2};

/// How a waypoint was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaypointEvent {
    Start,
    Move,
    Backtrack,
    /// Step along an obstacle boundary (Bug planners).
    Follow,
}

impl WaypointEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Start => "start",
            Self::Move => "move",
            Self::Backtrack => "backtrack",
            Self::Follow => "follow",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "start" => Self::Start,
            "move" => Self::Move,
            "backtrack" => Self::Backtrack,
            "follow" => Self::Follow,
            _ => return None,
        })
    }
}

impl fmt::Display for WaypointEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub pos: Point2,
    /// Simulation time (s) at which the robot stands here.
    pub time: f64,
    pub event: WaypointEvent,
    /// Heading of the step that led here.
    pub heading: Option<CompassAngle>,
}

/// Ordered waypoints `P_0 .. P_k`, one per simulation tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Tick length (s).
    pub dt: f64,
    pub waypoints: Vec<Waypoint>,
}

impl Trajectory {
    pub fn new(start: Point2, dt: f64) -> Self {
        Self {
            dt,
            waypoints: vec![Waypoint {
                pos: start,
                time: 0.0,
                event: WaypointEvent::Start,
                heading: None,
            }],
        }
    }

    pub fn push(&mut self, pos: Point2, event: WaypointEvent, heading: Option<CompassAngle>) {
        let time = self.waypoints.len() as f64 * self.dt;
        self.waypoints.push(Waypoint {
            pos,
            time,
            event,
            heading,
        });
    }

    /// Appends a step, taking the heading from the displacement.
    pub fn push_step(&mut self, pos: Point2, event: WaypointEvent) {
        let last = self.last();
        let (dx, dy) = pos.minus(last);
        let heading = (dx != 0.0 || dy != 0.0).then(|| CompassAngle::of_vector(dx, dy));
        self.push(pos, event, heading);
    }

    pub fn last(&self) -> Point2 {
        self.waypoints.last().expect("trajectory starts non-empty").pos
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point2> + '_ {
        self.waypoints.iter().map(|w| w.pos)
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Waypoint, &Waypoint)> + '_ {
        self.waypoints.windows(2).map(|w| (&w[0], &w[1]))
    }
}

/// Sum of Euclidean distances between consecutive points.
pub fn polyline_length<I: IntoIterator<Item = Point2>>(points: I) -> f64 {
    let mut it = points.into_iter();
    let Some(mut prev) = it.next() else {
        return 0.0;
    };
    let mut total = 0.0;
    for p in it {
        total += prev.distance(p);
        prev = p;
    }
    total
}

/// Traveled path length of a trajectory.
pub fn path_length(t: &Trajectory) -> f64 {
    polyline_length(t.points())
}
