//! Built-in fixtures. Coordinates are part of the public contract; bump
//! [`FIXTURE_VERSION`] whenever one changes.

use std::fmt;
use std::str::FromStr;

use super::{Bounds, Obstacle, Scenario, ScenarioError, DEFAULT_DELTA, DEFAULT_SENSOR_RANGE, DEFAULT_SPEED};
use crate::geometry::{Point2, Polygon};

pub const FIXTURE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinId {
    Scenario1,
    ConcaveTrap,
    CorridorLoop,
    TriangleLoop,
    OfficeLike,
    DynamicCrossing,
}

impl BuiltinId {
    pub const ALL: [BuiltinId; 6] = [
        Self::Scenario1,
        Self::ConcaveTrap,
        Self::CorridorLoop,
        Self::TriangleLoop,
        Self::OfficeLike,
        Self::DynamicCrossing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Scenario1 => "scenario1",
            Self::ConcaveTrap => "concave_trap",
            Self::CorridorLoop => "corridor_loop",
            Self::TriangleLoop => "triangle_loop",
            Self::OfficeLike => "office_like",
            Self::DynamicCrossing => "dynamic_crossing",
        }
    }
}

impl fmt::Display for BuiltinId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinId {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| ScenarioError::UnknownBuiltin(s.to_string()))
    }
}

fn poly(points: &[(f64, f64)]) -> Polygon {
    Polygon::new(points.iter().map(|&(x, y)| Point2::new(x, y)).collect())
        .expect("fixture polygons are valid")
}

fn scenario(name: &str, bounds: Bounds, start: (f64, f64), goal: (f64, f64), obstacles: Vec<Obstacle>) -> Scenario {
    Scenario {
        name: name.to_string(),
        bounds,
        start: Point2::new(start.0, start.1),
        goal: Point2::new(goal.0, goal.1),
        obstacles,
        delta: DEFAULT_DELTA,
        sensor_range: DEFAULT_SENSOR_RANGE,
        speed: DEFAULT_SPEED,
    }
}

pub fn builtin_scenario(id: BuiltinId) -> Scenario {
    let fixed = |p: Polygon| Obstacle::fixed(p);
    match id {
        // three rectangles between (0, 0) and (25, 25)
        BuiltinId::Scenario1 => scenario(
            "scenario1",
            Bounds::new(-2.0, -2.0, 27.0, 27.0),
            (0.0, 0.0),
            (25.0, 25.0),
            vec![
                fixed(Polygon::rect(5.8, 1.0, 7.5, 9.8)),
                fixed(Polygon::rect(1.0, 15.0, 13.5, 17.8)),
                fixed(Polygon::rect(18.9, 12.0, 20.2, 22.0)),
            ],
        ),
        // a cup opening toward the start with the goal behind its floor
        BuiltinId::ConcaveTrap => scenario(
            "concave_trap",
            Bounds::new(-2.0, -2.0, 22.0, 22.0),
            (10.0, 0.0),
            (10.0, 16.0),
            vec![fixed(poly(&[
                (7.9, 5.0),
                (8.5, 5.0),
                (8.5, 7.0),
                (11.5, 7.0),
                (11.5, 5.0),
                (12.1, 5.0),
                (12.1, 7.6),
                (7.9, 7.6),
            ]))],
        ),
        // a 1 m wide dead-end channel on the start-goal line
        BuiltinId::CorridorLoop => scenario(
            "corridor_loop",
            Bounds::new(-2.0, -2.0, 22.0, 22.0),
            (10.0, 0.0),
            (10.0, 16.0),
            vec![fixed(poly(&[
                (9.0, 4.0),
                (9.5, 4.0),
                (9.5, 7.0),
                (10.5, 7.0),
                (10.5, 4.0),
                (11.0, 4.0),
                (11.0, 7.5),
                (9.0, 7.5),
            ]))],
        ),
        // goal tucked under the tip of a wedge; greedy motion circles the tip
        BuiltinId::TriangleLoop => scenario(
            "triangle_loop",
            Bounds::new(-2.0, -2.0, 22.0, 22.0),
            (10.0, 10.0),
            (17.5, 7.5),
            vec![fixed(poly(&[(13.7, 6.8), (18.0, 7.9), (13.7, 8.8)]))],
        ),
        BuiltinId::OfficeLike => office_like(),
        // a block sliding west across the diagonal as the robot arrives
        BuiltinId::DynamicCrossing => scenario(
            "dynamic_crossing",
            Bounds::new(-2.0, -2.0, 27.0, 27.0),
            (0.0, 0.0),
            (25.0, 25.0),
            vec![Obstacle::moving(Polygon::rect(15.0, 11.0, 17.0, 13.0), -2.0, 0.0)],
        ),
    }
}

fn office_like() -> Scenario {
    let wall = |x0, y0, x1, y1| Obstacle::fixed(Polygon::rect(x0, y0, x1, y1));
    scenario(
        "office_like",
        Bounds::new(0.0, 0.0, 40.0, 40.0),
        (20.0, 2.0),
        (20.0, 36.0),
        vec![
            // lower hall wall, short to the west
            wall(18.0, 8.9, 27.0, 9.3),
            wall(28.0, 7.0, 28.4, 10.0),
            // partition with a narrow door on the start-goal column
            wall(8.0, 17.0, 19.8, 17.4),
            wall(20.2, 17.0, 32.0, 17.4),
            // upper hall wall, long to the east
            wall(17.0, 24.9, 31.0, 25.3),
            wall(32.0, 23.0, 32.4, 27.0),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{parse_scenario, serialize_scenario, validate_scenario};

    #[test]
    fn all_fixtures_validate_and_round_trip() {
        for id in BuiltinId::ALL {
            let s = builtin_scenario(id);
            assert_eq!(s.name, id.name());
            assert!(validate_scenario(&s).is_empty(), "{id}: {:?}", validate_scenario(&s));
            assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s, "{id}");
        }
    }

    #[test]
    fn scenario1_matches_published_coordinates() {
        let s = builtin_scenario(BuiltinId::Scenario1);
        assert_eq!((s.start, s.goal), (Point2::new(0.0, 0.0), Point2::new(25.0, 25.0)));
        let corners: Vec<Vec<(f64, f64)>> = s
            .shapes()
            .map(|p| p.vertices().iter().map(|v| (v.x, v.y)).collect())
            .collect();
        assert_eq!(
            corners,
            vec![
                vec![(5.8, 1.0), (7.5, 1.0), (7.5, 9.8), (5.8, 9.8)],
                vec![(1.0, 15.0), (13.5, 15.0), (13.5, 17.8), (1.0, 17.8)],
                vec![(18.9, 12.0), (20.2, 12.0), (20.2, 22.0), (18.9, 22.0)],
            ]
        );
    }

    #[test]
    fn ids_parse_by_name() {
        for id in BuiltinId::ALL {
            assert_eq!(id.name().parse::<BuiltinId>().unwrap(), id);
        }
        assert!(matches!("nope".parse::<BuiltinId>(), Err(ScenarioError::UnknownBuiltin(_))));
    }

    #[test]
    fn dynamic_crossing_has_a_mover() {
        let s = builtin_scenario(BuiltinId::DynamicCrossing);
        assert!(s.obstacles.iter().any(|o| o.velocity.is_some_and(|(vx, vy)| vx != 0.0 || vy != 0.0)));
    }
}
