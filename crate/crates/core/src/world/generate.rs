//! Seeded random worlds for benchmarking.
//!
//! Obstacles are dropped uniformly inside a 29 m square around the (0, 0)
//! to (25, 25) run. Every obstacle keeps at least δ from the others and 2δ
//! from start and goal, and a world is only accepted when the step planner
//! can reach the goal on its lattice using sensor-free moves.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Bounds, Obstacle, Scenario, ScenarioError, DEFAULT_DELTA, DEFAULT_SENSOR_RANGE, DEFAULT_SPEED};
use crate::geometry::{point_polygon_distance, polygon_distance, Point2, Polygon};
use crate::sim::sensor_reachable;

const PLACEMENT_TRIES: usize = 400;
const WORLD_TRIES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObstacleKind {
    Rect,
    L,
    Triangle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldSpec {
    pub count: usize,
    /// Side lengths of each obstacle's bounding box are drawn from
    /// `[min_size, max_size]`.
    pub min_size: f64,
    pub max_size: f64,
    pub kinds: Vec<ObstacleKind>,
}

impl Default for WorldSpec {
    fn default() -> Self {
        Self {
            count: 10,
            min_size: 1.0,
            max_size: 4.0,
            kinds: vec![ObstacleKind::Rect, ObstacleKind::L, ObstacleKind::Triangle],
        }
    }
}

fn shape(kind: ObstacleKind, w: f64, h: f64, rng: &mut ChaCha8Rng) -> Polygon {
    let p = Point2::new;
    let flip_x = rng.gen_bool(0.5);
    let flip_y = rng.gen_bool(0.5);
    let mut pts = match kind {
        ObstacleKind::Rect => vec![p(0.0, 0.0), p(w, 0.0), p(w, h), p(0.0, h)],
        ObstacleKind::L => {
            let a = w * rng.gen_range(0.35..0.6);
            let b = h * rng.gen_range(0.35..0.6);
            vec![p(0.0, 0.0), p(w, 0.0), p(w, b), p(a, b), p(a, h), p(0.0, h)]
        }
        ObstacleKind::Triangle => vec![p(0.0, 0.0), p(w, 0.0), p(w * rng.gen_range(0.0..1.0), h)],
    };
    for v in &mut pts {
        if flip_x {
            v.x = w - v.x;
        }
        if flip_y {
            v.y = h - v.y;
        }
    }
    Polygon::new(pts).expect("generated shapes are simple")
}

fn place(spec: &WorldSpec, s: &Scenario, rng: &mut ChaCha8Rng) -> Option<Polygon> {
    let b = &s.bounds;
    let gap = s.delta;
    for _ in 0..PLACEMENT_TRIES {
        let kind = *spec.kinds.choose(rng)?;
        let w = rng.gen_range(spec.min_size..=spec.max_size);
        let h = rng.gen_range(spec.min_size..=spec.max_size);
        if w + 2.0 * gap >= b.width() || h + 2.0 * gap >= b.height() {
            return None;
        }
        let x = rng.gen_range(b.xmin + gap..b.xmax - gap - w);
        let y = rng.gen_range(b.ymin + gap..b.ymax - gap - h);
        let poly = shape(kind, w, h, rng).translated(x, y);
        let clear_of_ends = [s.start, s.goal]
            .iter()
            .all(|&q| point_polygon_distance(q, &poly) >= 2.0 * s.delta);
        let clear_of_others = s.shapes().all(|o| polygon_distance(o, &poly) >= gap);
        if clear_of_ends && clear_of_others {
            return Some(poly);
        }
    }
    None
}

/// Deterministic random world for `(seed, spec)`.
pub fn generate_world(seed: u64, spec: &WorldSpec) -> Result<Scenario, ScenarioError> {
    if !(spec.min_size > 0.0 && spec.max_size >= spec.min_size && spec.max_size.is_finite()) {
        return Err(ScenarioError::Generation(format!(
            "obstacle sizes must satisfy 0 < min_size <= max_size (got {} and {})",
            spec.min_size, spec.max_size
        )));
    }
    if spec.count > 0 && spec.kinds.is_empty() {
        return Err(ScenarioError::Generation("no obstacle kinds to draw from".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = Scenario {
        name: format!("random_{seed}"),
        bounds: Bounds::new(-2.0, -2.0, 27.0, 27.0),
        start: Point2::new(0.0, 0.0),
        goal: Point2::new(25.0, 25.0),
        obstacles: Vec::new(),
        delta: DEFAULT_DELTA,
        sensor_range: DEFAULT_SENSOR_RANGE,
        speed: DEFAULT_SPEED,
    };
    'world: for _ in 0..WORLD_TRIES {
        let mut s = base.clone();
        for _ in 0..spec.count {
            match place(spec, &s, &mut rng) {
                Some(p) => s.obstacles.push(Obstacle::fixed(p)),
                None => continue 'world,
            }
        }
        if sensor_reachable(&s) {
            return Ok(s);
        }
    }
    Err(ScenarioError::Generation(format!(
        "no solvable placement of {} obstacles after {WORLD_TRIES} attempts (seed {seed})",
        spec.count
    )))
}
