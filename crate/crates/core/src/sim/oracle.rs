//! Independent shortest-path references on a square lattice.
//!
//! The lattice is anchored at the start, clipped to the world bounds and
//! 8-connected. [`grid_oracle`] is a plain free-space search used as a
//! lower bound on planner path lengths; [`sensor_reachable`] asks whether
//! the goal can be reached using only moves the range sensors report free.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geometry::{segment_touches_polygon, CompassAngle, Point2};
use crate::sensing::scan;
use crate::world::Scenario;

/// Lattice offsets in sensor order (north first, clockwise).
const NEIGHBOURS: [(i64, i64); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];

struct Lattice {
    origin: Point2,
    res: f64,
    i0: i64,
    j0: i64,
    nx: usize,
    ny: usize,
}

impl Lattice {
    fn new(s: &Scenario, res: f64) -> Self {
        let b = &s.bounds;
        let o = s.start;
        // strictly inside the bounds
        let lo = |min: f64, o: f64| ((min - o) / res).floor() as i64 + 1;
        let hi = |max: f64, o: f64| ((max - o) / res).ceil() as i64 - 1;
        let (i0, i1) = (lo(b.xmin, o.x), hi(b.xmax, o.x));
        let (j0, j1) = (lo(b.ymin, o.y), hi(b.ymax, o.y));
        Self {
            origin: o,
            res,
            i0,
            j0,
            nx: (i1 - i0 + 1).max(0) as usize,
            ny: (j1 - j0 + 1).max(0) as usize,
        }
    }

    fn len(&self) -> usize {
        self.nx * self.ny
    }

    fn point(&self, idx: usize) -> Point2 {
        let (i, j) = self.coords(idx);
        self.origin.offset(i as f64 * self.res, j as f64 * self.res)
    }

    fn coords(&self, idx: usize) -> (i64, i64) {
        (self.i0 + (idx % self.nx) as i64, self.j0 + (idx / self.nx) as i64)
    }

    fn index(&self, i: i64, j: i64) -> Option<usize> {
        let (a, b) = (i - self.i0, j - self.j0);
        (a >= 0 && b >= 0 && (a as usize) < self.nx && (b as usize) < self.ny)
            .then(|| b as usize * self.nx + a as usize)
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Search from the start node. Returns the cheapest `path + |node - goal|`
/// over nodes within `reach` of the goal. With `guided` the queue is
/// ordered by cost plus straight-line distance to the goal, which finds
/// the same optimum sooner.
fn search(
    s: &Scenario,
    res: f64,
    reach: f64,
    guided: bool,
    mut edge_ok: impl FnMut(&Lattice, usize, usize, usize) -> bool,
) -> Option<f64> {
    let lat = Lattice::new(s, res);
    let start = lat.index(0, 0)?;
    if s.obstacle_at(s.start).is_some() {
        return None;
    }
    let mut dist = vec![f64::INFINITY; lat.len()];
    let mut heap = BinaryHeap::new();
    let h = |p: Point2| if guided { p.distance(s.goal) } else { 0.0 };
    dist[start] = 0.0;
    heap.push(Entry(h(s.start), start));
    let mut best = f64::INFINITY;
    while let Some(Entry(f, u)) = heap.pop() {
        let p = lat.point(u);
        let d = dist[u];
        if f > d + h(p) + 1e-12 {
            continue;
        }
        if f >= best {
            break;
        }
        let to_goal = p.distance(s.goal);
        if to_goal <= reach + 1e-9 {
            best = best.min(d + to_goal);
        }
        let (i, j) = lat.coords(u);
        for (k, (di, dj)) in NEIGHBOURS.iter().enumerate() {
            let Some(v) = lat.index(i + di, j + dj) else { continue };
            let w = if k % 2 == 0 { res } else { res * std::f64::consts::SQRT_2 };
            let nd = d + w;
            if nd < dist[v] && edge_ok(&lat, u, v, k) {
                dist[v] = nd;
                heap.push(Entry(nd + h(lat.point(v)), v));
            }
        }
    }
    best.is_finite().then_some(best)
}

/// Length of the shortest 8-connected lattice path from start to goal whose
/// edges stay clear of every obstacle (uniform-cost search), or `None` if the lattice does not
/// connect them. Nodes within `resolution` of the goal finish with a
/// straight hop to it.
pub fn grid_oracle(s: &Scenario, resolution: f64) -> Option<f64> {
    if resolution.is_nan() || resolution <= 0.0 {
        return None;
    }
    let boxes: Vec<(Point2, Point2)> = s.shapes().map(|p| p.bbox()).collect();
    search(s, resolution, resolution, false, |lat, u, v, _| {
        let (a, b) = (lat.point(u), lat.point(v));
        let (lo_x, hi_x) = (a.x.min(b.x), a.x.max(b.x));
        let (lo_y, hi_y) = (a.y.min(b.y), a.y.max(b.y));
        !s.shapes().zip(&boxes).any(|(poly, (lo, hi))| {
            hi_x >= lo.x && lo_x <= hi.x && hi_y >= lo.y && lo_y <= hi.y && segment_touches_polygon(a, b, poly)
        })
    })
}

/// True when the goal can be reached on the δ/2 lattice using only moves
/// whose sensor reads free, i.e. the moves the step planner may take.
pub fn sensor_reachable(s: &Scenario) -> bool {
    let res = s.delta / 2.0;
    let mut cache: Vec<Option<[bool; 8]>> = Vec::new();
    search(s, res, res, true, |lat, u, _, k| {
        if cache.is_empty() {
            cache = vec![None; lat.len()];
        }
        let flags = *cache[u].get_or_insert_with(|| {
            scan(lat.point(u), s, s.sensor_range, s.delta)
                .map(|r| r.flags())
                .unwrap_or([false; 8])
        });
        debug_assert_eq!(CompassAngle::LATTICE[k].lattice_index(), Some(k));
        flags[k]
    })
    .is_some()
}
