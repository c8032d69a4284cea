//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p nspmr-cli --test acceptance`.

use std::time::{Duration, Instant};

use nspmr::geometry::circular_diff;
use nspmr::planner::{apply_move, filter_candidates, select_direction, NspmrState};
use nspmr::sim::departures_per_cell;
use nspmr::{
    audit_collisions, builtin_scenario, generate_world, grid_oracle, run_with, termination_ceiling, BuiltinId,
    CompassAngle, Outcome, PlannerKind, Point2, RunConfig, RunResult, Rules, Scenario, SensorScan, Trajectory,
    WaypointEvent, WorldSpec,
};
use nspmr_cli::trajectory_csv::trajectory_to_string;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn go(s: &Scenario, p: PlannerKind) -> Result<(Trajectory, RunResult), String> {
    run_with(s, p, RunConfig::default()).map_err(|e| format!("{}: {e}", s.name))
}

fn timed_run(s: &Scenario, p: PlannerKind) -> Result<(Trajectory, RunResult, Duration), String> {
    let t0 = Instant::now();
    let (t, r) = go(s, p)?;
    Ok((t, r, t0.elapsed()))
}

fn in_band(label: &str, r: &RunResult, lo: f64, hi: f64) -> Check {
    let msg = format!("{label} {} length {:.3} m, band [{lo}, {hi}]", r.outcome, r.length);
    if r.outcome == Outcome::GoalReached && (lo..=hi).contains(&r.length) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac1() -> Check {
    let (_, r, dt) = timed_run(&builtin_scenario(BuiltinId::Scenario1), PlannerKind::Nspmr)?;
    let band = in_band("nspmr", &r, 34.4, 46.6)?;
    let msg = format!("{band}, {:.3} s wall", dt.as_secs_f64());
    if dt < Duration::from_secs(1) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac2() -> Check {
    let (_, r) = go(&builtin_scenario(BuiltinId::Scenario1), PlannerKind::Bug2)?;
    in_band("bug2", &r, 38.8, 52.6)
}

fn ac3() -> Check {
    let (_, r) = go(&builtin_scenario(BuiltinId::Scenario1), PlannerKind::Bug1)?;
    in_band("bug1", &r, 72.8, 121.4)
}

fn ac4() -> Check {
    let s = builtin_scenario(BuiltinId::Scenario1);
    let n = go(&s, PlannerKind::Nspmr)?.1.length;
    let b2 = go(&s, PlannerKind::Bug2)?.1.length;
    let b1 = go(&s, PlannerKind::Bug1)?.1.length;
    let msg = format!("nspmr {n:.3} < bug2 {b2:.3} < bug1 {b1:.3}");
    if n < b2 && b2 < b1 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Smallest p with the last position repeated p steps earlier.
fn tail_period(t: &Trajectory) -> Option<usize> {
    let pts: Vec<Point2> = t.points().collect();
    let last = *pts.last()?;
    (1..pts.len().min(200)).find(|&p| pts[pts.len() - 1 - p] == last)
}

fn ac5() -> Check {
    let mut notes = Vec::new();
    for id in [BuiltinId::ConcaveTrap, BuiltinId::CorridorLoop, BuiltinId::TriangleLoop] {
        let s = builtin_scenario(id);
        let ceiling = termination_ceiling(&s);
        let cfg = RunConfig {
            max_iters: Some(ceiling),
            rules: Rules::ALL,
        };
        let (_, r) = run_with(&s, PlannerKind::Nspmr, cfg).map_err(|e| e.to_string())?;
        if r.outcome != Outcome::GoalReached {
            return Err(format!("{id}: {} after {} of {ceiling} iterations", r.outcome, r.iterations));
        }
        let control = RunConfig {
            max_iters: Some(ceiling),
            rules: Rules::NONE,
        };
        let (t, c) = run_with(&s, PlannerKind::Nspmr, control).map_err(|e| e.to_string())?;
        let period = tail_period(&t);
        if c.outcome != Outcome::IterationLimit || period.is_none() {
            return Err(format!("{id}: control run did not cycle ({})", c.outcome));
        }
        notes.push(format!("{id} {} it (control cycle {})", r.iterations, period.unwrap_or(0)));
    }
    Ok(notes.join(", "))
}

fn ac6() -> Check {
    let mut lens = Vec::new();
    for d in [2.0, 10.0, 20.0] {
        let mut s = builtin_scenario(BuiltinId::OfficeLike);
        s.sensor_range = d;
        let (_, r) = go(&s, PlannerKind::Nspmr)?;
        if r.outcome != Outcome::GoalReached {
            return Err(format!("d={d}: {}", r.outcome));
        }
        lens.push(r.length);
    }
    let msg = format!("d=2 {:.3}, d=10 {:.3}, d=20 {:.3}", lens[0], lens[1], lens[2]);
    if lens[1] <= lens[0] && lens[2] <= lens[1] && lens[2] <= 0.9 * lens[0] {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac7() -> Check {
    let t0 = Instant::now();
    let spec = WorldSpec::default();
    let mut ratios = Vec::new();
    for seed in 0..50 {
        let s = generate_world(seed, &spec).map_err(|e| format!("seed {seed}: {e}"))?;
        let (_, r) = go(&s, PlannerKind::Nspmr)?;
        let oracle = grid_oracle(&s, s.delta / 2.0).ok_or(format!("seed {seed}: no oracle path"))?;
        if r.outcome != Outcome::GoalReached {
            return Err(format!("seed {seed}: {}", r.outcome));
        }
        if r.length < oracle - s.delta {
            return Err(format!("seed {seed}: {:.3} below oracle {oracle:.3}", r.length));
        }
        ratios.push(r.length / oracle);
    }
    let elapsed = t0.elapsed();
    ratios.sort_by(f64::total_cmp);
    let median = (ratios[24] + ratios[25]) / 2.0;
    let msg = format!(
        "50/50 reached, median ratio {median:.3}, max {:.3}, {:.1} s",
        ratios[49],
        elapsed.as_secs_f64()
    );
    if median <= 2.0 && elapsed < Duration::from_secs(60) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Opposite consecutive headings are only allowed next to a retrace.
fn reversal_outside_backtrack(t: &Trajectory) -> Option<usize> {
    t.waypoints.windows(2).position(|w| {
        let both_moves = w[0].event == WaypointEvent::Move && w[1].event == WaypointEvent::Move;
        match (w[0].heading, w[1].heading) {
            (Some(a), Some(b)) => both_moves && (circular_diff(a, b) - 180.0).abs() < 1e-9,
            _ => false,
        }
    })
}

fn ac8() -> Check {
    let mut runs = 0;
    for id in BuiltinId::ALL {
        let s = builtin_scenario(id);
        for p in PlannerKind::ALL {
            if p != PlannerKind::Nspmr && s.is_dynamic() {
                continue;
            }
            let (t, _) = go(&s, p)?;
            if let Some(v) = audit_collisions(&t, &s).first() {
                return Err(format!("{id} {p}: {v}"));
            }
            runs += 1;
            if p != PlannerKind::Nspmr {
                continue;
            }
            let worst = departures_per_cell(&t, s.delta).into_values().max().unwrap_or(0);
            if worst > 8 {
                return Err(format!("{id}: {worst} departures from one cell"));
            }
            if let Some(i) = reversal_outside_backtrack(&t) {
                return Err(format!("{id}: reversal at waypoint {}", i + 1));
            }
            let again = go(&s, p)?.0;
            if trajectory_to_string(&t) != trajectory_to_string(&again) {
                return Err(format!("{id}: CSV differs between runs"));
            }
        }
    }
    Ok(format!("{runs} runs collision-free, departures <= 8, CSVs byte-identical"))
}

fn ac9() -> Check {
    let deg = CompassAngle::new;
    let mut blocked = SensorScan::open(1.0);
    blocked.readings[0].free = false;
    blocked.readings[7].free = false;
    let state = NspmrState::new(Point2::new(0.0, 0.0), 0.5);
    let cands = filter_candidates(&blocked, &state, 0.5);
    let a = select_direction(&cands, deg(315.0), &blocked).map_err(|e| e.to_string())?;
    let b = select_direction(&CompassAngle::LATTICE, deg(355.0), &SensorScan::open(1.0)).map_err(|e| e.to_string())?;
    if a != deg(270.0) || b != deg(0.0) {
        return Err(format!("selection gave {} and {}", a.degrees(), b.degrees()));
    }
    let table = [
        (0.0, 0.25),
        (0.25, 0.25),
        (0.25, 0.0),
        (0.25, -0.25),
        (0.0, -0.25),
        (-0.25, -0.25),
        (-0.25, 0.0),
        (-0.25, 0.25),
    ];
    let origin = Point2::new(0.0, 0.0);
    for (dir, (x, y)) in CompassAngle::LATTICE.into_iter().zip(table) {
        let got = apply_move(origin, dir, 0.5).map_err(|e| e.to_string())?;
        if got.distance(Point2::new(x, y)) > 1e-12 {
            return Err(format!("move {} gave {got}", dir.degrees()));
        }
    }
    Ok("315 with I1, I8 blocked -> 270; 355 -> 0; 8/8 displacement rows".into())
}

fn main() {
    let checks: [Criterion; 9] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(msg) => println!("{name} PASS {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
