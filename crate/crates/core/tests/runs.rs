use approx::assert_abs_diff_eq;
use nspmr::sim::sensor_reachable;
use nspmr::trajectory::polyline_length;
use nspmr::{
    audit_collisions, builtin_scenario, generate_world, grid_oracle, path_length, run, run_with, BuiltinId, Outcome,
    PlannerKind, Point2, RunConfig, Rules, Scenario, WorldSpec,
};

fn default_run(s: &Scenario, p: PlannerKind) -> (nspmr::Trajectory, nspmr::RunResult) {
    run_with(s, p, RunConfig::default()).unwrap()
}

#[test]
fn scenario1_lengths_and_ordering() {
    let s = builtin_scenario(BuiltinId::Scenario1);
    let n = default_run(&s, PlannerKind::Nspmr).1;
    let b1 = default_run(&s, PlannerKind::Bug1).1;
    let b2 = default_run(&s, PlannerKind::Bug2).1;
    for r in [&n, &b1, &b2] {
        assert_eq!(r.outcome, Outcome::GoalReached);
    }
    assert!((34.4..=46.6).contains(&n.length), "nspmr {}", n.length);
    assert!((38.8..=52.6).contains(&b2.length), "bug2 {}", b2.length);
    assert!((72.8..=121.4).contains(&b1.length), "bug1 {}", b1.length);
    assert!(n.length < b2.length && b2.length < b1.length);
}

#[test]
fn scenario1_nspmr_follows_the_expected_corners() {
    // diagonal to OB1, up its west face, diagonal to OB2, along its
    // underside, diagonal to OB3 and up its west face
    let s = builtin_scenario(BuiltinId::Scenario1);
    let (t, _) = default_run(&s, PlannerKind::Nspmr);
    let pts: Vec<Point2> = t.points().collect();
    let mut from = 0;
    for (x, y) in [(5.5, 5.5), (5.5, 9.75), (10.5, 14.75), (13.5, 14.75), (18.75, 20.0), (18.75, 22.0)] {
        let at = pts[from..]
            .iter()
            .position(|p| *p == Point2::new(x, y))
            .unwrap_or_else(|| panic!("route misses ({x}, {y})"));
        from += at;
    }
    assert_abs_diff_eq!(path_length(&t), polyline_length(t.points()), epsilon = 1e-12);
}

#[test]
fn empty_world_is_straight_for_every_planner() {
    let mut s = builtin_scenario(BuiltinId::Scenario1);
    s.obstacles.clear();
    for p in PlannerKind::ALL {
        let (_, r) = default_run(&s, p);
        assert_eq!(r.outcome, Outcome::GoalReached);
        assert_abs_diff_eq!(r.length, 25.0 * 2f64.sqrt(), epsilon = 1e-9);
    }
}

#[test]
fn no_collisions_on_any_fixture() {
    for id in BuiltinId::ALL {
        let s = builtin_scenario(id);
        for p in PlannerKind::ALL {
            if s.is_dynamic() && p != PlannerKind::Nspmr {
                continue;
            }
            let (t, r) = default_run(&s, p);
            assert!(audit_collisions(&t, &s).is_empty(), "{id} {p}");
            assert_abs_diff_eq!(r.travel_time * s.speed, r.length, epsilon = 1e-9 * r.length.max(1.0));
        }
    }
}

#[test]
fn dynamic_crossing_obstacle_crosses_the_start_goal_line() {
    let s = builtin_scenario(BuiltinId::DynamicCrossing);
    let (t, r) = default_run(&s, PlannerKind::Nspmr);
    assert_eq!(r.outcome, Outcome::GoalReached);
    // the mover sits east of the diagonal at the start and west of it at the end
    let ob = &s.obstacles[0];
    let side = |dx: f64| ob.shape.vertices().iter().all(|v| v.x + dx > v.y);
    let (vx, _) = ob.velocity.unwrap();
    assert!(side(0.0));
    assert!(!side(vx * t.waypoints.last().unwrap().time));
    // the robot had to give way
    assert!(r.length > 25.0 * 2f64.sqrt() + 1e-6);
}

#[test]
fn bug_planners_reject_moving_obstacles() {
    let s = builtin_scenario(BuiltinId::DynamicCrossing);
    assert!(run(&s, PlannerKind::Bug1, 1000).is_err());
    assert!(run(&s, PlannerKind::Bug2, 1000).is_err());
}

#[test]
fn oracle_bounds_every_planner_on_static_fixtures() {
    for id in BuiltinId::ALL {
        let s = builtin_scenario(id);
        if s.is_dynamic() {
            continue;
        }
        let oracle = grid_oracle(&s, s.delta / 2.0).unwrap();
        for p in PlannerKind::ALL {
            let (_, r) = default_run(&s, p);
            assert!(r.length >= oracle - s.delta, "{id} {p}: {} < {oracle}", r.length);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for id in BuiltinId::ALL {
        let s = builtin_scenario(id);
        let a = default_run(&s, PlannerKind::Nspmr);
        let b = default_run(&s, PlannerKind::Nspmr);
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn rules_off_loops_forever_on_trap_fixtures() {
    for id in [BuiltinId::ConcaveTrap, BuiltinId::CorridorLoop, BuiltinId::TriangleLoop] {
        let s = builtin_scenario(id);
        let cfg = RunConfig {
            max_iters: Some(2000),
            rules: Rules::NONE,
        };
        let (t, r) = run_with(&s, PlannerKind::Nspmr, cfg).unwrap();
        assert_eq!(r.outcome, Outcome::IterationLimit, "{id}");
        // memoryless selection: once a position repeats the run is periodic
        let pts: Vec<Point2> = t.points().collect();
        let period = (1..50).find(|&p| pts[pts.len() - 1 - p] == pts[pts.len() - 1]).unwrap();
        assert!(period >= 2);
        if id == BuiltinId::TriangleLoop {
            assert!(period >= 3, "triangle cycle has {period} positions");
        }
    }
}

#[test]
fn generated_worlds_are_solved() {
    let spec = WorldSpec::default();
    for seed in 0..8 {
        let s = generate_world(seed, &spec).unwrap();
        assert!(sensor_reachable(&s));
        let (t, r) = default_run(&s, PlannerKind::Nspmr);
        assert_eq!(r.outcome, Outcome::GoalReached, "seed {seed}");
        assert!(audit_collisions(&t, &s).is_empty());
        assert!(r.length >= grid_oracle(&s, s.delta / 2.0).unwrap() - s.delta);
    }
}
