mod common;

use common::{robot, RES};
use ecpp::tracking::{step, track, track_with, TrackingOptions};
use ecpp::{generate_boundary, BoundaryKind, ControllerGains, EdgePlanner, Method, PlannedPath, RobotState};
use proptest::prelude::*;

fn sine_path(amplitude: f64, period: f64, len: f64) -> PlannedPath {
    let xs: Vec<f64> = (0..=(len / RES).round() as usize).map(|k| k as f64 * RES).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| amplitude * (std::f64::consts::TAU * x / period).sin())
        .collect();
    PlannedPath::from_samples(&xs, &ys, Method::Scp)
}

fn start_near(path: &PlannedPath, offset: f64, dtheta: f64) -> RobotState {
    let p = path.poses[0];
    RobotState::at(
        p.x - offset * p.heading.sin(),
        p.y + offset * p.heading.cos(),
        p.heading + dtheta,
    )
}

#[test]
fn straight_offset_converges() {
    let path = sine_path(0.0, 1.0, 6.0);
    let gains = ControllerGains::default();
    for offset in [-0.1, 0.1] {
        let traj = track(&path, &start_near(&path, offset, 0.0), &gains, 0.01).unwrap();
        let settled = traj.errors.iter().position(|&e| e < 0.02).unwrap();
        assert!(traj.errors[settled..].iter().all(|&e| e < 0.02));
        assert!(traj.max_error() <= 0.15);
    }
}

#[test]
fn unicycle_circle_closes() {
    let dt = 1e-3;
    let n = (std::f64::consts::TAU / dt).round() as usize;
    let mut s = RobotState::at(0.0, 0.0, 0.0);
    let mut worst: f64 = 0.0;
    for k in 1..=n {
        s = step(&s, 1.0, 1.0, dt);
        let t = k as f64 * dt;
        worst = worst.max((s.x - t.sin()).hypot(s.y - (1.0 - t.cos())));
    }
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn tracks_a_planned_path() {
    let raw = generate_boundary(
        &BoundaryKind::Sine {
            offset: 2.0,
            amplitude: 0.6,
            period: 4.0,
            phase: 0.0,
        },
        12.0,
        RES,
    )
    .unwrap();
    let planner = EdgePlanner::new(&raw, &robot(), RES).unwrap();
    let path = planner.plan_smoothed(Method::Scp, &Default::default()).unwrap();
    let traj = track(&path, &start_near(&path, 0.0, 0.0), &ControllerGains::default(), 0.01).unwrap();
    assert!(traj.max_error() < 0.05, "{}", traj.max_error());
    let last = traj.states.last().unwrap();
    let end = path.poses.last().unwrap();
    assert!((last.x - end.x).hypot(last.y - end.y) <= 0.01);
}

fn check_invariants(path: &PlannedPath, s0: &RobotState, gains: &ControllerGains) -> Result<(), TestCaseError> {
    let options = TrackingOptions::default();
    let a = track_with(path, s0, gains, &options);
    let b = track_with(path, s0, gains, &options);
    let (a, b) = match (a, b) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(a), Err(b)) => {
            prop_assert_eq!(a.to_string(), b.to_string());
            return Ok(());
        }
        _ => return Err(TestCaseError::fail("runs disagree on success")),
    };
    for (p, q) in a.states.iter().zip(&b.states) {
        prop_assert_eq!(p.x.to_bits(), q.x.to_bits());
        prop_assert_eq!(p.y.to_bits(), q.y.to_bits());
        prop_assert_eq!(p.theta.to_bits(), q.theta.to_bits());
    }
    prop_assert_eq!(a.states.len(), b.states.len());
    let dt = options.dt;
    for w in a.states.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        prop_assert!(dx.hypot(dy) <= gains.v_max * dt + 1e-12);
        prop_assert!((q.theta - p.theta).abs() <= gains.omega_max * dt + 1e-12);
        // sideways motion in the body frame at the start of the step
        let lateral = -dx * p.theta.sin() + dy * p.theta.cos();
        prop_assert!(lateral.abs() <= 1e-12, "lateral {}", lateral);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kinematics_and_determinism(
        amplitude in 0.0f64..0.5,
        period in 1.5f64..5.0,
        offset in -0.2f64..0.2,
        dtheta in -0.5f64..0.5,
        k_angular in 1.0f64..8.0,
        v_max in 0.2f64..1.0,
    ) {
        let path = sine_path(amplitude, period, 3.0);
        let gains = ControllerGains { k_angular, v_max, ..ControllerGains::default() };
        check_invariants(&path, &start_near(&path, offset, dtheta), &gains)?;
    }
}
