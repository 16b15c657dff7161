mod common;

use common::{brute_swept, perimeter_depth, robot, sine_corpus, RES};
use ecpp::sweep::{coverage_geometry, swept_region};
use ecpp::{
    check_collision, generate_boundary, uncut_area, BinaryGrid, Boundary, BoundaryKind, EdgePlanner, Method,
    PlannedPath, Pose, RobotSpec,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_polyline(rng: &mut impl Rng, n: usize) -> PlannedPath {
    let mut p = (rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0));
    let poses = (0..n)
        .map(|_| {
            p.0 += rng.gen_range(-0.05..0.08);
            p.1 += rng.gen_range(-0.05..0.05);
            Pose {
                x: p.0,
                y: p.1,
                heading: 0.0,
            }
        })
        .collect();
    PlannedPath {
        poses,
        method: Method::Scp,
        smoothed: false,
        diagnostics: Default::default(),
    }
}

#[test]
fn swept_region_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..12 {
        let n = [1, 2, 7, 50, 200][k % 5];
        let path = random_polyline(&mut rng, n);
        let r3 = [0.004, 0.03, 0.15, 0.2][k % 4];
        let spec = RobotSpec::new(0.8, 0.4, r3).unwrap();
        let geometry = BinaryGrid::new(1400, 900, RES, (-1.5, -2.5)).unwrap();
        let pts: Vec<(f64, f64)> = path.poses.iter().map(|p| (p.x, p.y)).collect();
        let got = swept_region(&path, &spec, &geometry);
        let want = brute_swept(&pts, r3, &geometry);
        if r3 > RES {
            assert_eq!(got, want, "case {k}: {n} poses, r3 = {r3}");
        } else {
            // the centerline cells come on top of the disk test
            assert!(want.is_subset_of(&got), "case {k}");
        }
    }
}

fn scp_path(raw: &Boundary) -> (EdgePlanner, PlannedPath) {
    let planner = EdgePlanner::new(raw, &robot(), RES).unwrap();
    let path = planner.plan_smoothed(Method::Scp, &Default::default()).unwrap();
    (planner, path)
}

#[test]
fn collision_depth_matches_perimeter_sampling() {
    let spec = robot();
    for (amplitude, period, raw) in sine_corpus().into_iter().step_by(3) {
        let (planner, path) = scp_path(&raw);
        let b_star = planner.boundary_star();
        let mut worst: f64 = 0.0;
        for pose in path.poses.iter().step_by(40) {
            let single = PlannedPath {
                poses: vec![*pose],
                ..path.clone()
            };
            let got = check_collision(&single, b_star, &spec, 0.0).unwrap().max_violation_depth;
            let want = perimeter_depth((pose.x, pose.y), pose.heading, &spec, |x| b_star.eval_extended(x), 1e-3);
            worst = worst.max(want);
            assert!(
                (got - want.max(0.0)).abs() <= RES,
                "A = {amplitude}, P = {period}, x = {}: {got} vs {want}",
                pose.x
            );
        }
        let whole = check_collision(&path, b_star, &spec, 0.02).unwrap();
        assert!(whole.max_violation_depth + RES >= worst);
    }
}

#[test]
fn random_poses_match_perimeter_sampling() {
    let spec = robot();
    let raw = generate_boundary(
        &BoundaryKind::Sine {
            offset: 2.0,
            amplitude: 0.4,
            period: 5.0,
            phase: 0.3,
        },
        6.0,
        RES,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let x = rng.gen_range(0.5..5.5);
        let pose = Pose {
            x,
            y: raw.eval(x) - rng.gen_range(0.0..0.5),
            heading: rng.gen_range(-3.2..3.2),
        };
        let path = PlannedPath::from_samples(&[pose.x], &[pose.y], Method::Big);
        let path = PlannedPath {
            poses: vec![pose],
            ..path
        };
        let got = check_collision(&path, &raw, &spec, 0.0).unwrap().max_violation_depth;
        let want = perimeter_depth((pose.x, pose.y), pose.heading, &spec, |x| raw.eval_extended(x), 1e-3);
        assert!((got - want.max(0.0)).abs() <= RES, "{pose:?}: {got} vs {want}");
    }
}

fn below_sine(ys: &[f64]) -> (Boundary, PlannedPath) {
    let raw = generate_boundary(
        &BoundaryKind::Sine {
            offset: 2.0,
            amplitude: 0.3,
            period: 1.7,
            phase: 0.0,
        },
        (ys.len() - 1) as f64 * RES,
        RES,
    )
    .unwrap();
    let xs = raw.xs().to_vec();
    let ys: Vec<f64> = xs.iter().zip(ys).map(|(&x, dy)| raw.eval(x) - dy).collect();
    (raw, PlannedPath::from_samples(&xs, &ys, Method::Scp))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cut_and_uncut_partition_the_strip(gaps in prop::collection::vec(0.01f64..0.6, 20..120)) {
        let (raw, path) = below_sine(&gaps);
        let report = uncut_area(&path, &raw, &robot(), RES).unwrap();
        prop_assert!(report.uncut_area >= 0.0 && report.cut_area >= 0.0);
        prop_assert!(report.path_length >= raw.span() - 1e-12);
        let strip: f64 = gaps.iter().map(|g| g * RES).sum();
        let slack = gaps.len() as f64 * RES * RES;
        let total = report.uncut_area + report.cut_area;
        prop_assert!((total - strip).abs() <= slack + 1e-12, "{} vs {}", total, strip);
    }

    #[test]
    fn lowering_a_sample_never_decreases_uncut(
        gaps in prop::collection::vec(0.01f64..0.5, 20..80),
        pick in any::<prop::sample::Index>(),
        drop in 0.0f64..0.3,
    ) {
        let (raw, path) = below_sine(&gaps);
        let k = pick.index(gaps.len());
        let mut lower = path.clone();
        lower.poses[k].y -= drop;
        let before = uncut_area(&path, &raw, &robot(), RES).unwrap().uncut_area;
        let after = uncut_area(&lower, &raw, &robot(), RES).unwrap().uncut_area;
        prop_assert!(after >= before - 1e-12, "{} < {}", after, before);
    }
}

#[test]
fn geometry_contains_the_strip() {
    let (raw, path) = below_sine(&[0.3; 200]);
    let g = coverage_geometry(&path, &raw, &robot(), RES).unwrap();
    let top = raw.ys().iter().copied().fold(f64::MIN, f64::max);
    let (_, j) = g.cell((raw.x_min(), top));
    assert!(g.in_bounds((0, j)));
    let bottom = path.ys().iter().copied().fold(f64::MAX, f64::min) - robot().mow_radius();
    assert!(g.in_bounds(g.cell((raw.x_min(), bottom))));
}
