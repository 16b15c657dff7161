//! Edge coverage path planning for mowing robots.
//!
//! A lawn edge is a function graph `y = f(x)` with the obstacle above it. The
//! crate closes the edge with the robot's circumcircle to remove valleys the
//! body cannot enter, plans a center path against the closed edge, and
//! measures how much lawn between the path and the raw edge the mowing deck
//! misses.
//!
//! ```
//! use ecpp::{generate_boundary, BoundaryKind, EdgePlanner, Method, RobotSpec};
//!
//! let spec = RobotSpec::new(0.8, 0.4, 0.15)?;
//! let edge = generate_boundary(&BoundaryKind::Flat { offset: 2.0 }, 4.0, 0.01)?;
//! let planner = EdgePlanner::new(&edge, &spec, 0.01)?;
//! let path = planner.plan(Method::Scp)?;
//! assert!((path.y_at(2.0) - 1.8).abs() < 0.01);
//! # Ok::<(), ecpp::Error>(())
//! ```

pub mod boundary;
pub mod convexity;
pub mod error;
pub mod grid;
pub mod io;
pub mod morphology;
pub mod planner;
pub mod robot;
pub mod spline;
pub mod sweep;
pub mod tracking;

pub use boundary::{
    generate_boundary, lower_envelope, preprocess, preprocess_boundary, rasterize_obstacle,
    Boundary, BoundaryKind, Margins, Preprocessed, SineComponent,
};
pub use convexity::{convexity, Curvature, ConvexityProfile};
pub use error::{Error, Result};
pub use grid::{BinaryGrid, Cell};
pub use morphology::{close, dilate, erode, open, DiskSE, StructuringElement};
pub use planner::{
    plan_bsdp, plan_disk, plan_scp, smooth_path, EdgePlanner, Method, PlannedPath,
    PlannerOptions, Pose,
};
pub use robot::RobotSpec;
pub use sweep::{
    check_collision, evaluate, swept_region, uncut_area, CollisionSummary, CoverageReport,
    FootprintPose,
};
pub use tracking::{step, track, ControllerGains, RobotState, Trajectory};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/boundaries.md")]
mod book_boundaries {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/morphology.md")]
mod book_morphology {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/planners.md")]
mod book_planners {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coverage.md")]
mod book_coverage {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tracking.md")]
mod book_tracking {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
