//! CSV formats for boundaries, paths and trajectories.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces the written values bit for bit.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::boundary::Boundary;
use crate::error::{Error, Result};
use crate::planner::{Method, PlannedPath, Pose};
use crate::tracking::{RobotState, Trajectory};

#[derive(Serialize, Deserialize)]
struct BoundaryRow {
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
struct TrajectoryRow {
    t: f64,
    x: f64,
    y: f64,
    theta: f64,
    v: f64,
    omega: f64,
}

/// `x,y` rows.
pub fn write_boundary_csv<W: Write>(w: W, b: &Boundary) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (x, y) in b.points() {
        out.serialize(BoundaryRow { x, y })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_boundary_csv<R: Read>(r: R) -> Result<Boundary> {
    let mut rows = csv::Reader::from_reader(r);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for row in rows.deserialize() {
        let row: BoundaryRow = row?;
        xs.push(row.x);
        ys.push(row.y);
    }
    Boundary::new(xs, ys)
}

/// `x,y,heading` rows.
pub fn write_path_csv<W: Write>(w: W, path: &PlannedPath) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for p in &path.poses {
        out.serialize(p)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_path_csv<R: Read>(r: R, method: Method) -> Result<PlannedPath> {
    let mut rows = csv::Reader::from_reader(r);
    let poses = rows.deserialize().collect::<std::result::Result<Vec<Pose>, _>>()?;
    if poses.is_empty() {
        return Err(Error::Parse("path file has no rows".into()));
    }
    Ok(PlannedPath {
        poses,
        method,
        smoothed: false,
        diagnostics: Vec::new(),
    })
}

/// `t,x,y,theta,v,omega` rows with `t = k * dt`.
pub fn write_trajectory_csv<W: Write>(w: W, traj: &Trajectory) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (k, s) in traj.states.iter().enumerate() {
        out.serialize(TrajectoryRow {
            t: k as f64 * traj.dt,
            x: s.x,
            y: s.y,
            theta: s.theta,
            v: s.v,
            omega: s.omega,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Time stamps and states; cross-track errors are not stored.
pub fn read_trajectory_csv<R: Read>(r: R) -> Result<(Vec<f64>, Vec<RobotState>)> {
    let mut rows = csv::Reader::from_reader(r);
    let mut ts = Vec::new();
    let mut states = Vec::new();
    for row in rows.deserialize() {
        let row: TrajectoryRow = row?;
        ts.push(row.t);
        states.push(RobotState {
            x: row.x,
            y: row.y,
            theta: row.theta,
            v: row.v,
            omega: row.omega,
        });
    }
    Ok((ts, states))
}
