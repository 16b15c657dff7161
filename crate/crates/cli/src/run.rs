use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ecpp::tracking::{track_with, RobotState, Trajectory};
use ecpp::{evaluate, Boundary, CoverageReport, EdgePlanner, Method, PlannedPath};
use rayon::prelude::*;

use crate::compare::reduction_percent;
use crate::config::RunConfig;
use crate::svg;

#[derive(Debug)]
pub struct PlannerRun {
    pub path: PlannedPath,
    pub report: CoverageReport,
    pub tracking: Option<Result<Trajectory, String>>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub raw: Boundary,
    pub planner: EdgePlanner,
    /// One entry per configured planner, in config order.
    pub planners: Vec<(Method, Result<PlannerRun, String>)>,
}

impl RunOutput {
    pub fn succeeded(&self) -> impl Iterator<Item = &PlannerRun> {
        self.planners.iter().filter_map(|(_, r)| r.as_ref().ok())
    }

    pub fn all_succeeded(&self) -> bool {
        self.planners.iter().all(|(_, r)| r.is_ok())
    }
}

/// Plans, evaluates and optionally tracks every configured method. Nothing
/// is written.
pub fn execute(config: &RunConfig) -> Result<RunOutput> {
    let spec = config.robot_spec()?;
    let raw = config.load_boundary()?;
    let planner = EdgePlanner::with_options(&raw, &spec, config.resolution, config.planner_options)
        .context("preprocessing failed")?;
    let planners = config
        .planners
        .par_iter()
        .map(|&m| (m, plan_one(&planner, config, m).map_err(|e| e.to_string())))
        .collect();
    Ok(RunOutput {
        raw,
        planner,
        planners,
    })
}

fn plan_one(planner: &EdgePlanner, config: &RunConfig, method: Method) -> ecpp::Result<PlannerRun> {
    let path = if config.smoothing && matches!(method, Method::Bsdp | Method::Scp) {
        planner.plan_smoothed(method, &config.smoothing_options)?
    } else {
        planner.plan(method)?
    };
    let report = evaluate(
        &path,
        planner.raw(),
        planner.boundary_star(),
        planner.spec(),
        config.resolution,
        config.tolerance,
    )?;
    let tracking = config.tracking.enabled.then(|| {
        let first = path.poses[0];
        let d = config.tracking.lateral_offset;
        let s0 = RobotState::at(
            first.x - d * first.heading.sin(),
            first.y + d * first.heading.cos(),
            first.heading,
        );
        track_with(&path, &s0, &config.tracking.gains, &config.tracking.options)
            .map_err(|e| e.to_string())
    });
    Ok(PlannerRun {
        path,
        report,
        tracking,
    })
}

/// Writes every artifact into `dir` in a fixed order and returns the paths.
pub fn write_outputs(out: &RunOutput, config: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut written = Vec::new();
    let mut put = |name: &str, text: &str| -> Result<()> {
        let p = dir.join(name);
        std::fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
        written.push(p);
        Ok(())
    };
    let spec = out.planner.spec();
    let b_star = out.planner.boundary_star();

    for (method, result) in &out.planners {
        match result {
            Ok(run) => {
                put(&format!("{method}_path.csv"), &csv_string(|w| ecpp::io::write_path_csv(w, &run.path))?)?;
                put(&format!("{method}_report.json"), &(run.report.to_json()? + "\n"))?;
                match &run.tracking {
                    Some(Ok(traj)) => put(
                        &format!("{method}_trajectory.csv"),
                        &csv_string(|w| ecpp::io::write_trajectory_csv(w, traj))?,
                    )?,
                    Some(Err(e)) => put(&format!("{method}_tracking_error.txt"), &format!("{e}\n"))?,
                    None => {}
                }
            }
            Err(e) => put(&format!("{method}_error.txt"), &format!("{e}\n"))?,
        }
    }

    put("fig6_preprocessing.svg", &svg::preprocessing(&out.raw, out.planner.preprocessed()))?;
    put("fig7_convexity.svg", &svg::convexity(b_star, out.planner.convexity()))?;
    let paths: Vec<&PlannedPath> = out.succeeded().map(|r| &r.path).collect();
    put("fig8_paths.svg", &svg::paths(&out.raw, b_star, &paths))?;
    let every = ((spec.length() / config.resolution) / 2.0).round() as usize;
    for run in out.succeeded() {
        if matches!(run.path.method, Method::Big | Method::Bsdp | Method::Scp) {
            put(
                &format!("fig9_footprints_{}.svg", run.path.method),
                &svg::footprints(b_star, &run.path, spec, every),
            )?;
        }
    }
    let reports: Vec<&CoverageReport> = out.succeeded().map(|r| &r.report).collect();
    put("fig10_uncut.svg", &svg::uncut_bars(&reports))?;
    for run in out.succeeded() {
        if let Some(Ok(traj)) = &run.tracking {
            put(
                &format!("fig12_tracking_{}.svg", run.path.method),
                &svg::tracking(b_star, &run.path, traj),
            )?;
        }
    }
    put("summary.txt", &summary_table(out))?;
    Ok(written)
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> ecpp::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

pub fn summary_table(out: &RunOutput) -> String {
    let big = out
        .succeeded()
        .find(|r| r.report.method == Method::Big)
        .map(|r| r.report.uncut_area);
    let mut s = String::new();
    writeln!(
        s,
        "{:<7} {:>12} {:>12} {:>10} {:>13} {:>10} {:>10}  tracking",
        "method", "uncut [m^2]", "cut [m^2]", "length [m]", "max viol [m]", "violations", "vs big [%]"
    )
    .unwrap();
    for (method, result) in &out.planners {
        match result {
            Ok(run) => {
                let r = &run.report;
                let pct = big
                    .filter(|&b| b > 0.0)
                    .map_or_else(|| "-".into(), |b| format!("{:.2}", reduction_percent(b, r.uncut_area)));
                let tracking = match &run.tracking {
                    None => "-".to_string(),
                    Some(Ok(t)) => format!("max {:.4} m, rms {:.4} m", t.max_error(), t.rms_error()),
                    Some(Err(e)) => format!("failed: {e}"),
                };
                writeln!(
                    s,
                    "{:<7} {:>12.4} {:>12.4} {:>10.3} {:>13.4} {:>10} {:>10}  {}",
                    method, r.uncut_area, r.cut_area, r.path_length, r.max_violation_depth, r.violation_count, pct, tracking
                )
                .unwrap();
            }
            Err(e) => writeln!(s, "{method:<7} failed: {e}").unwrap(),
        }
    }
    s
}

/// Result of a full `run`: where things went and whether every planner
/// produced a path.
pub struct RunStatus {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: String,
    pub complete: bool,
}

pub fn run(config: &RunConfig, out_dir: Option<&Path>) -> Result<RunStatus> {
    let output = execute(config)?;
    let dir = out_dir.map_or_else(|| config.output_dir.clone(), Path::to_path_buf);
    let files = write_outputs(&output, config, &dir)?;
    let summary = summary_table(&output);
    for (m, r) in &output.planners {
        if let Err(e) = r {
            log::error!("planner {m} failed: {e}");
        }
    }
    Ok(RunStatus {
        output_dir: dir,
        files,
        summary,
        complete: output.all_succeeded(),
    })
}
