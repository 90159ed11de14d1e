//! JSON scenario and plan files, CSV trajectories. Vehicles are numbered
//! from 1 in every file format.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coordspace::{CollisionRect, CoordinationScenario, Interval, ScenarioError};
use crate::geometry::{compile_scenario, GeometricScenario, GeometryError, PathGeometry, VehicleSpec};
use crate::planner::{cost_bounds, PlanResult};
use crate::priority::{Edge, PriorityError, PriorityGraph};
use crate::trajectory::{Trajectory, TrajectoryError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("vehicle number {vehicle} must be between 1 and {n}")]
    VehicleNumber { vehicle: usize, n: usize },
    #[error("plan covers {plan} vehicles, scenario has {scenario}")]
    SizeMismatch { plan: usize, scenario: usize },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Priority(#[from] PriorityError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

/// A scenario file holds exactly one of the two forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioFile {
    Geometric(GeometricForm),
    Abstract(AbstractForm),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricForm {
    pub paths: Vec<PathEntry>,
    pub vehicles: Vec<VehicleEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub id: usize,
    /// Meters.
    pub waypoints: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleEntry {
    pub id: usize,
    pub path_id: usize,
    pub radius: f64,
    #[serde(default)]
    pub initial_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractForm {
    pub n: usize,
    pub obstacles: Vec<ObstacleEntry>,
    /// Defaults to the origin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_init: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleEntry {
    pub pair: [usize; 2],
    /// Open intervals of the two vehicles, in the order of `pair`.
    pub intervals: [[f64; 2]; 2],
}

fn index(vehicle: usize, n: usize) -> Result<usize, IoError> {
    if vehicle == 0 || vehicle > n {
        return Err(IoError::VehicleNumber { vehicle, n });
    }
    Ok(vehicle - 1)
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }

    /// Builds the coordination scenario, compiling geometry on a grid of
    /// `resolution` samples per axis when needed.
    pub fn to_scenario(&self, resolution: usize) -> Result<CoordinationScenario<f64>, IoError> {
        match self {
            ScenarioFile::Abstract(a) => a.to_scenario(),
            ScenarioFile::Geometric(g) => Ok(compile_scenario(&g.to_geometric()?, resolution)?),
        }
    }
}

impl GeometricForm {
    pub fn to_geometric(&self) -> Result<GeometricScenario<f64>, IoError> {
        let paths = self
            .paths
            .iter()
            .map(|p| PathGeometry::new(p.id, p.waypoints.iter().map(|w| (w[0], w[1])).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut vehicles = self.vehicles.clone();
        vehicles.sort_by_key(|v| v.id);
        let initial = vehicles.iter().map(|v| v.initial_s).collect();
        let specs = vehicles
            .iter()
            .map(|v| VehicleSpec { id: v.id, path_id: v.path_id, radius: v.radius })
            .collect();
        Ok(GeometricScenario::new(paths, specs, initial)?)
    }
}

impl AbstractForm {
    pub fn from_scenario(scn: &CoordinationScenario<f64>) -> Self {
        let obstacles = scn
            .obstacles()
            .iter()
            .map(|r| ObstacleEntry {
                pair: [r.pair().lo() + 1, r.pair().hi() + 1],
                intervals: [[r.first().lo, r.first().hi], [r.second().lo, r.second().hi]],
            })
            .collect();
        AbstractForm { n: scn.n(), obstacles, x_init: Some(scn.x_init().to_vec()) }
    }

    pub fn to_scenario(&self) -> Result<CoordinationScenario<f64>, IoError> {
        let obstacles = self
            .obstacles
            .iter()
            .map(|o| {
                let (a, b) = (index(o.pair[0], self.n)?, index(o.pair[1], self.n)?);
                let iv = |k: usize| Interval::new(o.intervals[k][0], o.intervals[k][1]);
                Ok(CollisionRect::between(a, iv(0), b, iv(1))?)
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let x_init = self.x_init.clone().unwrap_or_else(|| vec![0.0; self.n]);
        Ok(CoordinationScenario::new(self.n, obstacles, x_init)?)
    }
}

/// Serialized planner output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub mode: String,
    pub cost: f64,
    pub exit_times: Vec<f64>,
    /// Arcs `[winner, loser]`.
    pub graph: Vec<[usize; 2]>,
    pub breakpoints: Vec<BreakpointEntry>,
    pub bounds: BoundsEntry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakpointEntry {
    pub t: f64,
    pub s: Vec<f64>,
}

/// Cost bounds for the vehicle count. They hold only for a start at the
/// origin, which `applies` records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsEntry {
    pub lower: f64,
    pub upper: f64,
    pub applies: bool,
}

impl PlanFile {
    pub fn from_plan(mode: &str, plan: &PlanResult<f64>, scn: &CoordinationScenario<f64>) -> Self {
        let (lower, upper) = cost_bounds::<f64>(scn.n());
        PlanFile {
            mode: mode.to_string(),
            cost: plan.cost,
            exit_times: plan.exit_times.clone(),
            graph: plan.graph.edges().map(|e| [e.winner + 1, e.loser + 1]).collect(),
            breakpoints: plan
                .trajectory
                .breakpoints()
                .map(|(t, s)| BreakpointEntry { t, s: s.to_vec() })
                .collect(),
            bounds: BoundsEntry { lower, upper, applies: scn.starts_at_origin() },
        }
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plan serializes");
        out.push('\n');
        out
    }

    pub fn n(&self) -> usize {
        self.breakpoints.first().map_or(0, |b| b.s.len())
    }

    pub fn trajectory(&self) -> Result<Trajectory<f64>, IoError> {
        Ok(Trajectory::new(self.breakpoints.iter().map(|b| (b.t, b.s.clone())).collect())?)
    }

    pub fn graph(&self) -> Result<PriorityGraph, IoError> {
        let n = self.n();
        let edges = self
            .graph
            .iter()
            .map(|[w, l]| Ok(Edge::new(index(*w, n)?, index(*l, n)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(PriorityGraph::from_edges(n, edges)?)
    }

    /// Fails unless the plan and the scenario have the same vehicle count.
    pub fn check_matches(&self, scn: &CoordinationScenario<f64>) -> Result<(), IoError> {
        if self.n() != scn.n() {
            return Err(IoError::SizeMismatch { plan: self.n(), scenario: scn.n() });
        }
        Ok(())
    }
}

/// `t,s_1,...,s_n` rows at the breakpoints.
pub fn trajectory_csv(traj: &Trajectory<f64>) -> String {
    let mut out = String::from("t");
    for v in 1..=traj.n() {
        write!(out, ",s_{v}").expect("write to string");
    }
    out.push('\n');
    for (t, s) in traj.breakpoints() {
        write!(out, "{t}").expect("write to string");
        for x in s {
            write!(out, ",{x}").expect("write to string");
        }
        out.push('\n');
    }
    out
}
