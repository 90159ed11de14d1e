//! Trajectory planning in the coordination space.
//!
//! * [`plan_fixed_priority`] builds the left-greedy trajectory for one
//!   feasible priority graph. It is optimal among trajectories realizing
//!   that graph.
//! * [`plan_exhaustive`] runs it on every feasible orientation and keeps
//!   the cheapest result, which is the global optimum.
//! * [`plan_heuristic`] runs greedily and orients each pair when the state
//!   first reaches one of its gates.
//! * [`simulate_projection`] is the time-stepped velocity-projection
//!   integrator, kept as an independent cross-check of the event planner.

mod engine;
mod projection;
mod validate;

use thiserror::Error;

use crate::coordspace::{CoordinationScenario, Pair};
use crate::priority::{
    complete_orientations, feasible_completion, is_feasible, partial_feasibility, Edge, Infeasibility, PriorityError,
    PriorityGraph, Verdict,
};
use crate::scalar::Scalar;
use crate::trajectory::{mean, Trajectory, TrajectoryError};

use engine::{gate_marks, Engine};

pub use projection::{simulate_projection, ProjectionSimulator};
pub use validate::{validate, ValidationReport, Violation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("infeasible priority graph: {0}")]
    Infeasible(Infeasibility),
    #[error("deadlock at t = {time}: no vehicle can move")]
    Deadlock { time: f64, state: Vec<f64> },
    #[error("planner passed the time horizon {horizon}")]
    Horizon { horizon: f64 },
    #[error("no feasible priority graph exists from this start state")]
    NoFeasibleGraph,
    #[error("time step must be positive")]
    InvalidStep,
    #[error(transparent)]
    Priority(#[from] PriorityError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

/// A planned trajectory with its priority graph and exit times.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanResult<T> {
    pub trajectory: Trajectory<T>,
    pub graph: PriorityGraph,
    pub exit_times: Vec<T>,
    pub cost: T,
}

impl<T: Scalar> PlanResult<T> {
    fn from_engine(engine: Engine<'_, T>, graph: PriorityGraph) -> Result<Self, PlanError> {
        let (trajectory, exit_times) = engine.finish()?;
        let cost = mean(&exit_times);
        Ok(PlanResult { trajectory, graph, exit_times, cost })
    }
}

/// Mean exit time of a trajectory.
pub fn cost<T: Scalar>(traj: &Trajectory<T>) -> Result<T, TrajectoryError> {
    traj.cost()
}

/// `(1, (n+1)/2)`: the unobstructed diagonal and the one-at-a-time walk
/// along the cube edges. Only meaningful for a start at the origin.
pub fn cost_bounds<T: Scalar>(n: usize) -> (T, T) {
    (T::one(), T::from_count(n + 1) / T::from_count(2))
}

/// Moves the vehicles one after another in `order` at full speed.
pub fn sequential_trajectory<T: Scalar>(x_init: &[T], order: &[usize]) -> Result<Trajectory<T>, TrajectoryError> {
    let mut state = x_init.to_vec();
    let mut t = T::zero();
    let mut points = vec![(t, state.clone())];
    for &v in order {
        let run = T::one() - state[v];
        if run > T::zero() {
            t = t + run;
            state[v] = T::one();
            points.push((t, state.clone()));
        }
    }
    Trajectory::new(points)
}

/// Left-greedy trajectory for a complete, feasible priority graph.
pub fn plan_fixed_priority<T: Scalar>(
    scn: &CoordinationScenario<T>,
    g: &PriorityGraph,
) -> Result<PlanResult<T>, PlanError> {
    if let Verdict::Infeasible(w) = is_feasible(g, scn)? {
        return Err(PlanError::Infeasible(w));
    }
    let mut engine = Engine::new(scn);
    for e in g.edges() {
        engine.add_rule(e);
    }
    while !engine.finished() {
        engine.step(&[])?;
    }
    PlanResult::from_engine(engine, g.clone())
}

/// Global optimum over all feasible orientations. Ties go to the
/// lexicographically smallest arc list.
pub fn plan_exhaustive<T: Scalar>(scn: &CoordinationScenario<T>) -> Result<PlanResult<T>, PlanError> {
    let mut best: Option<PlanResult<T>> = None;
    for g in complete_orientations(scn)? {
        if !is_feasible(&g, scn)?.is_feasible() {
            continue;
        }
        let plan = plan_fixed_priority(scn, &g)?;
        let better = match &best {
            None => true,
            Some(b) => plan.cost + T::tolerance() < b.cost,
        };
        if better {
            best = Some(plan);
        }
    }
    best.ok_or(PlanError::NoFeasibleGraph)
}

/// Which orientation the state prefers for an undecided pair, if it has
/// reached a gate (closure) or the pair is already resolved.
fn gate_preference<T: Scalar>(scn: &CoordinationScenario<T>, p: Pair, state: &[T]) -> Option<Edge> {
    let r = scn.obstacle(p).expect("pair has an obstacle");
    let (x, y) = (r.first(), r.second());
    let (sx, sy) = (state[p.lo()], state[p.hi()]);
    let lo_first = Edge::new(p.lo(), p.hi());
    if x.lo <= sx && sx <= x.hi && sy <= y.lo {
        Some(lo_first)
    } else if y.lo <= sy && sy <= y.hi && sx <= x.lo {
        Some(lo_first.reversed())
    } else if sx + T::tolerance() >= x.hi {
        Some(lo_first)
    } else if sy + T::tolerance() >= y.hi {
        Some(lo_first.reversed())
    } else {
        None
    }
}

/// Reactive planner: every vehicle runs at full speed and a pair gets its
/// orientation the moment the state touches one of its gates. The gate's
/// orientation is kept when the partial graph still has a feasible
/// completion, otherwise the opposite one is used.
pub fn plan_heuristic<T: Scalar>(scn: &CoordinationScenario<T>) -> Result<PlanResult<T>, PlanError> {
    let mut graph = PriorityGraph::new(scn.n());
    let mut engine = Engine::new(scn);
    loop {
        for p in scn.pairs() {
            if graph.winner(p).is_some() {
                continue;
            }
            let Some(preferred) = gate_preference(scn, p, engine.state()) else {
                continue;
            };
            let chosen = [preferred, preferred.reversed()]
                .into_iter()
                .map(|e| graph.with_edge(e).map(|g| (e, g)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut accepted = None;
            let mut witness = None;
            for (e, candidate) in chosen {
                match partial_feasibility(&candidate, scn, engine.state())? {
                    Verdict::Feasible if feasible_completion(&candidate, scn, engine.state())?.is_some() => {
                        accepted = Some((e, candidate));
                        break;
                    }
                    Verdict::Feasible => {}
                    Verdict::Infeasible(w) => witness = witness.or(Some(w)),
                }
            }
            let Some((e, candidate)) = accepted else {
                return Err(witness.map_or(PlanError::NoFeasibleGraph, PlanError::Infeasible));
            };
            graph = candidate;
            engine.add_rule(e);
        }
        if engine.finished() {
            break;
        }
        let undecided = scn.pairs().filter(|p| graph.winner(*p).is_none());
        let marks = gate_marks(scn, undecided);
        engine.step(&marks)?;
    }
    PlanResult::from_engine(engine, graph)
}
