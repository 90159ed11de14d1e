use std::fmt;

use crate::coordspace::segment::{segment_hits, Span};
use crate::coordspace::{CoordinationScenario, Pair};
use crate::priority::{extract_priority_graph, PriorityGraph};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

/// First problem found in a trajectory. Vehicles are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    DimensionMismatch { expected: usize, found: usize },
    WrongStart { vehicle: usize },
    GoalNotReached { vehicle: usize },
    Backwards { segment: usize, vehicle: usize },
    TooFast { segment: usize, vehicle: usize, speed: f64 },
    Collision { pair: Pair, time: f64, state: Vec<f64> },
    GraphMismatch { expected: String, realized: String },
    NoRealizedGraph(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { expected, found } => {
                write!(f, "trajectory has {found} vehicles, scenario has {expected}")
            }
            Violation::WrongStart { vehicle } => write!(f, "vehicle {vehicle} does not start at x_init"),
            Violation::GoalNotReached { vehicle } => write!(f, "vehicle {vehicle} never reaches 1"),
            Violation::Backwards { segment, vehicle } => {
                write!(f, "vehicle {vehicle} moves backwards on segment {segment}")
            }
            Violation::TooFast { segment, vehicle, speed } => {
                write!(f, "vehicle {vehicle} has speed {speed} on segment {segment}")
            }
            Violation::Collision { pair, time, state } => {
                write!(f, "collision on pair {pair} at t = {time}, state {state:?}")
            }
            Violation::GraphMismatch { expected, realized } => {
                write!(f, "trajectory realizes {realized}, expected {expected}")
            }
            Violation::NoRealizedGraph(reason) => write!(f, "no realized priority graph: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that `traj` is a feasible trajectory for `scn`: right start,
/// reaches the goal, monotone, speed at most 1, and free of collisions.
/// Collisions are tested exactly per segment rather than by sampling.
/// With `graph`, the realized priority graph must equal it.
pub fn validate<T: Scalar>(
    traj: &Trajectory<T>,
    scn: &CoordinationScenario<T>,
    graph: Option<&PriorityGraph>,
) -> ValidationReport {
    ValidationReport { violation: first_violation(traj, scn, graph) }
}

fn first_violation<T: Scalar>(
    traj: &Trajectory<T>,
    scn: &CoordinationScenario<T>,
    graph: Option<&PriorityGraph>,
) -> Option<Violation> {
    if traj.n() != scn.n() {
        return Some(Violation::DimensionMismatch { expected: scn.n(), found: traj.n() });
    }
    if let Some(v) = (0..scn.n()).find(|&v| traj.start()[v] != scn.x_init()[v]) {
        return Some(Violation::WrongStart { vehicle: v + 1 });
    }
    if let Some(v) = (0..scn.n()).find(|&v| traj.end_state()[v] < T::one()) {
        return Some(Violation::GoalNotReached { vehicle: v + 1 });
    }
    for (k, ((t0, p), (t1, q))) in traj.segments().enumerate() {
        let dt = t1 - t0;
        for v in 0..scn.n() {
            let ds = q[v] - p[v];
            if ds < T::zero() {
                return Some(Violation::Backwards { segment: k, vehicle: v + 1 });
            }
            if !T::le_tol(ds, dt) {
                let speed = ds.to_f64_lossy() / dt.to_f64_lossy();
                return Some(Violation::TooFast { segment: k, vehicle: v + 1, speed });
            }
        }
    }
    let pieces: Vec<_> = if traj.len() == 1 {
        vec![((traj.times()[0], traj.start()), (traj.times()[0], traj.start()))]
    } else {
        traj.segments().collect()
    };
    for ((t0, p), (t1, q)) in pieces {
        for r in scn.obstacles() {
            let (i, j) = (r.pair().lo(), r.pair().hi());
            // Grazing a corner within rounding is not a collision.
            let eps = T::tolerance();
            let xs = Span::open(r.first().lo + eps, r.first().hi - eps);
            let ys = Span::open(r.second().lo + eps, r.second().hi - eps);
            if let Some(hit) = segment_hits((p[i], p[j]), (q[i], q[j]), &xs, &ys) {
                let u = hit.midpoint();
                let time = t0 + u * (t1 - t0);
                let state = p.iter().zip(q).map(|(&a, &b)| (a + u * (b - a)).to_f64_lossy()).collect();
                return Some(Violation::Collision { pair: r.pair(), time: time.to_f64_lossy(), state });
            }
        }
    }
    if let Some(expected) = graph {
        match extract_priority_graph(traj, scn) {
            Ok(realized) if &realized == expected => {}
            Ok(realized) => {
                return Some(Violation::GraphMismatch {
                    expected: expected.to_string(),
                    realized: realized.to_string(),
                })
            }
            Err(e) => return Some(Violation::NoRealizedGraph(e.to_string())),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordspace::{CollisionRect, Interval};
    use crate::planner::plan_fixed_priority;

    fn square() -> CoordinationScenario<f64> {
        let r = CollisionRect::new(Pair::new(0, 1).unwrap(), Interval::new(0.4, 0.6), Interval::new(0.4, 0.6)).unwrap();
        CoordinationScenario::new(2, vec![r], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn planner_output_passes() {
        let scn = square();
        let g = PriorityGraph::parse(2, "2>1").unwrap();
        let plan = plan_fixed_priority(&scn, &g).unwrap();
        assert!(validate(&plan.trajectory, &scn, Some(&g)).passed());
        let other = PriorityGraph::parse(2, "1>2").unwrap();
        assert!(matches!(
            validate(&plan.trajectory, &scn, Some(&other)).violation,
            Some(Violation::GraphMismatch { .. })
        ));
    }

    #[test]
    fn diagonal_collides_at_center() {
        let traj = Trajectory::new(vec![(0.0, vec![0.0, 0.0]), (1.0, vec![1.0, 1.0])]).unwrap();
        match validate(&traj, &square(), None).violation {
            Some(Violation::Collision { time, state, .. }) => {
                assert!((time - 0.5).abs() < 1e-12);
                assert!((state[0] - 0.5).abs() < 1e-12 && (state[1] - 0.5).abs() < 1e-12);
            }
            other => panic!("expected collision, got {other:?}"),
        }
    }

    #[test]
    fn steep_segment_is_too_fast() {
        let traj = Trajectory::new(vec![(0.0, vec![0.0, 0.0]), (1.0, vec![1.0, 0.3]), (1.2, vec![1.0, 0.6]), (1.6, vec![1.0, 1.0])])
            .unwrap();
        match validate(&traj, &square(), None).violation {
            Some(Violation::TooFast { segment, vehicle, speed }) => {
                assert_eq!((segment, vehicle), (1, 2));
                assert!((speed - 1.5).abs() < 1e-9);
            }
            other => panic!("expected speed violation, got {other:?}"),
        }
    }

    #[test]
    fn start_goal_and_direction() {
        let scn = square();
        let late = Trajectory::new(vec![(0.0, vec![0.1, 0.0]), (1.0, vec![1.0, 1.0])]).unwrap();
        assert_eq!(validate(&late, &scn, None).violation, Some(Violation::WrongStart { vehicle: 1 }));
        let short = Trajectory::new(vec![(0.0, vec![0.0, 0.0]), (0.3, vec![0.3, 0.3])]).unwrap();
        assert_eq!(validate(&short, &scn, None).violation, Some(Violation::GoalNotReached { vehicle: 1 }));
        let back = Trajectory::new(vec![(0.0, vec![0.0, 0.0]), (1.0, vec![1.0, 0.3]), (2.0, vec![1.0, 0.2]), (3.0, vec![1.0, 1.0])])
            .unwrap();
        assert_eq!(validate(&back, &scn, None).violation, Some(Violation::Backwards { segment: 1, vehicle: 2 }));
    }
}
