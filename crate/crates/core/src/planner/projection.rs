//! Time-stepped velocity projection.
//!
//! Each step starts from unit speed and removes velocity components in
//! three passes: vehicles at the goal stop, no loser may enter the gate it
//! is forbidden from, and no loser may enter an obstacle its winner has
//! not finished. A component that would overshoot its stop line in this
//! step is shortened so the vehicle lands on it.

use super::engine::horizon;
use super::PlanError;
use crate::coordspace::CoordinationScenario;
use crate::priority::{is_feasible, PriorityGraph, Verdict};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

/// Projection integrator for `g`. Unlike [`simulate_projection`] it does
/// not check feasibility first, so it can demonstrate the deadlock of a
/// rejected graph.
pub struct ProjectionSimulator<'a, T> {
    scn: &'a CoordinationScenario<T>,
    g: &'a PriorityGraph,
    dt: T,
}

impl<'a, T: Scalar> ProjectionSimulator<'a, T> {
    pub fn new(scn: &'a CoordinationScenario<T>, g: &'a PriorityGraph, dt: T) -> Result<Self, PlanError> {
        if dt <= T::zero() {
            return Err(PlanError::InvalidStep);
        }
        g.check_pairs(scn)?;
        Ok(ProjectionSimulator { scn, g, dt })
    }

    /// Largest displacement of each vehicle allowed in the next step.
    fn displacement(&self, s: &[T]) -> Vec<T> {
        let mut step: Vec<T> = s.iter().map(|&x| if x >= T::one() { T::zero() } else { self.dt }).collect();
        let mut cap = |loser: usize, stop: T| {
            let room = stop - s[loser];
            step[loser] = step[loser].min_of(room);
        };
        for e in self.g.edges() {
            let r = self.scn.obstacle(e.pair()).expect("checked pair");
            let (w, l) = (r.interval_of(e.winner), r.interval_of(e.loser));
            if s[e.loser] > l.lo {
                continue;
            }
            // Forbidden gate: the loser may not reach its interval before
            // the winner does.
            if s[e.winner] <= w.lo {
                cap(e.loser, l.lo);
            }
            // Obstacle: the winner is inside its interval.
            if w.lo <= s[e.winner] && s[e.winner] < w.hi {
                cap(e.loser, l.lo);
            }
        }
        step
    }

    pub fn run(&self) -> Result<Trajectory<T>, PlanError> {
        let limit = horizon::<T>(self.scn.n());
        let mut t = T::zero();
        let mut s = self.scn.x_init().to_vec();
        let mut points = vec![(t, s.clone())];
        while s.iter().any(|&x| x < T::one()) {
            let step = self.displacement(&s);
            if step.iter().all(|&d| d <= T::zero()) {
                return Err(PlanError::Deadlock {
                    time: t.to_f64_lossy(),
                    state: s.iter().map(|x| x.to_f64_lossy()).collect(),
                });
            }
            if t + self.dt > limit {
                return Err(PlanError::Horizon { horizon: limit.to_f64_lossy() });
            }
            t = t + self.dt;
            for (x, d) in s.iter_mut().zip(&step) {
                *x = (*x + *d).min_of(T::one());
            }
            points.push((t, s.clone()));
        }
        Ok(Trajectory::new(points)?)
    }
}

/// Checks `g` and integrates it with step `dt`.
pub fn simulate_projection<T: Scalar>(
    scn: &CoordinationScenario<T>,
    g: &PriorityGraph,
    dt: T,
) -> Result<Trajectory<T>, PlanError> {
    if let Verdict::Infeasible(w) = is_feasible(g, scn)? {
        return Err(PlanError::Infeasible(w));
    }
    ProjectionSimulator::new(scn, g, dt)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordspace::{CollisionRect, Interval, Pair};
    use crate::planner::plan_fixed_priority;
    use crate::priority::extract_priority_graph;
    use crate::scalar::ratio;
    use num_rational::Rational64;

    fn square() -> CoordinationScenario<f64> {
        let r = CollisionRect::new(Pair::new(0, 1).unwrap(), Interval::new(0.4, 0.6), Interval::new(0.4, 0.6)).unwrap();
        CoordinationScenario::new(2, vec![r], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn converges_to_event_cost() {
        let scn = square();
        let g = PriorityGraph::parse(2, "1>2").unwrap();
        for dt in [1e-2, 1e-3] {
            let traj = simulate_projection(&scn, &g, dt).unwrap();
            assert!((traj.cost().unwrap() - 1.1).abs() <= 2.0 * dt, "dt={dt}");
            assert_eq!(extract_priority_graph(&traj, &scn).unwrap(), g);
        }
    }

    #[test]
    fn unobstructed_runs_diagonal() {
        let scn = CoordinationScenario::<f64>::unobstructed(3).unwrap();
        let traj = simulate_projection(&scn, &PriorityGraph::new(3), 1e-3).unwrap();
        assert!((traj.cost().unwrap() - 1.0).abs() <= 2e-3);
    }

    #[test]
    fn exact_steps_match_event_planner() {
        let iv = Interval::new(ratio(2, 5), ratio(3, 5));
        let r = CollisionRect::new(Pair::new(0, 1).unwrap(), iv, iv).unwrap();
        let scn = CoordinationScenario::new(2, vec![r], vec![ratio(1, 10), ratio(0, 1)]).unwrap();
        let g = PriorityGraph::parse(2, "1>2").unwrap();
        let traj = simulate_projection(&scn, &g, ratio(1, 100)).unwrap();
        let exact = plan_fixed_priority(&scn, &g).unwrap();
        assert_eq!(traj.cost().unwrap(), exact.cost);
        let _: Rational64 = exact.cost;
    }

    #[test]
    fn cyclic_priorities_stall() {
        let iv = Interval::new(0.4, 0.6);
        let rects = [(0, 1), (1, 2), (0, 2)]
            .iter()
            .map(|&(a, b)| CollisionRect::new(Pair::new(a, b).unwrap(), iv, iv).unwrap())
            .collect();
        let scn = CoordinationScenario::new(3, rects, vec![0.0; 3]).unwrap();
        let g = PriorityGraph::parse(3, "1>2,2>3,3>1").unwrap();
        assert!(matches!(simulate_projection(&scn, &g, 1e-2), Err(PlanError::Infeasible(_))));
        match ProjectionSimulator::new(&scn, &g, 1e-2).unwrap().run() {
            Err(PlanError::Deadlock { time, .. }) => assert!(time < 30.0),
            other => panic!("expected deadlock, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_step() {
        let scn = square();
        let g = PriorityGraph::parse(2, "1>2").unwrap();
        assert_eq!(ProjectionSimulator::new(&scn, &g, 0.0).err(), Some(PlanError::InvalidStep));
    }
}
