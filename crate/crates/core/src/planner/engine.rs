//! Exact event-driven integration of the stop-line rule.
//!
//! With rectangular obstacles, a vehicle `l` that yields to `w` on
//! rectangle `R` may run freely except that it must hold at `a_l(R)` while
//! `s_w < b_w(R)`. Every vehicle therefore moves at speed 0 or 1, and
//! speeds only change when some coordinate reaches an interval endpoint.
//! Stepping from endpoint to endpoint gives the left-greedy trajectory
//! with exact breakpoints.

use super::PlanError;
use crate::coordspace::{CoordinationScenario, Pair};
use crate::priority::Edge;
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

#[derive(Clone, Copy, Debug)]
struct StopRule<T> {
    winner: usize,
    loser: usize,
    stop_at: T,
    clear_at: T,
}

pub(crate) struct Engine<'a, T> {
    scn: &'a CoordinationScenario<T>,
    time: T,
    state: Vec<T>,
    rules: Vec<StopRule<T>>,
    exits: Vec<Option<T>>,
    records: Vec<(T, Vec<T>)>,
    last_moving: Option<Vec<bool>>,
    horizon: T,
}

impl<'a, T: Scalar> Engine<'a, T> {
    pub fn new(scn: &'a CoordinationScenario<T>) -> Self {
        let state = scn.x_init().to_vec();
        let exits = state.iter().map(|&s| (s >= T::one()).then_some(T::zero())).collect();
        Engine {
            scn,
            time: T::zero(),
            records: vec![(T::zero(), state.clone())],
            state,
            rules: Vec::new(),
            exits,
            last_moving: None,
            horizon: horizon(scn.n()),
        }
    }

    pub fn state(&self) -> &[T] {
        &self.state
    }

    /// Enforces `e` from now on. A loser already past its stop line is
    /// unaffected; feasibility checks guarantee the winner has cleared.
    pub fn add_rule(&mut self, e: Edge) {
        let r = self.scn.obstacle(e.pair()).expect("arc on an obstacle pair");
        let stop_at = r.interval_of(e.loser).lo;
        if self.state[e.loser] <= stop_at {
            self.rules.push(StopRule {
                winner: e.winner,
                loser: e.loser,
                stop_at,
                clear_at: r.interval_of(e.winner).hi,
            });
        }
    }

    pub fn finished(&self) -> bool {
        self.state.iter().all(|&s| s >= T::one())
    }

    // Float endpoints from different rectangles can differ by rounding
    // only, so coordinates within tolerance of a mark count as on it.
    fn held(&self, v: usize) -> bool {
        let eps = T::tolerance();
        self.rules
            .iter()
            .any(|r| r.loser == v && self.state[v] + eps >= r.stop_at && self.state[r.winner] + eps < r.clear_at)
    }

    fn moving(&self) -> Vec<bool> {
        (0..self.state.len()).map(|v| self.state[v] < T::one() && !self.held(v)).collect()
    }

    /// Nearest coordinate value ahead of `v` at which something can change.
    fn next_mark(&self, v: usize, watch: &[(usize, T)]) -> T {
        let s = self.state[v] + T::tolerance();
        let mut mark = T::one();
        let mut consider = |m: T| {
            if m > s && m < mark {
                mark = m;
            }
        };
        for r in &self.rules {
            if r.loser == v {
                consider(r.stop_at);
            }
            if r.winner == v {
                consider(r.clear_at);
            }
        }
        for &(w, m) in watch {
            if w == v {
                consider(m);
            }
        }
        mark
    }

    /// Advances to the next event. `watch` adds extra marks per vehicle.
    pub fn step(&mut self, watch: &[(usize, T)]) -> Result<(), PlanError> {
        let moving = self.moving();
        if !moving.iter().any(|&m| m) {
            return Err(PlanError::Deadlock {
                time: self.time.to_f64_lossy(),
                state: self.state.iter().map(|s| s.to_f64_lossy()).collect(),
            });
        }
        let marks: Vec<Option<T>> = (0..self.state.len())
            .map(|v| moving[v].then(|| self.next_mark(v, watch)))
            .collect();
        let dt = marks
            .iter()
            .enumerate()
            .filter_map(|(v, m)| m.map(|m| m - self.state[v]))
            .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.min_of(d))))
            .expect("some vehicle moves");
        if self.time + dt > self.horizon {
            return Err(PlanError::Horizon { horizon: self.horizon.to_f64_lossy() });
        }
        self.time = self.time + dt;
        for (v, mark) in marks.iter().enumerate() {
            let Some(mark) = *mark else { continue };
            // Snap the coordinates whose own event fires now.
            if T::le_tol(mark - self.state[v], dt) {
                self.state[v] = mark;
            } else {
                self.state[v] = self.state[v] + dt;
            }
            if self.state[v] >= T::one() && self.exits[v].is_none() {
                self.exits[v] = Some(self.time);
            }
        }
        // Drop the previous breakpoint when it sits inside a straight run.
        if self.records.len() >= 2 && self.last_moving.as_ref() == Some(&moving) {
            self.records.pop();
        }
        self.records.push((self.time, self.state.clone()));
        self.last_moving = Some(moving);
        Ok(())
    }

    pub fn finish(self) -> Result<(Trajectory<T>, Vec<T>), PlanError> {
        let exits = self
            .exits
            .iter()
            .map(|e| e.expect("finished engine has all exit times"))
            .collect();
        Ok((Trajectory::new(self.records)?, exits))
    }
}

/// Time guard for every planner run.
pub(crate) fn horizon<T: Scalar>(n: usize) -> T {
    T::from_count(10 * n)
}

/// Marks for the endpoints of undecided pairs, used by the heuristic.
pub(crate) fn gate_marks<T: Scalar>(
    scn: &CoordinationScenario<T>,
    undecided: impl Iterator<Item = Pair>,
) -> Vec<(usize, T)> {
    let mut out = Vec::new();
    for p in undecided {
        let r = scn.obstacle(p).expect("undecided pair has an obstacle");
        for v in [p.lo(), p.hi()] {
            out.push((v, r.interval_of(v).lo));
            out.push((v, r.interval_of(v).hi));
        }
    }
    out
}
