//! Piecewise-linear trajectories in the coordination space.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrajectoryError {
    #[error("trajectory has no breakpoints")]
    Empty,
    #[error("breakpoint {index} has {got} coordinates, expected {n}")]
    DimensionMismatch { index: usize, got: usize, n: usize },
    #[error("breakpoint times must strictly increase (index {index})")]
    NonIncreasingTime { index: usize },
    #[error("vehicle {vehicle} never reaches the end of its path")]
    Incomplete { vehicle: usize },
}

/// State evolution `t -> x(t)`, linear between breakpoints and constant
/// after the last one.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    times: Vec<T>,
    states: Vec<Vec<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(breakpoints: Vec<(T, Vec<T>)>) -> Result<Self, TrajectoryError> {
        let n = breakpoints.first().ok_or(TrajectoryError::Empty)?.1.len();
        let mut times = Vec::with_capacity(breakpoints.len());
        let mut states = Vec::with_capacity(breakpoints.len());
        for (index, (t, x)) in breakpoints.into_iter().enumerate() {
            if x.len() != n {
                return Err(TrajectoryError::DimensionMismatch { index, got: x.len(), n });
            }
            if times.last().is_some_and(|&prev| t <= prev) {
                return Err(TrajectoryError::NonIncreasingTime { index });
            }
            times.push(t);
            states.push(x);
        }
        Ok(Trajectory { times, states })
    }

    pub fn n(&self) -> usize {
        self.states[0].len()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<T>] {
        &self.states
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (T, &[T])> + '_ {
        self.times.iter().copied().zip(self.states.iter().map(Vec::as_slice))
    }

    /// Consecutive breakpoint pairs.
    pub fn segments(&self) -> impl Iterator<Item = ((T, &[T]), (T, &[T]))> + '_ {
        (1..self.len()).map(move |k| {
            (
                (self.times[k - 1], self.states[k - 1].as_slice()),
                (self.times[k], self.states[k].as_slice()),
            )
        })
    }

    pub fn start(&self) -> &[T] {
        &self.states[0]
    }

    pub fn end_state(&self) -> &[T] {
        self.states.last().expect("non-empty")
    }

    pub fn end_time(&self) -> T {
        *self.times.last().expect("non-empty")
    }

    /// Linear interpolation, clamped to the first and last breakpoints.
    pub fn state_at(&self, t: T) -> Vec<T> {
        if t <= self.times[0] {
            return self.states[0].clone();
        }
        let k = self.times.partition_point(|&tk| tk <= t);
        if k >= self.len() {
            return self.end_state().to_vec();
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let u = (t - t0) / (t1 - t0);
        self.states[k - 1]
            .iter()
            .zip(&self.states[k])
            .map(|(&a, &b)| a + (b - a) * u)
            .collect()
    }

    /// First time each coordinate reaches 1.
    pub fn exit_times(&self) -> Result<Vec<T>, TrajectoryError> {
        (0..self.n()).map(|v| self.exit_time(v)).collect()
    }

    pub fn exit_time(&self, v: usize) -> Result<T, TrajectoryError> {
        let k = self
            .states
            .iter()
            .position(|x| x[v] >= T::one())
            .ok_or(TrajectoryError::Incomplete { vehicle: v + 1 })?;
        if k == 0 {
            return Ok(self.times[0]);
        }
        let (x0, x1) = (self.states[k - 1][v], self.states[k][v]);
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        Ok(t0 + (T::one() - x0) * (t1 - t0) / (x1 - x0))
    }

    /// Mean exit time.
    pub fn cost(&self) -> Result<T, TrajectoryError> {
        let exits = self.exit_times()?;
        Ok(mean(&exits))
    }
}

pub(crate) fn mean<T: Scalar>(values: &[T]) -> T {
    let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
    sum / T::from_count(values.len())
}
