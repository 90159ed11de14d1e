//! The coordination space `[0,1]^n`, its pairwise obstacle cylinders and the
//! planar sets derived from each cross-section.
//!
//! Vehicles are indexed from zero in the API. Files and printed output use
//! one-based ids.

mod region;
mod section;
pub(crate) mod segment;

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

pub use region::{gate, south, swept_obstacle, sw_completion, west, Precedence, Region2D, RegionKind};
pub use section::{ConvexPolygon, CrossSection, Disc};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("scenario needs at least one vehicle")]
    NoVehicles,
    #[error("vehicle {vehicle} out of range for n = {n}")]
    VehicleOutOfRange { vehicle: usize, n: usize },
    #[error("a pair needs two distinct vehicles, got {0} twice")]
    SelfPair(usize),
    #[error("pair {0} has more than one obstacle")]
    DuplicatePair(Pair),
    #[error("interval ({lo}, {hi}) must satisfy 0 < lo < hi < 1")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("initial state has {got} coordinates, expected {n}")]
    DimensionMismatch { got: usize, n: usize },
    #[error("initial coordinate {value} of vehicle {vehicle} is outside [0,1]")]
    InitialOutOfRange { vehicle: usize, value: f64 },
    #[error("initial state lies inside the obstacle of pair {0}")]
    InitialInObstacle(Pair),
    #[error("polygon cross-section is not strictly convex and counter-clockwise")]
    NotConvex,
    #[error("cross-section must lie in the open unit square")]
    OutsideUnitSquare,
}

/// Unordered vehicle pair, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    lo: usize,
    hi: usize,
}

impl Pair {
    pub fn new(a: usize, b: usize) -> Result<Self, ScenarioError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Pair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Pair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(ScenarioError::SelfPair(a)),
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn contains(self, v: usize) -> bool {
        v == self.lo || v == self.hi
    }

    /// The partner of `v`. Panics if `v` is not in the pair.
    pub fn other(self, v: usize) -> usize {
        if v == self.lo {
            self.hi
        } else {
            assert_eq!(v, self.hi, "vehicle {v} not in pair {self}");
            self.lo
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo + 1, self.hi + 1)
    }
}

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Interval::new(self.lo.max_of(other.lo), self.hi.min_of(other.hi))
    }

    fn check_interior(&self) -> Result<(), ScenarioError> {
        if T::zero() < self.lo && self.lo < self.hi && self.hi < T::one() {
            Ok(())
        } else {
            Err(ScenarioError::InvalidInterval {
                lo: self.lo.to_f64_lossy(),
                hi: self.hi.to_f64_lossy(),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }
}

/// Axis-aligned open cross-section of one obstacle cylinder. In the plane of
/// its pair, `x` is the coordinate of `pair.lo()` and `y` of `pair.hi()`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionRect<T> {
    pair: Pair,
    first: Interval<T>,
    second: Interval<T>,
}

impl<T: Scalar> CollisionRect<T> {
    pub fn new(pair: Pair, first: Interval<T>, second: Interval<T>) -> Result<Self, ScenarioError> {
        first.check_interior()?;
        second.check_interior()?;
        Ok(CollisionRect { pair, first, second })
    }

    /// Builds the rectangle from intervals given per vehicle, in any order.
    pub fn between(
        a: usize,
        a_interval: Interval<T>,
        b: usize,
        b_interval: Interval<T>,
    ) -> Result<Self, ScenarioError> {
        let pair = Pair::new(a, b)?;
        if pair.lo() == a {
            Self::new(pair, a_interval, b_interval)
        } else {
            Self::new(pair, b_interval, a_interval)
        }
    }

    pub fn pair(&self) -> Pair {
        self.pair
    }

    pub fn first(&self) -> Interval<T> {
        self.first
    }

    pub fn second(&self) -> Interval<T> {
        self.second
    }

    /// The open interval occupied on the path of vehicle `v`.
    pub fn interval_of(&self, v: usize) -> Interval<T> {
        if v == self.pair.lo() {
            self.first
        } else {
            assert_eq!(v, self.pair.hi(), "vehicle {v} not in pair {}", self.pair);
            self.second
        }
    }

    /// Projects a full state onto this pair's plane.
    pub fn project(&self, x: &[T]) -> Point2<T> {
        Point2::new(x[self.pair.lo()], x[self.pair.hi()])
    }

    pub fn contains_state(&self, x: &[T]) -> bool {
        self.first.contains(x[self.pair.lo()]) && self.second.contains(x[self.pair.hi()])
    }

    /// Same obstacle seen with the axes swapped.
    pub fn transposed(&self) -> (Interval<T>, Interval<T>) {
        (self.second, self.first)
    }
}

/// A planning instance: vehicle count, one rectangle per conflicting pair
/// and the start state. The goal is always the all-ones state.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinationScenario<T> {
    n: usize,
    obstacles: Vec<CollisionRect<T>>,
    x_init: Vec<T>,
}

impl<T: Scalar> CoordinationScenario<T> {
    pub fn new(
        n: usize,
        mut obstacles: Vec<CollisionRect<T>>,
        x_init: Vec<T>,
    ) -> Result<Self, ScenarioError> {
        if n == 0 {
            return Err(ScenarioError::NoVehicles);
        }
        if x_init.len() != n {
            return Err(ScenarioError::DimensionMismatch { got: x_init.len(), n });
        }
        for (vehicle, &value) in x_init.iter().enumerate() {
            if value < T::zero() || value > T::one() {
                return Err(ScenarioError::InitialOutOfRange {
                    vehicle: vehicle + 1,
                    value: value.to_f64_lossy(),
                });
            }
        }
        obstacles.sort_by_key(|o| o.pair());
        for w in obstacles.windows(2) {
            if w[0].pair() == w[1].pair() {
                return Err(ScenarioError::DuplicatePair(w[0].pair()));
            }
        }
        for o in &obstacles {
            if o.pair().hi() >= n {
                return Err(ScenarioError::VehicleOutOfRange { vehicle: o.pair().hi() + 1, n });
            }
            if o.contains_state(&x_init) {
                return Err(ScenarioError::InitialInObstacle(o.pair()));
            }
        }
        Ok(CoordinationScenario { n, obstacles, x_init })
    }

    /// Scenario with no conflicting pairs starting from the origin.
    pub fn unobstructed(n: usize) -> Result<Self, ScenarioError> {
        Self::new(n, Vec::new(), vec![T::zero(); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Obstacles sorted by pair.
    pub fn obstacles(&self) -> &[CollisionRect<T>] {
        &self.obstacles
    }

    pub fn obstacle(&self, pair: Pair) -> Option<&CollisionRect<T>> {
        self.obstacles
            .binary_search_by_key(&pair, |o| o.pair())
            .ok()
            .map(|k| &self.obstacles[k])
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.obstacles.iter().map(|o| o.pair())
    }

    pub fn x_init(&self) -> &[T] {
        &self.x_init
    }

    pub fn starts_at_origin(&self) -> bool {
        self.x_init.iter().all(|&v| v == T::zero())
    }

    pub fn with_x_init(&self, x_init: Vec<T>) -> Result<Self, ScenarioError> {
        Self::new(self.n, self.obstacles.clone(), x_init)
    }

    pub fn state_is_free(&self, x: &[T]) -> bool {
        state_is_free(self, x)
    }
}

/// True when no obstacle contains the projection of `x` onto its plane.
/// Obstacles are open, so boundary states are free.
pub fn state_is_free<T: Scalar>(scn: &CoordinationScenario<T>, x: &[T]) -> bool {
    scn.obstacles().iter().all(|o| !o.contains_state(x))
}
