//! Physical scenarios: polyline paths and disc-shaped vehicles, compiled
//! into coordination-space obstacle rectangles by grid sampling.

use num_traits::Float;
use thiserror::Error;

use crate::coordspace::{CollisionRect, CoordinationScenario, Interval, Pair, ScenarioError};
use crate::scalar::Scalar;

pub const MIN_GRID_RESOLUTION: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("path {id} needs at least two waypoints")]
    TooFewWaypoints { id: usize },
    #[error("path {id} repeats waypoint {index}")]
    RepeatedWaypoint { id: usize, index: usize },
    #[error("path id {0} is used twice")]
    DuplicatePath(usize),
    #[error("vehicle {vehicle} refers to unknown path {path}")]
    UnknownPath { vehicle: usize, path: usize },
    #[error("vehicles {first} and {second} share path {path}")]
    SharedPath { path: usize, first: usize, second: usize },
    #[error("vehicle {0} needs a positive radius")]
    NonPositiveRadius(usize),
    #[error("vehicle ids must be 1..n without gaps")]
    VehicleIds,
    #[error("expected {expected} initial positions, got {found}")]
    InitialCount { expected: usize, found: usize },
    #[error("initial position of vehicle {0} must lie in [0,1)")]
    InitialOutOfRange(usize),
    #[error("path parameter {0} outside [0,1]")]
    ParameterOutOfRange(f64),
    #[error("grid resolution {0} is below {MIN_GRID_RESOLUTION}")]
    ResolutionTooSmall(usize),
    #[error("collision region of pair {0} reaches the start or end of a path")]
    TouchesBoundary(Pair),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Polyline path parameterized by normalized arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct PathGeometry<T> {
    id: usize,
    waypoints: Vec<(T, T)>,
    /// Arc length at each waypoint; the last entry is the total length.
    cumulative: Vec<T>,
}

impl<T: Scalar + Float> PathGeometry<T> {
    pub fn new(id: usize, waypoints: Vec<(T, T)>) -> Result<Self, GeometryError> {
        if waypoints.len() < 2 {
            return Err(GeometryError::TooFewWaypoints { id });
        }
        let mut cumulative = vec![<T as num_traits::Zero>::zero()];
        for (k, w) in waypoints.windows(2).enumerate() {
            let d = (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
            if d <= <T as num_traits::Zero>::zero() {
                return Err(GeometryError::RepeatedWaypoint { id, index: k + 1 });
            }
            cumulative.push(cumulative[k] + d);
        }
        Ok(PathGeometry { id, waypoints, cumulative })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn waypoints(&self) -> &[(T, T)] {
        &self.waypoints
    }

    pub fn length(&self) -> T {
        *self.cumulative.last().expect("at least two waypoints")
    }

    /// Point at arc length `s * length`.
    pub fn eval(&self, s: T) -> Result<(T, T), GeometryError> {
        let zero = <T as num_traits::Zero>::zero();
        let one = <T as num_traits::One>::one();
        if !(zero..=one).contains(&s) {
            return Err(GeometryError::ParameterOutOfRange(s.to_f64_lossy()));
        }
        if s == one {
            return Ok(*self.waypoints.last().expect("non-empty"));
        }
        let target = s * self.length();
        let k = self.cumulative.partition_point(|&c| c <= target).clamp(1, self.waypoints.len() - 1);
        let (a, b) = (self.waypoints[k - 1], self.waypoints[k]);
        let u = (target - self.cumulative[k - 1]) / (self.cumulative[k] - self.cumulative[k - 1]);
        Ok((a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1)))
    }
}

/// Vehicle `id` (1-based) with a disc footprint driving along `path_id`.
#[derive(Clone, Debug, PartialEq)]
pub struct VehicleSpec<T> {
    pub id: usize,
    pub path_id: usize,
    pub radius: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricScenario<T> {
    paths: Vec<PathGeometry<T>>,
    vehicles: Vec<VehicleSpec<T>>,
    initial_positions: Vec<T>,
}

impl<T: Scalar + Float> GeometricScenario<T> {
    /// Vehicles may come in any order; they are stored by id.
    /// `initial_positions[k]` belongs to vehicle `k + 1`.
    pub fn new(
        paths: Vec<PathGeometry<T>>,
        mut vehicles: Vec<VehicleSpec<T>>,
        initial_positions: Vec<T>,
    ) -> Result<Self, GeometryError> {
        for (k, p) in paths.iter().enumerate() {
            if paths[..k].iter().any(|q| q.id == p.id) {
                return Err(GeometryError::DuplicatePath(p.id));
            }
        }
        vehicles.sort_by_key(|v| v.id);
        if vehicles.iter().enumerate().any(|(k, v)| v.id != k + 1) {
            return Err(GeometryError::VehicleIds);
        }
        for (k, v) in vehicles.iter().enumerate() {
            if !paths.iter().any(|p| p.id == v.path_id) {
                return Err(GeometryError::UnknownPath { vehicle: v.id, path: v.path_id });
            }
            if !(v.radius > <T as num_traits::Zero>::zero()) {
                return Err(GeometryError::NonPositiveRadius(v.id));
            }
            if let Some(u) = vehicles[..k].iter().find(|u| u.path_id == v.path_id) {
                return Err(GeometryError::SharedPath { path: v.path_id, first: u.id, second: v.id });
            }
        }
        if initial_positions.len() != vehicles.len() {
            return Err(GeometryError::InitialCount { expected: vehicles.len(), found: initial_positions.len() });
        }
        let zero = <T as num_traits::Zero>::zero();
        let one = <T as num_traits::One>::one();
        if let Some(k) = initial_positions.iter().position(|&s| !(s >= zero && s < one)) {
            return Err(GeometryError::InitialOutOfRange(k + 1));
        }
        Ok(GeometricScenario { paths, vehicles, initial_positions })
    }

    pub fn n(&self) -> usize {
        self.vehicles.len()
    }

    pub fn paths(&self) -> &[PathGeometry<T>] {
        &self.paths
    }

    pub fn vehicles(&self) -> &[VehicleSpec<T>] {
        &self.vehicles
    }

    pub fn initial_positions(&self) -> &[T] {
        &self.initial_positions
    }

    pub fn path_of(&self, vehicle: usize) -> &PathGeometry<T> {
        let id = self.vehicles[vehicle].path_id;
        self.paths.iter().find(|p| p.id == id).expect("validated path reference")
    }
}

/// Result of sampling one pair's collision predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSection<T> {
    resolution: usize,
    occupied: Vec<bool>,
    bounds: Option<(Interval<T>, Interval<T>)>,
}

impl<T: Scalar + Float> SampledSection<T> {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Whether sample `(k_i, k_j)` at `(k_i, k_j) / (resolution - 1)`
    /// collides.
    pub fn occupied(&self, k_i: usize, k_j: usize) -> bool {
        self.occupied[k_i * self.resolution + k_j]
    }

    /// Inflated bounding rectangle of the colliding samples, as intervals
    /// of the first and second vehicle. `None` when nothing collides.
    pub fn bounds(&self) -> Option<(Interval<T>, Interval<T>)> {
        self.bounds
    }

    pub fn sample(&self, k: usize) -> T {
        T::from_count(k) / T::from_count(self.resolution - 1)
    }
}

/// Samples `dist(path_i(s_i), path_j(s_j)) < r_i + r_j` on a square grid
/// and bounds the colliding samples by a rectangle grown one cell per side.
/// The rectangle is clamped to stay inside the open unit square.
pub fn compute_cross_section<T: Scalar + Float>(
    path_i: &PathGeometry<T>,
    path_j: &PathGeometry<T>,
    r_i: T,
    r_j: T,
    resolution: usize,
) -> Result<SampledSection<T>, GeometryError> {
    if resolution < MIN_GRID_RESOLUTION {
        return Err(GeometryError::ResolutionTooSmall(resolution));
    }
    let h = <T as num_traits::One>::one() / T::from_count(resolution - 1);
    let at = |k: usize| if k + 1 == resolution { <T as num_traits::One>::one() } else { T::from_count(k) * h };
    let pts_i: Vec<(T, T)> = (0..resolution).map(|k| path_i.eval(at(k))).collect::<Result<_, _>>()?;
    let pts_j: Vec<(T, T)> = (0..resolution).map(|k| path_j.eval(at(k))).collect::<Result<_, _>>()?;
    let reach = r_i + r_j;
    let reach2 = reach * reach;

    let mut occupied = vec![false; resolution * resolution];
    let mut extent: Option<(usize, usize, usize, usize)> = None;
    for (ki, p) in pts_i.iter().enumerate() {
        for (kj, q) in pts_j.iter().enumerate() {
            let (dx, dy) = (p.0 - q.0, p.1 - q.1);
            if dx * dx + dy * dy < reach2 {
                occupied[ki * resolution + kj] = true;
                extent = Some(match extent {
                    None => (ki, ki, kj, kj),
                    Some((a, b, c, d)) => (a.min(ki), b.max(ki), c.min(kj), d.max(kj)),
                });
            }
        }
    }
    let bounds = extent.map(|(i0, i1, j0, j1)| (inflate(i0, i1, h, resolution), inflate(j0, j1, h, resolution)));
    Ok(SampledSection { resolution, occupied, bounds })
}

fn inflate<T: Scalar + Float>(k0: usize, k1: usize, h: T, resolution: usize) -> Interval<T> {
    let lo_clamp = h * T::half();
    let hi_clamp = <T as num_traits::One>::one() - lo_clamp;
    let lo = (T::from_count(k0) * h - h).max(lo_clamp);
    let hi = if k1 + 1 >= resolution { hi_clamp } else { (T::from_count(k1) * h + h).min(hi_clamp) };
    Interval::new(lo, hi)
}

fn touches_boundary<T: Scalar + Float>(section: &SampledSection<T>) -> bool {
    let last = section.resolution - 1;
    (0..section.resolution).any(|k| {
        section.occupied(0, k) || section.occupied(last, k) || section.occupied(k, 0) || section.occupied(k, last)
    })
}

/// One obstacle rectangle per colliding vehicle pair, with the start state
/// taken from the initial positions.
pub fn compile_scenario<T: Scalar + Float>(
    gs: &GeometricScenario<T>,
    resolution: usize,
) -> Result<CoordinationScenario<T>, GeometryError> {
    let n = gs.n();
    let mut obstacles = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let section = compute_cross_section(
                gs.path_of(a),
                gs.path_of(b),
                gs.vehicles[a].radius,
                gs.vehicles[b].radius,
                resolution,
            )?;
            let pair = Pair::new(a, b)?;
            if let Some((first, second)) = section.bounds() {
                if touches_boundary(&section) {
                    return Err(GeometryError::TouchesBoundary(pair));
                }
                obstacles.push(CollisionRect::new(pair, first, second)?);
            }
        }
    }
    Ok(CoordinationScenario::new(n, obstacles, gs.initial_positions.clone())?)
}
