//! Cooperative planning for vehicles crossing an intersection on fixed
//! paths.
//!
//! Each vehicle's progress along its path is a coordinate in `[0,1]`, so a
//! joint state lives in the unit cube. Every pair of vehicles whose paths
//! come close carves an open obstacle into the cube. Planning happens in
//! that cube:
//!
//! * [`geometry`] turns polyline paths and disc footprints into obstacle
//!   rectangles.
//! * [`coordspace`] holds scenarios and the planar sets derived from a
//!   cross-section (south, west, completion, gates, swept obstacles).
//! * [`priority`] decides which priority graphs can be realized.
//! * [`planner`] builds optimal trajectories for one graph, for all graphs,
//!   or reactively.
//! * [`oracle`] has brute-force checkers used by tests and `verify`.
//!
//! The math is generic over [`Scalar`], so the same planners run on `f64`
//! and on exact rationals.

pub mod coordspace;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod planner;
pub mod plot;
pub mod priority;
pub mod scalar;
pub mod trajectory;

use num_rational::Rational64;

pub use coordspace::{CollisionRect, CoordinationScenario, Interval, Pair, ScenarioError};
pub use planner::{PlanError, PlanResult};
pub use priority::{Edge, PriorityError, PriorityGraph};
pub use scalar::Scalar;
pub use trajectory::{Trajectory, TrajectoryError};

pub type Scenario = CoordinationScenario<f64>;
pub type Rect = CollisionRect<f64>;
pub type Plan = PlanResult<f64>;

pub type ExactScenario = CoordinationScenario<Rational64>;
pub type ExactRect = CollisionRect<Rational64>;
pub type ExactPlan = PlanResult<Rational64>;
