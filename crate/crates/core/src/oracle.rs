//! Brute-force checkers, written independently of the planners.
//!
//! * [`dp_optimal_cost`] solves the problem on a lattice by dynamic
//!   programming.
//! * [`sample_feasible_trajectory`] draws random trajectories that respect
//!   a priority graph, for dominance tests.
//! * [`random_scenario`] generates seeded rectangle instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coordspace::{CollisionRect, CoordinationScenario, Interval, Pair, ScenarioError};
use crate::priority::{is_feasible, Infeasibility, PriorityError, PriorityGraph, Verdict};
use crate::scalar::Scalar;
use crate::trajectory::{Trajectory, TrajectoryError};

pub const MAX_LATTICE_VEHICLES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid step {0} must be in (0, 0.1] with an integer reciprocal")]
    InvalidGridStep(f64),
    #[error("lattice oracle supports at most {MAX_LATTICE_VEHICLES} vehicles, got {n}")]
    TooManyVehicles { n: usize },
    #[error("start state falls inside an obstacle on the lattice")]
    StartBlocked,
    #[error("goal unreachable on the lattice")]
    Unreachable,
    #[error("graph is infeasible: {0}")]
    Infeasible(Infeasibility),
    #[error("sampler stalled at t = {time}")]
    Stalled { time: f64 },
    #[error(transparent)]
    Priority(#[from] PriorityError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Lattice spacing. A move advances each vehicle by 0 or one step and
/// takes `time_step = grid_step`, keeping speeds at most 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeConfig {
    grid_step: f64,
    cells: usize,
}

impl LatticeConfig {
    pub fn new(grid_step: f64) -> Result<Self, OracleError> {
        if !(grid_step > 0.0 && grid_step <= 0.1) {
            return Err(OracleError::InvalidGridStep(grid_step));
        }
        let cells = (1.0 / grid_step).round();
        if (cells * grid_step - 1.0).abs() > 1e-9 {
            return Err(OracleError::InvalidGridStep(grid_step));
        }
        Ok(LatticeConfig { grid_step, cells: cells as usize })
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn time_step(&self) -> f64 {
        self.grid_step
    }

    /// Agreement tolerance with a continuous optimum for `n` vehicles.
    pub fn tolerance(&self, n: usize) -> f64 {
        self.grid_step * n as f64 + self.time_step()
    }
}

/// Minimal mean exit time over monotone lattice paths. Lattice points
/// strictly inside an obstacle shrunk by one cell are forbidden, and each
/// move costs one time step per vehicle not yet at the goal.
pub fn dp_optimal_cost<T: Scalar>(scn: &CoordinationScenario<T>, cfg: &LatticeConfig) -> Result<f64, OracleError> {
    let n = scn.n();
    if n > MAX_LATTICE_VEHICLES {
        return Err(OracleError::TooManyVehicles { n });
    }
    let side = cfg.cells + 1;
    let h = 1.0 / cfg.cells as f64;
    let total = side.pow(n as u32);
    let strides: Vec<usize> = (0..n).map(|v| side.pow(v as u32)).collect();
    let coords = |flat: usize| -> Vec<usize> { (0..n).map(|v| flat / strides[v] % side).collect() };

    let boxes: Vec<(usize, usize, Interval<f64>, Interval<f64>)> = scn
        .obstacles()
        .iter()
        .map(|r| {
            let shrink = |iv: Interval<T>| Interval::new(iv.lo.to_f64_lossy() + h, iv.hi.to_f64_lossy() - h);
            (r.pair().lo(), r.pair().hi(), shrink(r.first()), shrink(r.second()))
        })
        .collect();
    let blocked = |c: &[usize]| {
        boxes
            .iter()
            .any(|(i, j, x, y)| x.contains(c[*i] as f64 * h) && y.contains(c[*j] as f64 * h))
    };

    const UNREACHED: u64 = u64::MAX;
    let mut value = vec![UNREACHED; total];
    value[total - 1] = 0;
    for flat in (0..total - 1).rev() {
        let c = coords(flat);
        if blocked(&c) {
            continue;
        }
        let open: Vec<usize> = (0..n).filter(|&v| c[v] < cfg.cells).collect();
        let step_cost = open.len() as u64;
        let mut best = UNREACHED;
        for mask in 1u32..(1 << open.len()) {
            let next: usize = flat
                + open
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &v)| strides[v])
                    .sum::<usize>();
            if value[next] != UNREACHED {
                best = best.min(value[next] + step_cost);
            }
        }
        value[flat] = best;
    }

    let start: Vec<usize> = scn
        .x_init()
        .iter()
        .map(|s| ((s.to_f64_lossy() / h).round() as usize).min(cfg.cells))
        .collect();
    if blocked(&start) {
        return Err(OracleError::StartBlocked);
    }
    let flat: usize = start.iter().zip(&strides).map(|(c, s)| c * s).sum();
    match value[flat] {
        UNREACHED => Err(OracleError::Unreachable),
        steps => Ok(steps as f64 * h / n as f64),
    }
}

/// Randomness knobs for [`sample_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    /// Chance that a free vehicle idles during a segment.
    pub wait_probability: f64,
    /// Speeds are drawn from `[min_speed, 1]`.
    pub min_speed: f64,
    /// Segments stop at a random fraction of the time to the next event.
    pub random_segments: bool,
    /// Longest pause inserted when every vehicle chose to idle.
    pub max_pause: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { wait_probability: 0.2, min_speed: 0.05, random_segments: true, max_pause: 0.1 }
    }
}

impl SamplerConfig {
    /// Full speed, no idling, no early segment ends.
    pub fn degenerate() -> Self {
        SamplerConfig { wait_probability: 0.0, min_speed: 1.0, random_segments: false, max_pause: 0.0 }
    }
}

const MAX_SEGMENTS: usize = 100_000;
const SNAP: f64 = 1e-12;

/// Random feasible trajectory realizing `g`, deterministic per seed.
pub fn sample_feasible_trajectory(
    scn: &CoordinationScenario<f64>,
    g: &PriorityGraph,
    seed: u64,
) -> Result<Trajectory<f64>, OracleError> {
    sample_with(scn, g, seed, &SamplerConfig::default())
}

/// Like [`sample_feasible_trajectory`] with explicit randomness settings.
///
/// A loser at or below its stop line stays there until its winner has
/// left their shared rectangle; everything else is random.
pub fn sample_with(
    scn: &CoordinationScenario<f64>,
    g: &PriorityGraph,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<Trajectory<f64>, OracleError> {
    if let Verdict::Infeasible(w) = is_feasible(g, scn)? {
        return Err(OracleError::Infeasible(w));
    }
    let n = scn.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (winner, loser, stop line of the loser, clearing point of the winner)
    let rules: Vec<(usize, usize, f64, f64)> = g
        .edges()
        .map(|e| {
            let r = scn.obstacle(e.pair()).expect("checked pair");
            (e.winner, e.loser, r.interval_of(e.loser).lo, r.interval_of(e.winner).hi)
        })
        .collect();
    let mut marks: Vec<Vec<f64>> = vec![vec![1.0]; n];
    for r in scn.obstacles() {
        for v in [r.pair().lo(), r.pair().hi()] {
            marks[v].push(r.interval_of(v).lo);
            marks[v].push(r.interval_of(v).hi);
        }
    }

    let mut t = 0.0;
    let mut s = scn.x_init().to_vec();
    let mut points = vec![(t, s.clone())];
    for _ in 0..MAX_SEGMENTS {
        if s.iter().all(|&x| x >= 1.0) {
            return Ok(Trajectory::new(points)?);
        }
        // Furthest each vehicle may currently go.
        let ceiling: Vec<f64> = (0..n)
            .map(|v| {
                rules
                    .iter()
                    .filter(|&&(w, l, stop, clear)| l == v && s[v] <= stop && s[w] < clear)
                    .map(|&(_, _, stop, _)| stop)
                    .fold(1.0, f64::min)
            })
            .collect();
        let free: Vec<bool> = (0..n).map(|v| s[v] < ceiling[v]).collect();
        if !free.iter().any(|&f| f) {
            return Err(OracleError::Stalled { time: t });
        }
        let speed: Vec<f64> = (0..n)
            .map(|v| {
                if !free[v] || rng.gen_bool(cfg.wait_probability) {
                    0.0
                } else if cfg.min_speed >= 1.0 {
                    1.0
                } else {
                    rng.gen_range(cfg.min_speed..=1.0)
                }
            })
            .collect();
        if speed.iter().all(|&v| v == 0.0) {
            t += rng.gen_range(0.01 * cfg.max_pause.max(1e-3)..=cfg.max_pause.max(1e-3));
            points.push((t, s.clone()));
            continue;
        }
        let target: Vec<f64> = (0..n)
            .map(|v| marks[v].iter().copied().filter(|&m| m > s[v] + SNAP).fold(ceiling[v], f64::min))
            .collect();
        let horizon = (0..n)
            .filter(|&v| speed[v] > 0.0)
            .map(|v| (target[v] - s[v]) / speed[v])
            .fold(f64::INFINITY, f64::min);
        let dt = if cfg.random_segments { horizon * rng.gen_range(0.2..=1.0) } else { horizon };
        t += dt;
        for v in 0..n {
            if speed[v] > 0.0 {
                s[v] = (s[v] + speed[v] * dt).min(target[v]);
                if target[v] - s[v] <= SNAP {
                    s[v] = target[v];
                }
            }
        }
        points.push((t, s.clone()));
    }
    Err(OracleError::Stalled { time: t })
}

/// Shape of [`random_scenario`] instances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomScenarioConfig {
    /// Keep this at several lattice cells or more: the one-cell deflation
    /// in [`dp_optimal_cost`] makes thinner obstacles invisible to the DP.
    pub min_width: f64,
    pub max_width: f64,
    /// Chance that a given pair of vehicles conflicts at all.
    pub pair_probability: f64,
}

impl Default for RandomScenarioConfig {
    fn default() -> Self {
        RandomScenarioConfig { min_width: 0.1, max_width: 0.35, pair_probability: 1.0 }
    }
}

/// Seeded instance with random rectangles, starting at the origin.
/// Endpoints are rounded to multiples of 0.001.
pub fn random_scenario(
    n: usize,
    seed: u64,
    cfg: &RandomScenarioConfig,
) -> Result<CoordinationScenario<f64>, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let w = rng.gen_range(cfg.min_width..=cfg.max_width);
        let lo = rng.gen_range(0.05..=0.95 - w);
        let lo = (lo * 1000.0).round() / 1000.0;
        let w = (w * 1000.0).round() / 1000.0;
        Interval::new(lo, lo + w)
    };
    let mut obstacles = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(cfg.pair_probability) {
                let (x, y) = (draw(&mut rng), draw(&mut rng));
                obstacles.push(CollisionRect::new(Pair::new(a, b)?, x, y)?);
            }
        }
    }
    Ok(CoordinationScenario::new(n, obstacles, vec![0.0; n])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::{plan_fixed_priority, validate};
    use crate::priority::extract_priority_graph;

    fn square(x_init: Vec<f64>) -> CoordinationScenario<f64> {
        let r = CollisionRect::new(Pair::new(0, 1).unwrap(), Interval::new(0.4, 0.6), Interval::new(0.4, 0.6)).unwrap();
        CoordinationScenario::new(2, vec![r], x_init).unwrap()
    }

    #[test]
    fn lattice_config_checks() {
        assert!(LatticeConfig::new(0.02).is_ok());
        assert!(LatticeConfig::new(0.1).is_ok());
        assert!(LatticeConfig::new(0.2).is_err());
        assert!(LatticeConfig::new(0.03).is_err());
        assert!(LatticeConfig::new(0.0).is_err());
        assert!((LatticeConfig::new(0.02).unwrap().tolerance(2) - 0.06).abs() < 1e-12);
    }

    #[test]
    fn dp_symmetric_square() {
        let cost = dp_optimal_cost(&square(vec![0.0, 0.0]), &LatticeConfig::new(0.02).unwrap()).unwrap();
        assert!((cost - 1.1).abs() <= 0.06, "{cost}");
    }

    #[test]
    fn dp_trivial_instances() {
        let cfg = LatticeConfig::new(0.02).unwrap();
        let free = CoordinationScenario::<f64>::unobstructed(2).unwrap();
        assert!((dp_optimal_cost(&free, &cfg).unwrap() - 1.0).abs() < 1e-12);
        let single = CoordinationScenario::new(1, vec![], vec![0.3]).unwrap();
        assert!((dp_optimal_cost(&single, &cfg).unwrap() - 0.7).abs() < 1e-12);
        let four = CoordinationScenario::<f64>::unobstructed(4).unwrap();
        assert_eq!(dp_optimal_cost(&four, &cfg), Err(OracleError::TooManyVehicles { n: 4 }));
    }

    /// Flooring a feasible path onto the lattice misses every deflated box,
    /// so the DP is never worse than the optimum by more than one time step.
    #[test]
    fn dp_is_a_relaxation() {
        for seed in 0..5 {
            let scn = random_scenario(3, seed, &RandomScenarioConfig::default()).unwrap();
            let best = crate::planner::plan_exhaustive(&scn).unwrap().cost;
            for h in [0.1, 0.05] {
                let cfg = LatticeConfig::new(h).unwrap();
                let dp = dp_optimal_cost(&scn, &cfg).unwrap();
                assert!(dp <= best + cfg.time_step() + 1e-12, "seed {seed}: {dp} vs {best}");
                assert!(dp >= 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn samples_are_feasible_and_realize_the_graph() {
        let scn = random_scenario(3, 7, &RandomScenarioConfig::default()).unwrap();
        let feasible: Vec<_> = crate::priority::complete_orientations(&scn)
            .unwrap()
            .filter(|g| is_feasible(g, &scn).unwrap().is_feasible())
            .collect();
        assert!(!feasible.is_empty());
        for g in &feasible {
            for seed in 0..5 {
                let psi = sample_feasible_trajectory(&scn, g, seed).unwrap();
                let report = validate(&psi, &scn, None);
                assert!(report.passed(), "{:?}", report.violation);
                assert_eq!(&extract_priority_graph(&psi, &scn).unwrap(), g);
            }
        }
    }

    #[test]
    fn degenerate_sampler_reproduces_the_planner() {
        for x_init in [vec![0.0, 0.0], vec![0.1, 0.0], vec![0.0, 0.3]] {
            let scn = square(x_init);
            for lit in ["1>2", "2>1"] {
                let g = PriorityGraph::parse(2, lit).unwrap();
                let Ok(plan) = plan_fixed_priority(&scn, &g) else { continue };
                let psi = sample_with(&scn, &g, 3, &SamplerConfig::degenerate()).unwrap();
                for k in 0..=300 {
                    let t = k as f64 * 0.01;
                    let (a, b) = (plan.trajectory.state_at(t), psi.state_at(t));
                    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9), "t={t}");
                }
            }
        }
    }

    #[test]
    fn seeds_give_different_samples() {
        let scn = square(vec![0.0, 0.0]);
        let g = PriorityGraph::parse(2, "1>2").unwrap();
        let a = sample_feasible_trajectory(&scn, &g, 1).unwrap();
        let b = sample_feasible_trajectory(&scn, &g, 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, sample_feasible_trajectory(&scn, &g, 1).unwrap());
    }

    #[test]
    fn sampler_refuses_infeasible_graph() {
        let scn = square(vec![0.3, 0.5]);
        let g = PriorityGraph::parse(2, "1>2").unwrap();
        assert!(matches!(sample_feasible_trajectory(&scn, &g, 0), Err(OracleError::Infeasible(_))));
    }

    #[test]
    fn random_scenarios_are_reproducible() {
        let cfg = RandomScenarioConfig::default();
        let a = random_scenario(3, 11, &cfg).unwrap();
        assert_eq!(a, random_scenario(3, 11, &cfg).unwrap());
        assert_eq!(a.obstacles().len(), 3);
        for r in a.obstacles() {
            for iv in [r.first(), r.second()] {
                let w = iv.hi - iv.lo;
                assert!((0.05 - 1e-9..=0.35 + 1e-9).contains(&w) && iv.lo >= 0.05 && iv.hi <= 0.951 + 1e-9);
            }
        }
    }
}
