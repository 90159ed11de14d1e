use super::{Edge, PriorityError, PriorityGraph};
use crate::coordspace::segment::{segment_hits, Span};
use crate::coordspace::{CollisionRect, CoordinationScenario};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

/// Priority graph realized by a feasible trajectory: `i ≻ j` when the
/// projected path meets the gate `H_{i≻j}` of their rectangle.
///
/// Gates are `{x ∈ (a_x, b_x), y <= a_y}` and its mirror. A pair the start
/// state has already resolved (one vehicle at or past the far edge of the
/// rectangle) crosses no gate; the vehicle that has cleared it wins, the
/// lower index when both have.
pub fn extract_priority_graph<T: Scalar>(
    traj: &Trajectory<T>,
    scn: &CoordinationScenario<T>,
) -> Result<PriorityGraph, PriorityError> {
    let mut g = PriorityGraph::new(scn.n());
    for r in scn.obstacles() {
        g.insert(realized_edge(traj, r)?)?;
    }
    Ok(g)
}

fn realized_edge<T: Scalar>(traj: &Trajectory<T>, r: &CollisionRect<T>) -> Result<Edge, PriorityError> {
    let pair = r.pair();
    let (x, y) = (r.first(), r.second());
    let first_gate = (Span::open(x.lo, x.hi), Span::at_most(y.lo));
    let second_gate = (Span::at_most(x.lo), Span::open(y.lo, y.hi));

    let planar: Vec<(T, T)> = traj.states().iter().map(|s| (s[pair.lo()], s[pair.hi()])).collect();
    let pieces: Vec<((T, T), (T, T))> = if planar.len() == 1 {
        vec![(planar[0], planar[0])]
    } else {
        planar.windows(2).map(|w| (w[0], w[1])).collect()
    };
    let crosses = |gate: &(Span<T>, Span<T>)| pieces.iter().any(|&(p, q)| segment_hits(p, q, &gate.0, &gate.1).is_some());

    match (crosses(&first_gate), crosses(&second_gate)) {
        (true, true) => Err(PriorityError::BothGates(pair)),
        (true, false) => Ok(Edge::new(pair.lo(), pair.hi())),
        (false, true) => Ok(Edge::new(pair.hi(), pair.lo())),
        (false, false) => {
            let start = planar[0];
            if start.0 + T::tolerance() >= x.hi {
                Ok(Edge::new(pair.lo(), pair.hi()))
            } else if start.1 + T::tolerance() >= y.hi {
                Ok(Edge::new(pair.hi(), pair.lo()))
            } else {
                Err(PriorityError::NoGate(pair))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordspace::{Interval, Pair};

    fn scenario(x_init: Vec<f64>) -> CoordinationScenario<f64> {
        let r = CollisionRect::new(Pair::new(0, 1).unwrap(), Interval::new(0.4, 0.6), Interval::new(0.4, 0.6)).unwrap();
        CoordinationScenario::new(2, vec![r], x_init).unwrap()
    }

    #[test]
    fn first_vehicle_passes_first() {
        let traj = Trajectory::new(vec![
            (0.0, vec![0.0, 0.0]),
            (0.4, vec![0.4, 0.4]),
            (0.6, vec![0.6, 0.4]),
            (1.0, vec![1.0, 0.8]),
            (1.2, vec![1.0, 1.0]),
        ])
        .unwrap();
        let g = extract_priority_graph(&traj, &scenario(vec![0.0, 0.0])).unwrap();
        assert_eq!(g.to_string(), "1>2");
    }

    #[test]
    fn mirrored_trajectory() {
        let traj = Trajectory::new(vec![
            (0.0, vec![0.0, 0.0]),
            (0.4, vec![0.4, 0.4]),
            (0.6, vec![0.4, 0.6]),
            (1.0, vec![0.8, 1.0]),
            (1.2, vec![1.0, 1.0]),
        ])
        .unwrap();
        let g = extract_priority_graph(&traj, &scenario(vec![0.0, 0.0])).unwrap();
        assert_eq!(g.to_string(), "2>1");
    }

    #[test]
    fn colliding_path_meets_both_gates() {
        // Not monotone; extraction only looks at geometry.
        let traj = Trajectory::new(vec![
            (0.0, vec![0.0, 0.0]),
            (1.0, vec![0.5, 0.2]),
            (2.0, vec![0.3, 0.5]),
        ])
        .unwrap();
        assert_eq!(
            extract_priority_graph(&traj, &scenario(vec![0.0, 0.0])),
            Err(PriorityError::BothGates(Pair::new(0, 1).unwrap()))
        );
    }

    #[test]
    fn resolved_at_start() {
        let scn = scenario(vec![0.7, 0.5]);
        let traj = Trajectory::new(vec![(0.0, vec![0.7, 0.5]), (0.5, vec![1.0, 1.0])]).unwrap();
        assert_eq!(extract_priority_graph(&traj, &scn).unwrap().to_string(), "1>2");
        let stuck = Trajectory::new(vec![(0.0, vec![0.0, 0.0]), (0.3, vec![0.3, 0.3])]).unwrap();
        assert_eq!(
            extract_priority_graph(&stuck, &scenario(vec![0.0, 0.0])),
            Err(PriorityError::NoGate(Pair::new(0, 1).unwrap()))
        );
    }
}
