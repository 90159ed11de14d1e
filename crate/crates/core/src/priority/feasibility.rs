//! Feasibility of priority graphs in the rectangle model.
//!
//! For an arc `w -> l` on rectangle `R` the swept obstacle is the cylinder
//! `{s_w < b_w(R), s_l > a_l(R)}`. Along an elementary cycle each vertex
//! `v` is constrained by its incoming arc (`s_v > a_v`) and its outgoing
//! arc (`s_v < b_v`), so the intersection over the cycle is the box of
//! intervals `(a_v(in), b_v(out))`, empty iff one of them is.

use std::fmt;

use super::{simple_cycles, Edge, PriorityError, PriorityGraph};
use crate::coordspace::{CollisionRect, CoordinationScenario, Interval, Pair};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasibility {
    /// The swept obstacles along this cycle share a common state.
    Cycle(Vec<usize>),
    /// The start state already lies in the swept obstacle of this arc, so
    /// the loser is past its stop line while the winner has not cleared.
    StartState(Edge),
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::Cycle(c) => {
                let ids: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
                write!(f, "cycle {} -> {}", ids.join(" -> "), c[0] + 1)
            }
            Infeasibility::StartState(e) => write!(f, "start state already violates {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible(Infeasibility),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }

    pub fn witness(&self) -> Option<&Infeasibility> {
        match self {
            Verdict::Feasible => None,
            Verdict::Infeasible(w) => Some(w),
        }
    }
}

fn rect_of<T: Scalar>(scn: &CoordinationScenario<T>, a: usize, b: usize) -> Result<&CollisionRect<T>, PriorityError> {
    let pair = Pair::new(a, b)?;
    scn.obstacle(pair).ok_or(PriorityError::UnknownPair(pair))
}

/// Per-vertex intervals of the swept-obstacle intersection along `cycle`.
/// Coordinates off the cycle are unconstrained.
pub fn cycle_swept_box<T: Scalar>(
    scn: &CoordinationScenario<T>,
    cycle: &[usize],
) -> Result<Vec<(usize, Interval<T>)>, PriorityError> {
    let k = cycle.len();
    (0..k)
        .map(|m| {
            let (prev, v, next) = (cycle[(m + k - 1) % k], cycle[m], cycle[(m + 1) % k]);
            let entering = rect_of(scn, prev, v)?.interval_of(v).lo;
            let leaving = rect_of(scn, v, next)?.interval_of(v).hi;
            Ok((v, Interval::new(entering, leaving)))
        })
        .collect()
}

/// The cycle test restricted to the arcs present, with the start
/// check done against `state`.
pub fn partial_feasibility<T: Scalar>(
    g: &PriorityGraph,
    scn: &CoordinationScenario<T>,
    state: &[T],
) -> Result<Verdict, PriorityError> {
    g.check_pairs(scn)?;
    // Float endpoints within tolerance count as reached, as in the planner.
    let eps = T::tolerance();
    for e in g.edges() {
        let r = rect_of(scn, e.winner, e.loser)?;
        let before_clear = state[e.winner] + eps < r.interval_of(e.winner).hi;
        let past_stop = state[e.loser] > r.interval_of(e.loser).lo + eps;
        if before_clear && past_stop {
            return Ok(Verdict::Infeasible(Infeasibility::StartState(e)));
        }
    }
    // An arc whose winner has cleared its rectangle never binds again.
    let cleared = |w: usize, l: usize| -> Result<bool, PriorityError> {
        Ok(state[w] + eps >= rect_of(scn, w, l)?.interval_of(w).hi)
    };
    'cycles: for cycle in simple_cycles(g)? {
        for m in 0..cycle.len() {
            if cleared(cycle[m], cycle[(m + 1) % cycle.len()])? {
                continue 'cycles;
            }
        }
        let boxed = cycle_swept_box(scn, &cycle)?;
        if boxed.iter().all(|(_, iv)| !iv.is_empty()) {
            return Ok(Verdict::Infeasible(Infeasibility::Cycle(cycle)));
        }
    }
    Ok(Verdict::Feasible)
}

/// A complete graph extending `g` that passes [`partial_feasibility`]
/// from `state`, if any. Depth-first over the undecided pairs with the
/// vehicle further along tried first; every prefix is pruned on its own.
pub fn feasible_completion<T: Scalar>(
    g: &PriorityGraph,
    scn: &CoordinationScenario<T>,
    state: &[T],
) -> Result<Option<PriorityGraph>, PriorityError> {
    if !partial_feasibility(g, scn, state)?.is_feasible() {
        return Ok(None);
    }
    let open: Vec<Pair> = scn.pairs().filter(|p| g.winner(*p).is_none()).collect();
    complete_from(g.clone(), &open, scn, state)
}

fn complete_from<T: Scalar>(
    g: PriorityGraph,
    open: &[Pair],
    scn: &CoordinationScenario<T>,
    state: &[T],
) -> Result<Option<PriorityGraph>, PriorityError> {
    let Some((&p, rest)) = open.split_first() else {
        return Ok(Some(g));
    };
    let ahead = if state[p.hi()] > state[p.lo()] {
        Edge::new(p.hi(), p.lo())
    } else {
        Edge::new(p.lo(), p.hi())
    };
    for e in [ahead, ahead.reversed()] {
        let candidate = g.with_edge(e)?;
        if partial_feasibility(&candidate, scn, state)?.is_feasible() {
            if let Some(done) = complete_from(candidate, rest, scn, state)? {
                return Ok(Some(done));
            }
        }
    }
    Ok(None)
}

/// Whether some feasible trajectory from the scenario's start realizes the
/// complete graph `g`.
pub fn is_feasible<T: Scalar>(
    g: &PriorityGraph,
    scn: &CoordinationScenario<T>,
) -> Result<Verdict, PriorityError> {
    g.check_complete(scn)?;
    // A pair both vehicles have cleared at the start crosses no gate and
    // counts as won by the lower index, so the reverse is never realized.
    let x = scn.x_init();
    for e in g.edges().filter(|e| e.winner > e.loser) {
        let r = rect_of(scn, e.winner, e.loser)?;
        let eps = T::tolerance();
        if x[e.winner] + eps >= r.interval_of(e.winner).hi && x[e.loser] + eps >= r.interval_of(e.loser).hi {
            return Ok(Verdict::Infeasible(Infeasibility::StartState(e)));
        }
    }
    partial_feasibility(g, scn, x)
}

/// Weaker test on the raw obstacle boxes: `false` when the obstacles along
/// some cycle have a common state. Cycles through an arc whose winner has
/// cleared at the start are skipped, as in [`is_feasible`].
pub fn necessary_condition<T: Scalar>(
    g: &PriorityGraph,
    scn: &CoordinationScenario<T>,
) -> Result<bool, PriorityError> {
    g.check_pairs(scn)?;
    let x = scn.x_init();
    for cycle in simple_cycles(g)? {
        let k = cycle.len();
        let mut vacuous = false;
        for m in 0..k {
            let (w, l) = (cycle[m], cycle[(m + 1) % k]);
            vacuous |= x[w] + T::tolerance() >= rect_of(scn, w, l)?.interval_of(w).hi;
        }
        if vacuous {
            continue;
        }
        let mut overlap = true;
        for m in 0..k {
            let (prev, v, next) = (cycle[(m + k - 1) % k], cycle[m], cycle[(m + 1) % k]);
            let entering = rect_of(scn, prev, v)?.interval_of(v);
            let leaving = rect_of(scn, v, next)?.interval_of(v);
            if entering.intersect(&leaving).is_empty() {
                overlap = false;
                break;
            }
        }
        if overlap {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordspace::{swept_obstacle, Precedence};
    use crate::scalar::ratio;
    use num_rational::Rational64;

    fn three_rects(rects: [(f64, f64, f64, f64); 3]) -> CoordinationScenario<f64> {
        // rects[k] covers pairs (1,2), (2,3), (3,1): (a, b) of the first
        // named vehicle, then of the second.
        let named = [(0, 1), (1, 2), (2, 0)];
        let obstacles = named
            .iter()
            .zip(rects)
            .map(|(&(u, v), (a1, b1, a2, b2))| {
                CollisionRect::between(u, Interval::new(a1, b1), v, Interval::new(a2, b2)).unwrap()
            })
            .collect();
        CoordinationScenario::new(3, obstacles, vec![0.0; 3]).unwrap()
    }

    fn common_point() -> CoordinationScenario<f64> {
        three_rects([(0.4, 0.6, 0.4, 0.6); 3])
    }

    fn staggered() -> CoordinationScenario<f64> {
        three_rects([(0.2, 0.3, 0.7, 0.8); 3])
    }

    #[test]
    fn common_point_rejects_cycle() {
        let scn = common_point();
        let g = PriorityGraph::parse(3, "1>2,2>3,3>1").unwrap();
        assert_eq!(is_feasible(&g, &scn).unwrap(), Verdict::Infeasible(Infeasibility::Cycle(vec![0, 1, 2])));
        let boxed = cycle_swept_box(&scn, &[0, 1, 2]).unwrap();
        assert!(boxed.iter().all(|(_, iv)| *iv == Interval::new(0.4, 0.6)));
        assert!(!necessary_condition(&g, &scn).unwrap());
    }

    #[test]
    fn staggered_accepts_cycle() {
        let scn = staggered();
        let g = PriorityGraph::parse(3, "1>2,2>3,3>1").unwrap();
        assert!(is_feasible(&g, &scn).unwrap().is_feasible());
        assert!(necessary_condition(&g, &scn).unwrap());
        let boxed = cycle_swept_box(&scn, &[0, 1, 2]).unwrap();
        assert_eq!(boxed[1], (1, Interval::new(0.7, 0.3)));
    }

    #[test]
    fn acyclic_graphs_are_feasible() {
        let scn = common_point();
        for lit in ["1>2,1>3,2>3", "3>2,3>1,2>1", "2>1,2>3,1>3"] {
            let g = PriorityGraph::parse(3, lit).unwrap();
            assert!(is_feasible(&g, &scn).unwrap().is_feasible(), "{lit}");
            assert!(necessary_condition(&g, &scn).unwrap());
        }
    }

    #[test]
    fn start_state_witness() {
        let r = CollisionRect::between(0, Interval::new(0.4, 0.6), 1, Interval::new(0.4, 0.6)).unwrap();
        let scn = CoordinationScenario::new(2, vec![r], vec![0.3, 0.5]).unwrap();
        let g = PriorityGraph::parse(2, "1>2").unwrap();
        assert_eq!(
            is_feasible(&g, &scn).unwrap(),
            Verdict::Infeasible(Infeasibility::StartState(Edge::new(0, 1)))
        );
        assert!(is_feasible(&PriorityGraph::parse(2, "2>1").unwrap(), &scn).unwrap().is_feasible());
    }

    #[test]
    fn pair_cleared_at_start_goes_to_lower_index() {
        let r = CollisionRect::between(0, Interval::new(0.4, 0.6), 1, Interval::new(0.4, 0.6)).unwrap();
        let scn = CoordinationScenario::new(2, vec![r], vec![0.7, 0.65]).unwrap();
        assert!(is_feasible(&PriorityGraph::parse(2, "1>2").unwrap(), &scn).unwrap().is_feasible());
        assert_eq!(
            is_feasible(&PriorityGraph::parse(2, "2>1").unwrap(), &scn).unwrap(),
            Verdict::Infeasible(Infeasibility::StartState(Edge::new(1, 0)))
        );
    }

    #[test]
    fn cycle_behind_the_state_does_not_bind() {
        let scn = common_point();
        let g = PriorityGraph::parse(3, "1>2,2>3,3>1").unwrap();
        assert_eq!(partial_feasibility(&g, &scn, &[0.7; 3]).unwrap(), Verdict::Feasible);
        assert!(!partial_feasibility(&g, &scn, &[0.1; 3]).unwrap().is_feasible());
    }

    #[test]
    fn incomplete_graph_is_a_contract_error() {
        let g = PriorityGraph::parse(3, "1>2").unwrap();
        assert!(matches!(is_feasible(&g, &common_point()), Err(PriorityError::Incomplete(_))));
    }

    /// The closed form against region membership sampled on a 3-D grid.
    #[test]
    fn closed_form_matches_sampled_swept_regions() {
        let scenarios = [common_point(), staggered(), three_rects([(0.3, 0.5, 0.2, 0.6), (0.1, 0.7, 0.5, 0.55), (0.45, 0.9, 0.15, 0.35)])];
        for scn in &scenarios {
            for bits in 0..8u32 {
                let mut g = PriorityGraph::new(3);
                for (k, (u, v)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                    let e = if bits >> k & 1 == 0 { Edge::new(u, v) } else { Edge::new(v, u) };
                    g.insert(e).unwrap();
                }
                let closed = is_feasible(&g, scn).unwrap().is_feasible();
                let steps = 40;
                let mut sampled_common = false;
                'grid: for i in 1..steps {
                    for j in 1..steps {
                        for k in 1..steps {
                            let x = [i as f64 / steps as f64, j as f64 / steps as f64, k as f64 / steps as f64];
                            let all = g.edges().all(|e| {
                                let r = scn.obstacle(e.pair()).unwrap();
                                let prec = if e.winner == r.pair().lo() {
                                    Precedence::FirstOverSecond
                                } else {
                                    Precedence::SecondOverFirst
                                };
                                swept_obstacle(r, prec).contains(r.project(&x))
                            });
                            if all {
                                sampled_common = true;
                                break 'grid;
                            }
                        }
                    }
                }
                let cyclic = !simple_cycles(&g).unwrap().is_empty();
                if cyclic {
                    assert_eq!(closed, !sampled_common, "bits={bits}");
                } else {
                    assert!(closed);
                }
            }
        }
    }

    #[test]
    fn exact_scalars() {
        let q = |a, b| Interval::new(ratio(a, 10), ratio(b, 10));
        let rects = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .map(|&(u, v)| CollisionRect::between(u, q(4, 6), v, q(4, 6)).unwrap())
            .collect();
        let scn = CoordinationScenario::<Rational64>::new(3, rects, vec![ratio(0, 1); 3]).unwrap();
        let g = PriorityGraph::parse(3, "1>2,2>3,3>1").unwrap();
        assert!(!is_feasible(&g, &scn).unwrap().is_feasible());
    }
}
