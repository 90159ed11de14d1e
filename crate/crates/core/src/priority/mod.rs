//! Priority graphs over the conflicting pairs of a scenario.

mod cycles;
mod extract;
mod feasibility;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coordspace::{CoordinationScenario, Pair, ScenarioError};
use crate::scalar::Scalar;

pub use cycles::{simple_cycles, MAX_CYCLE_VEHICLES};
pub use extract::extract_priority_graph;
pub use feasibility::{
    cycle_swept_box, feasible_completion, is_feasible, necessary_condition, partial_feasibility, Infeasibility,
    Verdict,
};

/// Upper limit on enumerated orientations, `2^MAX_ORIENTED_PAIRS`.
pub const MAX_ORIENTED_PAIRS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PriorityError {
    #[error("vehicle {vehicle} out of range for n = {n}")]
    VehicleOutOfRange { vehicle: usize, n: usize },
    #[error("a vehicle cannot have priority over itself ({0})")]
    SelfEdge(usize),
    #[error("pair {0} is oriented both ways")]
    ConflictingOrientation(Pair),
    #[error("pair {0} has no obstacle in the scenario")]
    UnknownPair(Pair),
    #[error("graph does not orient pair {0}")]
    Incomplete(Pair),
    #[error("graph is over {graph} vehicles, scenario has {scenario}")]
    SizeMismatch { graph: usize, scenario: usize },
    #[error("{pairs} conflicting pairs exceed the enumeration limit of {MAX_ORIENTED_PAIRS}")]
    TooManyPairs { pairs: usize },
    #[error("cycle enumeration is limited to {MAX_CYCLE_VEHICLES} vehicles, got {n}")]
    TooManyVehicles { n: usize },
    #[error("cannot parse priority literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("trajectory crosses both gates of pair {0}")]
    BothGates(Pair),
    #[error("trajectory crosses neither gate of pair {0}")]
    NoGate(Pair),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// `winner ≻ loser`: the winner clears the shared conflict zone first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub winner: usize,
    pub loser: usize,
}

impl Edge {
    pub fn new(winner: usize, loser: usize) -> Self {
        Edge { winner, loser }
    }

    pub fn pair(self) -> Pair {
        Pair::new(self.winner, self.loser).expect("edge endpoints differ")
    }

    pub fn reversed(self) -> Self {
        Edge::new(self.loser, self.winner)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.winner + 1, self.loser + 1)
    }
}

/// Orientation of (some of) the conflicting pairs. At most one arc per
/// pair; the heuristic planner grows it one arc at a time.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PriorityGraph {
    n: usize,
    winners: BTreeMap<Pair, usize>,
}

impl PriorityGraph {
    pub fn new(n: usize) -> Self {
        PriorityGraph { n, winners: BTreeMap::new() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, PriorityError> {
        let mut g = PriorityGraph::new(n);
        for e in edges {
            g.insert(e)?;
        }
        Ok(g)
    }

    /// Parses the comma-separated literal form `"1>2,2>3"` (one-based ids).
    pub fn parse(n: usize, literal: &str) -> Result<Self, PriorityError> {
        let fail = |reason: &str| PriorityError::Parse { literal: literal.to_owned(), reason: reason.to_owned() };
        let mut g = PriorityGraph::new(n);
        for item in literal.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item.split_once('>').ok_or_else(|| fail("expected items of the form i>j"))?;
            let id = |s: &str| -> Result<usize, PriorityError> {
                match s.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(fail("vehicle ids are positive integers")),
                }
            };
            g.insert(Edge::new(id(a)?, id(b)?))?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.winners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winners.is_empty()
    }

    /// Adds an arc. Re-adding the same arc is a no-op; the reverse arc is
    /// an error.
    pub fn insert(&mut self, e: Edge) -> Result<(), PriorityError> {
        for v in [e.winner, e.loser] {
            if v >= self.n {
                return Err(PriorityError::VehicleOutOfRange { vehicle: v + 1, n: self.n });
            }
        }
        if e.winner == e.loser {
            return Err(PriorityError::SelfEdge(e.winner + 1));
        }
        let pair = e.pair();
        match self.winners.get(&pair) {
            Some(&w) if w != e.winner => Err(PriorityError::ConflictingOrientation(pair)),
            _ => {
                self.winners.insert(pair, e.winner);
                Ok(())
            }
        }
    }

    pub fn with_edge(&self, e: Edge) -> Result<Self, PriorityError> {
        let mut g = self.clone();
        g.insert(e)?;
        Ok(g)
    }

    pub fn winner(&self, pair: Pair) -> Option<usize> {
        self.winners.get(&pair).copied()
    }

    pub fn has_edge(&self, winner: usize, loser: usize) -> bool {
        Pair::new(winner, loser).is_ok_and(|p| self.winner(p) == Some(winner))
    }

    /// Arcs in pair order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.winners.iter().map(|(p, &w)| Edge::new(w, p.other(w)))
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges().filter(move |e| e.winner == v).map(|e| e.loser)
    }

    /// Checks that arcs sit only on obstacle pairs of `scn`.
    pub fn check_pairs<T: Scalar>(&self, scn: &CoordinationScenario<T>) -> Result<(), PriorityError> {
        if self.n != scn.n() {
            return Err(PriorityError::SizeMismatch { graph: self.n, scenario: scn.n() });
        }
        match self.winners.keys().find(|p| scn.obstacle(**p).is_none()) {
            Some(&p) => Err(PriorityError::UnknownPair(p)),
            None => Ok(()),
        }
    }

    /// Checks that every obstacle pair is oriented and nothing else is.
    pub fn check_complete<T: Scalar>(&self, scn: &CoordinationScenario<T>) -> Result<(), PriorityError> {
        self.check_pairs(scn)?;
        match scn.pairs().find(|p| !self.winners.contains_key(p)) {
            Some(p) => Err(PriorityError::Incomplete(p)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PriorityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.edges().map(|e| e.to_string()).collect();
        f.write_str(&items.join(","))
    }
}

/// Every complete orientation of the scenario's obstacle pairs, in
/// lexicographic order of their arc lists.
pub fn complete_orientations<T: Scalar>(
    scn: &CoordinationScenario<T>,
) -> Result<Orientations, PriorityError> {
    let pairs: Vec<Pair> = scn.pairs().collect();
    if pairs.len() > MAX_ORIENTED_PAIRS {
        return Err(PriorityError::TooManyPairs { pairs: pairs.len() });
    }
    Ok(Orientations { n: scn.n(), total: 1u64 << pairs.len(), pairs, next: 0 })
}

#[derive(Clone, Debug)]
pub struct Orientations {
    n: usize,
    pairs: Vec<Pair>,
    next: u64,
    total: u64,
}

impl Iterator for Orientations {
    type Item = PriorityGraph;

    fn next(&mut self) -> Option<PriorityGraph> {
        if self.next >= self.total {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let k = self.pairs.len();
        let mut g = PriorityGraph::new(self.n);
        for (idx, p) in self.pairs.iter().enumerate() {
            // First pair is the most significant bit; a clear bit keeps
            // the lower-indexed vehicle first.
            let flipped = (mask >> (k - 1 - idx)) & 1 == 1;
            let winner = if flipped { p.hi() } else { p.lo() };
            g.winners.insert(*p, winner);
        }
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Orientations {}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::coordspace::{CollisionRect, Interval};

    pub(crate) fn all_pairs_scenario(n: usize, lo: f64, hi: f64) -> CoordinationScenario<f64> {
        let mut obstacles = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                obstacles.push(
                    CollisionRect::new(Pair::new(a, b).unwrap(), Interval::new(lo, hi), Interval::new(lo, hi))
                        .unwrap(),
                );
            }
        }
        CoordinationScenario::new(n, obstacles, vec![0.0; n]).unwrap()
    }

    #[test]
    fn orientation_counts() {
        assert_eq!(complete_orientations(&all_pairs_scenario(2, 0.4, 0.6)).unwrap().count(), 2);
        assert_eq!(complete_orientations(&all_pairs_scenario(3, 0.4, 0.6)).unwrap().count(), 8);
        let empty = CoordinationScenario::<f64>::unobstructed(4).unwrap();
        let all: Vec<_> = complete_orientations(&empty).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_empty());
    }

    #[test]
    fn orientation_guard() {
        let scn = all_pairs_scenario(7, 0.4, 0.6);
        assert_eq!(complete_orientations(&scn).unwrap_err(), PriorityError::TooManyPairs { pairs: 21 });
    }

    #[test]
    fn orientations_are_lexicographic() {
        let scn = all_pairs_scenario(3, 0.4, 0.6);
        let lists: Vec<Vec<Edge>> = complete_orientations(&scn).unwrap().map(|g| g.edges().collect()).collect();
        let mut sorted = lists.clone();
        sorted.sort();
        assert_eq!(lists, sorted);
        assert_eq!(lists[0], vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)]);
    }

    #[test]
    fn parse_and_display() {
        let g = PriorityGraph::parse(3, "1>2, 2>3,3>1").unwrap();
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(2, 0));
        assert_eq!(g.to_string(), "1>2,3>1,2>3");
        assert_eq!(PriorityGraph::parse(3, "").unwrap().len(), 0);
        assert!(matches!(PriorityGraph::parse(3, "1-2"), Err(PriorityError::Parse { .. })));
        assert!(matches!(PriorityGraph::parse(3, "0>2"), Err(PriorityError::Parse { .. })));
        assert!(matches!(PriorityGraph::parse(3, "1>4"), Err(PriorityError::VehicleOutOfRange { .. })));
        assert_eq!(PriorityGraph::parse(3, "2>2"), Err(PriorityError::SelfEdge(2)));
        assert!(matches!(PriorityGraph::parse(3, "1>2,2>1"), Err(PriorityError::ConflictingOrientation(_))));
    }

    #[test]
    fn completeness_checks() {
        let scn = all_pairs_scenario(3, 0.4, 0.6);
        let partial = PriorityGraph::parse(3, "1>2").unwrap();
        assert!(partial.check_pairs(&scn).is_ok());
        assert!(matches!(partial.check_complete(&scn), Err(PriorityError::Incomplete(_))));
        let two = all_pairs_scenario(2, 0.4, 0.6);
        let extra = PriorityGraph::parse(2, "1>2").unwrap();
        assert!(extra.check_complete(&two).is_ok());
        let none = CoordinationScenario::<f64>::unobstructed(2).unwrap();
        assert!(matches!(extra.check_pairs(&none), Err(PriorityError::UnknownPair(_))));
    }
}
