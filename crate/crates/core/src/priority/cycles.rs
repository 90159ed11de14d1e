//! Elementary circuits of a priority graph (Johnson, 1975).

use super::{PriorityError, PriorityGraph};

pub const MAX_CYCLE_VEHICLES: usize = 10;

/// All elementary directed cycles, each listed from its smallest vertex,
/// sorted. Works on partial graphs too.
pub fn simple_cycles(g: &PriorityGraph) -> Result<Vec<Vec<usize>>, PriorityError> {
    let n = g.n();
    if n > MAX_CYCLE_VEHICLES {
        return Err(PriorityError::TooManyVehicles { n });
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.successors(v).collect()).collect();
    let mut search = Search {
        adj: &adj,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        stack: Vec::new(),
        found: Vec::new(),
    };
    for start in 0..n {
        for v in start..n {
            search.blocked[v] = false;
            search.blocked_by[v].clear();
        }
        search.circuit(start, start);
    }
    let mut cycles = search.found;
    cycles.sort();
    Ok(cycles)
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Circuits through `start` using only vertices `>= start`.
    fn circuit(&mut self, v: usize, start: usize) -> bool {
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for k in 0..self.adj[v].len() {
            let w = self.adj[v][k];
            if w < start {
                continue;
            }
            if w == start {
                self.found.push(self.stack.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w, start) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for k in 0..self.adj[v].len() {
                let w = self.adj[v][k];
                if w >= start && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        closed
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        while let Some(w) = self.blocked_by[u].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::priority::Edge;
    use proptest::prelude::*;

    /// Brute force: every ordered vertex sequence starting at its minimum
    /// whose consecutive arcs (and closing arc) all exist.
    fn brute_force_cycles(g: &PriorityGraph) -> Vec<Vec<usize>> {
        fn extend(g: &PriorityGraph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let first = path[0];
            let last = *path.last().unwrap();
            if path.len() >= 2 && g.has_edge(last, first) {
                out.push(path.clone());
            }
            for w in first + 1..g.n() {
                if !path.contains(&w) && g.has_edge(last, w) {
                    path.push(w);
                    extend(g, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        for s in 0..g.n() {
            extend(g, &mut vec![s], &mut out);
        }
        out.sort();
        out
    }

    fn tournament(n: usize, bits: u32) -> PriorityGraph {
        let mut g = PriorityGraph::new(n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                let e = if bits >> k & 1 == 0 { Edge::new(a, b) } else { Edge::new(b, a) };
                g.insert(e).unwrap();
                k += 1;
            }
        }
        g
    }

    #[test]
    fn acyclic_and_cyclic_triangles() {
        let acyclic = PriorityGraph::parse(3, "1>2,1>3,2>3").unwrap();
        assert!(simple_cycles(&acyclic).unwrap().is_empty());
        let cyclic = PriorityGraph::parse(3, "1>2,2>3,3>1").unwrap();
        assert_eq!(simple_cycles(&cyclic).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn four_tournament_with_one_triangle() {
        // 1>2, 2>3, 3>1 and vertex 4 beats everyone: exactly one cycle.
        let g = PriorityGraph::parse(4, "1>2,2>3,3>1,4>1,4>2,4>3").unwrap();
        assert_eq!(simple_cycles(&g).unwrap(), vec![vec![0, 1, 2]]);
        // 4 loses to 1 and beats 3: adds the 4-cycle 1>2>3... and others.
        let g = PriorityGraph::parse(4, "1>2,2>3,3>1,1>4,4>3,2>4").unwrap();
        let cycles = simple_cycles(&g).unwrap();
        assert_eq!(cycles, brute_force_cycles(&g));
        assert!(cycles.contains(&vec![0, 1, 2]));
    }

    #[test]
    fn all_small_tournaments_match_brute_force() {
        for n in 2..=5 {
            let pairs = n * (n - 1) / 2;
            for bits in 0..(1u32 << pairs) {
                let g = tournament(n, bits);
                assert_eq!(simple_cycles(&g).unwrap(), brute_force_cycles(&g), "n={n} bits={bits}");
            }
        }
    }

    #[test]
    fn vehicle_guard() {
        assert_eq!(
            simple_cycles(&PriorityGraph::new(11)),
            Err(PriorityError::TooManyVehicles { n: 11 })
        );
    }

    proptest! {
        #[test]
        fn partial_graphs_match_brute_force(n in 2usize..=6, bits in any::<u32>(), present in any::<u32>()) {
            let mut g = PriorityGraph::new(n);
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if present >> k & 1 == 1 {
                        let e = if bits >> k & 1 == 0 { Edge::new(a, b) } else { Edge::new(b, a) };
                        g.insert(e).unwrap();
                    }
                    k += 1;
                }
            }
            prop_assert_eq!(simple_cycles(&g).unwrap(), brute_force_cycles(&g));
        }
    }
}
