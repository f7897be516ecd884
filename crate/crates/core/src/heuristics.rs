//! Primary (scaled Euclidean or tabulated) and secondary (hop count)
//! heuristics.

use std::collections::VecDeque;

use crate::grid::{self, CellIndex, Connectivity, GridMap};
use crate::search_core::{TimedGraph, VertexId};

/// Straight-line distance between cell centers divided by `speed`.
pub fn euclidean_h(cell: CellIndex, goal: CellIndex, speed: f64) -> f64 {
    grid::move_length(goal.row - cell.row, goal.col - cell.col) / speed
}

/// Per-vertex primary heuristic values.
///
/// Table values supplied by the caller are expected to be consistent; use
/// [`Heuristic::check_consistency`] to verify that on a given graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Heuristic {
    values: Vec<f64>,
}

impl Heuristic {
    /// Scaled Euclidean distance to `goal` for every cell of `map`. Heading is
    /// ignored in the rotation model.
    pub fn euclidean(map: &GridMap, goal: CellIndex, speed: f64) -> Self {
        let values = (0..map.num_cells())
            .map(|i| euclidean_h(map.cell_at(i), goal, speed))
            .collect();
        Heuristic { values }
    }

    pub fn from_table(values: Vec<f64>) -> Self {
        assert!(values.iter().all(|v| *v >= 0.0), "heuristic values must be non-negative");
        Heuristic { values }
    }

    pub fn zero(num_vertices: usize) -> Self {
        Heuristic {
            values: vec![0.0; num_vertices],
        }
    }

    #[inline]
    pub fn value(&self, v: VertexId) -> f64 {
        self.values[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First edge `(u, v)` with `h(u) - h(v) > cost(u, v)`, if any.
    pub fn check_consistency<G: TimedGraph + ?Sized>(&self, graph: &G) -> Result<(), (VertexId, VertexId)> {
        for u in 0..graph.num_vertices() {
            for e in graph.edges(u) {
                if self.values[u] - self.values[e.to] > e.cost + 1e-9 {
                    return Err((u, e.to));
                }
            }
        }
        Ok(())
    }
}

/// Static hop distance to the goal ignoring edge costs and dynamic obstacles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopField {
    hops: Vec<u32>,
}

impl HopField {
    pub const UNREACHABLE: u32 = u32::MAX;

    /// Breadth-first search backward from `goal` over the static move graph.
    pub fn build(map: &GridMap, goal: CellIndex, conn: Connectivity) -> Self {
        let mut hops = vec![Self::UNREACHABLE; map.num_cells()];
        if map.is_blocked(goal) {
            return HopField { hops };
        }
        let mut queue = VecDeque::new();
        hops[map.index_of(goal)] = 0;
        queue.push_back(goal);
        while let Some(c) = queue.pop_front() {
            let d = hops[map.index_of(c)];
            // Moves are symmetric on a static grid, so forward neighbors are
            // also the predecessors.
            for mv in grid::neighbors(map, c, conn, 1.0) {
                let i = map.index_of(mv.target);
                if hops[i] == Self::UNREACHABLE {
                    hops[i] = d + 1;
                    queue.push_back(mv.target);
                }
            }
        }
        HopField { hops }
    }

    /// Backward BFS over the edges of an arbitrary graph.
    pub fn from_graph<G: TimedGraph + ?Sized>(graph: &G, goal: VertexId) -> Self {
        let n = graph.num_vertices();
        let mut reverse: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for u in 0..n {
            for e in graph.edges(u) {
                reverse[e.to].push(u);
            }
        }
        let mut hops = vec![Self::UNREACHABLE; n];
        hops[goal] = 0;
        let mut queue = VecDeque::from([goal]);
        while let Some(v) = queue.pop_front() {
            for &u in &reverse[v] {
                if hops[u] == Self::UNREACHABLE {
                    hops[u] = hops[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        HopField { hops }
    }

    #[inline]
    pub fn hops(&self, v: VertexId) -> u32 {
        self.hops[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.hops
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search_core::{figure1_graph, GridGraph};
    use crate::dyn_obstacles::SafeIntervalTable;

    #[test]
    fn euclidean_values() {
        let g = CellIndex::new(0, 0);
        assert_eq!(euclidean_h(g, g, 1.0), 0.0);
        assert_eq!(euclidean_h(CellIndex::new(3, 4), g, 1.0), 5.0);
        assert!((euclidean_h(CellIndex::new(1, 1), g, 2.0) - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hop_field_basics() {
        let map: GridMap = "type octile\nheight 3\nwidth 5\nmap\n..@..\n..@..\n..@..\n".parse().unwrap();
        let goal = CellIndex::new(1, 0);
        let hf = HopField::build(&map, goal, Connectivity::Eight);
        assert_eq!(hf.hops(map.index_of(goal)), 0);
        for mv in grid::neighbors(&map, goal, Connectivity::Eight, 1.0) {
            assert_eq!(hf.hops(map.index_of(mv.target)), 1);
        }
        assert_eq!(hf.hops(map.index_of(CellIndex::new(0, 4))), HopField::UNREACHABLE);
        assert_eq!(hf.hops(map.index_of(CellIndex::new(0, 2))), HopField::UNREACHABLE);
    }

    #[test]
    fn hop_field_is_one_lipschitz() {
        let map: GridMap = "type octile\nheight 6\nwidth 8\nmap\n........\n.@@@@...\n....@.@.\n.@..@.@.\n.@....@.\n..@@....\n"
            .parse()
            .unwrap();
        for conn in [Connectivity::Eight, Connectivity::Sixteen, Connectivity::ThirtyTwo] {
            let hf = HopField::build(&map, CellIndex::new(4, 2), conn);
            for a in map.passable_cells() {
                for mv in grid::neighbors(&map, a, conn, 1.0) {
                    let (ha, hb) = (hf.hops(map.index_of(a)), hf.hops(map.index_of(mv.target)));
                    assert!(ha as u64 <= hb as u64 + 1);
                }
            }
        }
    }

    #[test]
    fn euclidean_is_consistent_on_grids() {
        let map: GridMap = "type octile\nheight 5\nwidth 7\nmap\n.......\n..@@...\n.......\n...@...\n.......\n".parse().unwrap();
        for conn in [Connectivity::Eight, Connectivity::Sixteen, Connectivity::ThirtyTwo] {
            for rot in [None, Some(std::f64::consts::FRAC_PI_2)] {
                let table = SafeIntervalTable::from_occupation(vec![Vec::new(); map.num_cells()]);
                let graph = GridGraph::new(map.clone(), conn, 1.0, table, rot);
                let h = Heuristic::euclidean(&map, CellIndex::new(4, 6), 1.0);
                h.check_consistency(&graph).unwrap();
            }
        }
    }

    #[test]
    fn figure1_hops_and_consistency() {
        let g = figure1_graph();
        let goal = g.vertex("Goal").unwrap();
        let hf = HopField::from_graph(&g, goal);
        assert_eq!(hf.hops(g.vertex("B").unwrap()), 1);
        assert_eq!(hf.hops(g.vertex("Start").unwrap()), 4);
        assert_eq!(hf.hops(g.vertex("A").unwrap()), HopField::UNREACHABLE);
        g.heuristic().check_consistency(&g).unwrap();
    }
}
