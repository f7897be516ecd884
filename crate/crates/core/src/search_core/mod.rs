//! The safe-interval state space: timed graphs, search nodes, successor
//! generation and plan reconstruction.

mod explicit;
mod grid_graph;
mod plan;

use std::collections::HashMap;

use crate::dyn_obstacles::earliest_transition;
use crate::interval::{Interval, Time, EPS};

pub use explicit::{figure1_graph, ExplicitGraph, ExplicitGraphBuilder};
pub use grid_graph::GridGraph;
pub use plan::{reconstruct_plan, Action, Plan, PlanError};

pub type VertexId = usize;

/// Discrete heading: index of a move direction of the active connectivity.
pub type Heading = u8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub to: VertexId,
    /// Translation time, strictly positive.
    pub cost: Time,
    /// Direction of travel, when the graph models headings.
    pub heading: Option<Heading>,
}

/// A graph whose vertices carry safe intervals and whose edges carry move
/// durations and blocked windows.
pub trait TimedGraph {
    fn num_vertices(&self) -> usize;

    fn edges(&self, v: VertexId) -> &[Edge];

    /// Sorted, disjoint safe intervals of `v`.
    fn safe_intervals(&self, v: VertexId) -> &[Interval];

    /// Windows during which traversing `edge` out of `from` collides. Written
    /// to `out` sorted by start; intervals ending before `not_before` may be
    /// omitted.
    fn edge_blocked(&self, from: VertexId, edge: &Edge, not_before: Time, out: &mut Vec<Interval>);

    /// Whether search states carry a heading.
    fn has_headings(&self) -> bool {
        false
    }

    /// Time to turn in place from one heading to another.
    fn rotation_time(&self, _from: Heading, _to: Heading) -> Time {
        0.0
    }

    fn vertex_label(&self, v: VertexId) -> String {
        v.to_string()
    }

    fn find_edge(&self, from: VertexId, to: VertexId) -> Option<Edge> {
        self.edges(from).iter().find(|e| e.to == to).copied()
    }
}

impl<G: TimedGraph + ?Sized> TimedGraph for &G {
    fn num_vertices(&self) -> usize {
        (**self).num_vertices()
    }
    fn edges(&self, v: VertexId) -> &[Edge] {
        (**self).edges(v)
    }
    fn safe_intervals(&self, v: VertexId) -> &[Interval] {
        (**self).safe_intervals(v)
    }
    fn edge_blocked(&self, from: VertexId, edge: &Edge, not_before: Time, out: &mut Vec<Interval>) {
        (**self).edge_blocked(from, edge, not_before, out)
    }
    fn has_headings(&self) -> bool {
        (**self).has_headings()
    }
    fn rotation_time(&self, from: Heading, to: Heading) -> Time {
        (**self).rotation_time(from, to)
    }
    fn vertex_label(&self, v: VertexId) -> String {
        (**self).vertex_label(v)
    }
}

/// Which WSIPP_d copy a node is. Every other planner only uses `Plain`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CopyKind {
    Plain,
    Optimal,
    Suboptimal,
}

/// Search-node identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeKey {
    pub vertex: VertexId,
    pub interval: usize,
    pub heading: Option<Heading>,
    pub copy: CopyKind,
}

impl NodeKey {
    /// The identity with the copy kind erased.
    pub fn state(self) -> NodeKey {
        NodeKey {
            copy: CopyKind::Plain,
            ..self
        }
    }
}

pub type NodeId = usize;

#[derive(Clone, Debug)]
pub struct SearchNode {
    pub key: NodeKey,
    /// Earliest known arrival time in the node's safe interval.
    pub g: Time,
    pub h: Time,
    pub parent: Option<NodeId>,
    /// Departure time from the parent's vertex on the move into this node.
    pub depart: Time,
    /// Rotation performed at the parent just before departing.
    pub rotation: Time,
    pub closed: bool,
    pub expansions: u32,
}

/// Owns every node generated by one planner run.
#[derive(Debug, Default)]
pub struct NodeArena {
    nodes: Vec<SearchNode>,
    index: HashMap<NodeKey, NodeId>,
}

impl NodeArena {
    pub fn new() -> Self {
        NodeArena::default()
    }

    /// Looks up `key`, or inserts a fresh node with `g = +∞`.
    pub fn get_or_insert(&mut self, key: NodeKey, h: Time) -> (NodeId, bool) {
        if let Some(&id) = self.index.get(&key) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.nodes.push(SearchNode {
            key,
            g: f64::INFINITY,
            h,
            parent: None,
            depart: 0.0,
            rotation: 0.0,
            closed: false,
            expansions: 0,
        });
        self.index.insert(key, id);
        (id, true)
    }

    pub fn find(&self, key: &NodeKey) -> Option<NodeId> {
        self.index.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SearchNode> {
        self.nodes.iter()
    }
}

impl std::ops::Index<NodeId> for NodeArena {
    type Output = SearchNode;
    fn index(&self, id: NodeId) -> &SearchNode {
        &self.nodes[id]
    }
}

impl std::ops::IndexMut<NodeId> for NodeArena {
    fn index_mut(&mut self, id: NodeId) -> &mut SearchNode {
        &mut self.nodes[id]
    }
}

/// A reachable `(vertex, interval, heading)` with its earliest arrival.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Successor {
    pub vertex: VertexId,
    pub interval: usize,
    pub heading: Option<Heading>,
    pub depart: Time,
    pub arrive: Time,
    pub rotation: Time,
}

/// Where a state sits when its successors are generated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateAt {
    pub vertex: VertexId,
    pub interval: usize,
    pub heading: Option<Heading>,
    pub g: Time,
}

/// Reusable buffers for [`successors_into`].
#[derive(Debug, Default)]
pub struct SuccessorScratch {
    blocked: Vec<Interval>,
}

/// All successors of `state`, waiting only as long as needed.
pub fn get_successors<G: TimedGraph + ?Sized>(graph: &G, state: StateAt) -> Vec<Successor> {
    let mut out = Vec::new();
    successors_into(graph, state, &mut SuccessorScratch::default(), &mut out);
    out
}

/// Like [`get_successors`], appending to `out`.
///
/// For every edge and every safe interval of its target, the earliest arrival
/// is found by [`earliest_transition`]. With headings, the turn towards the
/// edge direction happens at the source before departure and must fit inside
/// the source interval.
pub fn successors_into<G: TimedGraph + ?Sized>(
    graph: &G,
    state: StateAt,
    scratch: &mut SuccessorScratch,
    out: &mut Vec<Successor>,
) {
    let source = graph.safe_intervals(state.vertex)[state.interval];
    let headings = graph.has_headings();
    for edge in graph.edges(state.vertex) {
        let rotation = match (headings, state.heading, edge.heading) {
            (true, Some(from), Some(to)) => graph.rotation_time(from, to),
            _ => 0.0,
        };
        let ready = state.g + rotation;
        if ready > source.end + EPS {
            continue;
        }
        let targets = graph.safe_intervals(edge.to);
        let first = targets.partition_point(|iv| iv.end < ready + edge.cost - EPS);
        if first == targets.len() {
            continue;
        }
        scratch.blocked.clear();
        graph.edge_blocked(state.vertex, edge, ready, &mut scratch.blocked);
        for (j, target) in targets.iter().enumerate().skip(first) {
            if target.start > source.end + edge.cost + EPS {
                break;
            }
            if let Some(t) = earliest_transition(ready, source, edge.cost, &scratch.blocked, *target) {
                out.push(Successor {
                    vertex: edge.to,
                    interval: j,
                    heading: if headings { edge.heading } else { None },
                    depart: t.depart,
                    arrive: t.arrive,
                    rotation,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyn_obstacles::SafeIntervalTable;
    use crate::grid::{Connectivity, GridMap};

    fn at(v: VertexId, g: Time) -> StateAt {
        StateAt {
            vertex: v,
            interval: 0,
            heading: None,
            g,
        }
    }

    #[test]
    fn figure1_c_successors() {
        let g = figure1_graph();
        let (c, b) = (g.vertex("C").unwrap(), g.vertex("B").unwrap());
        assert!(get_successors(&g, at(c, 8.0)).is_empty());
        let succ = get_successors(&g, at(c, 6.0));
        assert_eq!(succ.len(), 1);
        assert_eq!((succ[0].vertex, succ[0].arrive), (b, 9.0));
    }

    #[test]
    fn open_grid_king_moves() {
        let map = GridMap::empty(5, 5);
        let table = SafeIntervalTable::from_occupation(vec![Vec::new(); 25]);
        let graph = GridGraph::new(map.clone(), Connectivity::Eight, 1.0, table, None);
        let v = map.index_of(crate::grid::CellIndex::new(2, 2));
        let succ = get_successors(&graph, at(v, 0.0));
        assert_eq!(succ.len(), 8);
        for s in &succ {
            assert!((s.arrive - 1.0).abs() < 1e-12 || (s.arrive - 2f64.sqrt()).abs() < 1e-12);
            assert_eq!(s.depart, 0.0);
        }
    }

    #[test]
    fn one_successor_per_reachable_interval() {
        // Target cell is free over [0,3], [5,7] and [9,inf).
        let map = GridMap::empty(2, 1);
        let occ = vec![Vec::new(), vec![Interval::new(3.0, 5.0), Interval::new(7.0, 9.0)]];
        let graph = GridGraph::new(map, Connectivity::Four, 1.0, SafeIntervalTable::from_occupation(occ), None);
        let succ = get_successors(&graph, at(0, 0.0));
        let arrivals: Vec<(usize, Time)> = succ.iter().map(|s| (s.interval, s.arrive)).collect();
        assert_eq!(arrivals, vec![(0, 1.0), (1, 6.0), (2, 10.0)]);
        // Entering the target while it is occupied is never emitted.
        let late = get_successors(&graph, at(0, 2.5));
        let arrivals: Vec<(usize, Time)> = late.iter().map(|s| (s.interval, s.arrive)).collect();
        assert_eq!(arrivals, vec![(1, 6.0), (2, 10.0)]);
    }

    #[test]
    fn rotation_is_added_before_departure() {
        let map = GridMap::empty(3, 3);
        let table = SafeIntervalTable::from_occupation(vec![Vec::new(); 9]);
        let graph = GridGraph::new(map.clone(), Connectivity::Eight, 1.0, table, Some(std::f64::consts::FRAC_PI_2));
        let v = map.index_of(crate::grid::CellIndex::new(1, 1));
        // Heading 0 is "up"; moving down needs a half turn = 2 time units.
        let succ = get_successors(
            &graph,
            StateAt {
                vertex: v,
                interval: 0,
                heading: Some(0),
                g: 0.0,
            },
        );
        let down = succ
            .iter()
            .find(|s| s.vertex == map.index_of(crate::grid::CellIndex::new(2, 1)))
            .unwrap();
        assert!((down.rotation - 2.0).abs() < 1e-12);
        assert!((down.arrive - 3.0).abs() < 1e-12);
        assert_eq!(down.heading, Some(4));
        let up = succ
            .iter()
            .find(|s| s.vertex == map.index_of(crate::grid::CellIndex::new(0, 1)))
            .unwrap();
        assert_eq!(up.rotation, 0.0);
    }
}
