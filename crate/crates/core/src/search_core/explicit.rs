use crate::dyn_obstacles::SafeIntervalTable;
use crate::heuristics::Heuristic;
use crate::interval::{Interval, Time, EPS};

use super::{Edge, TimedGraph, VertexId};

/// A small named graph with explicitly stated safe intervals, edge blocks and
/// heuristic table.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    names: Vec<String>,
    edges: Vec<Vec<Edge>>,
    table: SafeIntervalTable,
    heuristic: Heuristic,
}

impl ExplicitGraph {
    pub fn builder<S: AsRef<str>>(names: &[S]) -> ExplicitGraphBuilder {
        let n = names.len();
        ExplicitGraphBuilder {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            edges: vec![Vec::new(); n],
            safe: vec![vec![Interval::FOREVER]; n],
            blocked: Vec::new(),
            heuristic: vec![0.0; n],
        }
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn heuristic(&self) -> &Heuristic {
        &self.heuristic
    }

    pub fn table(&self) -> &SafeIntervalTable {
        &self.table
    }
}

pub struct ExplicitGraphBuilder {
    names: Vec<String>,
    edges: Vec<Vec<Edge>>,
    safe: Vec<Vec<Interval>>,
    blocked: Vec<(VertexId, VertexId, Vec<Interval>)>,
    heuristic: Vec<f64>,
}

impl ExplicitGraphBuilder {
    fn id(&self, name: &str) -> VertexId {
        self.names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("unknown vertex {name}"))
    }

    pub fn edge(mut self, from: &str, to: &str, cost: Time) -> Self {
        assert!(cost > 0.0, "edge costs must be positive");
        let (u, v) = (self.id(from), self.id(to));
        self.edges[u].push(Edge {
            to: v,
            cost,
            heading: None,
        });
        self
    }

    /// Adds both directions with the same cost.
    pub fn undirected(self, a: &str, b: &str, cost: Time) -> Self {
        self.edge(a, b, cost).edge(b, a, cost)
    }

    pub fn safe(mut self, vertex: &str, intervals: Vec<Interval>) -> Self {
        let v = self.id(vertex);
        self.safe[v] = intervals;
        self
    }

    pub fn blocked(mut self, from: &str, to: &str, intervals: Vec<Interval>) -> Self {
        let (u, v) = (self.id(from), self.id(to));
        self.blocked.push((u, v, intervals));
        self
    }

    pub fn h(mut self, vertex: &str, value: f64) -> Self {
        let v = self.id(vertex);
        self.heuristic[v] = value;
        self
    }

    pub fn build(self) -> ExplicitGraph {
        let mut table = SafeIntervalTable::from_safe(self.safe);
        for (u, v, ivs) in self.blocked {
            table.set_edge_blocked(u, v, ivs);
        }
        ExplicitGraph {
            names: self.names,
            edges: self.edges,
            table,
            heuristic: Heuristic::from_table(self.heuristic),
        }
    }
}

impl TimedGraph for ExplicitGraph {
    fn num_vertices(&self) -> usize {
        self.names.len()
    }

    fn edges(&self, v: VertexId) -> &[Edge] {
        &self.edges[v]
    }

    fn safe_intervals(&self, v: VertexId) -> &[Interval] {
        self.table.safe_intervals(v)
    }

    fn edge_blocked(&self, from: VertexId, edge: &Edge, not_before: Time, out: &mut Vec<Interval>) {
        out.extend(
            self.table
                .explicit_edge_blocked(from, edge.to)
                .iter()
                .filter(|iv| iv.end >= not_before - EPS),
        );
    }

    fn vertex_label(&self, v: VertexId) -> String {
        self.names[v].clone()
    }
}

/// The seven-vertex running example for weighted SIPP.
///
/// An obstacle travels from A to B and parks there at time 10, leaving B the
/// single safe interval `[0, 10]`. With `w = 2` weighted SIPP reaches C too
/// late (g = 8 instead of 6) and only recovers by re-expanding it.
pub fn figure1_graph() -> ExplicitGraph {
    ExplicitGraph::builder(&["Start", "A", "B", "C", "D", "E", "Goal"])
        .edge("Start", "D", 3.0)
        .edge("Start", "E", 4.0)
        .edge("E", "C", 4.0)
        .edge("D", "C", 3.0)
        .edge("C", "B", 3.0)
        .edge("B", "Goal", 4.0)
        .safe("B", vec![Interval::new(0.0, 10.0)])
        .h("Start", 11.0)
        .h("D", 8.0)
        .h("E", 7.0)
        .h("C", 5.0)
        .h("B", 4.0)
        .h("Goal", 0.0)
        .build()
}
