use crate::dyn_obstacles::SafeIntervalTable;
use crate::grid::{self, CellIndex, Connectivity, GridMap};
use crate::interval::{Interval, Time, EPS};

use super::{Edge, Heading, TimedGraph, VertexId};

/// A grid world with dynamic obstacles as a [`TimedGraph`].
///
/// Vertex ids are row-major cell indices. A move is blocked whenever the
/// source, the target or any swept cell is occupied during the move window,
/// which mirrors the obstacle occupation rule and rules out swaps.
#[derive(Clone, Debug)]
pub struct GridGraph {
    map: GridMap,
    conn: Connectivity,
    speed: f64,
    table: SafeIntervalTable,
    rotation_speed: Option<f64>,
    edges: Vec<Vec<Edge>>,
    /// Swept-cell offsets of each move direction.
    swept: Vec<Vec<(i32, i32)>>,
    turn_times: Vec<Time>,
}

impl GridGraph {
    /// `rotation_speed` in radians per time unit enables the heading model.
    pub fn new(
        map: GridMap,
        conn: Connectivity,
        speed: f64,
        table: SafeIntervalTable,
        rotation_speed: Option<f64>,
    ) -> Self {
        assert_eq!(table.num_vertices(), map.num_cells(), "table/map size mismatch");
        let offsets = conn.offsets();
        let edges = (0..map.num_cells())
            .map(|i| {
                let c = map.cell_at(i);
                if map.is_blocked(c) {
                    return Vec::new();
                }
                grid::neighbors(&map, c, conn, speed)
                    .into_iter()
                    .map(|mv| Edge {
                        to: map.index_of(mv.target),
                        cost: mv.cost,
                        heading: Some(mv.direction),
                    })
                    .collect()
            })
            .collect();
        let origin = CellIndex::new(0, 0);
        let swept = offsets
            .iter()
            .map(|&(dr, dc)| {
                grid::traversal_cells(origin, origin.offset(dr, dc))
                    .expect("connectivity offsets are supported")
                    .into_iter()
                    .map(|c| (c.row, c.col))
                    .collect()
            })
            .collect();
        let k = offsets.len();
        let angles: Vec<f64> = offsets
            .iter()
            .map(|&(dr, dc)| (dr as f64).atan2(dc as f64))
            .collect();
        let mut turn_times = vec![0.0; k * k];
        if let Some(omega) = rotation_speed {
            assert!(omega > 0.0, "rotation speed must be positive");
            for a in 0..k {
                for b in 0..k {
                    let mut d = (angles[a] - angles[b]).abs() % std::f64::consts::TAU;
                    if d > std::f64::consts::PI {
                        d = std::f64::consts::TAU - d;
                    }
                    turn_times[a * k + b] = d / omega;
                }
            }
        }
        GridGraph {
            map,
            conn,
            speed,
            table,
            rotation_speed,
            edges,
            swept,
            turn_times,
        }
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn connectivity(&self) -> Connectivity {
        self.conn
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn table(&self) -> &SafeIntervalTable {
        &self.table
    }

    pub fn rotation_speed(&self) -> Option<f64> {
        self.rotation_speed
    }

    pub fn vertex_of(&self, cell: CellIndex) -> VertexId {
        self.map.index_of(cell)
    }

    pub fn cell_of(&self, v: VertexId) -> CellIndex {
        self.map.cell_at(v)
    }

    fn push_occupied(&self, v: VertexId, not_before: Time, out: &mut Vec<Interval>) {
        let occ = self.table.occupied(v);
        let first = occ.partition_point(|iv| iv.end < not_before - EPS);
        out.extend_from_slice(&occ[first..]);
    }
}

impl TimedGraph for GridGraph {
    fn num_vertices(&self) -> usize {
        self.map.num_cells()
    }

    fn edges(&self, v: VertexId) -> &[Edge] {
        &self.edges[v]
    }

    fn safe_intervals(&self, v: VertexId) -> &[Interval] {
        self.table.safe_intervals(v)
    }

    fn edge_blocked(&self, from: VertexId, edge: &Edge, not_before: Time, out: &mut Vec<Interval>) {
        self.push_occupied(from, not_before, out);
        self.push_occupied(edge.to, not_before, out);
        if let Some(h) = edge.heading {
            let origin = self.map.cell_at(from);
            for &(dr, dc) in &self.swept[h as usize] {
                let c = origin.offset(dr, dc);
                self.push_occupied(self.map.index_of(c), not_before, out);
            }
        }
        out.sort_by(|a, b| a.start.total_cmp(&b.start));
    }

    fn has_headings(&self) -> bool {
        self.rotation_speed.is_some()
    }

    fn rotation_time(&self, from: Heading, to: Heading) -> Time {
        let k = self.swept.len();
        self.turn_times[from as usize * k + to as usize]
    }

    fn vertex_label(&self, v: VertexId) -> String {
        self.map.cell_at(v).to_string()
    }
}
