//! Ground truth for the planners.
//!
//! [`brute_force_optimal`] searches the time-expanded graph of a 4-connected,
//! unit-cost, integer-time instance one time step at a time and shares no
//! code with the safe-interval machinery. [`validate_plan`] replays a plan
//! against a [`TimedGraph`] and reports the first violated condition.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyn_obstacles::{self, ObstacleParams, SafeIntervalTable, Trajectory};
use crate::grid::{CellIndex, Connectivity, GridMap};
use crate::interval::{approx_eq, Interval, Time, EPS};
use crate::search_core::{Action, GridGraph, Heading, Plan, TimedGraph, VertexId};

/// Marks an occupation that never ends.
pub const FOREVER: u64 = u64::MAX;

/// A 4-connected unit-cost grid with integer occupation windows.
#[derive(Clone, Debug)]
pub struct DiscreteInstance {
    pub map: GridMap,
    /// Closed occupation windows `(start, end)` per cell, row-major.
    pub occupation: Vec<Vec<(u64, u64)>>,
    pub start: CellIndex,
    pub goal: CellIndex,
    pub horizon: u64,
}

impl DiscreteInstance {
    pub fn default_horizon(map: &GridMap) -> u64 {
        4 * (map.width() + map.height()) as u64
    }

    /// Occupation of 4-connected unit-speed trajectories.
    ///
    /// # Panics
    /// If a trajectory produces a non-integer occupation endpoint.
    pub fn from_trajectories(map: GridMap, obstacles: &[Trajectory], start: CellIndex, goal: CellIndex) -> Self {
        let mut occupation = vec![Vec::new(); map.num_cells()];
        for t in obstacles {
            for (cell, ivs) in dyn_obstacles::occupation_intervals(t) {
                for iv in ivs {
                    occupation[map.index_of(cell)].push((to_tick(iv.start), to_tick(iv.end)));
                }
            }
        }
        let horizon = Self::default_horizon(&map);
        DiscreteInstance {
            map,
            occupation,
            start,
            goal,
            horizon,
        }
    }

    /// Horizon large enough that "no plan within the horizon" implies "no
    /// plan": past the last finite occupation endpoint the world is static,
    /// and any remaining route takes fewer steps than there are cells.
    pub fn complete_horizon(&self) -> u64 {
        self.last_event() + self.map.num_cells() as u64 + 1
    }

    /// Last finite occupation endpoint; the world is static afterwards.
    pub fn last_event(&self) -> u64 {
        self.occupation
            .iter()
            .flatten()
            .flat_map(|&(a, b)| [a, b])
            .filter(|&t| t != FOREVER)
            .max()
            .unwrap_or(0)
    }

    /// The same world as a SIPP graph.
    pub fn to_grid_graph(&self) -> GridGraph {
        let occ = self
            .occupation
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|&(a, b)| Interval::new(a as f64, if b == FOREVER { f64::INFINITY } else { b as f64 }))
                    .collect()
            })
            .collect();
        GridGraph::new(
            self.map.clone(),
            Connectivity::Four,
            1.0,
            SafeIntervalTable::from_occupation(occ),
            None,
        )
    }

    fn window_free(&self, cell: usize, from: u64, to: u64) -> bool {
        self.occupation[cell].iter().all(|&(a, b)| !(a < to && from < b))
    }

    fn start_free(&self) -> bool {
        let s = self.map.index_of(self.start);
        self.occupation[s].iter().all(|&(a, b)| !(a == 0 && b > 0))
    }
}

fn to_tick(t: Time) -> u64 {
    if t == f64::INFINITY {
        return FOREVER;
    }
    assert!(t >= 0.0 && t.fract() == 0.0, "non-integer occupation endpoint {t}");
    t as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal(u64),
    /// The goal is not in the start's static connected component.
    StaticallyUnreachable,
    /// Every timeline collides before reaching the goal.
    NoPlan,
    /// Some timelines were still alive when the horizon ran out.
    HorizonExhausted,
}

impl OracleOutcome {
    pub fn cost(self) -> Option<u64> {
        match self {
            OracleOutcome::Optimal(c) => Some(c),
            _ => None,
        }
    }
}

/// Uniform-cost search over `(cell, t)` with unit wait and move actions.
///
/// A cell occupied over `[a, b]` collides with an agent present during
/// `[s, e]` iff `a < e` and `s < b`; at time 0 the agent collides with any
/// occupation `[0, b]`, `b > 0`. Once the world is static a frontier that
/// stops growing proves there is no plan.
pub fn brute_force_optimal(inst: &DiscreteInstance) -> OracleOutcome {
    let map = &inst.map;
    let n = map.num_cells();
    let steps = |c: CellIndex| {
        [(-1, 0), (1, 0), (0, -1), (0, 1)]
            .into_iter()
            .map(move |(dr, dc)| c.offset(dr, dc))
            .filter(|c| map.is_passable(*c))
    };

    let mut seen = vec![false; n];
    let mut stack = vec![inst.start];
    seen[map.index_of(inst.start)] = true;
    while let Some(c) = stack.pop() {
        for nb in steps(c) {
            if !seen[map.index_of(nb)] {
                seen[map.index_of(nb)] = true;
                stack.push(nb);
            }
        }
    }
    if map.is_blocked(inst.start) || map.is_blocked(inst.goal) || !seen[map.index_of(inst.goal)] {
        return OracleOutcome::StaticallyUnreachable;
    }
    if !inst.start_free() {
        return OracleOutcome::NoPlan;
    }
    if inst.start == inst.goal {
        return OracleOutcome::Optimal(0);
    }

    let goal = map.index_of(inst.goal);
    let last_event = inst.last_event();
    let mut frontier = vec![false; n];
    frontier[map.index_of(inst.start)] = true;
    for t in 0..inst.horizon {
        let mut next = vec![false; n];
        let mut alive = false;
        for (i, _) in frontier.iter().enumerate().filter(|(_, here)| **here) {
            if !inst.window_free(i, t, t + 1) {
                continue;
            }
            next[i] = true;
            alive = true;
            for nb in steps(map.cell_at(i)) {
                let j = map.index_of(nb);
                if inst.window_free(j, t, t + 1) {
                    if j == goal {
                        return OracleOutcome::Optimal(t + 1);
                    }
                    next[j] = true;
                }
            }
        }
        if !alive || (t >= last_event && next == frontier) {
            return OracleOutcome::NoPlan;
        }
        frontier = next;
    }
    OracleOutcome::HorizonExhausted
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Collision,
    Discontinuity,
    CostMismatch,
    BoundExceeded,
    IllegalMove,
    WrongEndpoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub window: Option<Interval>,
    pub vertex: Option<VertexId>,
    pub edge: Option<(VertexId, VertexId)>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            window: None,
            vertex: None,
            edge: None,
            detail: detail.into(),
        }
    }

    fn at_vertex(mut self, v: VertexId, window: Interval) -> Self {
        self.vertex = Some(v);
        self.window = Some(window);
        self
    }

    fn at_edge(mut self, from: VertexId, to: VertexId, window: Interval) -> Self {
        self.edge = Some((from, to));
        self.window = Some(window);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)?;
        if let Some(v) = self.vertex {
            write!(f, " at vertex {v}")?;
        }
        if let Some((a, b)) = self.edge {
            write!(f, " on edge {a}->{b}")?;
        }
        if let Some(w) = self.window {
            write!(f, " during {w}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Violation {}

/// Replays `plan` from `start` at its start time with a free initial heading.
pub fn validate_plan<G: TimedGraph + ?Sized>(graph: &G, plan: &Plan, start: VertexId, goal: VertexId) -> Result<(), Violation> {
    validate_plan_from(graph, plan, start, None, goal)
}

pub fn validate_plan_from<G: TimedGraph + ?Sized>(
    graph: &G,
    plan: &Plan,
    start: VertexId,
    start_heading: Option<Heading>,
    goal: VertexId,
) -> Result<(), Violation> {
    let headings = graph.has_headings();
    let mut now = plan.start_time;
    let mut at = start;
    let mut heading = start_heading;
    let mut present_since = now;
    let mut blocked = Vec::new();

    let check_presence = |v: VertexId, from: Time, to: Time| -> Result<(), Violation> {
        if graph.safe_intervals(v).iter().any(|iv| iv.covers(from, to)) {
            Ok(())
        } else {
            Err(Violation::new(ViolationKind::Collision, "vertex occupied").at_vertex(v, Interval::new(from, to.max(from))))
        }
    };

    for (i, action) in plan.actions.iter().enumerate() {
        if !approx_eq(action.start(), now) {
            return Err(Violation::new(
                ViolationKind::Discontinuity,
                format!("action {i} starts at {} but the previous one ended at {now}", action.start()),
            ));
        }
        match *action {
            Action::Wait { vertex, duration, .. } => {
                if vertex != at || duration < -EPS {
                    return Err(Violation::new(ViolationKind::Discontinuity, format!("action {i}: wait at {vertex} while at {at}")));
                }
                now += duration;
            }
            Action::Rotate { vertex, from, to, duration, .. } => {
                if vertex != at {
                    return Err(Violation::new(ViolationKind::Discontinuity, format!("action {i}: rotate at {vertex} while at {at}")));
                }
                if !headings || heading.is_some_and(|h| h != from) {
                    return Err(Violation::new(ViolationKind::IllegalMove, format!("action {i}: rotation from heading {from}")));
                }
                if !approx_eq(duration, graph.rotation_time(from, to)) {
                    return Err(Violation::new(
                        ViolationKind::CostMismatch,
                        format!("action {i}: rotation {from}->{to} takes {}, declared {duration}", graph.rotation_time(from, to)),
                    ));
                }
                heading = Some(to);
                now += duration;
            }
            Action::Move { from, to, depart, arrive } => {
                if from != at {
                    return Err(Violation::new(ViolationKind::Discontinuity, format!("action {i}: move from {from} while at {at}")));
                }
                let Some(edge) = graph.find_edge(from, to) else {
                    return Err(Violation::new(ViolationKind::IllegalMove, format!("action {i}: no edge {from}->{to}")));
                };
                if !approx_eq(arrive - depart, edge.cost) {
                    return Err(Violation::new(
                        ViolationKind::CostMismatch,
                        format!("action {i}: move takes {}, edge costs {}", arrive - depart, edge.cost),
                    )
                    .at_edge(from, to, Interval::new(depart, arrive.max(depart))));
                }
                if headings {
                    if let (Some(h), Some(dir)) = (heading, edge.heading) {
                        if graph.rotation_time(h, dir) > EPS {
                            return Err(Violation::new(
                                ViolationKind::IllegalMove,
                                format!("action {i}: heading {h} not aligned with move direction {dir}"),
                            ));
                        }
                    }
                    heading = edge.heading;
                }
                check_presence(from, present_since, depart)?;
                blocked.clear();
                graph.edge_blocked(from, &edge, present_since, &mut blocked);
                if let Some(b) = blocked.iter().find(|b| b.overlaps_window(depart, arrive)) {
                    return Err(Violation::new(ViolationKind::Collision, format!("move overlaps blocked window {b}"))
                        .at_edge(from, to, Interval::new(depart, arrive)));
                }
                at = to;
                now = arrive;
                present_since = arrive;
            }
        }
    }
    check_presence(at, present_since, present_since)?;
    if at != goal {
        return Err(Violation::new(ViolationKind::WrongEndpoint, format!("plan ends at {at}, goal is {goal}")));
    }
    if !approx_eq(plan.cost, now - plan.start_time) {
        return Err(Violation::new(
            ViolationKind::CostMismatch,
            format!("declared cost {} but the plan takes {}", plan.cost, now - plan.start_time),
        ));
    }
    Ok(())
}

/// `cost <= w·optimal`, with a relative tolerance of 1e-9.
pub fn check_bound(cost: Time, optimal: Time, w: f64) -> bool {
    let limit = w * optimal;
    cost <= limit + EPS * limit.abs().max(1.0)
}

pub fn ensure_bound(cost: Time, optimal: Time, w: f64) -> Result<(), Violation> {
    if check_bound(cost, optimal, w) {
        Ok(())
    } else {
        Err(Violation::new(
            ViolationKind::BoundExceeded,
            format!("cost {cost} exceeds {w} x optimal {optimal}"),
        ))
    }
}

/// Shape of randomly generated verification worlds.
#[derive(Clone, Copy, Debug)]
pub struct RandomWorld {
    pub width: usize,
    pub height: usize,
    pub wall_probability: f64,
    pub obstacles: usize,
    pub obstacle_horizon: Time,
}

impl RandomWorld {
    fn map(&self, rng: &mut ChaCha8Rng) -> GridMap {
        let blocked = (0..self.width * self.height)
            .map(|_| rng.gen_bool(self.wall_probability))
            .collect();
        GridMap::new(self.width, self.height, blocked)
    }

    fn pick_cell(map: &GridMap, rng: &mut ChaCha8Rng) -> CellIndex {
        let cells = map.passable_cells();
        cells[rng.gen_range(0..cells.len())]
    }

    /// A random 4-connected unit-cost instance whose horizon is complete.
    pub fn discrete(&self, seed: u64) -> DiscreteInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut map = self.map(&mut rng);
        if map.passable_cells().len() < 2 {
            map = GridMap::empty(self.width, self.height);
        }
        let params = ObstacleParams {
            horizon: self.obstacle_horizon,
            ..ObstacleParams::default()
        };
        let obstacles =
            dyn_obstacles::generate_obstacles_with(&map, self.obstacles, Connectivity::Four, rng.gen(), &params).expect("map has passable cells");
        let start = Self::pick_cell(&map, &mut rng);
        let goal = Self::pick_cell(&map, &mut rng);
        let mut inst = DiscreteInstance::from_trajectories(map, &obstacles, start, goal);
        inst.horizon = inst.complete_horizon();
        inst
    }

    /// A random grid world plus `queries` random start/goal pairs.
    pub fn grid(&self, seed: u64, conn: Connectivity, rotation_speed: Option<f64>, queries: usize) -> (GridGraph, Vec<(CellIndex, CellIndex)>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut map = self.map(&mut rng);
        if map.passable_cells().len() < 2 {
            map = GridMap::empty(self.width, self.height);
        }
        let params = ObstacleParams {
            horizon: self.obstacle_horizon,
            ..ObstacleParams::default()
        };
        let obstacles = dyn_obstacles::generate_obstacles_with(&map, self.obstacles, conn, rng.gen(), &params).expect("map has passable cells");
        let table = dyn_obstacles::build_safe_intervals(&map, &obstacles);
        let pairs = (0..queries)
            .map(|_| (Self::pick_cell(&map, &mut rng), Self::pick_cell(&map, &mut rng)))
            .collect();
        (GridGraph::new(map, conn, 1.0, table, rotation_speed), pairs)
    }
}
