//! Dynamic obstacles, safe intervals and the minimal-wait transition query.
//!
//! Collision model: while an obstacle moves between two cells it occupies both
//! of them (and any swept cells in between) for the whole move window.
//! Occupation intervals are closed; safe intervals are their closed complement,
//! so an agent may touch an occupied interval at its endpoint but never
//! overlap it.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grid::{self, CellIndex, Connectivity, GridMap};
use crate::interval::{self, le, Interval, Time, EPS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Waypoint {
    pub cell: CellIndex,
    pub arrival: Time,
    pub departure: Time,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<Waypoint>,
}

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("waypoint {index}: departure {departure} before arrival {arrival}")]
    DepartsBeforeArrival {
        index: usize,
        arrival: Time,
        departure: Time,
    },
    #[error("waypoint {index}: {from} -> {to} is not a legal move")]
    IllegalMove {
        index: usize,
        from: CellIndex,
        to: CellIndex,
    },
    #[error("waypoint {index}: travel time {actual} does not match move cost {expected}")]
    TravelTime {
        index: usize,
        expected: Time,
        actual: Time,
    },
    #[error("waypoint {index}: cell {cell} is not passable")]
    Blocked { index: usize, cell: CellIndex },
}

impl Trajectory {
    /// Obstacle that sits on `cell` from time 0 forever.
    pub fn parked(cell: CellIndex) -> Self {
        Trajectory {
            waypoints: vec![Waypoint {
                cell,
                arrival: 0.0,
                departure: f64::INFINITY,
            }],
        }
    }

    pub fn validate(
        &self,
        map: &GridMap,
        conn: Connectivity,
        speed: f64,
    ) -> Result<(), TrajectoryError> {
        let offsets = conn.offsets();
        for (index, wp) in self.waypoints.iter().enumerate() {
            if map.is_blocked(wp.cell) {
                return Err(TrajectoryError::Blocked {
                    index,
                    cell: wp.cell,
                });
            }
            if wp.departure < wp.arrival {
                return Err(TrajectoryError::DepartsBeforeArrival {
                    index,
                    arrival: wp.arrival,
                    departure: wp.departure,
                });
            }
            if let Some(next) = self.waypoints.get(index + 1) {
                let d = (next.cell.row - wp.cell.row, next.cell.col - wp.cell.col);
                let legal = offsets.contains(&d)
                    && grid::traversal_cells(wp.cell, next.cell)
                        .map(|sw| sw.iter().all(|c| map.is_passable(*c)))
                        .unwrap_or(false);
                if !legal {
                    return Err(TrajectoryError::IllegalMove {
                        index,
                        from: wp.cell,
                        to: next.cell,
                    });
                }
                let expected = grid::move_length(d.0, d.1) / speed;
                let actual = next.arrival - wp.departure;
                if (expected - actual).abs() > EPS {
                    return Err(TrajectoryError::TravelTime {
                        index,
                        expected,
                        actual,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Cells occupied by one trajectory and when, merged per cell.
pub fn occupation_intervals(traj: &Trajectory) -> BTreeMap<CellIndex, Vec<Interval>> {
    let mut raw: BTreeMap<CellIndex, Vec<Interval>> = BTreeMap::new();
    let wps = &traj.waypoints;
    for (i, wp) in wps.iter().enumerate() {
        raw.entry(wp.cell)
            .or_default()
            .push(Interval::new(wp.arrival, wp.departure));
        if let Some(next) = wps.get(i + 1) {
            let window = Interval::new(wp.departure, next.arrival);
            raw.entry(wp.cell).or_default().push(window);
            raw.entry(next.cell).or_default().push(window);
            if let Ok(swept) = grid::traversal_cells(wp.cell, next.cell) {
                for c in swept {
                    raw.entry(c).or_default().push(window);
                }
            }
        }
    }
    raw.into_iter()
        .map(|(c, ivs)| (c, interval::merge_intervals(ivs)))
        .collect()
}

/// Per-vertex safe intervals, the occupation they complement, and optional
/// explicit per-edge blocked intervals.
#[derive(Clone, Debug, Default)]
pub struct SafeIntervalTable {
    occupied: Vec<Vec<Interval>>,
    safe: Vec<Vec<Interval>>,
    edge_blocked: HashMap<(usize, usize), Vec<Interval>>,
}

impl SafeIntervalTable {
    /// Every vertex free forever.
    pub fn unconstrained(num_vertices: usize) -> Self {
        Self::from_occupation(vec![Vec::new(); num_vertices])
    }

    /// From per-vertex occupation (any order, may overlap).
    pub fn from_occupation(occupied: Vec<Vec<Interval>>) -> Self {
        let occupied: Vec<Vec<Interval>> = occupied.into_iter().map(interval::merge_intervals).collect();
        let safe = occupied.iter().map(|o| interval::complement(o)).collect();
        SafeIntervalTable {
            occupied,
            safe,
            edge_blocked: HashMap::new(),
        }
    }

    /// From explicitly stated safe intervals (sorted, disjoint except for
    /// shared endpoints). Occupation becomes the gaps between them.
    pub fn from_safe(safe: Vec<Vec<Interval>>) -> Self {
        let occupied = safe
            .iter()
            .map(|s| {
                let mut occ = Vec::new();
                let mut cursor = 0.0;
                for iv in s {
                    debug_assert!(le(cursor, iv.start), "safe intervals must be sorted");
                    if iv.start > cursor + EPS {
                        occ.push(Interval::new(cursor, iv.start));
                    }
                    cursor = iv.end;
                }
                if cursor < f64::INFINITY {
                    occ.push(Interval::new(cursor, f64::INFINITY));
                }
                occ
            })
            .collect();
        SafeIntervalTable {
            occupied,
            safe,
            edge_blocked: HashMap::new(),
        }
    }

    pub fn set_edge_blocked(&mut self, from: usize, to: usize, blocked: Vec<Interval>) {
        self.edge_blocked.insert((from, to), interval::merge_intervals(blocked));
    }

    pub fn num_vertices(&self) -> usize {
        self.safe.len()
    }

    pub fn safe_intervals(&self, v: usize) -> &[Interval] {
        &self.safe[v]
    }

    pub fn occupied(&self, v: usize) -> &[Interval] {
        &self.occupied[v]
    }

    pub fn explicit_edge_blocked(&self, from: usize, to: usize) -> &[Interval] {
        self.edge_blocked
            .get(&(from, to))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Index of the safe interval of `v` containing `t`.
    pub fn interval_at(&self, v: usize, t: Time) -> Option<usize> {
        let ivs = &self.safe[v];
        let i = ivs.partition_point(|iv| iv.end < t - EPS);
        (i < ivs.len() && ivs[i].contains(t)).then_some(i)
    }
}

/// Safe-interval table of a grid populated by the given obstacles.
pub fn build_safe_intervals(map: &GridMap, obstacles: &[Trajectory]) -> SafeIntervalTable {
    let mut occupied = vec![Vec::new(); map.num_cells()];
    for traj in obstacles {
        for (cell, ivs) in occupation_intervals(traj) {
            if map.in_bounds(cell) {
                occupied[map.index_of(cell)].extend(ivs);
            }
        }
    }
    SafeIntervalTable::from_occupation(occupied)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub depart: Time,
    pub arrive: Time,
}

/// Earliest collision-free execution of a move.
///
/// Finds the smallest departure `t >= depart_ready` with `t <= source.end`,
/// `[t, t + move_cost]` overlapping no interval of `edge_blocked` and
/// `t + move_cost` inside `target`. `edge_blocked` must be sorted by start but
/// need not be merged.
pub fn earliest_transition(
    depart_ready: Time,
    source: Interval,
    move_cost: Time,
    edge_blocked: &[Interval],
    target: Interval,
) -> Option<Transition> {
    debug_assert!(move_cost > 0.0);
    let mut depart = depart_ready.max(target.start - move_cost);
    for b in edge_blocked {
        if b.overlaps_window(depart, depart + move_cost) {
            depart = b.end;
            if !le(depart, source.end) {
                return None;
            }
        } else if !interval::lt(b.start, depart + move_cost) {
            break;
        }
    }
    let arrive = depart + move_cost;
    (le(depart, source.end) && le(arrive, target.end) && depart < f64::INFINITY)
        .then_some(Transition { depart, arrive })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObstacleError {
    #[error("map has no passable cells")]
    NoPassableCells,
}

/// Parameters of random obstacle generation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObstacleParams {
    /// Obstacles stop picking new goals once this time is reached, then park.
    pub horizon: Time,
    pub speed: f64,
    /// Goal re-sampling attempts before an obstacle gives up and parks.
    pub max_resamples: usize,
}

impl Default for ObstacleParams {
    fn default() -> Self {
        ObstacleParams {
            horizon: 1000.0,
            speed: 1.0,
            max_resamples: 64,
        }
    }
}

/// `count` random obstacles with default parameters.
pub fn generate_obstacles(
    map: &GridMap,
    count: usize,
    conn: Connectivity,
    seed: u64,
) -> Result<Vec<Trajectory>, ObstacleError> {
    generate_obstacles_with(map, count, conn, seed, &ObstacleParams::default())
}

/// Each obstacle starts on a random passable cell, then repeatedly walks a
/// shortest static path to a fresh random goal until the horizon, then parks.
pub fn generate_obstacles_with(
    map: &GridMap,
    count: usize,
    conn: Connectivity,
    seed: u64,
    params: &ObstacleParams,
) -> Result<Vec<Trajectory>, ObstacleError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let cells = map.passable_cells();
    if cells.is_empty() {
        return Err(ObstacleError::NoPassableCells);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let adjacency: Vec<Vec<grid::GridMove>> = (0..map.num_cells())
        .map(|i| {
            let c = map.cell_at(i);
            if map.is_passable(c) {
                grid::neighbors(map, c, conn, params.speed)
            } else {
                Vec::new()
            }
        })
        .collect();

    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut cur = cells[rng.gen_range(0..cells.len())];
        let mut now = 0.0;
        let mut wps = vec![Waypoint {
            cell: cur,
            arrival: 0.0,
            departure: 0.0,
        }];
        'walk: while now < params.horizon {
            let tree = dijkstra(map, &adjacency, cur);
            let mut attempts = 0;
            let goal = loop {
                let g = cells[rng.gen_range(0..cells.len())];
                if g != cur && tree.cost[map.index_of(g)].is_finite() {
                    break g;
                }
                attempts += 1;
                if attempts >= params.max_resamples {
                    break 'walk;
                }
            };
            let mut path = vec![goal];
            let mut at = map.index_of(goal);
            while let Some(p) = tree.parent[at] {
                path.push(map.cell_at(p));
                at = p;
            }
            path.pop();
            path.reverse();
            for next in path {
                let cost = grid::move_length(next.row - cur.row, next.col - cur.col) / params.speed;
                now += cost;
                wps.push(Waypoint {
                    cell: next,
                    arrival: now,
                    departure: now,
                });
                cur = next;
            }
        }
        wps.last_mut().expect("non-empty").departure = f64::INFINITY;
        out.push(Trajectory { waypoints: wps });
    }
    Ok(out)
}

struct ShortestPathTree {
    cost: Vec<f64>,
    parent: Vec<Option<usize>>,
}

fn dijkstra(map: &GridMap, adjacency: &[Vec<grid::GridMove>], source: CellIndex) -> ShortestPathTree {
    let n = map.num_cells();
    let mut cost = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let s = map.index_of(source);
    cost[s] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push((Reverse(OrdTime(0.0)), s));
    while let Some((Reverse(OrdTime(d)), u)) = heap.pop() {
        if d > cost[u] {
            continue;
        }
        for mv in &adjacency[u] {
            let v = map.index_of(mv.target);
            let nd = d + mv.cost;
            if nd < cost[v] - EPS {
                cost[v] = nd;
                parent[v] = Some(u);
                heap.push((Reverse(OrdTime(nd)), v));
            }
        }
    }
    ShortestPathTree { cost, parent }
}

#[derive(Clone, Copy, PartialEq)]
struct OrdTime(f64);

impl Eq for OrdTime {}

impl PartialOrd for OrdTime {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdTime {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrajectoryFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

const FILE_HEADER: &str = "# sipp obstacle trajectories v1";

/// Writes trajectories in the text format read by [`read_trajectories`].
///
/// One obstacle per line. Waypoints are separated by `;`, each written as
/// `row col arrival departure`; times use the shortest round-trip decimal
/// form, `inf` for an obstacle that parks forever. Lines starting with `#`
/// and blank lines are ignored on reading.
pub fn write_trajectories(obstacles: &[Trajectory]) -> String {
    let mut out = String::new();
    out.push_str(FILE_HEADER);
    out.push('\n');
    for t in obstacles {
        let mut first = true;
        for wp in &t.waypoints {
            if !first {
                out.push(';');
            }
            first = false;
            let _ = write!(out, "{} {} {} {}", wp.cell.row, wp.cell.col, wp.arrival, wp.departure);
        }
        out.push('\n');
    }
    out
}

pub fn read_trajectories(text: &str) -> Result<Vec<Trajectory>, TrajectoryFileError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| TrajectoryFileError::Parse {
            line: line_no,
            message,
        };
        let mut waypoints = Vec::new();
        for record in line.split(';') {
            let fields: Vec<&str> = record.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err(format!("expected `row col arrival departure`, found `{record}`")));
            }
            let row = fields[0].parse::<i32>().map_err(|e| err(format!("row: {e}")))?;
            let col = fields[1].parse::<i32>().map_err(|e| err(format!("col: {e}")))?;
            let arrival = fields[2].parse::<f64>().map_err(|e| err(format!("arrival: {e}")))?;
            let departure = fields[3].parse::<f64>().map_err(|e| err(format!("departure: {e}")))?;
            if arrival.is_nan() || departure.is_nan() || departure < arrival {
                return Err(err(format!("bad times {arrival} {departure}")));
            }
            waypoints.push(Waypoint {
                cell: CellIndex::new(row, col),
                arrival,
                departure,
            });
        }
        out.push(Trajectory { waypoints });
    }
    Ok(out)
}
