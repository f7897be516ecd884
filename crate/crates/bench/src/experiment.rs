use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sipp_core::dyn_obstacles::{self, Trajectory};
use sipp_core::planners::{solve, Algorithm, Outcome, ProblemInstance, SearchOptions, Solution};
use sipp_core::{grid, CellIndex, Connectivity, GridGraph, GridMap, Heuristic, HopField};

use crate::maps::{generate_map, MapKind};
use crate::report::{Row, RunReport, Unsolvable};
use crate::scenario::generate_scenario;

#[derive(Clone, Debug, PartialEq)]
pub enum MapSource {
    File(PathBuf),
    Generated { kind: MapKind, size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub map: MapSource,
    pub connectivity: Connectivity,
    /// Turning costs time; the agent turns a quarter circle per time unit.
    pub rotations: bool,
    pub obstacles: usize,
    /// Replaces the generated obstacles when set.
    pub obstacle_file: Option<PathBuf>,
    pub queries: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub weights: Vec<f64>,
    pub format: ReportFormat,
    pub time_limit: Duration,
    /// Runs per (query, algorithm, w); runtimes are the median.
    pub repeats: usize,
}

pub const DEFAULT_WEIGHTS: [f64; 6] = [1.01, 1.05, 1.1, 1.3, 2.0, 5.0];

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            map: MapSource::Generated {
                kind: MapKind::Rooms,
                size: 32,
            },
            connectivity: Connectivity::Eight,
            rotations: false,
            obstacles: 60,
            obstacle_file: None,
            queries: 25,
            seed: 0,
            algorithms: Algorithm::ALL.to_vec(),
            weights: DEFAULT_WEIGHTS.to_vec(),
            format: ReportFormat::Csv,
            time_limit: Duration::from_secs(30),
            repeats: 3,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.weights.iter().all(|&w| w >= 1.0), "every w must be >= 1");
        ensure!(!self.algorithms.is_empty(), "no algorithms selected");
        ensure!(self.repeats >= 1, "repeats must be >= 1");
        if let MapSource::Generated { size, .. } = self.map {
            ensure!(size >= 2, "map size must be >= 2");
        }
        Ok(())
    }

    pub fn load_map(&self) -> Result<GridMap> {
        match &self.map {
            MapSource::File(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading map {}", path.display()))?;
                grid::parse_map(&text).with_context(|| format!("parsing map {}", path.display()))
            }
            MapSource::Generated { kind, size } => Ok(generate_map(*kind, *size, self.seed)),
        }
    }

    pub fn load_obstacles(&self, map: &GridMap) -> Result<Vec<Trajectory>> {
        match &self.obstacle_file {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading obstacles {}", path.display()))?;
                dyn_obstacles::read_trajectories(&text).with_context(|| format!("parsing obstacles {}", path.display()))
            }
            None => Ok(dyn_obstacles::generate_obstacles(map, self.obstacles, self.connectivity, self.seed.wrapping_add(1))?),
        }
    }
}

/// The world and query list an experiment runs on.
pub struct Workload {
    pub graph: GridGraph,
    pub queries: Vec<(CellIndex, CellIndex)>,
}

pub fn build_workload(cfg: &ExperimentConfig) -> Result<Workload> {
    cfg.validate()?;
    let map = cfg.load_map()?;
    let obstacles = cfg.load_obstacles(&map)?;
    let table = dyn_obstacles::build_safe_intervals(&map, &obstacles);
    let queries = generate_scenario(&map, cfg.queries, cfg.seed.wrapping_add(2), cfg.connectivity)?;
    let rotation = cfg.rotations.then_some(std::f64::consts::FRAC_PI_2);
    Ok(Workload {
        graph: GridGraph::new(map, cfg.connectivity, 1.0, table, rotation),
        queries,
    })
}

struct Measured {
    solution: Solution,
    runtime: Duration,
}

fn measure(p: &ProblemInstance<'_, GridGraph>, repeats: usize, limit: Duration) -> Measured {
    let mut runtimes = Vec::with_capacity(repeats);
    let mut first = None;
    for _ in 0..repeats {
        let options = SearchOptions {
            deadline: Some(Instant::now() + limit),
            ..p.options
        };
        let sol = solve(&p.with_options(options));
        runtimes.push(sol.stats.runtime);
        let timed_out = sol.outcome == Outcome::Timeout;
        first.get_or_insert(sol);
        if timed_out {
            break;
        }
    }
    runtimes.sort();
    Measured {
        solution: first.expect("repeats >= 1"),
        runtime: runtimes[runtimes.len() / 2],
    }
}

/// Runs the SIPP baseline once per query, then every (algorithm, w) pair.
/// SIPP rows reuse the baseline for each w.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    let work = build_workload(cfg)?;
    Ok(run_workload(cfg, &work))
}

pub fn run_workload(cfg: &ExperimentConfig, work: &Workload) -> RunReport {
    let graph = &work.graph;
    let map = graph.map();
    let mut report = RunReport::default();
    for (query, &(start, goal)) in work.queries.iter().enumerate() {
        let h = Heuristic::euclidean(map, goal, graph.speed());
        let hops = HopField::build(map, goal, cfg.connectivity);
        let base = ProblemInstance::new(graph, graph.vertex_of(start), graph.vertex_of(goal), &h).with_hops(&hops);
        let baseline = measure(&base, cfg.repeats, cfg.time_limit);
        let Some(base_cost) = baseline.solution.cost else {
            report.unsolvable.push(Unsolvable {
                query,
                start: (start.row, start.col),
                goal: (goal.row, goal.col),
                reason: baseline.solution.outcome.name().to_string(),
            });
            continue;
        };
        for &algorithm in &cfg.algorithms {
            for &w in &cfg.weights {
                let m = if algorithm == Algorithm::Sipp {
                    None
                } else {
                    Some(measure(&base.with_algorithm(algorithm).with_weight(w), cfg.repeats, cfg.time_limit))
                };
                let m = m.as_ref().unwrap_or(&baseline);
                let sol = &m.solution;
                let found = sol.outcome == Outcome::Found;
                report.rows.push(Row {
                    query,
                    start: (start.row, start.col),
                    goal: (goal.row, goal.col),
                    algorithm,
                    w,
                    outcome: sol.outcome.name().to_string(),
                    cost: sol.cost,
                    sipp_cost: base_cost,
                    cost_ratio: sol.cost.map(|c| if base_cost > 0.0 { c / base_cost } else { 1.0 }),
                    runtime_s: m.runtime.as_secs_f64(),
                    runtime_ratio: found.then(|| ratio(m.runtime, baseline.runtime)),
                    expansions: sol.stats.expansions,
                    reexpansions: sol.stats.reexpansions,
                    generated: sol.stats.generated,
                });
            }
        }
    }
    report.sort();
    report
}

fn ratio(a: Duration, b: Duration) -> f64 {
    let b = b.as_secs_f64().max(1e-9);
    a.as_secs_f64() / b
}
