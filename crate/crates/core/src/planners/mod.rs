//! Optimal SIPP and its bounded-suboptimal variants.
//!
//! | algorithm | OPEN priority                | re-expansions            |
//! |-----------|------------------------------|--------------------------|
//! | SIPP      | `g + h`                      | never needed             |
//! | WSIPP_r   | `g + w·h`                    | on any strict g decrease |
//! | WSIPP_d   | `w·(g + h)` / `g + w·h` copy | none, per copy           |
//! | Focal     | FOCAL by hop count           | on any strict g decrease |
//!
//! Ties on priority prefer larger `g`, then insertion order.

mod best_first;
mod focal;
mod open;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::heuristics::{Heuristic, HopField};
use crate::interval::Time;
use crate::search_core::{CopyKind, Heading, NodeArena, NodeId, Plan, TimedGraph, VertexId};

pub use open::{OpenEntry, OpenList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Sipp,
    WsippD,
    WsippR,
    Focal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Sipp, Algorithm::WsippD, Algorithm::WsippR, Algorithm::Focal];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sipp => "sipp",
            Algorithm::WsippD => "wsipp-d",
            Algorithm::WsippR => "wsipp-r",
            Algorithm::Focal => "focal",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sipp" => Ok(Algorithm::Sipp),
            "wsipp-d" => Ok(Algorithm::WsippD),
            "wsipp-r" => Ok(Algorithm::WsippR),
            "focal" => Ok(Algorithm::Focal),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// When an expanded node counts as reaching the goal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GoalMode {
    /// Goal vertex in any safe interval.
    #[default]
    AnyInterval,
    /// Goal vertex in its last, unbounded safe interval (the agent can stay).
    Unbounded,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Reopen closed nodes on a strict g improvement (WSIPP_r and focal).
    /// Turning this off is a diagnostic mode.
    pub allow_reexpansion: bool,
    /// Record every expansion in [`Solution::trace`].
    pub trace: bool,
    pub deadline: Option<Instant>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            allow_reexpansion: true,
            trace: false,
            deadline: None,
        }
    }
}

/// One query over a timed graph.
pub struct ProblemInstance<'a, G: TimedGraph + ?Sized> {
    pub graph: &'a G,
    pub start: VertexId,
    pub goal: VertexId,
    /// `None` leaves the first move free of rotation.
    pub start_heading: Option<Heading>,
    pub weight: f64,
    pub algorithm: Algorithm,
    pub heuristic: &'a Heuristic,
    /// Secondary heuristic of focal search. Without it focal search orders
    /// FOCAL by `f` alone.
    pub hops: Option<&'a HopField>,
    pub goal_mode: GoalMode,
    pub options: SearchOptions,
}

impl<G: TimedGraph + ?Sized> Clone for ProblemInstance<'_, G> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<G: TimedGraph + ?Sized> Copy for ProblemInstance<'_, G> {}

impl<'a, G: TimedGraph + ?Sized> ProblemInstance<'a, G> {
    pub fn new(graph: &'a G, start: VertexId, goal: VertexId, heuristic: &'a Heuristic) -> Self {
        ProblemInstance {
            graph,
            start,
            goal,
            start_heading: None,
            weight: 1.0,
            algorithm: Algorithm::Sipp,
            heuristic,
            hops: None,
            goal_mode: GoalMode::default(),
            options: SearchOptions::default(),
        }
    }

    pub fn with_weight(mut self, w: f64) -> Self {
        assert!(w >= 1.0, "suboptimality bound must be >= 1, got {w}");
        self.weight = w;
        self
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_hops(mut self, hops: &'a HopField) -> Self {
        self.hops = Some(hops);
        self
    }

    pub fn with_goal_mode(mut self, mode: GoalMode) -> Self {
        self.goal_mode = mode;
        self
    }

    pub fn with_options(mut self, options: SearchOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_start_heading(mut self, heading: Heading) -> Self {
        self.start_heading = Some(heading);
        self
    }

    pub(crate) fn is_goal(&self, vertex: VertexId, interval: usize) -> bool {
        vertex == self.goal
            && match self.goal_mode {
                GoalMode::AnyInterval => true,
                GoalMode::Unbounded => self.graph.safe_intervals(vertex)[interval].is_unbounded(),
            }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found,
    Failure,
    Timeout,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Found => "found",
            Outcome::Failure => "failure",
            Outcome::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    /// Extractions that passed the staleness and closed checks.
    pub expansions: u64,
    /// Expansions of an identity expanded before. For WSIPP_d: identities
    /// whose optimal and suboptimal copies were both expanded.
    pub reexpansions: u64,
    /// Distinct node identities created.
    pub generated: u64,
    pub open_max: usize,
    pub runtime: Duration,
    /// Focal extractions with `g + h > w·f_min`; always zero.
    pub focal_violations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionRecord {
    pub vertex: VertexId,
    pub interval: usize,
    pub heading: Option<Heading>,
    pub copy: CopyKind,
    pub g: Time,
    pub h: Time,
    /// The key the node was extracted by: the OPEN priority, or `g + h` for
    /// focal search.
    pub priority: Time,
    /// Smallest `g + h` in OPEN at extraction time (focal search only).
    pub f_min: Option<Time>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub outcome: Outcome,
    pub plan: Option<Plan>,
    pub cost: Option<Time>,
    pub stats: Stats,
    pub trace: Vec<ExpansionRecord>,
}

impl Solution {
    pub fn is_found(&self) -> bool {
        self.outcome == Outcome::Found
    }
}

/// Runs the algorithm selected by `p.algorithm`.
pub fn solve<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Solution {
    match p.algorithm {
        Algorithm::Sipp => plan_sipp(p),
        Algorithm::WsippD => plan_wsipp_d(p),
        Algorithm::WsippR => plan_wsipp_r(p),
        Algorithm::Focal => plan_focal(p),
    }
}

/// Optimal SIPP: A* by `g + h` over (vertex, safe interval) states. `p.weight`
/// is ignored.
pub fn plan_sipp<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Solution {
    best_first::run(p, best_first::Scheme::Weighted { weight: 1.0 })
}

/// Weighted SIPP with duplicate states: optimal copies keyed by `w·(g + h)`,
/// suboptimal copies by `g + w·h`, no copy ever expanded twice.
pub fn plan_wsipp_d<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Solution {
    best_first::run(p, best_first::Scheme::Duplicate { weight: p.weight })
}

/// Weighted SIPP with re-expansions: `g + w·h`, closed nodes reopened on
/// improvement.
pub fn plan_wsipp_r<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Solution {
    best_first::run(p, best_first::Scheme::Weighted { weight: p.weight })
}

/// Focal search over the SIPP space.
pub fn plan_focal<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Solution {
    focal::run(p)
}

pub(crate) fn start_interval<G: TimedGraph + ?Sized>(p: &ProblemInstance<'_, G>) -> Option<usize> {
    let ivs = p.graph.safe_intervals(p.start);
    ivs.iter().position(|iv| iv.contains(0.0))
}

pub(crate) fn finish(
    outcome: Outcome,
    arena: &NodeArena,
    goal: Option<NodeId>,
    mut stats: Stats,
    trace: Vec<ExpansionRecord>,
    started: Instant,
) -> Solution {
    let plan = goal.map(|g| crate::search_core::reconstruct_plan(arena, g).expect("planner parent chains are acyclic"));
    stats.runtime = started.elapsed();
    Solution {
        outcome,
        cost: plan.as_ref().map(|p| p.cost),
        plan,
        stats,
        trace,
    }
}

#[cfg(test)]
mod tests;
