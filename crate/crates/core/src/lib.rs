//! Safe-interval path planning (SIPP) over timed graphs and grid worlds with
//! dynamic obstacles, with three bounded-suboptimal variants:
//!
//! * WSIPP_d: weighted SIPP with optimal/suboptimal duplicate states,
//! * WSIPP_r: weighted SIPP that reopens closed states,
//! * Focal SIPP: focal search using a static hop-count secondary heuristic.
//!
//! [`oracle`] holds independent ground truth (a time-expanded brute-force
//! search and a plan validator) used by the test suites.

pub mod dyn_obstacles;
pub mod grid;
pub mod heuristics;
pub mod interval;
pub mod oracle;
pub mod planners;
pub mod search_core;

pub use grid::{CellIndex, Connectivity, GridMap};
pub use heuristics::{Heuristic, HopField};
pub use interval::{Interval, Time};
pub use planners::{solve, Algorithm, GoalMode, Outcome, ProblemInstance, SearchOptions, Solution, Stats};
pub use search_core::{GridGraph, Plan, TimedGraph, VertexId};
