//! Benchmark harness for the `sipp-core` planners: map and query
//! generation, experiment sweeps relative to the SIPP baseline, and
//! CSV/JSON reports.

pub mod experiment;
pub mod maps;
pub mod report;
pub mod scenario;

pub use experiment::{build_workload, run_experiment, run_workload, ExperimentConfig, MapSource, ReportFormat, Workload};
pub use maps::{generate_map, MapKind};
pub use report::{emit_report, read_json_report, Row, RunReport, SummaryRow, Unsolvable};
pub use scenario::{generate_scenario, ScenarioError};
