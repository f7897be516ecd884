use std::time::Duration;

use sipp_bench::{run_experiment, ExperimentConfig, MapKind, MapSource, ReportFormat};
use sipp_core::{Algorithm, Connectivity};

fn small(kind: MapKind) -> ExperimentConfig {
    ExperimentConfig {
        map: MapSource::Generated { kind, size: 20 },
        obstacles: 15,
        queries: 8,
        seed: 5,
        weights: vec![1.1, 2.0],
        repeats: 1,
        ..ExperimentConfig::default()
    }
}

#[test]
fn sipp_only_ratios_are_one() {
    let cfg = ExperimentConfig {
        algorithms: vec![Algorithm::Sipp],
        ..small(MapKind::Warehouse)
    };
    let report = run_experiment(&cfg).unwrap();
    assert!(!report.rows.is_empty());
    assert!(report.rows.iter().all(|r| r.cost_ratio == Some(1.0) && r.runtime_ratio == Some(1.0)));
    assert_eq!(report.rows.len() + 2 * report.unsolvable.len(), 8 * 2);
}

#[test]
fn every_row_respects_the_bound() {
    for kind in [MapKind::Empty, MapKind::Warehouse, MapKind::Rooms] {
        for (conn, rotations) in [(Connectivity::Eight, false), (Connectivity::Sixteen, true), (Connectivity::ThirtyTwo, false)] {
            let cfg = ExperimentConfig {
                connectivity: conn,
                rotations,
                ..small(kind)
            };
            let report = run_experiment(&cfg).unwrap();
            for r in &report.rows {
                assert_eq!(r.outcome, "found", "{r:?}");
                let ratio = r.cost_ratio.unwrap();
                assert!(ratio >= 1.0 - 1e-9 && ratio <= r.w + 1e-9, "{r:?}");
            }
        }
    }
}

#[test]
fn reruns_are_deterministic() {
    let cfg = small(MapKind::Rooms);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(a.rows.len(), b.rows.len());
    assert_eq!(a.unsolvable, b.unsolvable);
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!((x.query, x.algorithm, x.w.to_bits()), (y.query, y.algorithm, y.w.to_bits()));
        assert_eq!(x.cost.map(f64::to_bits), y.cost.map(f64::to_bits));
        assert_eq!((x.expansions, x.reexpansions, x.generated), (y.expansions, y.reexpansions, y.generated));
    }
}

#[test]
fn tiny_time_limit_records_timeouts() {
    let cfg = ExperimentConfig {
        map: MapSource::Generated {
            kind: MapKind::Empty,
            size: 64,
        },
        obstacles: 0,
        queries: 3,
        time_limit: Duration::ZERO,
        ..small(MapKind::Empty)
    };
    let report = run_experiment(&cfg).unwrap();
    assert!(report.rows.is_empty());
    assert_eq!(report.unsolvable.len(), 3);
    assert!(report.unsolvable.iter().all(|u| u.reason == "timeout"));
    assert!(report.summary().is_empty());
}

#[test]
fn bad_inputs_are_errors() {
    let missing = ExperimentConfig {
        map: MapSource::File("/nonexistent/map.map".into()),
        ..ExperimentConfig::default()
    };
    assert!(run_experiment(&missing).is_err());
    let weights = ExperimentConfig {
        weights: vec![0.5],
        ..small(MapKind::Empty)
    };
    assert!(run_experiment(&weights).is_err());
    let dir = tempfile::tempdir().unwrap();
    let obstacles = dir.path().join("bad.txt");
    std::fs::write(&obstacles, "0 0 zero 1\n").unwrap();
    let bad_obstacles = ExperimentConfig {
        obstacle_file: Some(obstacles),
        ..small(MapKind::Empty)
    };
    assert!(run_experiment(&bad_obstacles).is_err());
    assert_eq!(ExperimentConfig::default().format, ReportFormat::Csv);
}
