use super::*;
use crate::dyn_obstacles::SafeIntervalTable;
use crate::grid::{CellIndex, Connectivity, GridMap};
use crate::interval::Interval;
use crate::oracle::validate_plan;
use crate::search_core::{figure1_graph, ExplicitGraph, GridGraph};

fn traced() -> SearchOptions {
    SearchOptions {
        trace: true,
        ..SearchOptions::default()
    }
}

/// `(vertex name, copy, priority)` per expansion.
fn trace_of(g: &ExplicitGraph, sol: &Solution) -> Vec<(String, CopyKind, f64)> {
    sol.trace
        .iter()
        .map(|r| (g.name(r.vertex).to_string(), r.copy, (r.priority * 10.0).round() / 10.0))
        .collect()
}

fn figure1(algorithm: Algorithm, w: f64, options: SearchOptions) -> (ExplicitGraph, Solution) {
    let g = figure1_graph();
    let hops = HopField::from_graph(&g, g.vertex("Goal").unwrap());
    let sol = {
        let p = ProblemInstance::new(&g, g.vertex("Start").unwrap(), g.vertex("Goal").unwrap(), g.heuristic())
            .with_weight(w)
            .with_algorithm(algorithm)
            .with_hops(&hops)
            .with_options(options);
        let sol = solve(&p);
        if let Some(plan) = &sol.plan {
            validate_plan(&g, plan, p.start, p.goal).unwrap();
        }
        sol
    };
    (g, sol)
}

#[test]
fn figure1_sipp_is_optimal() {
    let (g, sol) = figure1(Algorithm::Sipp, 1.0, traced());
    assert_eq!(sol.cost, Some(13.0));
    let names: Vec<_> = trace_of(&g, &sol).into_iter().map(|t| t.0).collect();
    assert_eq!(names, ["Start", "E", "D", "C", "B", "Goal"]);
    assert_eq!(sol.plan.unwrap().vertices(g.vertex("Start").unwrap()).len(), 5);
}

#[test]
fn figure1_wsipp_d_trace() {
    use CopyKind::{Optimal as O, Suboptimal as S};
    let (g, sol) = figure1(Algorithm::WsippD, 1.1, traced());
    assert_eq!(sol.cost, Some(13.0));
    let expected = [
        ("Start", O, 12.1),
        ("E", S, 11.7),
        ("D", S, 11.8),
        ("C", S, 11.5),
        ("E", O, 12.1),
        ("D", O, 12.1),
        ("C", O, 12.1),
        ("B", S, 13.4),
        ("Goal", S, 13.0),
    ];
    let got = trace_of(&g, &sol);
    let expected: Vec<_> = expected.iter().map(|&(n, c, p)| (n.to_string(), c, p)).collect();
    assert_eq!(got, expected);
    assert_eq!(sol.stats.expansions, 9);
    assert_eq!(sol.stats.reexpansions, 3);
}

#[test]
fn figure1_wsipp_r_trace() {
    let (g, sol) = figure1(Algorithm::WsippR, 1.1, traced());
    assert_eq!(sol.cost, Some(13.0));
    let names: Vec<_> = trace_of(&g, &sol).into_iter().map(|t| t.0).collect();
    assert_eq!(names, ["Start", "E", "D", "C", "B", "Goal"]);
    assert_eq!(sol.stats.expansions, 6);
    assert_eq!(sol.stats.reexpansions, 0);
}

#[test]
fn figure1_focal() {
    let (g, sol) = figure1(Algorithm::Focal, 1.1, traced());
    assert_eq!(sol.cost, Some(13.0));
    let names: Vec<_> = trace_of(&g, &sol).into_iter().map(|t| t.0).collect();
    assert_eq!(names, ["Start", "E", "D", "C", "B", "Goal"]);
    assert_eq!(sol.stats.focal_violations, 0);
    for r in &sol.trace {
        assert!(r.g + r.h <= 1.1 * r.f_min.unwrap() + 1e-9);
    }
}

#[test]
fn figure1_weight_two_needs_reexpansion() {
    let off = SearchOptions {
        allow_reexpansion: false,
        ..SearchOptions::default()
    };
    let (_, sol) = figure1(Algorithm::WsippR, 2.0, off);
    assert_eq!(sol.outcome, Outcome::Failure);

    let (_, sol) = figure1(Algorithm::WsippR, 2.0, SearchOptions::default());
    assert_eq!(sol.cost, Some(13.0));
    assert!(sol.stats.reexpansions >= 1);

    let (_, sol) = figure1(Algorithm::WsippD, 2.0, SearchOptions::default());
    assert_eq!(sol.cost, Some(13.0));
    let (_, sol) = figure1(Algorithm::Focal, 2.0, SearchOptions::default());
    assert_eq!(sol.cost, Some(13.0));
}

#[test]
fn start_equals_goal() {
    let g = figure1_graph();
    let c = g.vertex("C").unwrap();
    for alg in Algorithm::ALL {
        let p = ProblemInstance::new(&g, c, c, g.heuristic()).with_algorithm(alg).with_weight(1.5);
        let sol = solve(&p);
        assert_eq!(sol.cost, Some(0.0), "{alg}");
        assert_eq!(sol.stats.expansions, 1, "{alg}");
        assert!(sol.plan.unwrap().actions.is_empty());
    }
}

#[test]
fn start_not_safe_at_time_zero() {
    let g = ExplicitGraph::builder(&["s", "t"])
        .edge("s", "t", 1.0)
        .safe("s", vec![Interval::new(2.0, f64::INFINITY)])
        .build();
    for alg in Algorithm::ALL {
        let sol = solve(&ProblemInstance::new(&g, 0, 1, g.heuristic()).with_algorithm(alg));
        assert_eq!(sol.outcome, Outcome::Failure, "{alg}");
        assert_eq!(sol.stats.expansions, 0);
    }
}

#[test]
fn unreachable_goal_fails() {
    let g = figure1_graph();
    let a = g.vertex("A").unwrap();
    for alg in Algorithm::ALL {
        let p = ProblemInstance::new(&g, g.vertex("Start").unwrap(), a, g.heuristic()).with_algorithm(alg);
        assert_eq!(solve(&p).outcome, Outcome::Failure, "{alg}");
    }
}

#[test]
fn goal_mode_unbounded_requires_staying() {
    // The goal is free over [0, 3] and from 8 on; arriving at 1 only counts
    // under AnyInterval.
    let g = ExplicitGraph::builder(&["s", "t"])
        .edge("s", "t", 1.0)
        .safe("t", vec![Interval::new(0.0, 3.0), Interval::new(8.0, f64::INFINITY)])
        .build();
    let p = ProblemInstance::new(&g, 0, 1, g.heuristic());
    assert_eq!(plan_sipp(&p).cost, Some(1.0));
    let sol = plan_sipp(&p.with_goal_mode(GoalMode::Unbounded));
    assert_eq!(sol.cost, Some(8.0));
    validate_plan(&g, sol.plan.as_ref().unwrap(), 0, 1).unwrap();
}

#[test]
fn deadline_in_the_past_times_out() {
    let map = GridMap::empty(40, 40);
    let graph = GridGraph::new(map.clone(), Connectivity::Eight, 1.0, SafeIntervalTable::unconstrained(map.num_cells()), None);
    let goal = CellIndex::new(39, 39);
    let h = Heuristic::zero(map.num_cells());
    let options = SearchOptions {
        deadline: Some(Instant::now()),
        ..SearchOptions::default()
    };
    let p = ProblemInstance::new(&graph, 0, graph.vertex_of(goal), &h).with_options(options);
    for alg in Algorithm::ALL {
        assert_eq!(solve(&p.with_algorithm(alg)).outcome, Outcome::Timeout, "{alg}");
    }
}

fn open_grid(size: usize, conn: Connectivity) -> GridGraph {
    let map = GridMap::empty(size, size);
    let n = map.num_cells();
    GridGraph::new(map, conn, 1.0, SafeIntervalTable::unconstrained(n), None)
}

#[test]
fn all_algorithms_agree_at_weight_one() {
    let graph = open_grid(8, Connectivity::Sixteen);
    let goal = CellIndex::new(7, 5);
    let h = Heuristic::euclidean(graph.map(), goal, 1.0);
    let hops = HopField::build(graph.map(), goal, Connectivity::Sixteen);
    let p = ProblemInstance::new(&graph, 0, graph.vertex_of(goal), &h).with_hops(&hops);
    let costs: Vec<f64> = Algorithm::ALL.iter().map(|&a| solve(&p.with_algorithm(a)).cost.unwrap()).collect();
    assert!(costs.iter().all(|&c| approx_eq(c, costs[0])), "{costs:?}");
}

#[test]
fn focal_large_weight_stays_bounded() {
    let graph = open_grid(8, Connectivity::Eight);
    let goal = CellIndex::new(7, 7);
    let h = Heuristic::euclidean(graph.map(), goal, 1.0);
    let hops = HopField::build(graph.map(), goal, Connectivity::Eight);
    let p = ProblemInstance::new(&graph, 0, graph.vertex_of(goal), &h)
        .with_hops(&hops)
        .with_weight(10.0)
        .with_algorithm(Algorithm::Focal);
    let sol = solve(&p);
    let cost = sol.cost.unwrap();
    assert!(cost <= 10.0 * 7.0 * 2f64.sqrt() + 1e-9);
    // The hop field drives straight down the diagonal.
    assert!(approx_eq(cost, 7.0 * 2f64.sqrt()));
    assert_eq!(sol.stats.expansions, 8);
    assert_eq!(sol.stats.focal_violations, 0);
}

#[test]
fn sipp_extracts_nondecreasing_f() {
    let map: GridMap = "type octile\nheight 6\nwidth 6\nmap\n......\n.@@@@.\n....@.\n.@..@.\n.@....\n......\n"
        .parse()
        .unwrap();
    let mut occ = vec![Vec::new(); map.num_cells()];
    occ[map.index_of(CellIndex::new(4, 3))] = vec![Interval::new(2.0, 9.0)];
    occ[map.index_of(CellIndex::new(0, 5))] = vec![Interval::new(0.0, 4.5)];
    let graph = GridGraph::new(map.clone(), Connectivity::Sixteen, 1.0, SafeIntervalTable::from_occupation(occ), None);
    let goal = CellIndex::new(2, 5);
    let h = Heuristic::euclidean(&map, goal, 1.0);
    let p = ProblemInstance::new(&graph, 0, graph.vertex_of(goal), &h).with_options(traced());
    let sol = plan_sipp(&p);
    assert!(sol.is_found());
    for pair in sol.trace.windows(2) {
        assert!(pair[0].priority <= pair[1].priority + 1e-9, "{pair:?}");
    }
    validate_plan(&graph, sol.plan.as_ref().unwrap(), p.start, p.goal).unwrap();
}

#[test]
fn rotation_adds_turn_time() {
    let map = GridMap::empty(3, 3);
    let n = map.num_cells();
    let graph = GridGraph::new(map.clone(), Connectivity::Four, 1.0, SafeIntervalTable::unconstrained(n), Some(std::f64::consts::FRAC_PI_2));
    let goal = CellIndex::new(2, 2);
    let h = Heuristic::euclidean(&map, goal, 1.0);
    let sol = plan_sipp(&ProblemInstance::new(&graph, 0, graph.vertex_of(goal), &h));
    // Four moves and one quarter turn.
    assert_eq!(sol.cost, Some(5.0));
    validate_plan(&graph, sol.plan.as_ref().unwrap(), 0, graph.vertex_of(goal)).unwrap();
}

#[test]
fn algorithm_names_round_trip() {
    for a in Algorithm::ALL {
        assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
    }
    assert!("astar".parse::<Algorithm>().is_err());
}

fn approx_eq(a: f64, b: f64) -> bool {
    crate::interval::approx_eq(a, b)
}
