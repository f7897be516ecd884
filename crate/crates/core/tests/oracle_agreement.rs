use sipp_core::heuristics::Heuristic;
use sipp_core::oracle::{brute_force_optimal, validate_plan, OracleOutcome, RandomWorld};
use sipp_core::planners::{plan_sipp, ProblemInstance};

const WORLD: RandomWorld = RandomWorld {
    width: 8,
    height: 8,
    wall_probability: 0.2,
    obstacles: 6,
    obstacle_horizon: 24.0,
};

#[test]
fn sipp_matches_time_expanded_search() {
    let mut found = 0;
    for seed in 0..300 {
        let inst = WORLD.discrete(seed);
        let oracle = brute_force_optimal(&inst);
        assert_ne!(oracle, OracleOutcome::HorizonExhausted, "seed {seed}");
        let graph = inst.to_grid_graph();
        let h = Heuristic::euclidean(&inst.map, inst.goal, 1.0);
        let (s, g) = (graph.vertex_of(inst.start), graph.vertex_of(inst.goal));
        let sol = plan_sipp(&ProblemInstance::new(&graph, s, g, &h));
        assert_eq!(sol.cost, oracle.cost().map(|c| c as f64), "seed {seed}: oracle says {oracle:?}");
        if let Some(plan) = &sol.plan {
            validate_plan(&graph, plan, s, g).unwrap();
            found += 1;
        }
    }
    assert!(found > 150, "only {found} solvable instances");
}

#[test]
fn default_horizon_is_reported_separately() {
    let mut inst = WORLD.discrete(7);
    inst.horizon = 0;
    let out = brute_force_optimal(&inst);
    assert!(matches!(out, OracleOutcome::HorizonExhausted | OracleOutcome::StaticallyUnreachable | OracleOutcome::NoPlan | OracleOutcome::Optimal(0)));
}
