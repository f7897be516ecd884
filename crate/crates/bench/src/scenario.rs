use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sipp_core::{CellIndex, Connectivity, GridMap, HopField};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("no two mutually reachable passable cells")]
    InsufficientCells,
}

/// `count` random start/goal pairs with `start != goal` and the goal
/// statically reachable from the start under `conn`.
pub fn generate_scenario(map: &GridMap, count: usize, seed: u64, conn: Connectivity) -> Result<Vec<(CellIndex, CellIndex)>, ScenarioError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // Label static components; the neighbour relation is symmetric.
    let mut component = vec![usize::MAX; map.num_cells()];
    let mut members: Vec<Vec<CellIndex>> = Vec::new();
    for cell in map.passable_cells() {
        if component[map.index_of(cell)] != usize::MAX {
            continue;
        }
        let hops = HopField::build(map, cell, conn);
        let id = members.len();
        let cells: Vec<CellIndex> = map
            .passable_cells()
            .into_iter()
            .filter(|&c| hops.hops(map.index_of(c)) != HopField::UNREACHABLE)
            .collect();
        for &c in &cells {
            component[map.index_of(c)] = id;
        }
        members.push(cells);
    }
    let candidates: Vec<CellIndex> = map
        .passable_cells()
        .into_iter()
        .filter(|&c| members[component[map.index_of(c)]].len() >= 2)
        .collect();
    if candidates.is_empty() {
        return Err(ScenarioError::InsufficientCells);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..count)
        .map(|_| {
            let start = candidates[rng.gen_range(0..candidates.len())];
            let pool = &members[component[map.index_of(start)]];
            loop {
                let goal = pool[rng.gen_range(0..pool.len())];
                if goal != start {
                    break (start, goal);
                }
            }
        })
        .collect();
    Ok(pairs)
}
