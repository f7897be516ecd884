//! Built-in map generators for the desk-scale presets.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sipp_core::GridMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Empty,
    /// Four rectangular shelf blocks.
    Warehouse,
    /// 8×8 rooms separated by one-cell walls with a door in every wall.
    Rooms,
}

impl MapKind {
    pub fn name(self) -> &'static str {
        match self {
            MapKind::Empty => "empty",
            MapKind::Warehouse => "warehouse",
            MapKind::Rooms => "rooms",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "empty" => Ok(MapKind::Empty),
            "warehouse" => Ok(MapKind::Warehouse),
            "rooms" => Ok(MapKind::Rooms),
            other => Err(format!("unknown map kind `{other}`")),
        }
    }
}

pub const ROOM_SIZE: usize = 8;

pub fn generate_map(kind: MapKind, size: usize, seed: u64) -> GridMap {
    match kind {
        MapKind::Empty => GridMap::empty(size, size),
        MapKind::Warehouse => warehouse(size),
        MapKind::Rooms => rooms(size, seed),
    }
}

/// A 2×2 arrangement of blocks, each half a quadrant wide and tall, leaving
/// aisles around and between them.
fn warehouse(size: usize) -> GridMap {
    let mut blocked = vec![false; size * size];
    let quadrant = size / 2;
    let (bw, bh) = (quadrant / 2, quadrant / 2);
    for qr in 0..2 {
        for qc in 0..2 {
            let r0 = qr * quadrant + (quadrant - bh) / 2;
            let c0 = qc * quadrant + (quadrant - bw) / 2;
            for r in r0..r0 + bh {
                for c in c0..c0 + bw {
                    blocked[r * size + c] = true;
                }
            }
        }
    }
    GridMap::new(size, size, blocked)
}

/// Rooms of `ROOM_SIZE` free cells between walls; every wall segment between
/// two rooms has one door at a seeded position.
fn rooms(size: usize, seed: u64) -> GridMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pitch = ROOM_SIZE + 1;
    let is_wall = |i: usize| i % pitch == ROOM_SIZE && i + 1 < size;
    let mut blocked = vec![false; size * size];
    for r in 0..size {
        for c in 0..size {
            blocked[r * size + c] = is_wall(r) || is_wall(c);
        }
    }
    // Doors in vertical walls (between horizontally adjacent rooms), then in
    // horizontal walls.
    for wall in (0..size).filter(|&i| is_wall(i)) {
        for room in (0..size).step_by(pitch) {
            let span = ROOM_SIZE.min(size - room);
            let door = room + rng.gen_range(0..span);
            blocked[door * size + wall] = false;
            let door = room + rng.gen_range(0..span);
            blocked[wall * size + door] = false;
        }
    }
    GridMap::new(size, size, blocked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sipp_core::{CellIndex, Connectivity, HopField};

    fn connected(map: &GridMap) -> bool {
        let cells = map.passable_cells();
        let hops = HopField::build(map, cells[0], Connectivity::Four);
        cells.iter().all(|&c| hops.hops(map.index_of(c)) != HopField::UNREACHABLE)
    }

    #[test]
    fn warehouse_has_four_blocks() {
        let m = generate_map(MapKind::Warehouse, 32, 0);
        assert_eq!(m.blocked_count(), 4 * 8 * 8);
        assert!(m.is_blocked(CellIndex::new(4, 4)));
        assert!(m.is_passable(CellIndex::new(0, 0)));
        assert!(connected(&m));
    }

    #[test]
    fn rooms_are_connected() {
        for seed in 0..10 {
            for size in [16, 32, 33, 40] {
                let m = generate_map(MapKind::Rooms, size, seed);
                assert!(connected(&m), "size {size} seed {seed}");
                assert!(m.is_blocked(CellIndex::new(8, 3)) || m.is_blocked(CellIndex::new(3, 8)) || size < 9);
            }
        }
    }

    #[test]
    fn rooms_depend_on_seed() {
        let a = generate_map(MapKind::Rooms, 32, 1);
        assert_eq!(a, generate_map(MapKind::Rooms, 32, 1));
        assert_ne!(a, generate_map(MapKind::Rooms, 32, 2));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [MapKind::Empty, MapKind::Warehouse, MapKind::Rooms] {
            assert_eq!(k.name().parse::<MapKind>().unwrap(), k);
        }
    }
}
