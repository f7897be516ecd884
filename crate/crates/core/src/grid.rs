//! Static grid worlds: movingai map parsing, 2^k move sets and swept cells.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A grid cell, `(row, col)` with row 0 at the top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub row: i32,
    pub col: i32,
}

impl CellIndex {
    pub const fn new(row: i32, col: i32) -> Self {
        CellIndex { row, col }
    }

    pub fn offset(self, dr: i32, dc: i32) -> Self {
        CellIndex::new(self.row + dr, self.col + dc)
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("offset ({0}, {1}) is not a move of any supported connectivity")]
    UnsupportedOffset(i32, i32),
    #[error("unsupported connectivity {0} (expected 4, 8, 16 or 32)")]
    UnsupportedConnectivity(u32),
}

/// Immutable occupancy grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    blocked: Vec<bool>,
}

impl GridMap {
    /// `blocked` is row-major, `width * height` long.
    pub fn new(width: usize, height: usize, blocked: Vec<bool>) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        assert_eq!(blocked.len(), width * height, "cell count mismatch");
        GridMap {
            width,
            height,
            blocked,
        }
    }

    pub fn empty(width: usize, height: usize) -> Self {
        GridMap::new(width, height, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_cells(&self) -> usize {
        self.blocked.len()
    }

    pub fn in_bounds(&self, c: CellIndex) -> bool {
        c.row >= 0 && c.col >= 0 && (c.row as usize) < self.height && (c.col as usize) < self.width
    }

    /// Out-of-bounds cells count as blocked.
    pub fn is_blocked(&self, c: CellIndex) -> bool {
        !self.in_bounds(c) || self.blocked[self.index_of(c)]
    }

    pub fn is_passable(&self, c: CellIndex) -> bool {
        !self.is_blocked(c)
    }

    pub fn index_of(&self, c: CellIndex) -> usize {
        debug_assert!(self.in_bounds(c));
        c.row as usize * self.width + c.col as usize
    }

    pub fn cell_at(&self, index: usize) -> CellIndex {
        CellIndex::new((index / self.width) as i32, (index % self.width) as i32)
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|b| **b).count()
    }

    pub fn passable_cells(&self) -> Vec<CellIndex> {
        (0..self.num_cells())
            .filter(|&i| !self.blocked[i])
            .map(|i| self.cell_at(i))
            .collect()
    }

    /// Serializes to the movingai `.map` format.
    pub fn to_movingai(&self) -> String {
        let mut out = format!(
            "type octile\nheight {}\nwidth {}\nmap\n",
            self.height, self.width
        );
        for row in 0..self.height {
            for col in 0..self.width {
                out.push(if self.blocked[row * self.width + col] { '@' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

impl FromStr for GridMap {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_map(s)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> GridError {
    GridError::Parse {
        line,
        message: message.into(),
    }
}

fn header_value(line_no: usize, line: Option<&str>, key: &str) -> Result<usize, GridError> {
    let line = line.ok_or_else(|| parse_err(line_no, format!("missing `{key}` header")))?;
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| parse_err(line_no, format!("invalid {key} `{v}`"))),
        _ => Err(parse_err(line_no, format!("expected `{key} <N>`, found `{line}`"))),
    }
}

/// Parses a movingai `.map` file. `.` and `G` are passable, every other glyph
/// is blocked. Accepts LF and CRLF line endings.
pub fn parse_map(text: &str) -> Result<GridMap, GridError> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));

    match lines.next() {
        Some(l) if l.split_whitespace().collect::<Vec<_>>() == ["type", "octile"] => {}
        Some(l) => return Err(parse_err(1, format!("expected `type octile`, found `{l}`"))),
        None => return Err(parse_err(1, "empty input")),
    }
    let height = header_value(2, lines.next(), "height")?;
    let width = header_value(3, lines.next(), "width")?;
    match lines.next() {
        Some(l) if l.trim() == "map" => {}
        Some(l) => return Err(parse_err(4, format!("expected `map`, found `{l}`"))),
        None => return Err(parse_err(4, "missing `map` line")),
    }

    let mut blocked = Vec::with_capacity(width * height);
    for row in 0..height {
        let line_no = 5 + row;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(line_no, format!("expected {height} map rows, found {row}")))?;
        let glyphs: Vec<char> = line.chars().collect();
        if glyphs.len() != width {
            return Err(parse_err(
                line_no,
                format!("row has {} glyphs, expected {width}", glyphs.len()),
            ));
        }
        blocked.extend(glyphs.iter().map(|g| !matches!(g, '.' | 'G')));
    }
    for (i, rest) in lines.enumerate() {
        if !rest.trim().is_empty() {
            return Err(parse_err(5 + height + i, "unexpected content after map rows"));
        }
    }
    Ok(GridMap::new(width, height, blocked))
}

const MOVES_4: [(i32, i32); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

const MOVES_8: [(i32, i32); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];

const MOVES_16_EXTRA: [(i32, i32); 8] = [
    (-1, 2),
    (-2, 1),
    (1, 2),
    (2, 1),
    (-1, -2),
    (-2, -1),
    (1, -2),
    (2, -1),
];

const MOVES_32_EXTRA: [(i32, i32); 16] = [
    (-1, 3),
    (-3, 1),
    (1, 3),
    (3, 1),
    (-1, -3),
    (-3, -1),
    (1, -3),
    (3, -1),
    (-2, 3),
    (-3, 2),
    (2, 3),
    (3, 2),
    (-2, -3),
    (-3, -2),
    (2, -3),
    (3, -2),
];

/// Grid move set. `Four` only backs the discrete verification instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connectivity {
    Four,
    Eight,
    Sixteen,
    ThirtyTwo,
}

impl Connectivity {
    pub fn from_k(k: u32) -> Result<Self, GridError> {
        match k {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            16 => Ok(Connectivity::Sixteen),
            32 => Ok(Connectivity::ThirtyTwo),
            other => Err(GridError::UnsupportedConnectivity(other)),
        }
    }

    pub fn k(self) -> u32 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
            Connectivity::Sixteen => 16,
            Connectivity::ThirtyTwo => 32,
        }
    }

    /// Move offsets `(d_row, d_col)`; the index of an offset is its heading id.
    pub fn offsets(self) -> Vec<(i32, i32)> {
        match self {
            Connectivity::Four => MOVES_4.to_vec(),
            Connectivity::Eight => MOVES_8.to_vec(),
            Connectivity::Sixteen => MOVES_8.iter().chain(&MOVES_16_EXTRA).copied().collect(),
            Connectivity::ThirtyTwo => MOVES_8
                .iter()
                .chain(&MOVES_16_EXTRA)
                .chain(&MOVES_32_EXTRA)
                .copied()
                .collect(),
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k())
    }
}

fn is_supported_offset(dr: i32, dc: i32) -> bool {
    let (a, b) = (dr.abs(), dc.abs());
    let (lo, hi) = (a.min(b), a.max(b));
    matches!((lo, hi), (0, 1) | (1, 1) | (1, 2) | (1, 3) | (2, 3))
}

pub fn move_length(dr: i32, dc: i32) -> f64 {
    ((dr * dr + dc * dc) as f64).sqrt()
}

/// Cells strictly between `from` and `to` whose interior the segment between
/// the two cell centers crosses. Cells touched only at a corner are excluded.
pub fn traversal_cells(from: CellIndex, to: CellIndex) -> Result<Vec<CellIndex>, GridError> {
    let (dr, dc) = (to.row - from.row, to.col - from.col);
    if !is_supported_offset(dr, dc) {
        return Err(GridError::UnsupportedOffset(dr, dc));
    }
    let (ar, ac) = (dr.abs() as i64, dc.abs() as i64);
    let (sr, sc) = (dr.signum(), dc.signum());
    // With the segment parameterised over [0, 2·ar·ac], row boundary k is
    // crossed at (2k-1)·ac and column boundary k at (2k-1)·ar.
    let mut cells = Vec::new();
    let (mut kr, mut kc) = (1i64, 1i64);
    let mut cur = from;
    loop {
        let next_r = if kr <= ar { Some((2 * kr - 1) * ac) } else { None };
        let next_c = if kc <= ac { Some((2 * kc - 1) * ar) } else { None };
        match (next_r, next_c) {
            (None, None) => break,
            (Some(r), Some(c)) if r == c => {
                cur = cur.offset(sr, sc);
                kr += 1;
                kc += 1;
            }
            (Some(r), c) if c.is_none_or(|c| r < c) => {
                cur = cur.offset(sr, 0);
                kr += 1;
            }
            _ => {
                cur = cur.offset(0, sc);
                kc += 1;
            }
        }
        if cur != to {
            cells.push(cur);
        }
    }
    debug_assert_eq!(cur, to);
    Ok(cells)
}

/// One legal move out of a cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMove {
    pub target: CellIndex,
    pub cost: f64,
    /// Index into [`Connectivity::offsets`].
    pub direction: u8,
}

/// Legal moves from `cell`: in-bounds, unblocked targets whose swept cells are
/// all unblocked. Cost is the Euclidean offset length divided by `speed`.
pub fn neighbors(map: &GridMap, cell: CellIndex, conn: Connectivity, speed: f64) -> Vec<GridMove> {
    debug_assert!(speed > 0.0);
    let mut out = Vec::with_capacity(conn.k() as usize);
    for (dir, (dr, dc)) in conn.offsets().into_iter().enumerate() {
        let target = cell.offset(dr, dc);
        if map.is_blocked(target) {
            continue;
        }
        let swept = traversal_cells(cell, target).expect("connectivity offsets are supported");
        if swept.iter().any(|c| map.is_blocked(*c)) {
            continue;
        }
        out.push(GridMove {
            target,
            cost: move_length(dr, dc) / speed,
            direction: dir as u8,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(r: i32, col: i32) -> CellIndex {
        CellIndex::new(r, col)
    }

    #[test]
    fn parses_minimal_map() {
        let m = parse_map("type octile\nheight 2\nwidth 2\nmap\n.@\n..").unwrap();
        assert_eq!((m.width(), m.height()), (2, 2));
        assert!(m.is_blocked(c(0, 1)));
        assert_eq!(m.blocked_count(), 1);
    }

    #[test]
    fn parses_crlf_and_glyph_policy() {
        let m = parse_map("type octile\r\nheight 1\r\nwidth 7\r\nmap\r\n.G@OTWS\r\n").unwrap();
        let passable: Vec<bool> = (0..7).map(|col| m.is_passable(c(0, col))).collect();
        assert_eq!(passable, [true, true, false, false, false, false, false]);
    }

    #[test]
    fn empty_64_map() {
        let mut text = String::from("type octile\nheight 64\nwidth 64\nmap\n");
        for _ in 0..64 {
            text.push_str(&".".repeat(64));
            text.push('\n');
        }
        let m = parse_map(&text).unwrap();
        assert_eq!(m.blocked_count(), 0);
        assert_eq!(m.num_cells(), 4096);
        assert_eq!(parse_map(&m.to_movingai()).unwrap(), m);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_map("type octile\nheight 3\nwidth 2\nmap\n..\n..\n").unwrap_err();
        assert!(matches!(err, GridError::Parse { line: 7, .. }), "{err}");
        let err = parse_map("type octile\nheight 1\nwidth 3\nmap\n..\n").unwrap_err();
        assert!(matches!(err, GridError::Parse { line: 5, .. }), "{err}");
        let err = parse_map("type octile\nheight x\nwidth 3\nmap\n").unwrap_err();
        assert!(matches!(err, GridError::Parse { line: 2, .. }), "{err}");
        let err = parse_map("type tile\n").unwrap_err();
        assert!(matches!(err, GridError::Parse { line: 1, .. }), "{err}");
        let err = parse_map("type octile\nheight 1\nwidth 1\nmap\n.\n.\n").unwrap_err();
        assert!(matches!(err, GridError::Parse { line: 6, .. }), "{err}");
    }

    #[test]
    fn move_set_sizes() {
        for (conn, k) in [
            (Connectivity::Four, 4),
            (Connectivity::Eight, 8),
            (Connectivity::Sixteen, 16),
            (Connectivity::ThirtyTwo, 32),
        ] {
            let offs = conn.offsets();
            assert_eq!(offs.len(), k);
            let mut dedup = offs.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), k);
        }
    }

    #[test]
    fn king_moves_on_open_grid() {
        let m = GridMap::empty(5, 5);
        let ns = neighbors(&m, c(2, 2), Connectivity::Eight, 1.0);
        assert_eq!(ns.len(), 8);
        let unit = ns.iter().filter(|n| (n.cost - 1.0).abs() < 1e-12).count();
        let diag = ns.iter().filter(|n| (n.cost - 2f64.sqrt()).abs() < 1e-12).count();
        assert_eq!((unit, diag), (4, 4));
        assert_eq!(neighbors(&m, c(0, 0), Connectivity::Eight, 1.0).len(), 3);
    }

    #[test]
    fn thirty_two_moves_on_open_grid() {
        // Enumerate offsets with |dr|,|dc| <= 3 whose reduced form is one of
        // the 32 primitive directions of length <= sqrt(13).
        let mut expected: Vec<f64> = Vec::new();
        for dr in -3i32..=3 {
            for dc in -3i32..=3 {
                let (a, b) = (dr.abs().min(dc.abs()), dr.abs().max(dc.abs()));
                let gcd = (1..=b).rev().find(|g| a % g == 0 && b % g == 0).unwrap_or(1);
                if (dr, dc) != (0, 0) && gcd == 1 && a * a + b * b <= 13 {
                    expected.push(((dr * dr + dc * dc) as f64).sqrt());
                }
            }
        }
        assert_eq!(expected.len(), 32);
        let m = GridMap::empty(7, 7);
        let ns = neighbors(&m, c(3, 3), Connectivity::ThirtyTwo, 1.0);
        assert_eq!(ns.len(), 32);
        let max = ns.iter().map(|n| n.cost).fold(0.0, f64::max);
        assert!((max - 13f64.sqrt()).abs() < 1e-12);
        let mut got: Vec<f64> = ns.iter().map(|n| n.cost).collect();
        got.sort_by(f64::total_cmp);
        expected.sort_by(f64::total_cmp);
        assert_eq!(got, expected);
    }

    #[test]
    fn speed_scales_costs() {
        let m = GridMap::empty(3, 3);
        let ns = neighbors(&m, c(1, 1), Connectivity::Eight, 2.0);
        assert!(ns.iter().all(|n| (n.cost * 2.0 - move_length(n.target.row - 1, n.target.col - 1)).abs() < 1e-12));
    }

    #[test]
    fn swept_cells() {
        assert_eq!(traversal_cells(c(0, 0), c(0, 1)).unwrap(), vec![]);
        assert_eq!(traversal_cells(c(0, 0), c(1, 1)).unwrap(), vec![]);
        assert_eq!(traversal_cells(c(0, 0), c(1, 2)).unwrap(), vec![c(0, 1), c(1, 1)]);
        // The (1,3) segment crosses the corner shared by (0,1) and (1,2).
        assert_eq!(traversal_cells(c(0, 0), c(1, 3)).unwrap(), vec![c(0, 1), c(1, 2)]);
        assert_eq!(
            traversal_cells(c(0, 0), c(2, 3)).unwrap(),
            vec![c(0, 1), c(1, 1), c(1, 2), c(2, 2)]
        );
        assert_eq!(
            traversal_cells(c(5, 5), c(3, 4)).unwrap(),
            vec![c(4, 5), c(4, 4)]
        );
        assert_eq!(traversal_cells(c(0, 0), c(2, 2)), Err(GridError::UnsupportedOffset(2, 2)));
        assert_eq!(traversal_cells(c(0, 0), c(0, 0)), Err(GridError::UnsupportedOffset(0, 0)));
    }

    #[test]
    fn walls_block_long_moves() {
        let mut blocked = vec![false; 9];
        blocked[1] = true; // (0,1)
        let m = GridMap::new(3, 3, blocked);
        let ns = neighbors(&m, c(0, 0), Connectivity::Sixteen, 1.0);
        assert!(ns.iter().all(|n| n.target != c(1, 2)));
        assert!(ns.iter().any(|n| n.target == c(2, 1)));
    }

    proptest! {
        #[test]
        fn traversal_is_symmetric(r in -10i32..10, col in -10i32..10, dir in 0usize..32) {
            let (dr, dc) = Connectivity::ThirtyTwo.offsets()[dir];
            let a = c(r, col);
            let b = a.offset(dr, dc);
            let mut back = traversal_cells(b, a).unwrap();
            back.reverse();
            prop_assert_eq!(traversal_cells(a, b).unwrap(), back);
        }

        #[test]
        fn neighbors_symmetric_with_euclidean_cost(
            seed in any::<u64>(),
            k in prop::sample::select(vec![8u32, 16, 32]),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (w, h) = (7usize, 6usize);
            let blocked: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(0.2)).collect();
            let m = GridMap::new(w, h, blocked);
            let conn = Connectivity::from_k(k).unwrap();
            for a in m.passable_cells() {
                for mv in neighbors(&m, a, conn, 1.0) {
                    let euclid = move_length(mv.target.row - a.row, mv.target.col - a.col);
                    prop_assert!((mv.cost - euclid).abs() < 1e-12);
                    let back = neighbors(&m, mv.target, conn, 1.0);
                    prop_assert!(back.iter().any(|n| n.target == a && (n.cost - mv.cost).abs() < 1e-12));
                }
            }
        }
    }
}
