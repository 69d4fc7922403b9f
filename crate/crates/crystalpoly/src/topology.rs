//! Holes, perimeters and graph structure of a polyomino.

use crate::bounds;
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::polyomino::Polyomino;
use serde::Serialize;

const OUTSIDE: u32 = 0;
const TILE: u32 = u32::MAX;

/// Dense occupancy grid over a polyomino's bounding box plus a margin.
/// The margin keeps the outside a single edge-connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    w: usize,
    h: usize,
    ox: i32,
    oy: i32,
    filled: Vec<bool>,
}

impl Board {
    pub fn new(p: &Polyomino, margin: usize) -> Board {
        let margin = margin.max(1);
        let w = p.width() as usize + 2 * margin;
        let h = p.height() as usize + 2 * margin;
        let mut b = Board { w, h, ox: -(margin as i32), oy: -(margin as i32), filled: vec![false; w * h] };
        for &c in p.cells() {
            b.set(c, true);
        }
        b
    }

    pub fn index(&self, c: Cell) -> Option<usize> {
        let (x, y) = (c.x - self.ox, c.y - self.oy);
        (x >= 0 && y >= 0 && (x as usize) < self.w && (y as usize) < self.h)
            .then(|| y as usize * self.w + x as usize)
    }

    pub fn cell(&self, i: usize) -> Cell {
        Cell::new((i % self.w) as i32 + self.ox, (i / self.w) as i32 + self.oy)
    }

    pub fn len(&self) -> usize {
        self.filled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filled.is_empty()
    }

    pub fn is_filled(&self, c: Cell) -> bool {
        self.index(c).is_some_and(|i| self.filled[i])
    }

    /// Panics if `c` is outside the board; boards are sized by their owner.
    pub fn set(&mut self, c: Cell, v: bool) {
        let i = self.index(c).expect("cell within board");
        self.filled[i] = v;
    }

    pub fn tiles(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.filled.len()).filter(|&i| self.filled[i]).map(|i| self.cell(i))
    }

    pub fn tile_count(&self) -> usize {
        self.filled.iter().filter(|&&f| f).count()
    }

    fn nbr(&self, i: usize) -> impl Iterator<Item = usize> {
        let (w, h) = (self.w, self.h);
        let (x, y) = (i % w, i / w);
        let mut out = [usize::MAX; 4];
        if x + 1 < w {
            out[0] = i + 1;
        }
        if x > 0 {
            out[1] = i - 1;
        }
        if y + 1 < h {
            out[2] = i + w;
        }
        if y > 0 {
            out[3] = i - w;
        }
        out.into_iter().filter(|&j| j != usize::MAX)
    }

    pub fn tile_degree(&self, c: Cell) -> usize {
        c.neighbors().iter().filter(|&&q| self.is_filled(q)).count()
    }

    /// Component label per position: TILE for tiles, OUTSIDE for the unbounded
    /// empty component, 1.. for holes. Returns the labels and the hole count.
    fn label_empty(&self) -> (Vec<u32>, u32) {
        let mut label = vec![u32::MAX - 1; self.filled.len()];
        let mut stack = Vec::new();
        let mut next = 0u32;
        for s in 0..self.filled.len() {
            if self.filled[s] {
                label[s] = TILE;
                continue;
            }
            if label[s] != u32::MAX - 1 {
                continue;
            }
            // index 0 lies in the margin, so the first component found is the outside
            label[s] = next;
            stack.push(s);
            while let Some(i) = stack.pop() {
                for j in self.nbr(i) {
                    if !self.filled[j] && label[j] == u32::MAX - 1 {
                        label[j] = next;
                        stack.push(j);
                    }
                }
            }
            next += 1;
        }
        (label, next.saturating_sub(1))
    }

    /// Outside mask: true for empty positions in the unbounded component.
    pub fn outside(&self) -> Vec<bool> {
        let (label, _) = self.label_empty();
        label.iter().map(|&l| l == OUTSIDE).collect()
    }

    pub fn is_outside(&self, mask: &[bool], c: Cell) -> bool {
        self.index(c).is_none_or(|i| mask[i])
    }

    /// Hole count if the tiles form a tree whose holes all have area one.
    pub fn tree_with_unit_holes(&self) -> Option<usize> {
        let n = self.tile_count();
        if n == 0 {
            return None;
        }
        let mut b = 0;
        for i in 0..self.filled.len() {
            if self.filled[i] {
                let (x, y) = (i % self.w, i / self.w);
                if x + 1 < self.w && self.filled[i + 1] {
                    b += 1;
                }
                if y + 1 < self.h && self.filled[i + self.w] {
                    b += 1;
                }
            }
        }
        if b != n - 1 {
            return None;
        }
        // connected: DFS over tiles
        let start = self.filled.iter().position(|&f| f)?;
        let mut seen = vec![false; self.filled.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for j in self.nbr(i) {
                if self.filled[j] && !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        if reached != n {
            return None;
        }
        // any empty cell not reachable from the margin must be enclosed by four tiles
        let outside = self.outside();
        let mut holes = 0;
        for i in 0..self.filled.len() {
            if !self.filled[i] && !outside[i] {
                if self.nbr(i).any(|j| !self.filled[j]) {
                    return None;
                }
                holes += 1;
            }
        }
        Some(holes)
    }

    pub fn to_polyomino(&self) -> Result<Polyomino> {
        Polyomino::from_cells(self.tiles())
    }
}

/// Vertices with undirected adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (u, adj) in self.adjacency.iter().enumerate() {
            for &v in adj.iter().filter(|&&v| v > u) {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
        true
    }
}

pub type HoleGraph = Graph;
pub type DualGraph = Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopologySummary {
    pub n: usize,
    pub h: usize,
    pub hole_areas: Vec<usize>,
    pub b: usize,
    pub p: usize,
    pub p_o: usize,
    pub p_h: usize,
    pub total_area: usize,
    pub dual_acyclic: bool,
    pub hole_graph_acyclic: bool,
}

/// Hole components in row-major order of their least cell.
pub fn holes(p: &Polyomino) -> Vec<Vec<Cell>> {
    let board = Board::new(p, 1);
    let (label, count) = board.label_empty();
    let mut out = vec![Vec::new(); count as usize];
    for (i, &l) in label.iter().enumerate() {
        if l != TILE && l != OUTSIDE {
            out[l as usize - 1].push(board.cell(i));
        }
    }
    for h in out.iter_mut() {
        h.sort_unstable();
    }
    out.sort_by_key(|h| h[0]);
    out
}

pub fn hole_graph(p: &Polyomino) -> HoleGraph {
    hole_graph_of(&holes(p))
}

fn hole_graph_of(hs: &[Vec<Cell>]) -> HoleGraph {
    let mut owner = std::collections::HashMap::new();
    for (k, h) in hs.iter().enumerate() {
        for &c in h {
            owner.insert(c, k);
        }
    }
    let mut adjacency = vec![Vec::new(); hs.len()];
    for (k, h) in hs.iter().enumerate() {
        for &c in h {
            for (dx, dy) in [(1, 1), (1, -1), (-1, 1), (-1, -1), (1, 0), (-1, 0), (0, 1), (0, -1)] {
                if let Some(&j) = owner.get(&Cell::new(c.x + dx, c.y + dy)) {
                    if j != k && !adjacency[k].contains(&j) {
                        adjacency[k].push(j);
                    }
                }
            }
        }
    }
    for a in adjacency.iter_mut() {
        a.sort_unstable();
    }
    Graph { adjacency }
}

/// Vertices are indexed by position in `p.cells()`.
pub fn dual_graph(p: &Polyomino) -> DualGraph {
    let cells = p.cells();
    let adjacency = cells
        .iter()
        .map(|c| {
            c.neighbors()
                .iter()
                .filter_map(|q| cells.binary_search(q).ok())
                .collect::<Vec<_>>()
        })
        .collect();
    Graph { adjacency }
}

pub fn summarize(p: &Polyomino) -> TopologySummary {
    let board = Board::new(p, 1);
    let (label, count) = board.label_empty();
    let n = p.len();
    let mut b = 0;
    let mut p_o = 0;
    for &c in p.cells() {
        for q in c.neighbors() {
            match board.index(q).map(|i| label[i]) {
                Some(TILE) => b += 1,
                Some(OUTSIDE) => p_o += 1,
                _ => {}
            }
        }
    }
    b /= 2;
    let hs = holes(p);
    debug_assert_eq!(hs.len(), count as usize);
    let mut hole_areas: Vec<usize> = hs.iter().map(Vec::len).collect();
    hole_areas.sort_unstable();
    let per = 4 * n - 2 * b;
    TopologySummary {
        n,
        h: hs.len(),
        total_area: n + hole_areas.iter().sum::<usize>(),
        hole_areas,
        b,
        p: per,
        p_o,
        p_h: per - p_o,
        dual_acyclic: b + 1 == n,
        hole_graph_acyclic: hole_graph_of(&hs).is_acyclic(),
    }
}

/// Tiles with an edge on the outer perimeter, and the bounding-box spaces
/// (tiles or holes) that are neither boundary tiles nor outside.
pub fn boundary_and_interior(p: &Polyomino) -> (Vec<Cell>, Vec<Cell>) {
    let board = Board::new(p, 1);
    let outside = board.outside();
    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    for y in 0..p.height() {
        for x in 0..p.width() {
            let c = Cell::new(x, y);
            if board.is_filled(c) {
                if c.neighbors().iter().any(|&q| board.is_outside(&outside, q)) {
                    boundary.push(c);
                } else {
                    interior.push(c);
                }
            } else if !board.is_outside(&outside, c) {
                interior.push(c);
            }
        }
    }
    boundary.sort_unstable();
    interior.sort_unstable();
    (boundary, interior)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Inefficiency {
    DualCycle,
    HoleArea,
    OuterPerimeter,
}

impl std::fmt::Display for Inefficiency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Inefficiency::DualCycle => "dual cycle",
            Inefficiency::HoleArea => "hole area",
            Inefficiency::OuterPerimeter => "outer perimeter",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EfficiencyReport {
    pub efficient: bool,
    /// Failing conditions in the order dual cycle, hole area, outer perimeter.
    pub reasons: Vec<Inefficiency>,
}

impl EfficiencyReport {
    pub fn reason(&self) -> Option<Inefficiency> {
        self.reasons.first().copied()
    }
}

pub fn is_efficiently_structured(p: &Polyomino) -> Result<EfficiencyReport> {
    efficiency_of(&summarize(p))
}

pub fn efficiency_of(s: &TopologySummary) -> Result<EfficiencyReport> {
    let mut reasons = Vec::new();
    if !s.dual_acyclic {
        reasons.push(Inefficiency::DualCycle);
    }
    if s.hole_areas.iter().any(|&a| a != 1) {
        reasons.push(Inefficiency::HoleArea);
    }
    if s.p_o as u64 != bounds::p_min((s.n + s.h) as u64)? {
        reasons.push(Inefficiency::OuterPerimeter);
    }
    let efficient = reasons.is_empty();
    let via_m = bounds::m_value(s.n as u64, s.h as u64)? == bounds::Halves::from_int(s.h as i64);
    if efficient != via_m {
        return Err(Error::InternalInconsistency(format!(
            "direct efficiency {efficient} disagrees with M(n,h) = h test for n={}, h={}",
            s.n, s.h
        )));
    }
    Ok(EfficiencyReport { efficient, reasons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_polyomino;

    fn fig1_left() -> Polyomino {
        parse_polyomino("###\n#.#\n##.").unwrap()
    }

    #[test]
    fn ring_missing_corner_has_one_unit_hole() {
        let p = fig1_left();
        assert_eq!(p.len(), 7);
        let hs = holes(&p);
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].len(), 1);
        let s = summarize(&p);
        assert_eq!((s.n, s.h, s.b, s.p_o, s.p_h), (7, 1, 6, 12, 4));
        assert!(is_efficiently_structured(&p).unwrap().efficient);
    }

    #[test]
    fn single_tile_summary() {
        let p = parse_polyomino("#").unwrap();
        let s = summarize(&p);
        assert_eq!((s.n, s.h, s.b, s.p, s.p_o, s.p_h), (1, 0, 0, 4, 4, 0));
    }

    #[test]
    fn square_blocks() {
        let full3 = parse_polyomino("###\n###\n###").unwrap();
        let (b, i) = boundary_and_interior(&full3);
        assert_eq!((b.len(), i.len()), (8, 1));
        let full5 = parse_polyomino("#####\n#####\n#####\n#####\n#####").unwrap();
        let (b, i) = boundary_and_interior(&full5);
        assert_eq!((b.len(), i.len()), (16, 9));
        let (b, i) = boundary_and_interior(&fig1_left());
        assert_eq!((b.len(), i.len()), (7, 1));
        assert!(holes(&parse_polyomino("##\n##").unwrap()).is_empty());
    }

    #[test]
    fn two_by_two_fails_on_dual_cycle() {
        let r = is_efficiently_structured(&parse_polyomino("##\n##").unwrap()).unwrap();
        assert!(!r.efficient);
        assert_eq!(r.reason(), Some(Inefficiency::DualCycle));
    }

    #[test]
    fn two_hole_crystal_perimeters() {
        let p = parse_polyomino("###.\n#.##\n##.#\n.##.").unwrap();
        let s = summarize(&p);
        assert_eq!((s.n, s.h), (11, 2));
        assert_eq!((s.p, s.p_o, s.p_h), (24, 16, 8));
    }

    #[test]
    fn single_hole_graph_is_a_point() {
        let g = hole_graph(&fig1_left());
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn diagonal_holes_are_linked() {
        let p = parse_polyomino("####.\n#.###\n##.##\n#####").unwrap();
        let g = hole_graph(&p);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn area_two_hole_detected() {
        let p = parse_polyomino("####\n#..#\n####").unwrap();
        let s = summarize(&p);
        assert_eq!(s.hole_areas, vec![2]);
        let r = is_efficiently_structured(&p).unwrap();
        assert!(r.reasons.contains(&Inefficiency::HoleArea));
    }

    #[test]
    fn board_fast_check_matches_summary() {
        let p = fig1_left();
        assert_eq!(Board::new(&p, 2).tree_with_unit_holes(), Some(1));
        let q = parse_polyomino("##\n##").unwrap();
        assert_eq!(Board::new(&q, 1).tree_with_unit_holes(), None);
    }
}
