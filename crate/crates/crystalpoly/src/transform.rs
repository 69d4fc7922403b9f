//! Expansion, compression, dismantling and hole insertion.

use crate::arrangement::{Arrangement, CellState};
use crate::bounds::{self, AlphaKind, Shape};
use crate::cell::Cell;
use crate::construct::{self, BoundaryKind, Corner, CornerSet};
use crate::error::{Error, Result};
use crate::io::to_text;
use crate::polyomino::Polyomino;
use crate::topology::Board;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::ops::ControlFlow;

/// Reads the boundary ring of a square or rectangular arrangement.
pub fn boundary_kind(a: &Arrangement) -> Result<BoundaryKind> {
    let (w, h) = (a.width(), a.height());
    if w < 3 || h < 3 {
        return Err(Error::BadDimensions { width: w, height: h });
    }
    let corners: Vec<(usize, usize)> = Corner::ALL.iter().map(|c| c.position(w, h)).collect();
    for r in 0..h {
        for c in 0..w {
            let on_ring = r == 0 || c == 0 || r == h - 1 || c == w - 1;
            if on_ring && !corners.contains(&(r, c)) && !a.is_filled(r, c) {
                return Err(Error::BadBoundary(format!("side space ({r}, {c}) is not filled")));
            }
        }
    }
    let mut filled = Vec::new();
    for corner in Corner::ALL {
        let (r, c) = corner.position(w, h);
        match a.get(r, c) {
            CellState::Filled => filled.push(corner),
            CellState::Empty => {}
            CellState::Undetermined => {
                return Err(Error::BadBoundary(format!("corner ({r}, {c}) is undetermined")))
            }
        }
    }
    BoundaryKind::from_filled(CornerSet::of(&filled))
}

fn square_side(a: &Arrangement) -> Result<usize> {
    if a.width() != a.height() {
        return Err(Error::BadDimensions { width: a.width(), height: a.height() });
    }
    Ok(a.width())
}

/// E(A): the (2N−1)-square with the same boundary kind, every interior B
/// space filled, odd-row W spaces empty and space (2i, 2j) copied from (i, j).
pub fn expand(a: &Arrangement) -> Result<Arrangement> {
    let n = square_side(a)?;
    let kind = boundary_kind(a)?;
    for r in 1..n - 1 {
        for c in 1..n - 1 {
            if a.get(r, c) == CellState::Undetermined {
                return Err(Error::UndeterminedInterior);
            }
        }
    }
    let m = 2 * n - 1;
    let mut out = construct::boundary(m, m, kind)?;
    for r in 1..m - 1 {
        for c in 1..m - 1 {
            let s = if (r + c) % 2 == 1 {
                CellState::Filled
            } else if r % 2 == 1 {
                CellState::Empty
            } else {
                a.get(r / 2, c / 2)
            };
            out.set(r, c, s);
        }
    }
    Ok(out)
}

/// Ok when `a` is D ∪ P_N ∪ U_A for an odd N ≥ 5; otherwise the first violation.
pub fn check_compressible(a: &Arrangement) -> Result<()> {
    let fail = |row, col, reason: &str| Err(Error::NotCompressible { row, col, reason: reason.into() });
    if a.width() != a.height() {
        return fail(0, 0, "not square");
    }
    let n = a.width();
    if n.is_multiple_of(2) {
        return fail(0, 0, "even side");
    }
    if n < 5 {
        return fail(0, 0, "side below 5");
    }
    if let Err(e) = boundary_kind(a) {
        return fail(0, 0, &e.to_string());
    }
    for r in 1..n - 1 {
        for c in 1..n - 1 {
            let s = a.get(r, c);
            if (r + c) % 2 == 1 && s != CellState::Filled {
                return fail(r, c, "B space not filled");
            }
            if (r + c) % 2 == 0 && r % 2 == 1 && s != CellState::Empty {
                return fail(r, c, "odd-row W space not empty");
            }
            if s == CellState::Undetermined {
                return fail(r, c, "undetermined space");
            }
        }
    }
    Ok(())
}

pub fn is_compressible(a: &Arrangement) -> bool {
    check_compressible(a).is_ok()
}

/// C(A), the inverse of `expand`.
pub fn compress(a: &Arrangement) -> Result<Arrangement> {
    check_compressible(a)?;
    let n = a.width();
    let m = n.div_ceil(2);
    let mut out = construct::boundary(m, m, boundary_kind(a)?)?;
    for i in 1..m - 1 {
        for j in 1..m - 1 {
            out.set(i, j, a.get(2 * i, 2 * j));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Move {
    Add(Cell),
    Remove(Cell),
    Relocate { from: Cell, to: Cell },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    /// Two leaf tiles on the outer boundary removed, opening one hole.
    IndentedCorner,
    /// A boundary tile pushed into an adjacent hole, then two tiles removed.
    PushIn,
    /// Any nearby tile moved into a hole, then two tiles removed.
    Relocation,
    /// The whole layout replaced inside the same bounding box.
    Rearrangement,
    /// Three tiles added to enclose a new hole.
    PlusInsertion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub moves: Vec<Move>,
    pub n: usize,
    pub h: usize,
    /// SHA-256 prefix of the canonical free form after the step.
    pub hash: String,
}

/// Moves are in the coordinate frame of `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DismantleTrace {
    #[serde(serialize_with = "serialize_grid")]
    pub start: Polyomino,
    pub steps: Vec<TraceStep>,
}

fn serialize_grid<S: serde::Serializer>(p: &Polyomino, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(to_text(p).lines())
}

impl DismantleTrace {
    /// Applies every move to `start` and returns the final polyomino.
    pub fn replay(&self) -> Result<Polyomino> {
        let mut cells: std::collections::BTreeSet<Cell> = self.start.cells().iter().copied().collect();
        for step in &self.steps {
            for m in &step.moves {
                match *m {
                    Move::Add(c) => {
                        if !cells.insert(c) {
                            return Err(Error::InternalInconsistency(format!("add onto tile {c:?}")));
                        }
                    }
                    Move::Remove(c) => {
                        if !cells.remove(&c) {
                            return Err(Error::InternalInconsistency(format!("remove of empty {c:?}")));
                        }
                    }
                    Move::Relocate { from, to } => {
                        if !cells.remove(&from) || !cells.insert(to) {
                            return Err(Error::InternalInconsistency(format!("bad relocation {from:?} -> {to:?}")));
                        }
                    }
                }
            }
        }
        Polyomino::from_cells(cells)
    }
}

pub fn snapshot_hash(p: &Polyomino) -> String {
    let digest = Sha256::digest(to_text(&p.canonical_free()).as_bytes());
    hex::encode(&digest[..8])
}

/// Mutable dismantling state: a board in the frame of the start polyomino.
#[derive(Clone)]
struct Work {
    board: Board,
    n: usize,
    h: usize,
}

struct Candidate {
    kind: StepKind,
    moves: Vec<Move>,
    board: Board,
}

impl Work {
    fn new(p: &Polyomino, margin: usize) -> Result<Work> {
        let board = Board::new(p, margin);
        let h = board.tree_with_unit_holes().ok_or_else(|| {
            Error::InternalInconsistency("dismantling needs an acyclic polyomino with unit holes".into())
        })?;
        Ok(Work { n: p.len(), h, board })
    }

    fn holes(&self) -> Vec<Cell> {
        let outside = self.board.outside();
        (0..self.board.len())
            .map(|i| self.board.cell(i))
            .filter(|&c| !self.board.is_filled(c) && !self.board.is_outside(&outside, c))
            .collect()
    }

    /// Tiles with one tile neighbour and an edge on the outside.
    fn outer_leaves(board: &Board) -> Vec<Cell> {
        let outside = board.outside();
        board
            .tiles()
            .filter(|&t| board.tile_degree(t) == 1 && t.neighbors().iter().any(|&q| board.is_outside(&outside, q)))
            .collect()
    }

    fn edges(board: &Board) -> usize {
        board.tiles().map(|t| board.tile_degree(t)).sum::<usize>() / 2
    }

    /// Calls `f` on every successor with n − 2 tiles and h − 1 holes, in a
    /// fixed order: leaf pairs first, then relocations into holes.
    fn for_each_step(&self, f: &mut dyn FnMut(Candidate) -> ControlFlow<()>) -> ControlFlow<()> {
        let target = self.h.checked_sub(1);
        let Some(target) = target else { return ControlFlow::Continue(()) };
        for t in Self::outer_leaves(&self.board) {
            let mut b1 = self.board.clone();
            b1.set(t, false);
            for u in Self::outer_leaves(&b1) {
                let mut b2 = b1.clone();
                b2.set(u, false);
                if b2.tree_with_unit_holes() == Some(target) {
                    f(Candidate { kind: StepKind::IndentedCorner, moves: vec![Move::Remove(t), Move::Remove(u)], board: b2 })?;
                }
            }
        }
        let outside = self.board.outside();
        let edges = Self::edges(&self.board);
        for e in self.holes() {
            let near: Vec<Cell> = self.board.tiles().filter(|t| t.chebyshev(e) <= 2).collect();
            for &a in &near {
                let mut b1 = self.board.clone();
                b1.set(a, false);
                let mut e1 = edges - self.board.tile_degree(a);
                e1 += b1.tile_degree(e);
                b1.set(e, true);
                for (i, &x) in near.iter().enumerate() {
                    if x == a {
                        continue;
                    }
                    let ex = e1 - b1.tile_degree(x);
                    let mut b2 = b1.clone();
                    b2.set(x, false);
                    for &y in &near[i + 1..] {
                        if y == a || ex < b2.tile_degree(y) || ex - b2.tile_degree(y) + 3 != self.n {
                            continue;
                        }
                        let mut b3 = b2.clone();
                        b3.set(y, false);
                        if b3.tree_with_unit_holes() == Some(target) {
                            let pushed = a.chebyshev(e) == 1
                                && (a.x == e.x || a.y == e.y)
                                && a.neighbors().iter().any(|&q| self.board.is_outside(&outside, q));
                            let kind = if pushed { StepKind::PushIn } else { StepKind::Relocation };
                            let moves = vec![Move::Relocate { from: a, to: e }, Move::Remove(x), Move::Remove(y)];
                            f(Candidate { kind, moves, board: b3 })?;
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn apply(&self, c: Candidate) -> (Work, TraceStep) {
        let w = Work { board: c.board, n: self.n - 2, h: self.h - 1 };
        let p = w.board.to_polyomino().expect("validated connected");
        let step = TraceStep { kind: c.kind, moves: c.moves, n: w.n, h: w.h, hash: snapshot_hash(&p) };
        (w, step)
    }
}

/// One move pair removing two tiles and one hole, keeping the polyomino
/// acyclic with unit holes. Coordinates in the trace refer to `p`.
pub fn dismantle_step(p: &Polyomino) -> Result<(Polyomino, TraceStep)> {
    let work = Work::new(p, 2)?;
    let mut found = None;
    let mut tried = 0;
    let _ = work.for_each_step(&mut |c| {
        tried += 1;
        found = Some(c);
        ControlFlow::Break(())
    });
    let c = found.ok_or(Error::NoStepFound { tried })?;
    let (w, step) = work.apply(c);
    Ok((w.board.to_polyomino()?, step))
}

/// Removes `steps` holes, backtracking over candidate moves when a branch
/// runs dry. The trace is in the frame of `start`.
pub fn dismantle(start: &Polyomino, steps: usize) -> Result<(Polyomino, DismantleTrace)> {
    let work = Work::new(start, 2)?;
    let mut trail = Vec::new();
    let mut explored = 0usize;
    fn go(w: &Work, left: usize, trail: &mut Vec<TraceStep>, explored: &mut usize) -> Option<Work> {
        if left == 0 {
            return Some(w.clone());
        }
        let mut out = None;
        let _ = w.for_each_step(&mut |c| {
            *explored += 1;
            let (next, step) = w.apply(c);
            trail.push(step);
            if let Some(done) = go(&next, left - 1, trail, explored) {
                out = Some(done);
                return ControlFlow::Break(());
            }
            trail.pop();
            ControlFlow::Continue(())
        });
        out
    }
    let end = go(&work, steps, &mut trail, &mut explored).ok_or(Error::NoStepFound { tried: explored })?;
    let trace = DismantleTrace { start: start.clone(), steps: trail };
    Ok((end.board.to_polyomino()?, trace))
}

/// A polyomino with exactly `h` holes and g(h) tiles, acyclic with unit holes,
/// obtained by dismantling the governing threshold crystal.
pub fn witness(h: u64) -> Result<(Polyomino, DismantleTrace)> {
    let entry = bounds::g(h)?;
    let start = construct::crystal_for_threshold(entry.alpha)?;
    let steps = (bounds::h_alpha(entry.alpha) - h) as usize;
    let (p, trace) = dismantle(&start, steps)?;
    if p.len() as u64 != entry.g {
        return Err(Error::InternalInconsistency(format!("witness for h={h} has {} tiles, g(h) = {}", p.len(), entry.g)));
    }
    Ok((p, trace))
}

/// Rebuilds a 4×4 window on the outer border so that the polyomino gains
/// three tiles and one unit hole while the tiles stay a tree. This moves a
/// plus rooted at the border one step outward. Edits removing fewer tiles
/// are preferred; windows are tried top row first.
pub fn insert_plus(p: &Polyomino) -> Result<(Polyomino, TraceStep)> {
    (0..=3).find_map(|r| insert_plus_with(p, 4, r).transpose()).unwrap_or(Err(Error::NoRootedPlus))
}

/// Window search removing exactly `removed_count` tiles.
fn insert_plus_with(p: &Polyomino, side: i32, removed_count: usize) -> Result<Option<(Polyomino, TraceStep)>> {
    let work = Work::new(p, 3)?;
    let edges = Work::edges(&work.board);
    let (w, h) = (p.width(), p.height());
    for wy in (2 - side..h - 1).rev() {
        for wx in 2 - side..w - 1 {
            // the window must reach past the bounding box
            if wy > -1 && wx > -1 && wy + side - 1 < h && wx + side - 1 < w {
                continue;
            }
            let window: Vec<Cell> =
                (0..side).rev().flat_map(|dy| (0..side).map(move |dx| Cell::new(wx + dx, wy + dy))).collect();
            let tiles: Vec<Cell> = window.iter().copied().filter(|&c| work.board.is_filled(c)).collect();
            let free: Vec<Cell> = window
                .iter()
                .copied()
                .filter(|&c| !work.board.is_filled(c) && !on_rim(&work.board, c))
                .collect();
            for removed in subsets(&tiles, removed_count) {
                let mut base = work.board.clone();
                let mut e0 = edges;
                for &r in &removed {
                    e0 -= base.tile_degree(r);
                    base.set(r, false);
                }
                let pool: Vec<Cell> = free.iter().chain(&removed).copied().collect();
                let k = 3 + removed.len();
                if let Some(found) = add_subset(&base, e0, &pool, k, work.n + 2, work.h + 1) {
                    let q = found.board.to_polyomino()?;
                    let moves =
                        removed.into_iter().map(Move::Remove).chain(found.added.into_iter().map(Move::Add)).collect();
                    let step =
                        TraceStep { kind: StepKind::PlusInsertion, moves, n: work.n + 3, h: work.h + 1, hash: snapshot_hash(&q) };
                    return Ok(Some((q, step)));
                }
            }
        }
    }
    Ok(None)
}

/// All k-subsets, each in input order.
fn subsets(items: &[Cell], k: usize) -> Vec<Vec<Cell>> {
    let mut layer = vec![(Vec::new(), 0usize)];
    for _ in 0..k {
        layer = layer
            .into_iter()
            .flat_map(|(s, from)| {
                (from..items.len()).map(move |i| {
                    let mut t: Vec<Cell> = s.clone();
                    t.push(items[i]);
                    (t, i + 1)
                })
            })
            .collect();
    }
    layer.into_iter().map(|(s, _)| s).collect()
}

struct Added {
    board: Board,
    added: Vec<Cell>,
}

/// First k-subset of `pool` whose addition gives `target_edges` tile
/// adjacencies and a tree with `target_h` unit holes.
fn add_subset(base: &Board, edges: usize, pool: &[Cell], k: usize, target_edges: usize, target_h: usize) -> Option<Added> {
    fn go(b: &Board, edges: usize, pool: &[Cell], k: usize, te: usize, th: usize, chosen: &mut Vec<Cell>) -> Option<Added> {
        if k == 0 {
            return (edges == te && b.tree_with_unit_holes() == Some(th)).then(|| Added { board: b.clone(), added: chosen.clone() });
        }
        for (i, &c) in pool.iter().enumerate() {
            if pool.len() - i < k || b.is_filled(c) {
                continue;
            }
            let e = edges + b.tile_degree(c);
            if e > te {
                continue;
            }
            let mut nb = b.clone();
            nb.set(c, true);
            chosen.push(c);
            if let Some(f) = go(&nb, e, &pool[i + 1..], k - 1, te, th, chosen) {
                return Some(f);
            }
            chosen.pop();
        }
        None
    }
    go(base, edges, pool, k, target_edges, target_h, &mut Vec::new())
}

fn on_rim(board: &Board, c: Cell) -> bool {
    c.neighbors().iter().any(|&q| board.index(q).is_none())
}

/// Replaces a partially dismantled odd-square crystal by a fresh layout in
/// the same box with one hole and two tiles fewer.
pub fn rearrange(p: &Polyomino, a: AlphaKind) -> Result<(Polyomino, TraceStep)> {
    if a.shape != Shape::Square || a.n.is_multiple_of(2) || a.n < 13 {
        return Err(Error::UnsupportedResidue(a.to_string()));
    }
    let work = Work::new(p, 2)?;
    let ha = bounds::h_alpha(a) as usize;
    let (_, g_alpha) = construct::threshold_counts(a);
    if work.h == 0 || work.h > ha || p.width() as u64 > a.n || p.height() as u64 > a.n {
        return Err(Error::UnsupportedResidue(format!("{a}: input does not fit the threshold")));
    }
    if work.n as u64 != g_alpha - 2 * (ha - work.h) as u64 {
        return Err(Error::UnsupportedResidue(format!("{a}: input is not a dismantled crystal")));
    }
    let fresh = construct::crystal_for_threshold(a)?;
    let (q, _) = dismantle(&fresh, ha - work.h + 1)?;
    let step = TraceStep { kind: StepKind::Rearrangement, moves: Vec::new(), n: q.len(), h: work.h - 1, hash: snapshot_hash(&q) };
    Ok((q, step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{kr, r0, s1, s2, s_one};
    use crate::topology::summarize;

    fn arr(p: &Polyomino) -> Arrangement {
        Arrangement::from_polyomino(p)
    }

    #[test]
    fn expand_s1_gives_kr2() {
        let e = expand(&arr(&s_one())).unwrap();
        let p = e.to_polyomino().unwrap();
        let s = summarize(&p);
        assert_eq!((s.h, s.n), (5, 19));
        assert_eq!(p, kr(2).unwrap());
    }

    #[test]
    fn expand_compress_round_trip() {
        for l in 1..=4 {
            let a = arr(&kr(l).unwrap());
            let e = expand(&a).unwrap();
            assert_eq!(compress(&e).unwrap(), a);
        }
        let a = arr(&s2(1).unwrap());
        assert_eq!(compress(&expand(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn compressibility_diagnosis() {
        assert!(is_compressible(&arr(&kr(2).unwrap())));
        match check_compressible(&arr(&s1(1).unwrap())) {
            Err(Error::NotCompressible { reason, .. }) => assert_eq!(reason, "even side"),
            other => panic!("{other:?}"),
        }
        let mut bad = arr(&kr(2).unwrap());
        bad.set(1, 2, CellState::Empty);
        match compress(&bad) {
            Err(Error::NotCompressible { row: 1, col: 2, reason }) => assert!(reason.contains("B space")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expand_rejects_bad_input() {
        let mut a = arr(&kr(2).unwrap());
        a.set(0, 2, CellState::Empty);
        assert!(matches!(expand(&a), Err(Error::BadBoundary(_))));
        let mut b = arr(&kr(2).unwrap());
        b.set(2, 2, CellState::Undetermined);
        assert_eq!(expand(&b).unwrap_err(), Error::UndeterminedInterior);
    }

    #[test]
    fn dismantle_steps_match_g() {
        let (p, step) = dismantle_step(&s1(1).unwrap()).unwrap();
        assert_eq!((p.len(), step.h), (69, 25));
        let (q, _) = dismantle_step(&p).unwrap();
        assert_eq!(q.len(), 67);
        let (k, _) = dismantle_step(&kr(2).unwrap()).unwrap();
        assert_eq!((k.len(), summarize(&k).h), (17, 4));
    }

    #[test]
    fn trace_replays() {
        let start = s1(1).unwrap();
        let (end, trace) = dismantle(&start, 3).unwrap();
        assert_eq!(trace.steps.len(), 3);
        assert_eq!(trace.replay().unwrap(), end);
        for (i, s) in trace.steps.iter().enumerate() {
            assert_eq!((s.n, s.h), (71 - 2 * (i + 1), 26 - (i + 1)));
        }
    }

    #[test]
    fn small_witnesses() {
        for (h, n) in [(4u64, 17usize), (12, 38), (6, 23), (8, 28)] {
            let (p, _) = witness(h).unwrap();
            let s = summarize(&p);
            assert_eq!((s.h as u64, s.n), (h, n));
        }
    }

    #[test]
    fn plus_insertion_adds_a_hole() {
        let (p, step) = insert_plus(&r0(1).unwrap()).unwrap();
        let s = summarize(&p);
        assert_eq!((s.n, s.h), (33, 10));
        assert_eq!((step.n, step.h), (33, 10));
        assert!(s.dual_acyclic && s.hole_areas.iter().all(|&a| a == 1));
    }

    #[test]
    fn plus_insertion_on_witnesses() {
        for (h, n) in [(9u64, 33usize), (21, 62)] {
            let (w, _) = witness(h).unwrap();
            let (p, step) = insert_plus(&w).unwrap();
            let s = summarize(&p);
            assert_eq!((s.n, s.h as u64), (n, h + 1));
            assert_eq!(bounds::g(h + 1).unwrap().g as usize, n);
            let adds = step.moves.iter().filter(|m| matches!(m, Move::Add(_))).count();
            let removes = step.moves.len() - adds;
            assert_eq!(adds, removes + 3);
        }
    }

    #[test]
    fn rearrange_keeps_the_box() {
        for n in [13u64, 15, 19] {
            let a = AlphaKind::square(n);
            let ha = bounds::h_alpha(a) as usize;
            let (p, _) = dismantle(&construct::crystal_for_threshold(a).unwrap(), 4).unwrap();
            let (q, step) = rearrange(&p, a).unwrap();
            let s = summarize(&q);
            assert_eq!((s.n, s.h), (p.len() - 2, ha - 5));
            assert_eq!((step.n, step.h), (s.n, s.h));
            assert!(s.dual_acyclic && s.hole_areas.iter().all(|&x| x == 1));
            assert!(q.width() as u64 <= n && q.height() as u64 <= n);
        }
    }

    #[test]
    fn rearrange_rejects_other_thresholds() {
        let p = kr(3).unwrap();
        assert!(matches!(rearrange(&p, AlphaKind::square(9)), Err(Error::UnsupportedResidue(_))));
        assert!(matches!(rearrange(&p, AlphaKind::square(14)), Err(Error::UnsupportedResidue(_))));
        assert!(matches!(rearrange(&p, AlphaKind::square(13)), Err(Error::UnsupportedResidue(_))));
    }

    #[test]
    fn plus_insertion_needs_room() {
        let single = Polyomino::from_rc([(0, 0)]).unwrap();
        // a single tile cannot enclose a hole with three more
        assert_eq!(insert_plus(&single).unwrap_err(), Error::NoRootedPlus);
    }
}
