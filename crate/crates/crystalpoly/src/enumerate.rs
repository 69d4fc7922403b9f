//! Exhaustive fixed and free polyomino enumeration stratified by hole count.
//!
//! Growth follows Redelmeier: cells are drawn from the half plane
//! y > 0 or (y = 0, x ≥ 0), each fixed polyomino containing the origin as its
//! least cell is reached once, and cells offered to a subtree stay forbidden
//! to its siblings.

use crate::bounds::{self, Halves};
use crate::cell::{Cell, Dihedral};
use crate::error::{Error, Result};
use crate::io::to_text;
use crate::polyomino::Polyomino;
use crate::topology::{boundary_and_interior, efficiency_of, holes, summarize};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering};

pub const MAX_N: usize = 20;
/// Subtrees below this size are distributed to workers.
pub const SPLIT_DEPTH: usize = 6;

fn check_cap(n_max: usize) -> Result<()> {
    if n_max > MAX_N {
        return Err(Error::CapExceeded { requested: n_max, cap: MAX_N });
    }
    Ok(())
}

/// Index lattice: column x + n_max, row y; column 0, column 2·n_max and
/// row n_max are padding that is never valid.
struct Lattice {
    n_max: usize,
    width: usize,
}

impl Lattice {
    fn new(n_max: usize) -> Lattice {
        Lattice { n_max, width: 2 * n_max + 1 }
    }

    fn size(&self) -> usize {
        self.width * (self.n_max + 1)
    }

    fn origin(&self) -> usize {
        self.n_max
    }

    fn cell(&self, i: usize) -> Cell {
        Cell::new((i % self.width) as i32 - self.n_max as i32, (i / self.width) as i32)
    }

    fn valid(&self, i: usize) -> bool {
        let (col, row) = (i % self.width, i / self.width);
        col > 0 && col < self.width - 1 && row < self.n_max && (row > 0 || col >= self.n_max)
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let w = self.width;
        [Some(i + 1), i.checked_sub(1), Some(i + w), i.checked_sub(w)]
            .into_iter()
            .flatten()
            .filter(move |&j| j < self.size() && self.valid(j))
    }
}

struct Task {
    poly: Vec<usize>,
    untried: Vec<usize>,
    marked: Vec<bool>,
}

struct Grower<'a, F> {
    lat: &'a Lattice,
    cells: Vec<Cell>,
    visit: F,
    /// Stop descending at this size and hand the subtree out instead.
    split: Option<(usize, Vec<Task>)>,
}

impl<F: FnMut(&[Cell]) -> ControlFlow<()>> Grower<'_, F> {
    fn grow(&mut self, poly: &mut Vec<usize>, untried: &mut Vec<usize>, marked: &mut Vec<bool>) -> ControlFlow<()> {
        while let Some(c) = untried.pop() {
            poly.push(c);
            self.cells.push(self.lat.cell(c));
            (self.visit)(&self.cells)?;
            if poly.len() < self.lat.n_max {
                let mut child = untried.clone();
                let mut added = Vec::new();
                for nb in self.lat.neighbours(c) {
                    if !marked[nb] {
                        marked[nb] = true;
                        child.push(nb);
                        added.push(nb);
                    }
                }
                match &mut self.split {
                    Some((depth, tasks)) if poly.len() == *depth => {
                        tasks.push(Task { poly: poly.clone(), untried: child, marked: marked.clone() });
                    }
                    _ => self.grow(poly, &mut child, marked)?,
                }
                for a in added {
                    marked[a] = false;
                }
            }
            poly.pop();
            self.cells.pop();
        }
        ControlFlow::Continue(())
    }
}

fn root(lat: &Lattice) -> (Vec<usize>, Vec<usize>, Vec<bool>) {
    let mut marked = vec![false; lat.size()];
    marked[lat.origin()] = true;
    (Vec::new(), vec![lat.origin()], marked)
}

/// Calls `visitor` once per fixed polyomino with at most `n_max` cells, in a
/// deterministic order, and returns the number of visits.
pub fn enumerate_fixed(n_max: usize, mut visitor: impl FnMut(&[Cell])) -> Result<u64> {
    check_cap(n_max)?;
    if n_max == 0 {
        return Ok(0);
    }
    let lat = Lattice::new(n_max);
    let mut count = 0u64;
    let (mut poly, mut untried, mut marked) = root(&lat);
    let mut g = Grower {
        lat: &lat,
        cells: Vec::new(),
        visit: |c: &[Cell]| {
            count += 1;
            visitor(c);
            ControlFlow::Continue(())
        },
        split: None,
    };
    let _ = g.grow(&mut poly, &mut untried, &mut marked);
    Ok(count)
}

/// Folds every fixed polyomino of size ≤ `n_max` into per-subtree
/// accumulators; the result order does not depend on scheduling.
fn par_fold<A, M, V>(n_max: usize, make: M, visit: V) -> Vec<A>
where
    A: Send,
    M: Fn() -> A + Sync,
    V: Fn(&mut A, &[Cell]) -> ControlFlow<()> + Sync,
{
    let lat = Lattice::new(n_max);
    let (mut poly, mut untried, mut marked) = root(&lat);
    let mut first = make();
    let mut g = Grower {
        lat: &lat,
        cells: Vec::new(),
        visit: |c: &[Cell]| visit(&mut first, c),
        split: Some((SPLIT_DEPTH, Vec::new())),
    };
    let _ = g.grow(&mut poly, &mut untried, &mut marked);
    let tasks = g.split.take().map(|(_, t)| t).unwrap_or_default();
    let mut rest: Vec<A> = tasks
        .into_par_iter()
        .map(|mut t| {
            let mut acc = make();
            let mut g = Grower {
                lat: &lat,
                cells: t.poly.iter().map(|&i| lat.cell(i)).collect(),
                visit: |c: &[Cell]| visit(&mut acc, c),
                split: None,
            };
            let _ = g.grow(&mut t.poly, &mut t.untried, &mut t.marked);
            acc
        })
        .collect();
    rest.insert(0, first);
    rest
}

/// Cells of a small polyomino packed as y·32 + x after translation to the origin.
type Key = Vec<u16>;

fn key_of(cells: impl Iterator<Item = Cell> + Clone) -> Key {
    let min_x = cells.clone().map(|c| c.x).min().unwrap_or(0);
    let min_y = cells.clone().map(|c| c.y).min().unwrap_or(0);
    let mut k: Key = cells.map(|c| ((c.y - min_y) as u16) << 5 | (c.x - min_x) as u16).collect();
    k.sort_unstable();
    k
}

/// True when no rotation or reflection gives a smaller key, so each free
/// class is counted at exactly one of its fixed images.
pub fn is_free_representative(cells: &[Cell]) -> bool {
    let base = key_of(cells.iter().copied());
    Dihedral::ALL[1..].iter().all(|&d| key_of(cells.iter().map(|&c| d.apply(c))) >= base)
}

/// Hole count by flood fill over row bitmasks, for at most 30 columns.
pub fn count_holes(cells: &[Cell]) -> usize {
    let min_x = cells.iter().map(|c| c.x).min().unwrap_or(0);
    let min_y = cells.iter().map(|c| c.y).min().unwrap_or(0);
    let w = cells.iter().map(|c| c.x - min_x).max().unwrap_or(0) as usize + 3;
    let h = cells.iter().map(|c| c.y - min_y).max().unwrap_or(0) as usize + 3;
    debug_assert!(w <= 32);
    let full: u32 = if w == 32 { u32::MAX } else { (1 << w) - 1 };
    let mut tiles = vec![0u32; h];
    for c in cells {
        tiles[(c.y - min_y) as usize + 1] |= 1 << ((c.x - min_x) as usize + 1);
    }
    let empty: Vec<u32> = tiles.iter().map(|t| !t & full).collect();
    let mut seen = vec![0u32; h];
    let fill = |seen: &mut [u32], start_row: usize, start: u32| {
        seen[start_row] |= start;
        loop {
            let mut changed = false;
            for r in 0..h {
                let mut g = seen[r] | (seen[r] << 1) | (seen[r] >> 1);
                if r > 0 {
                    g |= seen[r - 1];
                }
                if r + 1 < h {
                    g |= seen[r + 1];
                }
                g &= empty[r];
                if g != seen[r] {
                    seen[r] = g;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    };
    fill(&mut seen, 0, 1);
    let mut count = 0;
    for r in 0..h {
        loop {
            let rest = empty[r] & !seen[r];
            if rest == 0 {
                break;
            }
            fill(&mut seen, r, rest & rest.wrapping_neg());
            count += 1;
        }
    }
    count
}

/// Free polyomino counts by (tiles, holes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub max_n: usize,
    /// counts[n][h]
    counts: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct CensusRow {
    n: usize,
    h: usize,
    free_count: u64,
}

#[derive(Serialize)]
struct CensusJson {
    max_n: usize,
    rows: Vec<CensusRow>,
    min_n_for_h: BTreeMap<usize, usize>,
    crystal_counts: BTreeMap<usize, u64>,
}

impl Serialize for CensusTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.rows().into_iter().map(|((n, h), free_count)| CensusRow { n, h, free_count }).collect();
        CensusJson { max_n: self.max_n, rows, min_n_for_h: self.min_n_for_h(), crystal_counts: self.crystal_counts() }
            .serialize(s)
    }
}

impl CensusTable {
    fn empty(max_n: usize) -> CensusTable {
        CensusTable { max_n, counts: vec![vec![0; max_n + 1]; max_n + 1] }
    }

    fn record(&mut self, cells: &[Cell]) {
        if is_free_representative(cells) {
            // no polyomino under 7 tiles has a hole
            let h = if cells.len() < 7 { 0 } else { count_holes(cells) };
            self.counts[cells.len()][h] += 1;
        }
    }

    fn merge(mut self, other: &CensusTable) -> CensusTable {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self
    }

    pub fn count(&self, n: usize, h: usize) -> u64 {
        self.counts.get(n).and_then(|r| r.get(h)).copied().unwrap_or(0)
    }

    /// Nonzero entries keyed by (n, h).
    pub fn rows(&self) -> BTreeMap<(usize, usize), u64> {
        let mut out = BTreeMap::new();
        for (n, row) in self.counts.iter().enumerate() {
            for (h, &c) in row.iter().enumerate() {
                if c > 0 {
                    out.insert((n, h), c);
                }
            }
        }
        out
    }

    /// Free polyominoes with `n` tiles.
    pub fn free_total(&self, n: usize) -> u64 {
        self.counts.get(n).map_or(0, |r| r.iter().sum())
    }

    pub fn min_n_for_h(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for ((n, h), _) in self.rows() {
            out.entry(h).or_insert(n);
        }
        out
    }

    /// Free polyominoes with h holes and the least tile count seen for h.
    pub fn crystal_counts(&self) -> BTreeMap<usize, u64> {
        self.min_n_for_h().into_iter().filter(|&(h, _)| h > 0).map(|(h, n)| (h, self.count(n, h))).collect()
    }
}

/// Census over all sizes up to `n_max`, split across the rayon pool.
pub fn census(n_max: usize) -> Result<CensusTable> {
    check_cap(n_max)?;
    let parts = par_fold(
        n_max,
        || CensusTable::empty(n_max),
        |t, cells| {
            t.record(cells);
            ControlFlow::Continue(())
        },
    );
    Ok(parts.iter().fold(CensusTable::empty(n_max), |acc, p| acc.merge(p)))
}

/// Single-threaded census in plain growth order.
pub fn census_serial(n_max: usize) -> Result<CensusTable> {
    let mut t = CensusTable::empty(n_max);
    enumerate_fixed(n_max, |cells| t.record(cells))?;
    Ok(t)
}

/// Least n ≤ `n_cap` with a polyomino of exactly `h` holes. Sizes where
/// M(n, h) < h are skipped without enumerating.
pub fn oracle_g(h: usize, n_cap: usize) -> Option<usize> {
    let start = bounds::m(h as u64) as usize;
    let n_cap = n_cap.min(MAX_N);
    (start..=n_cap).find(|&n| {
        if h == 0 {
            return true;
        }
        let found = AtomicBool::new(false);
        let _ = par_fold(
            n,
            || (),
            |_, cells| {
                if found.load(Ordering::Relaxed) {
                    return ControlFlow::Break(());
                }
                if cells.len() == n && count_holes(cells) == h {
                    found.store(true, Ordering::Relaxed);
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            },
        );
        found.into_inner()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Invariant {
    PerimeterIdentity,
    OuterPerimeterBound,
    HoleBound,
    HoleGraphCycle,
    OneBreak,
    Checkerboard,
    EfficiencyMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub shape: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub max_n: usize,
    pub shapes_checked: u64,
    /// Shapes with M(n, h) = h + 1/2.
    pub onebreak_cases: u64,
    /// Efficient shapes with h > 0 whose interior is the whole inner box.
    pub checkerboard_cases: u64,
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: InvariantReport) -> InvariantReport {
        self.shapes_checked += other.shapes_checked;
        self.onebreak_cases += other.onebreak_cases;
        self.checkerboard_cases += other.checkerboard_cases;
        self.violations.extend(other.violations);
        self
    }

    fn check(&mut self, p: &Polyomino) -> Result<()> {
        self.shapes_checked += 1;
        let s = summarize(p);
        let (n, h) = (s.n as u64, s.h as u64);
        let mut fail = |inv| self.violations.push(Violation { invariant: inv, shape: to_text(p) });
        if 4 * s.n != 2 * s.b + s.p || s.p != s.p_o + s.p_h {
            fail(Invariant::PerimeterIdentity);
        }
        let pm = bounds::p_min(n + h)?;
        if (s.p_o as u64) < pm {
            fail(Invariant::OuterPerimeterBound);
        }
        let m = bounds::m_value(n, h)?;
        if m < Halves::from_int(h as i64) {
            fail(Invariant::HoleBound);
        }
        if !s.hole_graph_acyclic {
            fail(Invariant::HoleGraphCycle);
        }
        if m == Halves(2 * h as i64 + 1) {
            self.onebreak_cases += 1;
            let extra_edge = s.b == s.n;
            let one_double = s.hole_areas.iter().filter(|&&a| a == 2).count() == 1
                && s.hole_areas.iter().all(|&a| a <= 2);
            let loose = s.p_o as u64 == pm + 2;
            if [extra_edge, one_double, loose].iter().filter(|&&b| b).count() != 1 {
                self.violations.push(Violation { invariant: Invariant::OneBreak, shape: to_text(p) });
            }
        }
        let eff = match efficiency_of(&s) {
            Ok(e) => e.efficient,
            Err(_) => {
                self.violations.push(Violation { invariant: Invariant::EfficiencyMismatch, shape: to_text(p) });
                false
            }
        };
        if eff && h > 0 {
            let (_, interior) = boundary_and_interior(p);
            let (w, ht) = (p.width(), p.height());
            if interior.len() as i32 == (w - 2).max(0) * (ht - 2).max(0)
                && interior.iter().all(|c| c.x > 0 && c.x < w - 1 && c.y > 0 && c.y < ht - 1)
            {
                self.checkerboard_cases += 1;
                // W spaces have an even row + column sum, counting rows from the top
                let parity = |c: &Cell| (ht - 1 - c.y + c.x) % 2;
                let hs: Vec<Cell> = holes(p).into_iter().flatten().collect();
                let one_class = hs.iter().all(|c| parity(c) == parity(&hs[0]));
                // with an even interior side a reflection swaps the classes, so W is forced only when both sides are odd
                let odd_interior = w % 2 == 1 && ht % 2 == 1;
                if !one_class || (odd_interior && parity(&hs[0]) != 0) {
                    self.violations.push(Violation { invariant: Invariant::Checkerboard, shape: to_text(p) });
                }
            }
        }
        Ok(())
    }
}

/// Checks the perimeter identity, the outer perimeter and hole bounds, hole
/// graph acyclicity, the M = h + 1/2 trichotomy and the checkerboard property
/// on every free polyomino with at most `n_max` tiles.
pub fn verify_invariants(n_max: usize) -> Result<InvariantReport> {
    check_cap(n_max)?;
    let parts = par_fold(
        n_max,
        || (InvariantReport::default(), None::<Error>),
        |(r, err), cells| {
            if is_free_representative(cells) {
                let p = Polyomino::from_cells(cells.iter().copied()).expect("grown shapes are connected");
                if let Err(e) = r.check(&p) {
                    *err = Some(e);
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        },
    );
    let mut out = InvariantReport { max_n: n_max, ..Default::default() };
    for (r, err) in parts {
        if let Some(e) = err {
            return Err(e);
        }
        out = out.merge(r);
    }
    Ok(out)
}
