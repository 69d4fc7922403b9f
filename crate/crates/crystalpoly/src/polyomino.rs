use crate::cell::{Cell, Dihedral};
use crate::error::{Error, Result};
use std::collections::{HashSet, VecDeque};
use std::fmt;

/// Edge-connected finite set of cells, translated so min x = min y = 0,
/// stored sorted in row-major order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyomino {
    cells: Vec<Cell>,
    width: i32,
    height: i32,
}

impl Polyomino {
    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Self> {
        let set: HashSet<Cell> = cells.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyInput);
        }
        let comps = components(&set);
        if comps.len() > 1 {
            return Err(Error::Disconnected(comps));
        }
        Ok(Self::normalized(set.into_iter().collect()))
    }

    /// Builds from (row, column) pairs with row 0 at the top.
    pub fn from_rc<I: IntoIterator<Item = (i32, i32)>>(rc: I) -> Result<Self> {
        Self::from_cells(rc.into_iter().map(|(r, c)| Cell::new(c, -r)))
    }

    /// Caller guarantees a nonempty, connected, duplicate-free set.
    pub(crate) fn normalized(mut cells: Vec<Cell>) -> Self {
        let min_x = cells.iter().map(|c| c.x).min().unwrap_or(0);
        let min_y = cells.iter().map(|c| c.y).min().unwrap_or(0);
        let (mut w, mut h) = (0, 0);
        for c in cells.iter_mut() {
            c.x -= min_x;
            c.y -= min_y;
            w = w.max(c.x + 1);
            h = h.max(c.y + 1);
        }
        cells.sort_unstable();
        Polyomino { cells, width: w, height: h }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// (row, column) pairs with row 0 at the top.
    pub fn to_rc(&self) -> Vec<(i32, i32)> {
        self.cells.iter().map(|c| (self.height - 1 - c.y, c.x)).collect()
    }

    pub fn transformed(&self, d: Dihedral) -> Polyomino {
        Self::normalized(self.cells.iter().map(|&c| d.apply(c)).collect())
    }

    /// Least dihedral image in row-major lexicographic order.
    pub fn canonical_free(&self) -> Polyomino {
        Dihedral::ALL
            .iter()
            .map(|&d| self.transformed(d))
            .min_by(|a, b| a.cells.cmp(&b.cells))
            .expect("eight images")
    }
}

impl fmt::Debug for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Polyomino {}x{} n={}", self.width, self.height, self.len())?;
        write!(f, "{}", crate::io::to_text(self))
    }
}

impl fmt::Display for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::to_text(self))
    }
}

fn components(set: &HashSet<Cell>) -> Vec<Vec<Cell>> {
    let mut seen: HashSet<Cell> = HashSet::with_capacity(set.len());
    let mut start: Vec<Cell> = set.iter().copied().collect();
    start.sort_unstable();
    let mut out = Vec::new();
    for s in start {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(c) = queue.pop_front() {
            for q in c.neighbors() {
                if set.contains(&q) && seen.insert(q) {
                    comp.push(q);
                    queue.push_back(q);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
