use crate::error::{Error, Result};
use crate::polyomino::Polyomino;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellState {
    Filled,
    Empty,
    Undetermined,
}

/// Rectangular tri-state grid, addressed by (row, column) with row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    width: usize,
    height: usize,
    grid: Vec<CellState>,
}

impl Arrangement {
    pub fn new(width: usize, height: usize, fill: CellState) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions { width, height });
        }
        Ok(Arrangement { width, height, grid: vec![fill; width * height] })
    }

    pub fn from_rows(rows: Vec<Vec<CellState>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(Error::BadDimensions { width, height });
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(Error::RaggedRows { line: i + 1, found: r.len(), expected: width });
            }
        }
        Ok(Arrangement { width, height, grid: rows.into_iter().flatten().collect() })
    }

    /// The bounding rectangle of `p`, fully determined.
    pub fn from_polyomino(p: &Polyomino) -> Self {
        let (w, h) = (p.width() as usize, p.height() as usize);
        let mut a = Arrangement { width: w, height: h, grid: vec![CellState::Empty; w * h] };
        for (r, c) in p.to_rc() {
            a.set(r as usize, c as usize, CellState::Filled);
        }
        a
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, r: usize, c: usize) -> CellState {
        self.grid[r * self.width + c]
    }

    pub fn set(&mut self, r: usize, c: usize, s: CellState) {
        self.grid[r * self.width + c] = s;
    }

    pub fn is_filled(&self, r: usize, c: usize) -> bool {
        self.get(r, c) == CellState::Filled
    }

    pub fn count(&self, s: CellState) -> usize {
        self.grid.iter().filter(|&&x| x == s).count()
    }

    pub fn is_determined(&self) -> bool {
        self.count(CellState::Undetermined) == 0
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CellState]> {
        self.grid.chunks(self.width)
    }

    pub fn filled_rc(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        (0..self.height).flat_map(move |r| {
            (0..self.width).filter(move |&c| self.is_filled(r, c)).map(move |c| (r as i32, c as i32))
        })
    }

    /// Projects a determined arrangement to its filled polyomino.
    pub fn to_polyomino(&self) -> Result<Polyomino> {
        if !self.is_determined() {
            return Err(Error::UndeterminedInterior);
        }
        Polyomino::from_rc(self.filled_rc())
    }
}
