use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A lattice square at column `x`, row `y` (y grows upward).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x, self.y - 1),
        ]
    }

    pub fn chebyshev(self, other: Cell) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

// Row-major: by row, then by column.
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The eight symmetries of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dihedral {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipX,
    FlipY,
    Transpose,
    AntiTranspose,
}

impl Dihedral {
    pub const ALL: [Dihedral; 8] = [
        Dihedral::Identity,
        Dihedral::Rot90,
        Dihedral::Rot180,
        Dihedral::Rot270,
        Dihedral::FlipX,
        Dihedral::FlipY,
        Dihedral::Transpose,
        Dihedral::AntiTranspose,
    ];

    pub fn apply(self, c: Cell) -> Cell {
        let (x, y) = (c.x, c.y);
        let (x, y) = match self {
            Dihedral::Identity => (x, y),
            Dihedral::Rot90 => (-y, x),
            Dihedral::Rot180 => (-x, -y),
            Dihedral::Rot270 => (y, -x),
            Dihedral::FlipX => (-x, y),
            Dihedral::FlipY => (x, -y),
            Dihedral::Transpose => (y, x),
            Dihedral::AntiTranspose => (-y, -x),
        };
        Cell::new(x, y)
    }
}
