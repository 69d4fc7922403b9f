//! Polyominoes with many holes: the tile bound g(h), crystallized
//! constructions, expansion and compression, dismantling, and an exhaustive
//! enumerator used as an independent oracle.

pub mod arrangement;
pub mod bounds;
pub mod cell;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod io;
pub mod polyomino;
pub mod topology;
pub mod transform;

pub use arrangement::{Arrangement, CellState};
pub use bounds::{AlphaKind, GEntry, Halves, Shape};
pub use cell::{Cell, Dihedral};
pub use construct::Family;
pub use error::{Error, Result};
pub use polyomino::Polyomino;
pub use topology::{summarize, TopologySummary};
