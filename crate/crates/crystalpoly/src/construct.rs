//! Crystallized polyomino families built from boundary layers and plus trees.
//!
//! All builders work in (row, column) coordinates with row 0 at the top and
//! the top-left interior space (1, 1) on the W side of the checkerboard, so W
//! spaces are those with an even coordinate sum.

use crate::arrangement::{Arrangement, CellState};
use crate::bounds::{self, AlphaKind, Shape};
use crate::error::{Error, Result};
use crate::io::parse_polyomino;
use crate::polyomino::Polyomino;
use crate::transform;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::TopLeft, Corner::TopRight, Corner::BottomLeft, Corner::BottomRight];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn position(self, width: usize, height: usize) -> (usize, usize) {
        match self {
            Corner::TopLeft => (0, 0),
            Corner::TopRight => (0, width - 1),
            Corner::BottomLeft => (height - 1, 0),
            Corner::BottomRight => (height - 1, width - 1),
        }
    }
}

/// Set of corners, as a bitmask over `Corner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CornerSet(u8);

impl CornerSet {
    pub fn of(corners: &[Corner]) -> Self {
        CornerSet(corners.iter().fold(0, |m, c| m | c.bit()))
    }

    pub fn contains(self, c: Corner) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// Boundary layers between D1 (no corner filled) and D2 (one corner open).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    D1,
    D2(Corner),
    /// The filled corners; at most three.
    Between(CornerSet),
}

impl BoundaryKind {
    pub fn filled_corners(self) -> CornerSet {
        match self {
            BoundaryKind::D1 => CornerSet::default(),
            BoundaryKind::D2(open) => {
                CornerSet::of(&Corner::ALL.iter().copied().filter(|&c| c != open).collect::<Vec<_>>())
            }
            BoundaryKind::Between(m) => m,
        }
    }

    /// Normal form: D1 for no corners, D2 for three.
    pub fn from_filled(m: CornerSet) -> Result<Self> {
        match m.len() {
            0 => Ok(BoundaryKind::D1),
            1 | 2 => Ok(BoundaryKind::Between(m)),
            3 => Ok(BoundaryKind::D2(Corner::ALL.into_iter().find(|&c| !m.contains(c)).expect("one open"))),
            _ => Err(Error::BadBoundary("all four corners filled".into())),
        }
    }
}

/// Boundary ring per `kind`, interior undetermined.
pub fn boundary(width: usize, height: usize, kind: BoundaryKind) -> Result<Arrangement> {
    if width < 3 || height < 3 {
        return Err(Error::BadDimensions { width, height });
    }
    let filled = kind.filled_corners();
    if filled.len() > 3 {
        return Err(Error::BadBoundary("all four corners filled".into()));
    }
    let mut a = Arrangement::new(width, height, CellState::Undetermined)?;
    for r in 0..height {
        for c in 0..width {
            if r == 0 || c == 0 || r == height - 1 || c == width - 1 {
                a.set(r, c, CellState::Filled);
            }
        }
    }
    for corner in Corner::ALL {
        if !filled.contains(corner) {
            let (r, c) = corner.position(width, height);
            a.set(r, c, CellState::Empty);
        }
    }
    Ok(a)
}

/// The (N−2)×(N−2) interior template of an odd N×N square: B spaces filled,
/// W spaces in odd rows empty, the rest undetermined.
pub fn pn_template(n: usize) -> Result<Arrangement> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::BadDimensions { width: n, height: n });
    }
    let m = n - 2;
    let mut a = Arrangement::new(m, m, CellState::Undetermined)?;
    for i in 0..m {
        for j in 0..m {
            let (r, c) = (i + 1, j + 1);
            if (r + c) % 2 == 1 {
                a.set(i, j, CellState::Filled);
            } else if r % 2 == 1 {
                a.set(i, j, CellState::Empty);
            }
        }
    }
    Ok(a)
}

type Rc = (i32, i32);

/// Cell set under construction.
#[derive(Debug, Default, Clone)]
struct Canvas(BTreeSet<Rc>);

impl Canvas {
    /// Full ring of an h×w box with the listed corners left empty.
    fn ring(h: i32, w: i32, empty: &[Corner]) -> Canvas {
        let mut s = BTreeSet::new();
        for c in 0..w {
            s.insert((0, c));
            s.insert((h - 1, c));
        }
        for r in 0..h {
            s.insert((r, 0));
            s.insert((r, w - 1));
        }
        for corner in empty {
            let (r, c) = corner.position(w as usize, h as usize);
            s.remove(&(r as i32, c as i32));
        }
        Canvas(s)
    }

    /// B spaces of the outermost interior layer.
    fn outer_layer_b(&mut self, h: i32, w: i32) {
        for r in 1..h - 1 {
            for c in 1..w - 1 {
                if (r == 1 || r == h - 2 || c == 1 || c == w - 2) && (r + c) % 2 == 1 {
                    self.0.insert((r, c));
                }
            }
        }
    }

    fn interior_b(&mut self, h: i32, w: i32) {
        for r in 1..h - 1 {
            for c in 1..w - 1 {
                if (r + c) % 2 == 1 {
                    self.0.insert((r, c));
                }
            }
        }
    }

    fn plus(&mut self, (r, c): Rc) {
        self.0.extend([(r, c), (r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)]);
    }

    fn tree(&mut self, t: &PlusTree) {
        for &p in &t.centres {
            self.plus(p);
        }
    }

    fn finish(self) -> Polyomino {
        Polyomino::from_rc(self.0).expect("constructions are connected")
    }
}

/// Chain of plus centres two apart. Consecutive pluses share a tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusTree {
    pub centres: Vec<Rc>,
}

impl PlusTree {
    /// Centres along axis-parallel segments joining `corners`, root first.
    pub fn along(corners: &[Rc]) -> PlusTree {
        let mut centres: Vec<Rc> = Vec::new();
        for w in corners.windows(2) {
            let ((r0, c0), (r1, c1)) = (w[0], w[1]);
            let seg: Vec<Rc> = if r0 == r1 {
                (c0.min(c1)..=c0.max(c1)).step_by(2).map(|c| (r0, c)).collect()
            } else {
                (r0.min(r1)..=r0.max(r1)).step_by(2).map(|r| (r, c0)).collect()
            };
            for p in seg {
                if !centres.contains(&p) {
                    centres.push(p);
                }
            }
        }
        if centres.is_empty() {
            centres.extend(corners.first());
        }
        PlusTree { centres }
    }

    /// `count` centres from `root` stepping by `step`.
    pub fn straight(root: Rc, step: Rc, count: i32) -> PlusTree {
        PlusTree { centres: (0..count).map(|t| (root.0 + t * step.0, root.1 + t * step.1)).collect() }
    }
}

fn need_k(name: &str, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::UnsupportedAlpha(format!("{name} requires k >= 1")));
    }
    Ok(())
}

/// Even squares N = 6k + 4: 2k vertical trees rooted alternately at bottom and top.
pub fn s1(k: u32) -> Result<Polyomino> {
    need_k("s1", k)?;
    let k = k as i32;
    let n = 6 * k + 4;
    let mut cv = Canvas::ring(n, n, &[Corner::TopRight, Corner::BottomLeft, Corner::BottomRight]);
    cv.outer_layer_b(n, n);
    for j in 0..2 * k {
        let col = 3 + 3 * j;
        let t = if j % 2 == 0 {
            PlusTree::straight((n - 3, col), (-2, 0), 3 * k)
        } else {
            PlusTree::straight((2, col), (2, 0), 3 * k)
        };
        cv.tree(&t);
    }
    Ok(cv.finish())
}

/// The kr crystal S_l rotated a half turn into the top-left corner, with
/// vertical trees to its right and short horizontal trees below it.
fn square_with_gadget(k: u32, l: u32) -> Result<Polyomino> {
    let k = k as i32;
    let g = (1i32 << l) + 1;
    let n = 6 * k - 4 + g + 1;
    let mut cv = Canvas::ring(n, n, &Corner::ALL);
    cv.outer_layer_b(n, n);
    for (r, c) in kr(l)?.to_rc() {
        cv.0.insert((g - 1 - r, g - 1 - c));
    }
    // B spaces separating the gadget from the trees
    for r in 1..=g {
        for c in 1..=g {
            if (r == g || c == g) && (r + c) % 2 == 1 {
                cv.0.insert((r, c));
            }
        }
    }
    let len = (n - 4) / 2;
    for j in 0..2 * k - 2 {
        let col = g + 2 + 3 * j;
        let t = if j % 2 == 0 {
            PlusTree::straight((n - 3, col), (-2, 0), len)
        } else {
            PlusTree::straight((2, col), (2, 0), len)
        };
        cv.tree(&t);
    }
    let short = (g - 1) / 2;
    for i in 0..2 * k - 2 {
        let row = g + 2 + 3 * i;
        let t = if row % 2 == 0 {
            PlusTree::straight((row, 2), (0, 2), short)
        } else {
            PlusTree::straight((row, g), (0, -2), short)
        };
        cv.tree(&t);
    }
    Ok(cv.finish())
}

/// Even squares N = 6k + 2, seeded with the 5×5 kr crystal.
pub fn s2(k: u32) -> Result<Polyomino> {
    need_k("s2", k)?;
    square_with_gadget(k, 2)
}

/// Even squares N = 6k + 6, seeded with the 9×9 kr crystal.
pub fn s0(k: u32) -> Result<Polyomino> {
    need_k("s0", k)?;
    square_with_gadget(k, 3)
}

/// Pronic rectangles (3k+4)×(3k+3+2·extra): k L-shaped trees whose roots
/// alternate between the right side and the bottom.
fn pronic_l_trees(k: u32, extra: i32) -> Polyomino {
    let k = k as i32;
    let (h, w) = (3 * k + 4, 3 * k + 3 + 2 * extra);
    let mut cv = Canvas::ring(h, w, &[Corner::TopRight, Corner::BottomLeft, Corner::BottomRight]);
    cv.outer_layer_b(h, w);
    for i in 0..k {
        let corner = 3 + 3 * i;
        let to_right = (k - 1 - i) % 2 == 0;
        let last = if to_right { w - 3 } else { w - 4 };
        let bottom = if to_right { h - 4 } else { h - 3 };
        cv.tree(&PlusTree::along(&[(corner, last), (corner, corner), (bottom, corner)]));
    }
    cv.finish()
}

/// Pronics with N = 3k + 3.
pub fn r0(k: u32) -> Result<Polyomino> {
    need_k("r0", k)?;
    Ok(pronic_l_trees(k, 0))
}

/// Pronics with N = 3k + 4; the outermost tree carries two extra pluses.
pub fn r1(k: u32) -> Result<Polyomino> {
    need_k("r1", k)?;
    Ok(pronic_l_trees(k, 1))
}

const R2_K1: &str = "\
#########
#.#.#.#.#
##.#.#.##
#.#####.#
##.#.#.##
#.#.###.#
####.#.##
...####..
";

const R2_K2: &str = "\
###########
#.#.#.#.#.#
##.###.#.##
#.#.#.###.#
####.#.#.##
#.#.#####.#
##.#.#.#.##
#.#####.#.#
##.#.#.####
#.#.###.#.#
####.#.#.##
...######..
";

/// Pronics with N = 3k + 5: two interleaved spirals, A rooted in the bottom
/// row and B on the right side. k = 1, 2 are too small for both arms.
pub fn r2(k: u32) -> Result<Polyomino> {
    need_k("r2", k)?;
    match k {
        1 => return parse_polyomino(R2_K1),
        2 => return parse_polyomino(R2_K2),
        _ => {}
    }
    let k = k as i32;
    let (h, w) = if k % 2 == 1 { (3 * k + 5, 3 * k + 6) } else { (3 * k + 6, 3 * k + 5) };
    let mut cv = Canvas::ring(h, w, &[]);
    for c in [0, 1, 2, w - 2, w - 1] {
        cv.0.remove(&(h - 1, c));
    }
    cv.interior_b(h, w);
    cv.0.insert((h - 2, 2));
    let arm_a = spiral_arm(vec![(h - 3, 5), (h - 5, 5), (h - 5, 3)], (3, 3, w - 4, h - 7));
    let arm_b = spiral_arm(vec![(h - 4, w - 3), (h - 4, 8), (h - 8, 8), (h - 8, 6)], (6, 6, w - 7, h - 10));
    for arm in [arm_a, arm_b] {
        // interior B spaces are already filled, only centres are new
        cv.0.extend(arm.centres);
    }
    Ok(cv.finish())
}

/// Continues an inward rectangular spiral: up the left side, along the top,
/// down the right side, then left along the bottom with a jog up before the
/// next loop. Bounds are (left, top, right, bottom) centre lines.
fn spiral_arm(mut corners: Vec<Rc>, bounds: (i32, i32, i32, i32)) -> PlusTree {
    let (mut l, mut t, mut r, mut b) = bounds;
    loop {
        let (cr, cc) = *corners.last().expect("seeded");
        if t > cr {
            break;
        }
        corners.push((t, cc));
        if r < cc {
            break;
        }
        corners.push((t, r));
        if b < t {
            break;
        }
        corners.push((b, r));
        let nl = l + 6;
        if nl + 2 > r {
            break;
        }
        corners.push((b, nl + 2));
        if b - 4 < t + 6 {
            break;
        }
        corners.push((b - 4, nl + 2));
        corners.push((b - 4, nl));
        (l, t, r, b) = (nl, t + 6, r - 6, b - 6);
    }
    PlusTree::along(&corners)
}

/// The unique 7-tile one-hole crystal.
pub fn s_one() -> Polyomino {
    Polyomino::from_rc([(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]).expect("connected")
}

/// S_l: S_1 expanded l − 1 times, in a (2^l + 1)-square.
pub fn kr(l: u32) -> Result<Polyomino> {
    if l == 0 {
        return Err(Error::UnsupportedAlpha("kr requires l >= 1".into()));
    }
    let mut a = Arrangement::from_polyomino(&s_one());
    for _ in 1..l {
        a = transform::expand(&a)?;
    }
    a.to_polyomino()
}

const SQUARE_6: &str = "\
.####.
#.#.##
####.#
#.#.##
##.#.#
.####.
";

/// Ring with three empty corners and every interior B space filled.
fn ring_with_b(h: i32, w: i32) -> Polyomino {
    let mut cv = Canvas::ring(h, w, &[Corner::TopRight, Corner::BottomLeft, Corner::BottomRight]);
    cv.interior_b(h, w);
    cv.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    S1,
    S2,
    S0,
    R0,
    R1,
    R2,
    Kr,
}

impl Family {
    pub const ALL: [Family; 7] = [Family::S1, Family::S2, Family::S0, Family::R0, Family::R1, Family::R2, Family::Kr];

    pub fn name(self) -> &'static str {
        match self {
            Family::S1 => "s1",
            Family::S2 => "s2",
            Family::S0 => "s0",
            Family::R0 => "r0",
            Family::R1 => "r1",
            Family::R2 => "r2",
            Family::Kr => "kr",
        }
    }

    pub fn generate(self, k: u32) -> Result<Polyomino> {
        match self {
            Family::S1 => s1(k),
            Family::S2 => s2(k),
            Family::S0 => s0(k),
            Family::R0 => r0(k),
            Family::R1 => r1(k),
            Family::R2 => r2(k),
            Family::Kr => kr(k),
        }
    }

    /// (h, n) of the k-th member.
    pub fn closed_form(self, k: u64) -> (u64, u64) {
        match self {
            Family::S1 => (12 * k * k + 12 * k + 2, 24 * k * k + 36 * k + 11),
            Family::S2 => (12 * k * k + 4 * k - 1, 24 * k * k + 20 * k + 1),
            Family::S0 => (12 * k * k + 20 * k + 7, 24 * k * k + 52 * k + 25),
            Family::R0 => (3 * k * k + 5 * k + 1, 6 * k * k + 16 * k + 8),
            Family::R1 => (3 * k * k + 7 * k + 3, 6 * k * k + 20 * k + 14),
            Family::R2 => (3 * k * k + 9 * k + 5, 6 * k * k + 24 * k + 20),
            Family::Kr => ((4u64.pow(k as u32) - 1) / 3, (2u64.pow(2 * k as u32 + 1) + 3 * 2u64.pow(k as u32 + 1) + 4) / 3 - 1),
        }
    }

    /// The threshold the k-th member realizes.
    pub fn alpha(self, k: u64) -> AlphaKind {
        match self {
            Family::S1 => AlphaKind::square(6 * k + 4),
            Family::S2 => AlphaKind::square(6 * k + 2),
            Family::S0 => AlphaKind::square(6 * k + 6),
            Family::R0 => AlphaKind::pronic(3 * k + 3),
            Family::R1 => AlphaKind::pronic(3 * k + 4),
            Family::R2 => AlphaKind::pronic(3 * k + 5),
            Family::Kr => AlphaKind::square((1 << k) + 1),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnsupportedAlpha(format!("unknown family {s:?}")))
    }
}

/// A polyomino with h_α holes and α − h_α − C tiles in the α bounding box.
pub fn crystal_for_threshold(a: AlphaKind) -> Result<Polyomino> {
    let n = a.n;
    if n < 3 {
        return Err(Error::UnsupportedAlpha(a.to_string()));
    }
    match a.shape {
        Shape::Square if a.is_kr() => kr((n - 1).trailing_zeros()),
        Shape::Square if n % 2 == 1 => {
            let inner = crystal_for_threshold(AlphaKind::square(n.div_ceil(2)))?;
            transform::expand(&Arrangement::from_polyomino(&inner))?.to_polyomino()
        }
        Shape::Square => match n {
            4 => Ok(ring_with_b(4, 4)),
            6 => parse_polyomino(SQUARE_6),
            _ => match n % 6 {
                4 => s1(((n - 4) / 6) as u32),
                2 => s2(((n - 2) / 6) as u32),
                _ => s0(((n - 6) / 6) as u32),
            },
        },
        Shape::Pronic => match n {
            3 => Ok(ring_with_b(3, 4)),
            4 => Ok(ring_with_b(4, 5)),
            // no layout of the 5x6 box reaches minimal outer perimeter; a
            // leaf beside the 5x5 crystal gives the counts
            5 => {
                let mut rc = kr(2)?.to_rc();
                rc.push((2, 5));
                Polyomino::from_rc(rc)
            }
            _ => match n % 3 {
                0 => r0(((n - 3) / 3) as u32),
                1 => r1(((n - 4) / 3) as u32),
                _ => r2(((n - 5) / 3) as u32),
            },
        },
    }
}

/// Checks the counts a threshold crystal must have.
pub fn threshold_counts(a: AlphaKind) -> (u64, u64) {
    let ha = bounds::h_alpha(a);
    (ha, a.area() - ha - bounds::c_alpha(a).value)
}
