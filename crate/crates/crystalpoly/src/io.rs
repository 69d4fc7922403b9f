//! Text grids and SVG rendering.
//!
//! Grid text is a block of equal-length lines over `#` (filled), `.` (empty or
//! outside) and `?` (undetermined), listed top row first.

use crate::arrangement::{Arrangement, CellState};
use crate::error::{Error, Result};
use crate::polyomino::Polyomino;
use crate::topology::{dual_graph, holes, hole_graph};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Polyomino(Polyomino),
    Arrangement(Arrangement),
}

fn parse_rows(text: &str) -> Result<Vec<Vec<CellState>>> {
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    let end = lines.iter().rposition(|l| !l.trim().is_empty()).map_or(0, |i| i + 1);
    let lines = &lines[..end];
    let expected = lines.first().map_or(0, |l| l.chars().count());
    let mut rows = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        let found = line.chars().count();
        if found != expected {
            return Err(Error::RaggedRows { line: i + 1, found, expected });
        }
        let row = line
            .chars()
            .enumerate()
            .map(|(j, ch)| match ch {
                '#' => Ok(CellState::Filled),
                '.' => Ok(CellState::Empty),
                '?' => Ok(CellState::Undetermined),
                _ => Err(Error::IllegalChar { ch, line: i + 1, col: j + 1 }),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(rows)
}

/// A polyomino when no `?` is present, otherwise an arrangement.
pub fn parse_grid(text: &str) -> Result<Parsed> {
    let a = Arrangement::from_rows(parse_rows(text)?)?;
    if a.is_determined() {
        a.to_polyomino().map(Parsed::Polyomino)
    } else {
        Ok(Parsed::Arrangement(a))
    }
}

pub fn parse_polyomino(text: &str) -> Result<Polyomino> {
    let rows = parse_rows(text)?;
    for (i, r) in rows.iter().enumerate() {
        if let Some(j) = r.iter().position(|&s| s == CellState::Undetermined) {
            return Err(Error::IllegalChar { ch: '?', line: i + 1, col: j + 1 });
        }
    }
    Arrangement::from_rows(rows)?.to_polyomino()
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    Arrangement::from_rows(parse_rows(text)?)
}

pub fn to_text(p: &Polyomino) -> String {
    arrangement_to_text(&Arrangement::from_polyomino(p))
}

pub fn arrangement_to_text(a: &Arrangement) -> String {
    let mut s = String::with_capacity((a.width() + 1) * a.height());
    for row in a.rows() {
        s.extend(row.iter().map(|c| match c {
            CellState::Filled => '#',
            CellState::Empty => '.',
            CellState::Undetermined => '?',
        }));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Palette {
    pub tile: String,
    pub hole: String,
    pub background: String,
    pub annotation: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            tile: "#3b5b92".into(),
            hole: "#f4d35e".into(),
            background: "#ffffff".into(),
            annotation: "#c0392b".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    pub cell_size: u32,
    pub palette: Palette,
    /// Draw the dual graph and the hole graph over the tiles.
    pub overlay: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { format: Format::Ascii, cell_size: 16, palette: Palette::default(), overlay: false }
    }
}

pub fn render(p: &Polyomino, spec: &RenderSpec) -> String {
    match spec.format {
        Format::Ascii => to_text(p),
        Format::Svg => render_svg(p, spec),
    }
}

fn render_svg(p: &Polyomino, spec: &RenderSpec) -> String {
    let s = spec.cell_size as i32;
    let (w, h) = (p.width(), p.height());
    let pal = &spec.palette;
    // screen row of a cell: top row first
    let px = |x: i32| x * s;
    let py = |y: i32| (h - 1 - y) * s;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w * s,
        h * s,
        w * s,
        h * s
    );
    let _ = writeln!(out, r#"<rect class="background" width="{}" height="{}" fill="{}"/>"#, w * s, h * s, pal.background);
    let hs = holes(p);
    for hole in &hs {
        for c in hole {
            let _ = writeln!(
                out,
                r#"<rect class="hole" x="{}" y="{}" width="{s}" height="{s}" fill="{}"/>"#,
                px(c.x),
                py(c.y),
                pal.hole
            );
        }
    }
    for c in p.cells() {
        let _ = writeln!(
            out,
            r#"<rect class="tile" x="{}" y="{}" width="{s}" height="{s}" fill="{}" stroke="{}"/>"#,
            px(c.x),
            py(c.y),
            pal.tile,
            pal.background
        );
    }
    if spec.overlay {
        let half = s / 2;
        let centre = |x: i32, y: i32| (px(x) + half, py(y) + half);
        let dual = dual_graph(p);
        let cells = p.cells();
        for (u, adj) in dual.adjacency.iter().enumerate() {
            let (x1, y1) = centre(cells[u].x, cells[u].y);
            let _ = writeln!(out, r#"<circle class="dual-vertex" cx="{x1}" cy="{y1}" r="{}" fill="green"/>"#, s / 8 + 1);
            for &v in adj.iter().filter(|&&v| v > u) {
                let (x2, y2) = centre(cells[v].x, cells[v].y);
                let _ = writeln!(out, r#"<line class="dual-edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="green"/>"#);
            }
        }
        let hg = hole_graph(p);
        let centres: Vec<(i32, i32)> = hs.iter().map(|hole| centre(hole[0].x, hole[0].y)).collect();
        for (u, adj) in hg.adjacency.iter().enumerate() {
            let (x1, y1) = centres[u];
            let _ = writeln!(
                out,
                r#"<circle class="hole-vertex" cx="{x1}" cy="{y1}" r="{}" fill="{}"/>"#,
                s / 6 + 1,
                pal.annotation
            );
            for &v in adj.iter().filter(|&&v| v > u) {
                let (x2, y2) = centres[v];
                let _ = writeln!(
                    out,
                    r#"<line class="hole-edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}"/>"#,
                    pal.annotation
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_square() {
        let p = parse_polyomino("##\n##").unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn question_mark_gives_arrangement() {
        match parse_grid("#?#").unwrap() {
            Parsed::Arrangement(a) => assert_eq!((a.width(), a.height()), (3, 1)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_polyomino("#?#"), Err(Error::IllegalChar { ch: '?', .. })));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_grid("##\n#"), Err(Error::RaggedRows { line: 2, .. })));
        assert!(matches!(parse_grid("#x"), Err(Error::IllegalChar { ch: 'x', .. })));
        assert!(matches!(parse_grid("#.#"), Err(Error::Disconnected(_))));
    }

    #[test]
    fn ascii_round_trip_keeps_orientation() {
        let text = "###\n#.#\n##.\n";
        let p = parse_polyomino(text).unwrap();
        assert_eq!(to_text(&p), text);
        assert_eq!(parse_polyomino(&to_text(&p)).unwrap(), p);
    }

    #[test]
    fn trailing_newlines_and_crlf() {
        let p = parse_polyomino("##\r\n##\r\n\n").unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn svg_has_one_rect_per_tile() {
        let p = parse_polyomino("###\n#.#\n##.").unwrap();
        let svg = render(&p, &RenderSpec { format: Format::Svg, overlay: true, ..Default::default() });
        assert_eq!(svg.matches(r#"class="tile""#).count(), 7);
        assert_eq!(svg.matches(r#"class="hole""#).count(), 1);
        assert_eq!(svg.matches(r#"class="dual-vertex""#).count(), 7);
        assert_eq!(svg.matches(r#"class="hole-vertex""#).count(), 1);
    }
}
