//! Text and SVG drawings of circuits and assemblies.
//!
//! Output is deterministic so it can be compared against golden files.
//! Bit glues are drawn dark, `eps` glues grey and null glues not at all.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::atam::{Assembly, Bit, Dir, TileSet};
use crate::railway::RailwayCircuit;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unsupported format {0:?}; expected ascii or svg")]
    UnsupportedFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl FromStr for Format {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ascii" | "text" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            _ => Err(RenderError::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn render_circuit(c: &RailwayCircuit, format: Format) -> String {
    match format {
        Format::Ascii => circuit_ascii(c),
        Format::Svg => circuit_svg(c),
    }
}

pub fn render_assembly(ts: &TileSet, a: &Assembly, seed: Option<&Assembly>, format: Format) -> String {
    match format {
        Format::Ascii => assembly_ascii(ts, a, seed),
        Format::Svg => assembly_svg(ts, a, seed),
    }
}

/// One text row per wire with a spacer row between neighbours. Section `s`
/// draws `[s]` on each wire its gate covers and `|` between them.
fn circuit_ascii(c: &RailwayCircuit) -> String {
    let n = c.n();
    let digits = c.sections().saturating_sub(1).to_string().len();
    let label = n.saturating_sub(1).to_string().len();
    let mut rows: Vec<String> = (0..2 * n - 1)
        .map(|r| if r % 2 == 0 { format!("x{:<label$} -", r / 2) } else { " ".repeat(label + 3) })
        .collect();
    for g in c.gates() {
        for (r, row) in rows.iter_mut().enumerate() {
            let covered = |w: usize| g.lo() <= w && w <= g.hi();
            if r % 2 == 0 {
                if covered(r / 2) {
                    let _ = write!(row, "[{:>digits$}]-", g.section());
                } else {
                    row.push_str(&"-".repeat(digits + 3));
                }
            } else if covered(r / 2) && covered(r / 2 + 1) {
                let _ = write!(row, "|{}|", " ".repeat(digits));
                row.push(' ');
            } else {
                row.push_str(&" ".repeat(digits + 3));
            }
        }
    }
    let mut out = String::new();
    for row in rows {
        out.push_str(row.trim_end());
        out.push('\n');
    }
    out
}

const WIRE_GAP: usize = 30;
const SECTION_W: usize = 40;

fn circuit_svg(c: &RailwayCircuit) -> String {
    let n = c.n();
    let width = SECTION_W * (c.sections() + 1);
    let height = WIRE_GAP * (n + 1);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for w in 0..n {
        let y = WIRE_GAP * (w + 1);
        let _ = writeln!(s, r#"  <line x1="0" y1="{y}" x2="{width}" y2="{y}" stroke="black" stroke-width="1"/>"#);
        let _ = writeln!(s, r#"  <text x="2" y="{}" font-size="10">x{w}</text>"#, y - 3);
    }
    for g in c.gates() {
        let x = SECTION_W * g.section() + SECTION_W / 2;
        let y = WIRE_GAP * (g.lo() + 1) - WIRE_GAP / 3;
        let h = WIRE_GAP * (g.hi() - g.lo()) + 2 * WIRE_GAP / 3;
        let _ = writeln!(
            s,
            r#"  <rect x="{x}" y="{y}" width="{}" height="{h}" fill="white" stroke="black"><title>section {} wires {}..{}</title></rect>"#,
            SECTION_W - 10,
            g.section(),
            g.lo(),
            g.hi()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn glue_char(ts: &TileSet, t: usize, d: Dir) -> char {
    match ts.side_bit(t, d) {
        None => ' ',
        Some(Bit::Zero) => '0',
        Some(Bit::One) => '1',
        Some(Bit::Eps) => 'e',
    }
}

/// Each tile is a 3x3 block: its glue bits on the four sides around `#`
/// (`o` for seed tiles). North is up.
fn assembly_ascii(ts: &TileSet, a: &Assembly, seed: Option<&Assembly>) -> String {
    let Some(((x0, y0), (x1, y1))) = a.bounds() else {
        return String::new();
    };
    let mut out = String::new();
    for y in (y0..=y1).rev() {
        let mut lines = [String::new(), String::new(), String::new()];
        for x in x0..=x1 {
            match a.get((x, y)) {
                Some(t) => {
                    let body = if seed.is_some_and(|s| s.contains((x, y))) { 'o' } else { '#' };
                    lines[0].extend([' ', glue_char(ts, t, Dir::N), ' ']);
                    lines[1].extend([glue_char(ts, t, Dir::W), body, glue_char(ts, t, Dir::E)]);
                    lines[2].extend([' ', glue_char(ts, t, Dir::S), ' ']);
                }
                None => {
                    lines[0].push_str("   ");
                    lines[1].push_str(" . ");
                    lines[2].push_str("   ");
                }
            }
        }
        for l in lines {
            out.push_str(l.trim_end());
            out.push('\n');
        }
    }
    out
}

const CELL: i32 = 40;

fn assembly_svg(ts: &TileSet, a: &Assembly, seed: Option<&Assembly>) -> String {
    let Some(((x0, y0), (x1, y1))) = a.bounds() else {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"0\" height=\"0\"/>\n".to_string();
    };
    let width = CELL * (x1 - x0 + 1);
    let height = CELL * (y1 - y0 + 1);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for ((x, y), t) in a.sorted() {
        let px = CELL * (x - x0);
        let py = CELL * (y1 - y);
        let fill = if seed.is_some_and(|s| s.contains((x, y))) { "#ddeeff" } else { "white" };
        let _ = writeln!(
            s,
            r##"  <rect x="{px}" y="{py}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#cccccc"><title>{} at ({x}, {y})</title></rect>"##,
            xml_escape(&ts.tile(t).name)
        );
        for d in Dir::ALL {
            let colour = match ts.side_bit(t, d) {
                None => continue,
                Some(Bit::Eps) => "#999999",
                Some(_) => "#000000",
            };
            let (ax, ay, bx, by) = match d {
                Dir::N => (px + 4, py + 3, px + CELL - 4, py + 3),
                Dir::S => (px + 4, py + CELL - 3, px + CELL - 4, py + CELL - 3),
                Dir::E => (px + CELL - 3, py + 4, px + CELL - 3, py + CELL - 4),
                Dir::W => (px + 3, py + 4, px + 3, py + CELL - 4),
            };
            let _ = writeln!(
                s,
                r#"  <line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="{colour}" stroke-width="4"/>"#
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
