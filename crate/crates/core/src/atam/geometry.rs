//! Lattice geometry on doubled integer coordinates.
//!
//! Tile `(x, y)` has its centre at `(2x, 2y)`. Edge midpoints therefore have
//! exactly one odd coordinate and lattice vertices have two.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::AtamError;

pub type Pos = (i32, i32);
/// An edge midpoint in doubled coordinates.
pub type Mid = (i32, i32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn offset(self) -> (i32, i32) {
        match self {
            Dir::N => (0, 1),
            Dir::E => (1, 0),
            Dir::S => (0, -1),
            Dir::W => (-1, 0),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::E => Dir::W,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
        }
    }

    pub fn step(self, p: Pos) -> Pos {
        let (dx, dy) = self.offset();
        (p.0 + dx, p.1 + dy)
    }

    pub fn letter(self) -> char {
        match self {
            Dir::N => 'N',
            Dir::E => 'E',
            Dir::S => 'S',
            Dir::W => 'W',
        }
    }
}

/// Midpoint of the edge on side `d` of tile `p`.
pub fn edge_mid(p: Pos, d: Dir) -> Mid {
    let (dx, dy) = d.offset();
    (2 * p.0 + dx, 2 * p.1 + dy)
}

/// The two tiles sharing an edge, with the side of the first that faces it:
/// west then east for vertical edges, south then north for horizontal ones.
pub fn edge_tiles(m: Mid) -> (Pos, Pos, Dir) {
    if m.0.rem_euclid(2) == 1 {
        (((m.0 - 1) / 2, m.1 / 2), ((m.0 + 1) / 2, m.1 / 2), Dir::E)
    } else {
        ((m.0 / 2, (m.1 - 1) / 2), (m.0 / 2, (m.1 + 1) / 2), Dir::N)
    }
}

pub fn is_edge_mid(m: Mid) -> bool {
    (m.0.rem_euclid(2) == 1) != (m.1.rem_euclid(2) == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// A simple rectilinear cut through the lattice, closed off by vertical rays
/// running south from its first vertex and north from its last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlueCurve {
    mids: Vec<Mid>,
    vertices: Vec<(i32, i32)>,
}

fn endpoints(m: Mid) -> [(i32, i32); 2] {
    if m.0.rem_euclid(2) == 1 {
        [(m.0, m.1 - 1), (m.0, m.1 + 1)]
    } else {
        [(m.0 - 1, m.1), (m.0 + 1, m.1)]
    }
}

impl GlueCurve {
    /// Builds a curve from edge midpoints in doubled coordinates.
    pub fn new(mids: Vec<Mid>) -> Result<Self, AtamError> {
        let bad = |msg: String| Err(AtamError::CurveInvalid(msg));
        if mids.is_empty() {
            return bad("curve has no segments".into());
        }
        if let Some(m) = mids.iter().find(|&&m| !is_edge_mid(m)) {
            return bad(format!("({}, {}) is not an edge midpoint", m.0 as f64 / 2.0, m.1 as f64 / 2.0));
        }
        let first = endpoints(mids[0]);
        let mut vertices = if mids.len() == 1 {
            first.to_vec()
        } else {
            let next = endpoints(mids[1]);
            if next.contains(&first[1]) {
                first.to_vec()
            } else if next.contains(&first[0]) {
                vec![first[1], first[0]]
            } else {
                return bad("segments 0 and 1 are not connected".into());
            }
        };
        for (k, &m) in mids.iter().enumerate().skip(1) {
            let [a, b] = endpoints(m);
            let end = *vertices.last().expect("non-empty");
            if a == end {
                vertices.push(b);
            } else if b == end {
                vertices.push(a);
            } else {
                return bad(format!("segment {k} does not continue the path"));
            }
        }
        let distinct: HashSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return bad("curve is not simple".into());
        }
        let (start, end) = (vertices[0], *vertices.last().expect("non-empty"));
        if end.1 < start.1 {
            return bad("curve must run south to north".into());
        }
        let c = GlueCurve { mids, vertices };
        if c.vertices.iter().any(|&p| {
            (p.0 == start.0 && p.1 < start.1) || (p.0 == end.0 && p.1 > end.1)
        }) {
            return bad("end rays run back into the curve".into());
        }
        Ok(c)
    }

    /// Builds a curve from half-integer midpoints such as `(0.5, 2.0)`.
    pub fn from_half_points(points: &[(f64, f64)]) -> Result<Self, AtamError> {
        let mids = points
            .iter()
            .map(|&(x, y)| {
                let (dx, dy) = (x * 2.0, y * 2.0);
                if dx.fract() != 0.0 || dy.fract() != 0.0 || dx.abs() > 1e9 || dy.abs() > 1e9 {
                    return Err(AtamError::CurveInvalid(format!("({x}, {y}) is not on the half-integer lattice")));
                }
                Ok((dx as i32, dy as i32))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GlueCurve::new(mids)
    }

    /// A straight vertical cut east of column `x`, spanning rows `y0..=y1`.
    pub fn vertical(x: i32, y0: i32, y1: i32) -> Self {
        GlueCurve::new((y0..=y1).map(|y| (2 * x + 1, 2 * y)).collect()).expect("straight cut is valid")
    }

    pub fn mids(&self) -> &[Mid] {
        &self.mids
    }

    pub fn half_points(&self) -> Vec<(f64, f64)> {
        self.mids.iter().map(|&(x, y)| (x as f64 / 2.0, y as f64 / 2.0)).collect()
    }

    pub fn vertices(&self) -> &[(i32, i32)] {
        &self.vertices
    }

    pub fn translate(&self, v: (i32, i32)) -> GlueCurve {
        let (dx, dy) = (2 * v.0, 2 * v.1);
        GlueCurve {
            mids: self.mids.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
            vertices: self.vertices.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
        }
    }

    fn start(&self) -> (i32, i32) {
        self.vertices[0]
    }

    fn end(&self) -> (i32, i32) {
        *self.vertices.last().expect("non-empty")
    }

    /// Which side of the curve tile `p` lies on, by counting crossings of an
    /// eastward ray from its centre. Tile centres never lie on the curve.
    pub fn side(&self, p: Pos) -> Side {
        let (px, py) = (2 * p.0, 2 * p.1);
        let mut crossings = self
            .vertices
            .windows(2)
            .filter(|w| {
                let (a, b) = (w[0], w[1]);
                a.0 == b.0 && a.0 > px && a.1.min(b.1) < py && py < a.1.max(b.1)
            })
            .count();
        let (s, e) = (self.start(), self.end());
        if s.0 > px && py < s.1 {
            crossings += 1;
        }
        if e.0 > px && py > e.1 {
            crossings += 1;
        }
        if crossings % 2 == 1 {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn is_left(&self, p: Pos) -> bool {
        self.side(p) == Side::Left
    }

    /// True when the two curves, rays included, share any point.
    pub fn intersects(&self, other: &GlueCurve) -> bool {
        let mine: HashSet<_> = self.vertices.iter().collect();
        if other.vertices.iter().any(|v| mine.contains(v)) {
            return true;
        }
        ray_hits(self, other) || ray_hits(other, self)
    }

    /// Smallest tile-coordinate box containing every tile touching the curve.
    pub fn tile_bounds(&self) -> (Pos, Pos) {
        let xs = self.vertices.iter().map(|v| v.0);
        let ys = self.vertices.iter().map(|v| v.1);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        (((x0 - 1) / 2, (y0 - 1) / 2), ((x1 + 1) / 2, (y1 + 1) / 2))
    }
}

/// Does a ray of `a` meet any vertex or ray of `b`?
fn ray_hits(a: &GlueCurve, b: &GlueCurve) -> bool {
    let (s, e) = (a.start(), a.end());
    let on_down = |p: &(i32, i32)| p.0 == s.0 && p.1 < s.1;
    let on_up = |p: &(i32, i32)| p.0 == e.0 && p.1 > e.1;
    if b.vertices.iter().any(|p| on_down(p) || on_up(p)) {
        return true;
    }
    let (bs, be) = (b.start(), b.end());
    // Parallel rays on one line: same-direction rays always overlap, opposite
    // ones only when they reach past each other.
    (bs.0 == s.0) || (be.0 == e.0) || (be.0 == s.0 && be.1 < s.1) || (bs.0 == e.0 && bs.1 > e.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sides_of_a_vertical_cut() {
        let c = GlueCurve::vertical(0, 0, 4);
        assert_eq!(c.side((0, 0)), Side::Left);
        assert_eq!(c.side((1, 0)), Side::Right);
        assert_eq!(c.side((0, -7)), Side::Left);
        assert_eq!(c.side((-3, 20)), Side::Left);
        assert_eq!(c.side((5, 20)), Side::Right);
        let shifted = c.translate((2, 0));
        assert_eq!(shifted.side((1, 0)), Side::Left);
    }

    #[test]
    fn staircase_sides_and_translation() {
        // East then north edges of the tiles (2,-2), (1,-1), (0,0).
        let mut mids = Vec::new();
        for k in (0..=2).rev() {
            mids.push(edge_mid((k, -k), Dir::E));
            mids.push(edge_mid((k, -k), Dir::N));
        }
        let c = GlueCurve::new(mids).unwrap();
        for k in 0..=2 {
            assert!(c.is_left((k, -k)));
            assert!(!c.is_left((k + 1, -k)));
            assert!(!c.is_left((k, -k + 1)));
        }
        assert!(c.is_left((0, -1)));
        let v = (1, 1);
        let cv = c.translate(v);
        for p in [(0, 0), (3, -1), (-2, 5), (4, 4)] {
            assert_eq!(cv.side(p), c.side((p.0 - v.0, p.1 - v.1)));
        }
        assert!(!c.intersects(&cv));
        assert!(c.intersects(&c));
    }

    #[test]
    fn invalid_curves() {
        assert!(GlueCurve::new(vec![]).is_err());
        assert!(GlueCurve::new(vec![(1, 1)]).is_err());
        assert!(GlueCurve::new(vec![(1, 0), (1, 4)]).is_err());
        // Runs north to south.
        assert!(GlueCurve::new(vec![(1, 2), (1, 0)]).is_err());
        assert!(GlueCurve::new(vec![(1, 0), (0, -1)]).is_err());
        assert!(GlueCurve::from_half_points(&[(0.25, 0.0)]).is_err());
        assert_eq!(GlueCurve::from_half_points(&[(0.5, 0.0), (0.5, 1.0)]).unwrap(), GlueCurve::vertical(0, 0, 1));
    }

    #[test]
    fn edge_helpers() {
        assert_eq!(edge_mid((0, 0), Dir::E), (1, 0));
        assert_eq!(edge_tiles((1, 0)), ((0, 0), (1, 0), Dir::E));
        assert_eq!(edge_tiles((-2, -1)), ((-1, -1), (-1, 0), Dir::N));
        assert_eq!(edge_tiles(edge_mid((-3, 2), Dir::W)).1, (-3, 2));
    }
}
