//! Seeded growth under the temperature rule.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::geometry::{Dir, GlueCurve, Pos};
use super::tiles::{Assembly, TileId, TileSet};
use super::AtamError;

/// A tile attachment together with the sides that bound at that moment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub tile: TileId,
    pub pos: Pos,
    pub inputs: Vec<Dir>,
}

/// Where growth may happen: an inclusive box, optionally cut down to the
/// left-hand side of a curve.
#[derive(Debug, Clone)]
pub struct Region {
    pub min: Pos,
    pub max: Pos,
    pub confine: Option<GlueCurve>,
    /// Silently skip positions outside the box instead of failing.
    pub clip: bool,
}

impl Region {
    pub fn new(min: Pos, max: Pos) -> Self {
        Region { min, max, confine: None, clip: false }
    }

    pub fn confined(mut self, c: GlueCurve) -> Self {
        self.confine = Some(c);
        self
    }

    pub fn clipped(mut self) -> Self {
        self.clip = true;
        self
    }

    fn in_box(&self, p: Pos) -> bool {
        self.min.0 <= p.0 && p.0 <= self.max.0 && self.min.1 <= p.1 && p.1 <= self.max.1
    }

    fn in_curve(&self, p: Pos) -> bool {
        self.confine.as_ref().is_none_or(|c| c.is_left(p))
    }
}

/// Attachment order among simultaneously attachable positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Smallest `(y, x)` first.
    Canonical,
    /// First discovered first.
    Fifo,
}

#[derive(Debug, Clone)]
pub struct AssemblyRun {
    pub assembly: Assembly,
    pub sequence: Vec<Placement>,
    /// Every attachment had exactly one candidate tile type.
    pub deterministic: bool,
    /// First position where more than one tile type could attach.
    pub ambiguity: Option<Pos>,
}

/// Tile types that can stick at the empty position `p`, with their bound sides.
pub fn attachable_at(ts: &TileSet, temperature: u32, a: &Assembly, p: Pos) -> Vec<(TileId, Vec<Dir>)> {
    if a.contains(p) {
        return Vec::new();
    }
    let neighbours: Vec<(Dir, TileId)> = Dir::ALL
        .iter()
        .filter_map(|&d| a.get(d.step(p)).map(|t| (d, t)))
        .collect();
    if neighbours.is_empty() {
        return Vec::new();
    }
    (0..ts.tiles().len())
        .filter_map(|t| {
            let mut total = 0;
            let mut sides = Vec::new();
            for &(d, u) in &neighbours {
                let s = ts.bond(t, d, u);
                if s > 0 {
                    total += s;
                    sides.push(d);
                }
            }
            (total >= temperature).then_some((t, sides))
        })
        .collect()
}

/// Every placement that could happen next.
pub fn attachable(ts: &TileSet, temperature: u32, a: &Assembly) -> Vec<Placement> {
    let mut frontier: BTreeSet<(i32, i32)> = BTreeSet::new();
    for ((x, y), _) in a.sorted() {
        for d in Dir::ALL {
            let q = d.step((x, y));
            if !a.contains(q) {
                frontier.insert((q.1, q.0));
            }
        }
    }
    frontier
        .into_iter()
        .flat_map(|(y, x)| {
            attachable_at(ts, temperature, a, (x, y))
                .into_iter()
                .map(move |(tile, inputs)| Placement { tile, pos: (x, y), inputs })
        })
        .collect()
}

pub fn assemble(ts: &TileSet, temperature: u32, seed: &Assembly, region: &Region) -> Result<AssemblyRun, AtamError> {
    assemble_ordered(ts, temperature, seed, region, Order::Canonical)
}

pub fn assemble_ordered(
    ts: &TileSet,
    temperature: u32,
    seed: &Assembly,
    region: &Region,
    order: Order,
) -> Result<AssemblyRun, AtamError> {
    let mut a = seed.clone();
    let mut sequence = Vec::new();
    let mut ambiguity = None;
    let mut sorted: BTreeSet<(i32, i32)> = BTreeSet::new();
    let mut queue: VecDeque<Pos> = VecDeque::new();
    let mut queued: HashSet<Pos> = HashSet::new();

    let mut consider = |p: Pos, a: &Assembly, sorted: &mut BTreeSet<(i32, i32)>, queue: &mut VecDeque<Pos>| -> Result<(), AtamError> {
        if a.contains(p) || queued.contains(&p) || !region.in_curve(p) {
            return Ok(());
        }
        if attachable_at(ts, temperature, a, p).is_empty() {
            return Ok(());
        }
        if !region.in_box(p) {
            return if region.clip { Ok(()) } else { Err(AtamError::RegionOverflow { pos: p }) };
        }
        queued.insert(p);
        match order {
            Order::Canonical => {
                sorted.insert((p.1, p.0));
            }
            Order::Fifo => queue.push_back(p),
        }
        Ok(())
    };

    for (p, _) in seed.sorted() {
        for d in Dir::ALL {
            consider(d.step(p), &a, &mut sorted, &mut queue)?;
        }
    }
    loop {
        let next = match order {
            Order::Canonical => sorted.pop_first().map(|(y, x)| (x, y)),
            Order::Fifo => queue.pop_front(),
        };
        let Some(p) = next else { break };
        let options = attachable_at(ts, temperature, &a, p);
        if options.len() > 1 && ambiguity.is_none() {
            ambiguity = Some(p);
        }
        let (tile, inputs) = options.into_iter().next().expect("queued positions stay attachable");
        a.insert(p, tile);
        sequence.push(Placement { tile, pos: p, inputs });
        for d in Dir::ALL {
            consider(d.step(p), &a, &mut sorted, &mut queue)?;
        }
    }
    Ok(AssemblyRun { assembly: a, sequence, deterministic: ambiguity.is_none(), ambiguity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atam::tiles::Bit;

    fn strong_pair() -> (TileSet, TileId, TileId) {
        let mut ts = TileSet::new();
        let g = ts.glue("g", 2, Bit::Eps).unwrap();
        let s = ts.add_tile("seed", [None, Some(g), None, None]).unwrap();
        let t = ts.add_tile("t", [None, None, None, Some(g)]).unwrap();
        (ts, s, t)
    }

    #[test]
    fn single_strong_bond() {
        let (ts, s, t) = strong_pair();
        let seed = Assembly::from_tiles([((0, 0), s)]);
        let opts = attachable(&ts, 2, &seed);
        assert_eq!(opts, vec![Placement { tile: t, pos: (1, 0), inputs: vec![Dir::W] }]);
    }

    #[test]
    fn weak_bond_alone_is_not_enough() {
        let mut ts = TileSet::new();
        let g = ts.glue("g", 1, Bit::Eps).unwrap();
        let s = ts.add_tile("seed", [None, Some(g), None, None]).unwrap();
        ts.add_tile("t", [None, None, None, Some(g)]).unwrap();
        let seed = Assembly::from_tiles([((0, 0), s)]);
        assert!(attachable(&ts, 2, &seed).is_empty());
    }

    #[test]
    fn cooperative_corner() {
        let mut ts = TileSet::new();
        let a = ts.glue("a", 1, Bit::Eps).unwrap();
        let b = ts.glue("b", 1, Bit::Eps).unwrap();
        let west = ts.add_tile("west", [None, Some(a), None, None]).unwrap();
        let north = ts.add_tile("north", [None, None, Some(b), None]).unwrap();
        let link = ts.add_tile("link", [None; 4]).unwrap();
        let t = ts.add_tile("t", [Some(b), None, None, Some(a)]).unwrap();
        let seed = Assembly::from_tiles([((0, 0), west), ((0, 1), link), ((1, 1), north)]);
        let opts = attachable(&ts, 2, &seed);
        assert_eq!(opts, vec![Placement { tile: t, pos: (1, 0), inputs: vec![Dir::N, Dir::W] }]);
    }

    #[test]
    fn seed_without_partners_is_terminal() {
        let mut ts = TileSet::new();
        let s = ts.add_tile("seed", [None; 4]).unwrap();
        let seed = Assembly::from_tiles([((0, 0), s)]);
        let run = assemble(&ts, 2, &seed, &Region::new((-5, -5), (5, 5))).unwrap();
        assert_eq!(run.assembly, seed);
        assert!(run.deterministic);
    }

    #[test]
    fn ambiguity_is_flagged() {
        let (mut ts, s, _) = strong_pair();
        let g = ts.glue_id("g").unwrap();
        ts.add_tile("t2", [None, None, None, Some(g)]).unwrap();
        let seed = Assembly::from_tiles([((0, 0), s)]);
        let run = assemble(&ts, 2, &seed, &Region::new((-5, -5), (5, 5))).unwrap();
        assert!(!run.deterministic);
        assert_eq!(run.ambiguity, Some((1, 0)));
    }

    #[test]
    fn runaway_growth_overflows_or_clips() {
        let mut ts = TileSet::new();
        let g = ts.glue("g", 2, Bit::Eps).unwrap();
        let s = ts.add_tile("seed", [None, Some(g), None, None]).unwrap();
        ts.add_tile("row", [None, Some(g), None, Some(g)]).unwrap();
        let seed = Assembly::from_tiles([((0, 0), s)]);
        let region = Region::new((0, 0), (4, 0));
        assert_eq!(
            assemble(&ts, 2, &seed, &region).unwrap_err(),
            AtamError::RegionOverflow { pos: (5, 0) }
        );
        let run = assemble(&ts, 2, &seed, &region.clone().clipped()).unwrap();
        assert_eq!(run.assembly.len(), 5);
        let confined = Region::new((0, 0), (9, 0)).confined(GlueCurve::vertical(2, 0, 0));
        assert_eq!(assemble(&ts, 2, &seed, &confined).unwrap().assembly.len(), 3);
    }
}
