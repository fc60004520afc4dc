//! Glues, tile types and assemblies.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::geometry::{Dir, Pos};
use super::AtamError;

/// What a glue contributes when read along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bit {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "eps")]
    Eps,
}

impl Bit {
    pub fn from_bool(b: bool) -> Bit {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    pub fn value(self) -> Option<bool> {
        match self {
            Bit::Zero => Some(false),
            Bit::One => Some(true),
            Bit::Eps => None,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bit::Zero => "0",
            Bit::One => "1",
            Bit::Eps => "eps",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Glue {
    pub name: String,
    pub strength: u32,
    pub bit: Bit,
}

pub type GlueId = usize;
pub type TileId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileType {
    pub name: String,
    /// Glues indexed by [`Dir::index`]; `None` is the null glue.
    pub glues: [Option<GlueId>; 4],
}

impl TileType {
    pub fn glue(&self, d: Dir) -> Option<GlueId> {
        self.glues[d.index()]
    }
}

/// A glue table plus tile types referring to it by index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TileSet {
    glues: Vec<Glue>,
    tiles: Vec<TileType>,
    glue_names: HashMap<String, GlueId>,
    tile_names: HashMap<String, TileId>,
}

impl TileSet {
    pub fn new() -> Self {
        TileSet::default()
    }

    /// Returns the glue with this name, adding it if new. Reusing a name with
    /// different properties is an error.
    pub fn glue(&mut self, name: &str, strength: u32, bit: Bit) -> Result<GlueId, AtamError> {
        if name.is_empty() {
            return Err(AtamError::GlueConflict("glue names must be non-empty".into()));
        }
        if let Some(&id) = self.glue_names.get(name) {
            let g = &self.glues[id];
            if g.strength != strength || g.bit != bit {
                return Err(AtamError::GlueConflict(name.to_string()));
            }
            return Ok(id);
        }
        let id = self.glues.len();
        self.glues.push(Glue { name: name.to_string(), strength, bit });
        self.glue_names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds a tile type with glues given as `[N, E, S, W]`.
    pub fn add_tile(&mut self, name: &str, glues: [Option<GlueId>; 4]) -> Result<TileId, AtamError> {
        if self.tile_names.contains_key(name) {
            return Err(AtamError::DuplicateName(name.to_string()));
        }
        if let Some(g) = glues.iter().flatten().find(|&&g| g >= self.glues.len()) {
            return Err(AtamError::UnknownGlue(g.to_string()));
        }
        let id = self.tiles.len();
        self.tiles.push(TileType { name: name.to_string(), glues });
        self.tile_names.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn glues(&self) -> &[Glue] {
        &self.glues
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn glue_info(&self, id: GlueId) -> &Glue {
        &self.glues[id]
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id]
    }

    pub fn glue_id(&self, name: &str) -> Result<GlueId, AtamError> {
        self.glue_names.get(name).copied().ok_or_else(|| AtamError::UnknownGlue(name.to_string()))
    }

    pub fn tile_id(&self, name: &str) -> Result<TileId, AtamError> {
        self.tile_names.get(name).copied().ok_or_else(|| AtamError::UnknownTile(name.to_string()))
    }

    /// Bit carried by side `d` of tile `t`; `None` for the null glue.
    pub fn side_bit(&self, t: TileId, d: Dir) -> Option<Bit> {
        self.tiles[t].glue(d).map(|g| self.glues[g].bit)
    }

    /// Strength with which side `d` of `t` binds to side `d.opposite()` of `u`.
    pub fn bond(&self, t: TileId, d: Dir, u: TileId) -> u32 {
        match (self.tiles[t].glue(d), self.tiles[u].glue(d.opposite())) {
            (Some(a), Some(b)) if a == b => self.glues[a].strength,
            _ => 0,
        }
    }

    /// Reassigns the bit carried by each named glue.
    pub fn reinterpret(&mut self, bits: &HashMap<String, Bit>) -> Result<(), AtamError> {
        for (name, &bit) in bits {
            let id = self.glue_id(name)?;
            self.glues[id].bit = bit;
        }
        Ok(())
    }
}

/// A finite partial map from lattice positions to tile types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assembly {
    tiles: HashMap<Pos, TileId>,
}

impl Assembly {
    pub fn new() -> Self {
        Assembly::default()
    }

    pub fn from_tiles(tiles: impl IntoIterator<Item = (Pos, TileId)>) -> Self {
        Assembly { tiles: tiles.into_iter().collect() }
    }

    pub fn get(&self, p: Pos) -> Option<TileId> {
        self.tiles.get(&p).copied()
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.tiles.contains_key(&p)
    }

    pub fn insert(&mut self, p: Pos, t: TileId) -> Option<TileId> {
        self.tiles.insert(p, t)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Tiles sorted by `(y, x)`.
    pub fn sorted(&self) -> Vec<(Pos, TileId)> {
        let mut v: Vec<_> = self.tiles.iter().map(|(&p, &t)| (p, t)).collect();
        v.sort_by_key(|&((x, y), _)| (y, x));
        v
    }

    pub fn bounds(&self) -> Option<(Pos, Pos)> {
        let xs = self.tiles.keys().map(|p| p.0);
        let ys = self.tiles.keys().map(|p| p.1);
        Some((
            (xs.clone().min()?, ys.clone().min()?),
            (xs.max()?, ys.max()?),
        ))
    }

    /// Every tile is reachable from every other through shared edges.
    pub fn is_connected(&self) -> bool {
        let Some((&start, _)) = self.tiles.iter().next() else {
            return true;
        };
        let mut seen = std::collections::HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for d in Dir::ALL {
                let q = d.step(p);
                if self.tiles.contains_key(&q) && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        seen.len() == self.tiles.len()
    }

    pub fn restrict(&self, keep: impl Fn(Pos) -> bool) -> Assembly {
        Assembly { tiles: self.tiles.iter().filter(|(&p, _)| keep(p)).map(|(&p, &t)| (p, t)).collect() }
    }
}
