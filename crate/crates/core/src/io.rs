//! JSON file formats for tile systems, curves, circuits and functions.
//!
//! Emitters are pretty-printed with a trailing newline, so
//! `emit(parse(emit(x))) == emit(x)` byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atam::{bit_text, state_to_bits, Assembly, AtamError, Bit, Dir, GlueCurve, LayerSystem, TileSet};
use crate::permfn::{FiniteFunction, PermError};
use crate::railway::RailwayCircuit;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Atam(#[from] AtamError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Invalid(msg.into()))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file records always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueRecord {
    pub name: String,
    pub strength: u32,
    pub bit: Bit,
}

/// A tile type with its four glues by name; `null` is the null glue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileRecord {
    pub name: String,
    pub n: Option<String>,
    pub e: Option<String>,
    pub s: Option<String>,
    pub w: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacedTile {
    pub x: i32,
    pub y: i32,
    pub tile: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRecord {
    /// The input this seed encodes, most significant bit first.
    pub input: String,
    pub tiles: Vec<PlacedTile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileSetRecord {
    pub glues: Vec<GlueRecord>,
    pub tiles: Vec<TileRecord>,
}

/// A layer system on disk. `curve` and `v` may be left out and supplied
/// separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemRecord {
    pub temperature: u32,
    pub n: usize,
    pub tileset: TileSetRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<(i32, i32)>,
    pub seeds: Vec<SeedRecord>,
}

pub fn tileset_record(ts: &TileSet) -> TileSetRecord {
    let name = |g: Option<usize>| g.map(|g| ts.glue_info(g).name.clone());
    TileSetRecord {
        glues: ts
            .glues()
            .iter()
            .map(|g| GlueRecord { name: g.name.clone(), strength: g.strength, bit: g.bit })
            .collect(),
        tiles: ts
            .tiles()
            .iter()
            .map(|t| TileRecord {
                name: t.name.clone(),
                n: name(t.glue(Dir::N)),
                e: name(t.glue(Dir::E)),
                s: name(t.glue(Dir::S)),
                w: name(t.glue(Dir::W)),
            })
            .collect(),
    }
}

pub fn tileset_from_record(r: &TileSetRecord) -> Result<TileSet, FormatError> {
    let mut ts = TileSet::new();
    for g in &r.glues {
        if ts.glue_id(&g.name).is_ok() {
            return invalid(format!("glue {} is declared twice", g.name));
        }
        ts.glue(&g.name, g.strength, g.bit)?;
    }
    let lookup = |ts: &TileSet, g: &Option<String>| g.as_deref().map(|g| ts.glue_id(g)).transpose();
    for t in &r.tiles {
        let glues = [lookup(&ts, &t.n)?, lookup(&ts, &t.e)?, lookup(&ts, &t.s)?, lookup(&ts, &t.w)?];
        ts.add_tile(&t.name, glues)?;
    }
    Ok(ts)
}

fn seed_record(ts: &TileSet, n: usize, x: usize, a: &Assembly) -> SeedRecord {
    SeedRecord {
        input: bit_text(&state_to_bits(x as u32, n)),
        tiles: a
            .sorted()
            .into_iter()
            .map(|((x, y), t)| PlacedTile { x, y, tile: ts.tile(t).name.clone() })
            .collect(),
    }
}

pub fn system_record(sys: &LayerSystem) -> SystemRecord {
    SystemRecord {
        temperature: sys.temperature,
        n: sys.n,
        tileset: tileset_record(&sys.tileset),
        curve: Some(sys.curve.half_points()),
        v: Some(sys.v),
        seeds: sys.seeds.iter().enumerate().map(|(x, a)| seed_record(&sys.tileset, sys.n, x, a)).collect(),
    }
}

impl SystemRecord {
    /// Builds the system, taking the curve and vector from the arguments
    /// when given and from the record otherwise.
    pub fn build(&self, curve: Option<GlueCurve>, v: Option<(i32, i32)>) -> Result<LayerSystem, FormatError> {
        let ts = tileset_from_record(&self.tileset)?;
        let curve = match (curve, &self.curve) {
            (Some(c), _) => c,
            (None, Some(points)) => GlueCurve::from_half_points(points)?,
            (None, None) => return invalid("no curve given"),
        };
        let Some(v) = v.or(self.v) else {
            return invalid("no translation vector given");
        };
        if self.n == 0 || self.n > crate::railway::MAX_WIRES {
            return invalid(format!("bit width {} out of range", self.n));
        }
        if self.seeds.len() != 1 << self.n {
            return invalid(format!("expected {} seeds, found {}", 1u64 << self.n, self.seeds.len()));
        }
        let mut seeds = Vec::with_capacity(self.seeds.len());
        for (x, s) in self.seeds.iter().enumerate() {
            let want = bit_text(&state_to_bits(x as u32, self.n));
            if s.input != want {
                return invalid(format!("seed {x} is labelled {:?}, expected {want:?}", s.input));
            }
            let mut a = Assembly::new();
            for p in &s.tiles {
                if a.insert((p.x, p.y), ts.tile_id(&p.tile)?).is_some() {
                    return invalid(format!("seed {want} places two tiles at ({}, {})", p.x, p.y));
                }
            }
            seeds.push(a);
        }
        Ok(LayerSystem::new(ts, self.temperature, curve, v, self.n, seeds)?)
    }
}

pub fn emit_system(sys: &LayerSystem) -> String {
    pretty(&system_record(sys))
}

pub fn parse_system_record(text: &str) -> Result<SystemRecord, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_system(text: &str) -> Result<LayerSystem, FormatError> {
    parse_system_record(text)?.build(None, None)
}

/// A curve as a list of edge midpoints, e.g. `[[0.5, 0.0], [0.5, 1.0]]`.
pub fn emit_curve(c: &GlueCurve) -> String {
    pretty(&c.half_points())
}

pub fn parse_curve(text: &str) -> Result<GlueCurve, FormatError> {
    let points: Vec<(f64, f64)> = serde_json::from_str(text)?;
    Ok(GlueCurve::from_half_points(&points)?)
}

pub fn emit_circuit(c: &RailwayCircuit) -> String {
    pretty(c)
}

pub fn parse_circuit(text: &str) -> Result<RailwayCircuit, FormatError> {
    Ok(serde_json::from_str(text)?)
}

/// Functions are written in the text form `m t0 t1 ...`.
pub fn emit_function(f: &FiniteFunction) -> String {
    let mut s = f.to_text();
    s.push('\n');
    s
}

pub fn parse_function(text: &str) -> Result<FiniteFunction, FormatError> {
    Ok(text.trim().parse()?)
}

/// Parses `"x,y"` into a lattice vector.
pub fn parse_vector(text: &str) -> Result<(i32, i32), FormatError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => match (x.parse(), y.parse()) {
            (Ok(x), Ok(y)) => Ok((x, y)),
            _ => invalid(format!("vector {text:?} is not two integers")),
        },
        _ => invalid(format!("vector {text:?} should look like 1,0")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exemplars::{build_copy, build_zigzag, Interpretation};
    use crate::railway::GateFunction;

    #[test]
    fn system_round_trip_is_byte_exact() {
        let sys = build_zigzag(3, Interpretation::EpsTop).unwrap();
        let text = emit_system(&sys);
        let back = parse_system(&text).unwrap();
        assert_eq!(emit_system(&back), text);
        assert_eq!(back.tileset, sys.tileset);
        assert_eq!(back.seeds, sys.seeds);
    }

    #[test]
    fn curve_and_vector_can_come_from_outside() {
        let sys = build_copy(2).unwrap();
        let mut rec = system_record(&sys);
        rec.curve = None;
        rec.v = None;
        assert!(rec.build(None, None).is_err());
        let built = rec.build(Some(sys.curve.clone()), Some((1, 0))).unwrap();
        assert_eq!(built.curve, sys.curve);
    }

    #[test]
    fn rejects_bad_records() {
        let sys = build_copy(1).unwrap();
        let text = emit_system(&sys);
        let mut rec = parse_system_record(&text).unwrap();
        rec.seeds[0].input = "1".into();
        assert!(rec.build(None, None).is_err());
        let mut rec = parse_system_record(&text).unwrap();
        rec.tileset.tiles[0].n = Some("missing".into());
        assert!(rec.build(None, None).is_err());
        let mut rec = parse_system_record(&text).unwrap();
        rec.seeds.pop();
        assert!(rec.build(None, None).is_err());
        assert!(parse_system("{\"temperature\": 2}").is_err());
    }

    #[test]
    fn curve_text() {
        let c = GlueCurve::vertical(0, 0, 1);
        let text = emit_curve(&c);
        assert_eq!(parse_curve(&text).unwrap(), c);
        assert_eq!(parse_curve("[[0.5, 0], [0.5, 1]]").unwrap(), c);
        assert!(parse_curve("[[0.25, 0]]").is_err());
    }

    #[test]
    fn circuit_and_function_text() {
        let mut c = RailwayCircuit::empty(2).unwrap();
        c.push(0, 0, GateFunction::not()).unwrap();
        let text = emit_circuit(&c);
        assert_eq!(emit_circuit(&parse_circuit(&text).unwrap()), text);
        let f = FiniteFunction::new(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(emit_function(&f), "4 1 0 3 2\n");
        assert_eq!(parse_function("[1,0,3,2]").unwrap(), f);
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("2, -1").unwrap(), (2, -1));
        assert!(parse_vector("2").is_err());
        assert!(parse_vector("a,b").is_err());
    }
}
