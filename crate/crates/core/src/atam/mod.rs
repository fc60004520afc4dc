//! Abstract tile assembly with bit-encoding glues, and the link from
//! layer-computing tile sets to railway circuits.

mod assemble;
mod geometry;
mod layer;
mod tiles;

use thiserror::Error;

pub use assemble::{assemble, assemble_ordered, attachable, attachable_at, AssemblyRun, Order, Placement, Region};
pub use geometry::{edge_mid, edge_tiles, Dir, GlueCurve, Mid, Pos, Side};
pub use layer::{
    bit_text, bits_along_curve, bits_to_state, check_layer, check_layer_computes, compile_to_railway, iterate_layers,
    read_curve, state_to_bits, BitString, LayerReport, LayerSystem, PositionReport, UncleanSite,
};
pub use tiles::{Assembly, Bit, Glue, GlueId, TileId, TileSet, TileType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtamError {
    #[error("invalid glue curve: {0}")]
    CurveInvalid(String),
    #[error("curve segment at ({}, {}) touches no tile", .mid.0 as f64 / 2.0, .mid.1 as f64 / 2.0)]
    CurveOffAssembly { mid: Mid },
    #[error("growth reached {pos:?} outside the region")]
    RegionOverflow { pos: Pos },
    #[error("unknown glue {0}")]
    UnknownGlue(String),
    #[error("unknown tile type {0}")]
    UnknownTile(String),
    #[error("duplicate tile type {0}")]
    DuplicateName(String),
    #[error("glue {0} redeclared with different strength or bit")]
    GlueConflict(String),
    #[error("invalid layer system: {0}")]
    InvalidSystem(String),
    #[error("seed for input {input} reads {read:?} along the curve")]
    SeedMismatch { input: String, read: String },
    #[error("seed for input {input} has a tile at {pos:?} right of the curve")]
    SeedOutsideCurve { input: String, pos: Pos },
    #[error("curve meets its translate after {0} steps")]
    CurveOverlap(usize),
    #[error("growth for input {input} is not deterministic at {pos:?}")]
    Nondeterministic { input: String, pos: Pos },
    #[error("growth for input {input} depends on tiles beyond the translated curve")]
    NonConfinedGrowth { input: String },
    #[error("output for input {input} has {found} bits, expected {expected}")]
    OutputWidth { input: String, found: usize, expected: usize },
    #[error("layer does not map cleanly to gates at {}", format_sites(.0))]
    Unclean(Vec<UncleanSite>),
    #[error("report is not valid")]
    NotValidReport,
    #[error("circuit compilation needs at least 3 bits, got {0}")]
    NTooSmall(usize),
    #[error("position {pos:?} reads an edge that carries no wire")]
    MissingWire { pos: Pos },
    #[error("inputs of position {pos:?} are on non-adjacent wires {wires:?}")]
    NonContiguousInputs { pos: Pos, wires: Vec<usize> },
    #[error("position {pos:?} maps input {input} to different outputs")]
    GateConflict { pos: Pos, input: u32 },
    #[error("wires after the last section do not follow the translated curve")]
    WireOrderMismatch,
    #[error("compiled circuit disagrees with the layer on input {input}")]
    FunctionMismatch { input: String },
    #[error("cut {layer} for input {input} reads {read}, expected {expected}")]
    ReadMismatch { input: String, layer: usize, read: String, expected: String },
}

fn format_sites(sites: &[UncleanSite]) -> String {
    sites.iter().map(|s| format!("z_{} {:?} ({})", s.index, s.pos, s.reason)).collect::<Vec<_>>().join(", ")
}
