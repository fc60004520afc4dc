//! Builders for reference layer systems: a plain copy layer, iterated Boolean
//! circuit (IBC) tile sets, a zig-zig binary counter and a zig-zag counter.
//!
//! Every builder returns a [`LayerSystem`] holding the tile set, the curve,
//! the translation vector and one seed assembly per input.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::atam::{edge_mid, Assembly, AtamError, Bit, Dir, GlueCurve, GlueId, LayerSystem, TileSet};
use crate::counterlab::random_gate;
use crate::railway::{GateFunction, RailwayCircuit};

pub const TEMPERATURE: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExemplarError {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("unknown glue interpretation {0:?}; expected all-bits or eps-top")]
    UnknownInterpretation(String),
    #[error(transparent)]
    Atam(#[from] AtamError),
}

/// Which constant glues of the zig-zag system count as bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    /// Every information-carrying glue encodes a bit.
    AllBits,
    /// The carry-in glue crossing the cut is read as carrying no bit.
    EpsTop,
}

impl FromStr for Interpretation {
    type Err = ExemplarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "all-bits" | "allbits" => Ok(Interpretation::AllBits),
            "eps-top" | "epstop" => Ok(Interpretation::EpsTop),
            _ => Err(ExemplarError::UnknownInterpretation(s.to_string())),
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interpretation::AllBits => "all-bits",
            Interpretation::EpsTop => "eps-top",
        })
    }
}

fn bit(b: bool) -> Bit {
    Bit::from_bool(b)
}

fn b01(b: bool) -> u8 {
    b as u8
}

/// Builds a tile set and panics on internal naming mistakes, which would be
/// bugs in the builders rather than user errors.
struct Tiles {
    ts: TileSet,
}

impl Tiles {
    fn new() -> Self {
        Tiles { ts: TileSet::new() }
    }

    fn g(&mut self, name: &str, strength: u32, b: Bit) -> Option<GlueId> {
        Some(self.ts.glue(name, strength, b).expect("builder glue names are consistent"))
    }

    fn bitg(&mut self, name: &str, strength: u32, v: bool) -> Option<GlueId> {
        self.g(&format!("{name}:{}", b01(v)), strength, bit(v))
    }

    /// Glues are given as `[N, E, S, W]`.
    fn tile(&mut self, name: &str, glues: [Option<GlueId>; 4]) -> usize {
        self.ts.add_tile(name, glues).expect("builder tile names are unique")
    }

    fn id(&self, name: &str) -> usize {
        self.ts.tile_id(name).expect("tile was added")
    }
}

/// A layer of `n` bit rows framed by an `eps` seam row below and above. Each
/// column copies the previous one unchanged.
pub fn build_copy(n: usize) -> Result<LayerSystem, ExemplarError> {
    if n == 0 || n > 12 {
        return Err(ExemplarError::InvalidSpec("copy layer needs 1..=12 bits".into()));
    }
    let top = n as i32 + 1;
    let mut t = Tiles::new();
    let base = t.g("cp-base", 2, Bit::Eps);
    let lid = t.g("cp-lid", 1, Bit::Eps);
    let chain: Vec<_> = (0..=n).map(|r| t.g(&format!("cp-k{r}"), 1, Bit::Eps)).collect();
    t.tile("base", [chain[0], base, None, base]);
    t.tile("lid", [None, lid, chain[n], lid]);
    for r in 1..=n {
        for v in [false, true] {
            let row = t.bitg(&format!("cp-r{r}"), 1, v);
            t.tile(&format!("copy-r{r}-{}", b01(v)), [chain[r], row, chain[r - 1], row]);
        }
    }
    t.tile("seed-base", [None, base, None, None]);
    t.tile("seed-lid", [None, lid, None, None]);
    for r in 1..=n {
        for v in [false, true] {
            let row = t.bitg(&format!("cp-r{r}"), 1, v);
            t.tile(&format!("seed-r{r}-{}", b01(v)), [None, row, None, None]);
        }
    }
    let seeds = (0..1u32 << n)
        .map(|x| {
            let mut a = Assembly::new();
            a.insert((0, 0), t.id("seed-base"));
            a.insert((0, top), t.id("seed-lid"));
            for r in 1..=n {
                let v = (x >> (n - r)) & 1;
                a.insert((0, r as i32), t.id(&format!("seed-r{r}-{v}")));
            }
            a
        })
        .collect();
    Ok(LayerSystem::new(t.ts, TEMPERATURE, GlueCurve::vertical(0, 0, top), (1, 0), n, seeds)?)
}

/// Gate tables for an IBC tile set.
///
/// Each layer has `n + 1` gates in this order: the one-bit gate at the top of
/// the odd diagonal, the two-bit gates of the odd diagonal from top to
/// bottom, the one-bit gate at its bottom, then the two-bit gates of the even
/// diagonal from top to bottom. Two-bit tables map `2*south + west` to
/// `2*east + north`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IbcSpec {
    pub n: usize,
    pub layers: usize,
    pub gates: Vec<Vec<Vec<u32>>>,
}

impl IbcSpec {
    /// Widths of the gates of one layer, in table order.
    pub fn widths(n: usize) -> Vec<usize> {
        let m = n / 2 + 1;
        let mut w = vec![1];
        w.extend(std::iter::repeat_n(2, m - 2));
        w.push(1);
        w.extend(std::iter::repeat_n(2, m - 1));
        w
    }

    pub fn identity(n: usize, layers: usize) -> Result<Self, ExemplarError> {
        check_ibc_shape(n, layers)?;
        let layer: Vec<Vec<u32>> = Self::widths(n).iter().map(|&w| (0..1u32 << w).collect()).collect();
        Ok(IbcSpec { n, layers, gates: vec![layer; layers] })
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize, layers: usize) -> Result<Self, ExemplarError> {
        check_ibc_shape(n, layers)?;
        let gates = (0..layers)
            .map(|_| Self::widths(n).iter().map(|&w| random_gate(rng, w).table().to_vec()).collect())
            .collect();
        Ok(IbcSpec { n, layers, gates })
    }

    pub fn validate(&self) -> Result<(), ExemplarError> {
        check_ibc_shape(self.n, self.layers)?;
        if self.gates.len() != self.layers {
            return Err(ExemplarError::InvalidSpec(format!("expected {} layers of gates", self.layers)));
        }
        let widths = Self::widths(self.n);
        for (l, layer) in self.gates.iter().enumerate() {
            if layer.len() != widths.len() {
                return Err(ExemplarError::InvalidSpec(format!("layer {l} needs {} gates", widths.len())));
            }
            for (g, (table, &w)) in layer.iter().zip(&widths).enumerate() {
                if GateFunction::new(w, table.clone()).is_err() {
                    return Err(ExemplarError::InvalidSpec(format!("layer {l} gate {g} is not a {w}-bit table")));
                }
            }
        }
        Ok(())
    }

    fn m(&self) -> usize {
        self.n / 2 + 1
    }
}

fn check_ibc_shape(n: usize, layers: usize) -> Result<(), ExemplarError> {
    if n < 2 || n % 2 == 1 || n > 16 {
        return Err(ExemplarError::InvalidSpec(format!("IBC width must be even and in 2..=16, got {n}")));
    }
    if layers == 0 {
        return Err(ExemplarError::InvalidSpec("IBC needs at least one layer".into()));
    }
    Ok(())
}

/// Bit of `v` at position `i` of a `w`-bit field, most significant first.
fn field_bit(v: u32, w: usize, i: usize) -> bool {
    (v >> (w - 1 - i)) & 1 == 1
}

/// The IBC circuit written down directly from the gate tables: for each layer
/// the odd diagonal, then the two seams as identity sections, then the even
/// diagonal.
pub fn ibc_circuit(spec: &IbcSpec) -> Result<RailwayCircuit, ExemplarError> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m());
    let mut c = RailwayCircuit::empty(n).map_err(|e| ExemplarError::InvalidSpec(e.to_string()))?;
    let push = |c: &mut RailwayCircuit, lo: usize, w: usize, t: &[u32]| {
        c.push(lo, lo + w - 1, GateFunction::new(w, t.to_vec()).expect("validated")).expect("fits");
    };
    for layer in &spec.gates {
        push(&mut c, n - 1, 1, &layer[0]);
        for j in 1..m - 1 {
            push(&mut c, 2 * (m - 2 - j) + 1, 2, &layer[j]);
        }
        push(&mut c, 0, 1, &layer[m - 1]);
        push(&mut c, 0, 1, &[0, 1]);
        push(&mut c, 0, 1, &[0, 1]);
        for j in 1..m {
            push(&mut c, 2 * (m - 1 - j), 2, &layer[m - 1 + j]);
        }
    }
    Ok(c)
}

/// The IBC tile set for `spec` on the plane, with diagonal layers.
///
/// Layer `L` fills the odd diagonal `x + y = 2L + 1` and the even diagonal
/// `x + y = 2L + 2`; the seed occupies diagonals `-1` and `0`.
pub fn build_ibc(spec: &IbcSpec) -> Result<LayerSystem, ExemplarError> {
    spec.validate()?;
    let (n, m, period) = (spec.n, spec.m(), spec.layers);
    let mut t = Tiles::new();
    // Glue names identify the consumer: sublayer, diagonal parity, index, side.
    let bit_glue = |t: &mut Tiles, layer: usize, diag: char, j: usize, side: char, v: bool| {
        t.bitg(&format!("ibc{}{diag}{j}{side}", layer % period), 1, v)
    };
    let eps_glue = |t: &mut Tiles, layer: usize, diag: char, j: usize, side: char, s: u32| {
        t.g(&format!("ibc{}{diag}{j}{side}", layer % period), s, Bit::Eps)
    };

    for (l, gates) in spec.gates.iter().enumerate() {
        let nl = l + 1;
        // Odd diagonal.
        for j in 0..m {
            let w = if j == 0 || j == m - 1 { 1 } else { 2 };
            for input in 0..1u32 << w {
                let out = gates[j][input as usize];
                let name = format!("ibc{l}a{j}-{input}");
                let glues = if j == 0 {
                    // Top end: bit from the south, seam to the west.
                    let (ib, ob) = (input == 1, out == 1);
                    [
                        eps_glue(&mut t, l, 'b', 0, 'S', 2),
                        bit_glue(&mut t, l, 'b', 1, 'W', ob),
                        bit_glue(&mut t, l, 'a', 0, 'S', ib),
                        eps_glue(&mut t, l, 'a', 0, 'W', 1),
                    ]
                } else if j == m - 1 {
                    // Bottom end: bit from the west, seam to the south.
                    let (ib, ob) = (input == 1, out == 1);
                    [
                        bit_glue(&mut t, l, 'b', j, 'S', ob),
                        eps_glue(&mut t, l, 'b', m, 'W', 2),
                        eps_glue(&mut t, l, 'a', j, 'S', 1),
                        bit_glue(&mut t, l, 'a', j, 'W', ib),
                    ]
                } else {
                    [
                        bit_glue(&mut t, l, 'b', j, 'S', field_bit(out, 2, 1)),
                        bit_glue(&mut t, l, 'b', j + 1, 'W', field_bit(out, 2, 0)),
                        bit_glue(&mut t, l, 'a', j, 'S', field_bit(input, 2, 0)),
                        bit_glue(&mut t, l, 'a', j, 'W', field_bit(input, 2, 1)),
                    ]
                };
                t.tile(&name, glues);
            }
        }
        // Even diagonal: seams at both ends, two-bit gates between.
        let top = [None, eps_glue(&mut t, nl, 'a', 0, 'W', 1), eps_glue(&mut t, l, 'b', 0, 'S', 2), None];
        t.tile(&format!("ibc{l}b0"), top);
        let bottom = [eps_glue(&mut t, nl, 'a', m - 1, 'S', 1), None, None, eps_glue(&mut t, l, 'b', m, 'W', 2)];
        t.tile(&format!("ibc{l}b{m}"), bottom);
        for j in 1..m {
            for input in 0..4u32 {
                let out = gates[m - 1 + j][input as usize];
                let glues = [
                    bit_glue(&mut t, nl, 'a', j - 1, 'S', field_bit(out, 2, 1)),
                    bit_glue(&mut t, nl, 'a', j, 'W', field_bit(out, 2, 0)),
                    bit_glue(&mut t, l, 'b', j, 'S', field_bit(input, 2, 0)),
                    bit_glue(&mut t, l, 'b', j, 'W', field_bit(input, 2, 1)),
                ];
                t.tile(&format!("ibc{l}b{j}-{input}"), glues);
            }
        }
    }

    // Seed tiles imitate the even diagonal of the last layer of a period.
    t.tile("seed-link", [None; 4]);
    let top = [None, eps_glue(&mut t, 0, 'a', 0, 'W', 1), None, None];
    t.tile("seed-b0", top);
    let bottom = [eps_glue(&mut t, 0, 'a', m - 1, 'S', 1), None, None, None];
    t.tile(&format!("seed-b{m}"), bottom);
    for j in 1..m {
        for e in [false, true] {
            for nb in [false, true] {
                let glues = [bit_glue(&mut t, 0, 'a', j - 1, 'S', nb), bit_glue(&mut t, 0, 'a', j, 'W', e), None, None];
                t.tile(&format!("seed-b{j}-{}{}", b01(e), b01(nb)), glues);
            }
        }
    }

    let mut mids = Vec::new();
    for j in (0..=m as i32).rev() {
        mids.push(edge_mid((j, -j), Dir::E));
        mids.push(edge_mid((j, -j), Dir::N));
    }
    let curve = GlueCurve::new(mids)?;

    let seeds = (0..1u32 << n)
        .map(|x| {
            let mut a = Assembly::new();
            for j in 0..m as i32 {
                a.insert((j, -1 - j), t.id("seed-link"));
            }
            a.insert((0, 0), t.id("seed-b0"));
            a.insert((m as i32, -(m as i32)), t.id(&format!("seed-b{m}")));
            for j in 1..m {
                // Bits run south to north: east then north edge of each tile.
                let k = 2 * (m - 1 - j);
                let e = field_bit(x, n, k);
                let nb = field_bit(x, n, k + 1);
                a.insert((j as i32, -(j as i32)), t.id(&format!("seed-b{j}-{}{}", b01(e), b01(nb))));
            }
            a
        })
        .collect();
    let v = (period as i32, period as i32);
    Ok(LayerSystem::new(t.ts, TEMPERATURE, curve, v, n, seeds)?)
}

/// Number of non-seed tile types in an IBC tile set.
pub fn ibc_tile_types(n: usize, layers: usize) -> usize {
    layers * (4 * (n - 1) + 2 * 2 + 2)
}

/// A six-bit, one-layer gate assignment found by seeded random search
/// (`search_ibc(6, 1, 20_000, 2)`). Its circuit reaches a counter value of 63.
pub fn tuned_ibc6() -> IbcSpec {
    IbcSpec { n: 6, layers: 1, gates: vec![TUNED_IBC6.iter().map(|t| t.to_vec()).collect()] }
}

const TUNED_IBC6: [&[u32]; 7] = [
    &[1, 0],
    &[3, 1, 2, 0],
    &[3, 1, 0, 2],
    &[0, 1],
    &[2, 0, 1, 3],
    &[3, 1, 0, 2],
    &[2, 0, 3, 1],
];

/// Seeded random search over IBC gate assignments, keeping the one whose
/// circuit has the largest counter value.
pub fn search_ibc(n: usize, layers: usize, count: usize, seed: u64) -> Result<(IbcSpec, usize), ExemplarError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best = IbcSpec::identity(n, layers)?;
    let mut best_k = 1;
    for _ in 0..count {
        let spec = IbcSpec::random(&mut rng, n, layers)?;
        let k = ibc_circuit(&spec)?.counter_value().counter_value;
        if k > best_k {
            best_k = k;
            best = spec;
        }
    }
    Ok((best, best_k))
}

/// A column-by-column binary incrementer on `n` rows, read with carries as
/// bits. Row 0 holds the most significant bit; a lid tile above the top row
/// starts each column and injects the carry.
pub fn build_zigzig(n: usize) -> Result<LayerSystem, ExemplarError> {
    if n < 2 || n > 12 {
        return Err(ExemplarError::InvalidSpec("zig-zig needs 2..=12 bits".into()));
    }
    let mut t = Tiles::new();
    let lid = t.g("zz-lid", 2, Bit::Eps);
    let inject = t.bitg(&format!("zz-c{}", n - 1), 1, true);
    t.tile("lid", [None, lid, inject, lid]);
    for i in 0..n {
        for b in [false, true] {
            for c in [false, true] {
                let west = t.bitg(&format!("zz-r{i}"), 1, b);
                let east = t.bitg(&format!("zz-r{i}"), 1, b ^ c);
                let north = t.bitg(&format!("zz-c{i}"), 1, c);
                let south = if i == 0 { None } else { t.bitg(&format!("zz-c{}", i - 1), 1, b & c) };
                t.tile(&format!("inc-r{i}-{}{}", b01(b), b01(c)), [north, east, south, west]);
            }
        }
    }
    t.tile("seed-lid", [None, lid, None, None]);
    for i in 0..n {
        for b in [false, true] {
            let east = t.bitg(&format!("zz-r{i}"), 1, b);
            t.tile(&format!("seed-r{i}-{}", b01(b)), [None, east, None, None]);
        }
    }
    let seeds = (0..1u32 << n)
        .map(|x| {
            let mut a = Assembly::new();
            a.insert((0, n as i32), t.id("seed-lid"));
            for i in 0..n {
                a.insert((0, i as i32), t.id(&format!("seed-r{i}-{}", b01(field_bit(x, n, i)))));
            }
            a
        })
        .collect();
    Ok(LayerSystem::new(t.ts, TEMPERATURE, GlueCurve::vertical(0, 0, n as i32), (1, 0), n, seeds)?)
}

/// Alternating increment (zig, growing up) and copy (zag, growing down)
/// columns on rows `0..=n`.
///
/// Row 0 carries the carry-in `x_0` across the cut and rows `1..n` hold the
/// counter. The zig adds `x_0` to the counter and hands its carry-out to the
/// zag, which copies the sums back and emits a constant carry-in of 1 for the
/// next layer. Under [`Interpretation::EpsTop`] the carry-in glue encodes no
/// bit and the system counts on `n - 1` bits.
pub fn build_zigzag(n: usize, interp: Interpretation) -> Result<LayerSystem, ExemplarError> {
    if n < 3 || n > 12 {
        return Err(ExemplarError::InvalidSpec("zig-zag needs 3..=12 bits".into()));
    }
    let top = n as i32;
    let mut t = Tiles::new();
    let cin = |t: &mut Tiles, v: bool| {
        let b = match interp {
            Interpretation::AllBits => bit(v),
            Interpretation::EpsTop => Bit::Eps,
        };
        t.g(&format!("zg-cin:{}", b01(v)), 2, b)
    };
    let turn = t.g("zg-turn", 1, Bit::Eps);

    // Zig column.
    for v in [false, true] {
        let glues = [t.bitg("zg-k1", 1, v), turn, None, cin(&mut t, v)];
        t.tile(&format!("zig-r0-{}", b01(v)), glues);
    }
    for i in 1..n {
        let up = if i + 1 == n { 2 } else { 1 };
        for r in [false, true] {
            for c in [false, true] {
                let glues = [
                    t.bitg(&format!("zg-k{}", i + 1), up, r & c),
                    t.bitg(&format!("zg-s{i}"), 1, r ^ c),
                    t.bitg(&format!("zg-k{i}"), 1, c),
                    t.bitg(&format!("zg-d{i}"), 1, r),
                ];
                t.tile(&format!("zig-r{i}-{}{}", b01(r), b01(c)), glues);
            }
        }
    }
    for c in [false, true] {
        let glues = [None, t.bitg("zg-sig", 2, c), t.bitg(&format!("zg-k{n}"), 2, c), None];
        t.tile(&format!("zig-top-{}", b01(c)), glues);
    }

    // Zag column.
    for c in [false, true] {
        let glues = [None, None, t.bitg(&format!("zg-g{}", n - 1), 1, c), t.bitg("zg-sig", 2, c)];
        t.tile(&format!("zag-top-{}", b01(c)), glues);
    }
    for i in (1..n).rev() {
        for s in [false, true] {
            for g in [false, true] {
                let glues = [
                    t.bitg(&format!("zg-g{i}"), 1, g),
                    t.bitg(&format!("zg-d{i}"), 1, s),
                    t.bitg(&format!("zg-g{}", i - 1), 1, g),
                    t.bitg(&format!("zg-s{i}"), 1, s),
                ];
                t.tile(&format!("zag-r{i}-{}{}", b01(s), b01(g)), glues);
            }
        }
    }
    for g in [false, true] {
        let glues = [t.bitg("zg-g0", 1, g), cin(&mut t, true), None, turn];
        t.tile(&format!("zag-r0-{}", b01(g)), glues);
    }

    // Seed column, imitating a zag.
    t.tile("seed-top", [None; 4]);
    for v in [false, true] {
        let east = cin(&mut t, v);
        t.tile(&format!("seed-r0-{}", b01(v)), [None, east, None, None]);
    }
    for i in 1..n {
        for v in [false, true] {
            let east = t.bitg(&format!("zg-d{i}"), 1, v);
            t.tile(&format!("seed-r{i}-{}", b01(v)), [None, east, None, None]);
        }
    }

    let bits = match interp {
        Interpretation::AllBits => n,
        Interpretation::EpsTop => n - 1,
    };
    let seeds = (0..1u32 << bits)
        .map(|x| {
            let mut a = Assembly::new();
            a.insert((0, top), t.id("seed-top"));
            // Row of the first counter bit in the input string.
            let skip = n - bits;
            let carry = skip == 1 || field_bit(x, bits, 0);
            a.insert((0, 0), t.id(&format!("seed-r0-{}", b01(carry))));
            for i in 1..n {
                let v = field_bit(x, bits, i - skip);
                a.insert((0, i as i32), t.id(&format!("seed-r{i}-{}", b01(v))));
            }
            a
        })
        .collect();
    Ok(LayerSystem::new(t.ts, TEMPERATURE, GlueCurve::vertical(0, 0, top), (2, 0), bits, seeds)?)
}
