//! Layer computation between a glue curve and its translate, the clean-gate
//! conditions, compilation to railway circuits and iterated layers.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::assemble::{assemble, Placement, Region};
use super::geometry::{edge_mid, edge_tiles, Dir, GlueCurve, Mid, Pos};
use super::tiles::{Assembly, Bit, GlueId, TileId, TileSet};
use super::AtamError;
use crate::permfn::FiniteFunction;
use crate::railway::{GateFunction, RailwayCircuit, MAX_WIRES};

pub type BitString = Vec<bool>;

/// Empty margin kept around the automatic growth box.
const PAD: i32 = 3;

/// Bits to a state, first bit most significant.
pub fn bits_to_state(bits: &[bool]) -> u32 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u32)
}

pub fn state_to_bits(x: u32, n: usize) -> BitString {
    (0..n).map(|i| (x >> (n - 1 - i)) & 1 == 1).collect()
}

pub fn bit_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The bit-carrying edges met along `c`, in curve order, with their bits.
///
/// Each edge is read from the tile on the left of the curve, or from the tile
/// on the right when the left one is absent. Null and `eps` glues are skipped.
pub fn read_curve(ts: &TileSet, a: &Assembly, c: &GlueCurve) -> Result<Vec<(Mid, bool)>, AtamError> {
    let mut out = Vec::new();
    for &mid in c.mids() {
        let (p, q, d) = edge_tiles(mid);
        let (left, right, facing) = if c.is_left(p) { (p, q, d) } else { (q, p, d.opposite()) };
        let bit = if let Some(t) = a.get(left) {
            ts.side_bit(t, facing)
        } else if let Some(t) = a.get(right) {
            ts.side_bit(t, facing.opposite())
        } else {
            return Err(AtamError::CurveOffAssembly { mid });
        };
        if let Some(b) = bit.and_then(Bit::value) {
            out.push((mid, b));
        }
    }
    Ok(out)
}

pub fn bits_along_curve(ts: &TileSet, a: &Assembly, c: &GlueCurve) -> Result<BitString, AtamError> {
    Ok(read_curve(ts, a, c)?.into_iter().map(|(_, b)| b).collect())
}

/// A tile set with a curve, a translation vector and one seed per input.
#[derive(Debug, Clone)]
pub struct LayerSystem {
    pub tileset: TileSet,
    pub temperature: u32,
    pub curve: GlueCurve,
    pub v: (i32, i32),
    pub n: usize,
    /// `seeds[x]` encodes input `x`.
    pub seeds: Vec<Assembly>,
}

impl LayerSystem {
    pub fn new(
        tileset: TileSet,
        temperature: u32,
        curve: GlueCurve,
        v: (i32, i32),
        n: usize,
        seeds: Vec<Assembly>,
    ) -> Result<Self, AtamError> {
        let bad = |m: &str| Err(AtamError::InvalidSystem(m.to_string()));
        if temperature == 0 {
            return bad("temperature must be positive");
        }
        if n == 0 || n > MAX_WIRES {
            return bad("bit width must lie in 1..=16");
        }
        if v.0 <= 0 {
            return bad("translation vector must point east");
        }
        if seeds.len() != 1 << n {
            return bad("need exactly one seed per input");
        }
        if seeds.iter().any(|s| s.is_empty() || !s.is_connected()) {
            return bad("seeds must be non-empty and connected");
        }
        if seeds.iter().any(|s| s.sorted().iter().any(|&(_, t)| t >= tileset.tiles().len())) {
            return bad("seed refers to an unknown tile type");
        }
        Ok(LayerSystem { tileset, temperature, curve, v, n, seeds })
    }

    pub fn translated(&self, k: usize) -> GlueCurve {
        self.curve.translate((self.v.0 * k as i32, self.v.1 * k as i32))
    }

    /// A box around the seed for `x` and the curves up to `layers` steps
    /// ahead, with a small margin.
    pub fn auto_region(&self, x: u32, layers: usize) -> Region {
        let (mut lo, mut hi) = self.curve.tile_bounds();
        let (tlo, thi) = self.translated(layers).tile_bounds();
        lo = (lo.0.min(tlo.0), lo.1.min(tlo.1));
        hi = (hi.0.max(thi.0), hi.1.max(thi.1));
        if let Some((slo, shi)) = self.seeds[x as usize].bounds() {
            lo = (lo.0.min(slo.0), lo.1.min(slo.1));
            hi = (hi.0.max(shi.0), hi.1.max(shi.1));
        }
        Region::new((lo.0 - PAD, lo.1 - PAD), (hi.0 + PAD, hi.1 + PAD))
    }

    fn input_text(&self, x: u32) -> String {
        bit_text(&state_to_bits(x, self.n))
    }
}

/// One input's placement at a position, split into bit inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub tile: TileId,
    pub inputs: Vec<Dir>,
    pub in_bits: Vec<(Mid, bool)>,
    pub out_bits: Vec<(Mid, bool)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositionReport {
    pub index: usize,
    pub pos: Pos,
    /// Common fan-in and fan-out, when clean.
    pub arity: Option<usize>,
    /// Indexed by input state; `None` when that input never fills the position.
    pub observations: Vec<Option<Observation>>,
    pub issues: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncleanSite {
    pub index: usize,
    pub pos: Pos,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    pub n: usize,
    pub f: FiniteFunction,
    /// Positions in the attachment order of input 0.
    pub positions: Vec<PositionReport>,
    pub unclean: Vec<UncleanSite>,
    pub valid: bool,
    /// Bit edges along the curve and along its translate.
    pub wires_in: Vec<Mid>,
    pub wires_out: Vec<Mid>,
}

impl LayerReport {
    pub fn require_valid(&self) -> Result<(), AtamError> {
        if self.valid {
            Ok(())
        } else {
            Err(AtamError::Unclean(self.unclean.clone()))
        }
    }

    pub fn unclean_indices(&self) -> Vec<usize> {
        self.unclean.iter().map(|s| s.index).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

fn observe(ts: &TileSet, p: &Placement) -> Observation {
    let mut in_bits = Vec::new();
    let mut out_bits = Vec::new();
    for d in Dir::ALL {
        if let Some(b) = ts.side_bit(p.tile, d).and_then(Bit::value) {
            let e = (edge_mid(p.pos, d), b);
            if p.inputs.contains(&d) {
                in_bits.push(e);
            } else {
                out_bits.push(e);
            }
        }
    }
    Observation { tile: p.tile, inputs: p.inputs.clone(), in_bits, out_bits }
}

/// Checks the clean-gate conditions at one position across all inputs.
fn judge(ts: &TileSet, obs: &[Option<Observation>]) -> (Option<usize>, Vec<String>) {
    let mut issues = Vec::new();
    let missing: Vec<_> = obs.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(x, _)| x).collect();
    if !missing.is_empty() {
        issues.push(format!("empty for {} of {} inputs", missing.len(), obs.len()));
    }
    let present: Vec<&Observation> = obs.iter().flatten().collect();
    if present.is_empty() {
        return (None, issues);
    }

    let fans: BTreeSet<(usize, usize)> = present.iter().map(|o| (o.in_bits.len(), o.out_bits.len())).collect();
    let mut arity = None;
    match fans.iter().collect::<Vec<_>>().as_slice() {
        [&(i, o)] if i == o && i <= 2 => arity = Some(i),
        _ => {
            let list: Vec<String> = fans.iter().map(|(i, o)| format!("{i}->{o}")).collect();
            issues.push(format!("fan-in and fan-out differ: {}", list.join(" ")));
        }
    }

    let signature = |o: &Observation| {
        let ins: Vec<Mid> = o.in_bits.iter().map(|e| e.0).collect();
        let outs: Vec<Mid> = o.out_bits.iter().map(|e| e.0).collect();
        (ins, outs)
    };
    let first = signature(present[0]);
    if present.iter().any(|o| signature(o) != first) {
        issues.push("bit-carrying sides vary with the input".into());
        arity = None;
    }

    for d in Dir::ALL {
        let side = |o: &Observation| -> (Option<GlueId>, bool) {
            (ts.tile(o.tile).glue(d), o.inputs.contains(&d))
        };
        let non_bit = |o: &Observation| ts.side_bit(o.tile, d).and_then(Bit::value).is_none();
        if present.iter().any(|o| non_bit(o)) {
            let s0 = side(present[0]);
            if present.iter().any(|o| side(o) != s0) {
                issues.push(format!("non-bit glue on side {} varies", d.letter()));
            }
        }
    }
    if !issues.is_empty() {
        arity = None;
    }
    (arity, issues)
}

/// Simulates one layer for every input and gathers per-position verdicts.
pub fn check_layer(sys: &LayerSystem) -> Result<LayerReport, AtamError> {
    let ts = &sys.tileset;
    let c = &sys.curve;
    for i in 1..=2 {
        if c.intersects(&sys.translated(i)) {
            return Err(AtamError::CurveOverlap(i));
        }
    }
    let next = sys.translated(1);
    let after = sys.translated(2);
    let states = 1usize << sys.n;
    let mut table = Vec::with_capacity(states);
    let mut sequences: Vec<Vec<Placement>> = Vec::with_capacity(states);
    let mut wires_in: Option<Vec<Mid>> = None;
    let mut wires_out: Option<Vec<Mid>> = None;

    for x in 0..states as u32 {
        let input = sys.input_text(x);
        let seed = &sys.seeds[x as usize];
        if let Some(&(pos, _)) = seed.sorted().iter().find(|(p, _)| !c.is_left(*p)) {
            return Err(AtamError::SeedOutsideCurve { input, pos });
        }
        let read = read_curve(ts, seed, c)?;
        let bits: BitString = read.iter().map(|e| e.1).collect();
        if bits.len() != sys.n || bits_to_state(&bits) != x {
            return Err(AtamError::SeedMismatch { input, read: bit_text(&bits) });
        }
        let mids: Vec<Mid> = read.iter().map(|e| e.0).collect();
        match &wires_in {
            None => wires_in = Some(mids),
            Some(w) if *w != mids => {
                return Err(AtamError::InvalidSystem("bit edges along the curve vary with the input".into()))
            }
            _ => {}
        }

        let run = assemble(ts, sys.temperature, seed, &sys.auto_region(x, 1).confined(next.clone()))?;
        if let Some(pos) = run.ambiguity {
            return Err(AtamError::Nondeterministic { input, pos });
        }
        let wide = assemble(ts, sys.temperature, seed, &sys.auto_region(x, 2).confined(after.clone()))?;
        if wide.assembly.restrict(|p| next.is_left(p)) != run.assembly {
            return Err(AtamError::NonConfinedGrowth { input });
        }
        let out = read_curve(ts, &run.assembly, &next)?;
        if out.len() != sys.n {
            return Err(AtamError::OutputWidth { input, found: out.len(), expected: sys.n });
        }
        let mids: Vec<Mid> = out.iter().map(|e| e.0).collect();
        match &wires_out {
            None => wires_out = Some(mids),
            Some(w) if *w != mids => {
                return Err(AtamError::InvalidSystem("bit edges along the translated curve vary".into()))
            }
            _ => {}
        }
        table.push(bits_to_state(&out.iter().map(|e| e.1).collect::<Vec<_>>()));
        sequences.push(run.sequence);
    }

    // Positions in input 0's order, then any filled only by other inputs.
    let mut order: Vec<Pos> = sequences[0].iter().map(|p| p.pos).collect();
    let mut index: HashMap<Pos, usize> = order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    for seq in &sequences[1..] {
        for p in seq {
            if !index.contains_key(&p.pos) {
                index.insert(p.pos, order.len());
                order.push(p.pos);
            }
        }
    }
    let mut observations: Vec<Vec<Option<Observation>>> = vec![vec![None; states]; order.len()];
    for (x, seq) in sequences.iter().enumerate() {
        for p in seq {
            observations[index[&p.pos]][x] = Some(observe(ts, p));
        }
    }

    let mut positions = Vec::with_capacity(order.len());
    let mut unclean = Vec::new();
    for (i, (pos, obs)) in order.into_iter().zip(observations).enumerate() {
        let (arity, issues) = judge(ts, &obs);
        for reason in &issues {
            unclean.push(UncleanSite { index: i, pos, reason: reason.clone() });
        }
        positions.push(PositionReport { index: i, pos, arity, observations: obs, issues });
    }
    Ok(LayerReport {
        n: sys.n,
        f: FiniteFunction::new(table).expect("outputs are n-bit states"),
        valid: unclean.is_empty(),
        positions,
        unclean,
        wires_in: wires_in.unwrap_or_default(),
        wires_out: wires_out.unwrap_or_default(),
    })
}

/// Like [`check_layer`], but fails with [`AtamError::Unclean`] when some
/// position does not behave as a gate.
pub fn check_layer_computes(sys: &LayerSystem) -> Result<LayerReport, AtamError> {
    let report = check_layer(sys)?;
    report.require_valid()?;
    Ok(report)
}

/// Output edges in curve order: south first, then east first.
fn curve_order(m: &Mid) -> (i32, i32) {
    (m.1, -m.0)
}

/// One section per position; positions without bits become identity sections
/// on wire 0.
pub fn compile_to_railway(report: &LayerReport) -> Result<RailwayCircuit, AtamError> {
    report.require_valid()?;
    let n = report.n;
    if n < 3 {
        return Err(AtamError::NTooSmall(n));
    }
    let mut wires = report.wires_in.clone();
    let mut circuit = RailwayCircuit::empty(n).expect("n checked");
    for pr in &report.positions {
        let k = pr.arity.ok_or(AtamError::NotValidReport)?;
        if k == 0 {
            circuit.push(0, 0, GateFunction::identity(1).expect("width 1")).expect("wire 0 exists");
            continue;
        }
        let sample = pr.observations.iter().flatten().next().ok_or(AtamError::NotValidReport)?;
        let mut slots = sample
            .in_bits
            .iter()
            .map(|&(m, _)| wires.iter().position(|&w| w == m).ok_or(AtamError::MissingWire { pos: pr.pos }))
            .collect::<Result<Vec<_>, _>>()?;
        slots.sort_unstable();
        if slots.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(AtamError::NonContiguousInputs { pos: pr.pos, wires: slots });
        }
        let lo = slots[0];
        let mut outs: Vec<Mid> = sample.out_bits.iter().map(|e| e.0).collect();
        outs.sort_by_key(curve_order);

        let mut table: Vec<Option<u32>> = vec![None; 1 << k];
        for o in pr.observations.iter().flatten() {
            let inputs: HashMap<Mid, bool> = o.in_bits.iter().copied().collect();
            let outputs: HashMap<Mid, bool> = o.out_bits.iter().copied().collect();
            let field = slots.iter().fold(0u32, |acc, &s| (acc << 1) | inputs[&wires[s]] as u32);
            let value = outs.iter().fold(0u32, |acc, m| (acc << 1) | outputs[m] as u32);
            match table[field as usize] {
                Some(prev) if prev != value => return Err(AtamError::GateConflict { pos: pr.pos, input: field }),
                _ => table[field as usize] = Some(value),
            }
        }
        let table = table.into_iter().enumerate().map(|(i, v)| v.unwrap_or(i as u32)).collect();
        circuit
            .push(lo, lo + k - 1, GateFunction::new(k, table).expect("k-bit table"))
            .expect("slots lie on the wires");
        for (j, m) in outs.into_iter().enumerate() {
            wires[lo + j] = m;
        }
    }
    if wires != report.wires_out {
        return Err(AtamError::WireOrderMismatch);
    }
    let g = circuit.function();
    if let Some(x) = (0..g.m()).find(|&x| g.apply(x) != report.f.apply(x)) {
        return Err(AtamError::FunctionMismatch { input: bit_text(&state_to_bits(x as u32, n)) });
    }
    Ok(circuit)
}

/// Grows `k` layers from the seed for `x` and reads every cut `c + i v` for
/// `i < k`. With `expect`, each reading is compared against its iterate.
pub fn iterate_layers(
    sys: &LayerSystem,
    x: u32,
    k: usize,
    expect: Option<&FiniteFunction>,
) -> Result<Vec<BitString>, AtamError> {
    if x as usize >= sys.seeds.len() {
        return Err(AtamError::InvalidSystem(format!("input {x} has no seed")));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    for i in 1..k.min(3) {
        if sys.curve.intersects(&sys.translated(i)) {
            return Err(AtamError::CurveOverlap(i));
        }
    }
    let last = sys.translated(k - 1);
    let region = sys.auto_region(x, k - 1).confined(last);
    let run = assemble(&sys.tileset, sys.temperature, &sys.seeds[x as usize], &region)?;
    let mut state = x as usize;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let read = bits_along_curve(&sys.tileset, &run.assembly, &sys.translated(i))?;
        if let Some(f) = expect {
            let want = state_to_bits(state as u32, sys.n);
            if read != want {
                return Err(AtamError::ReadMismatch {
                    input: sys.input_text(x),
                    layer: i,
                    read: bit_text(&read),
                    expected: bit_text(&want),
                });
            }
            state = f.apply(state);
        }
        out.push(read);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_bits_round_trip() {
        assert_eq!(state_to_bits(0b101, 3), vec![true, false, true]);
        assert_eq!(bits_to_state(&[true, false, true]), 5);
        for x in 0..64 {
            assert_eq!(bits_to_state(&state_to_bits(x, 6)), x);
        }
        assert_eq!(bit_text(&[false, true]), "01");
    }

    #[test]
    fn eps_only_curve_reads_empty() {
        let mut ts = TileSet::new();
        let e = ts.glue("e", 1, Bit::Eps).unwrap();
        let t = ts.add_tile("t", [None, Some(e), None, None]).unwrap();
        let a = Assembly::from_tiles([((0, 0), t), ((0, 1), t)]);
        assert!(bits_along_curve(&ts, &a, &GlueCurve::vertical(0, 0, 1)).unwrap().is_empty());
        assert_eq!(
            bits_along_curve(&ts, &a, &GlueCurve::vertical(0, 0, 2)),
            Err(AtamError::CurveOffAssembly { mid: (1, 4) })
        );
    }

    #[test]
    fn reads_fall_back_to_the_right() {
        let mut ts = TileSet::new();
        let one = ts.glue("one", 1, Bit::One).unwrap();
        let t = ts.add_tile("t", [None, None, None, Some(one)]).unwrap();
        let a = Assembly::from_tiles([((1, 0), t)]);
        assert_eq!(bits_along_curve(&ts, &a, &GlueCurve::vertical(0, 0, 0)).unwrap(), vec![true]);
    }
}
