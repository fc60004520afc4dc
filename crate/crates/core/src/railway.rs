//! The `n`-wire railway circuit model.
//!
//! States are integers whose most significant bit is wire 0, so the state
//! `x_0 x_1 .. x_{n-1}` enumerates in lexicographic order. Gate tables use the
//! same convention restricted to their own wires.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permfn::{FiniteFunction, FunctionClass, Parity};

pub const MAX_WIRES: usize = 16;
pub const MAX_GATE_WIDTH: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RailwayError {
    #[error("wire count {0} must lie in 1..={MAX_WIRES}")]
    WireCount(usize),
    #[error("gate width {0} must lie in 1..={MAX_GATE_WIDTH}")]
    GateWidth(usize),
    #[error("gate table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("gate table entry {value} at {index} exceeds {max}")]
    TableEntry { index: usize, value: u32, max: u32 },
    #[error("gate wires {lo}..={hi} do not fit in {n} wires")]
    Range { lo: usize, hi: usize, n: usize },
    #[error("gate on wires {lo}..={hi} has width {width}")]
    WidthMismatch { lo: usize, hi: usize, width: usize },
    #[error("gate at position {position} declares section {section}")]
    SectionOrder { position: usize, section: usize },
    #[error("state {state} is out of range for {n} wires")]
    StateOutOfRange { state: u32, n: usize },
    #[error("section {0} spans every wire")]
    NotLocal(usize),
}

/// Truth table of a gate acting on `width` adjacent wires.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateFunction {
    width: usize,
    table: Vec<u32>,
}

impl GateFunction {
    pub fn new(width: usize, table: Vec<u32>) -> Result<Self, RailwayError> {
        if width == 0 || width > MAX_GATE_WIDTH {
            return Err(RailwayError::GateWidth(width));
        }
        let expected = 1usize << width;
        if table.len() != expected {
            return Err(RailwayError::TableLength { expected, found: table.len() });
        }
        let max = (expected - 1) as u32;
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v > max) {
            return Err(RailwayError::TableEntry { index, value, max });
        }
        Ok(GateFunction { width, table })
    }

    /// Builds a gate table from the number of entries alone.
    pub fn from_table(table: Vec<u32>) -> Result<Self, RailwayError> {
        let len = table.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(RailwayError::TableLength {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        GateFunction::new(len.trailing_zeros() as usize, table)
    }

    pub fn identity(width: usize) -> Result<Self, RailwayError> {
        GateFunction::new(width, (0..1u32 << width.min(31)).collect())
    }

    pub fn not() -> Self {
        GateFunction { width: 1, table: vec![1, 0] }
    }

    pub fn constant(width: usize, value: u32) -> Result<Self, RailwayError> {
        GateFunction::new(width, vec![value; 1 << width.min(31)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, field: u32) -> u32 {
        self.table[field as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    section: usize,
    lo: usize,
    hi: usize,
    func: GateFunction,
}

impl Gate {
    pub fn new(section: usize, lo: usize, hi: usize, func: GateFunction) -> Result<Self, RailwayError> {
        if hi < lo || hi - lo + 1 != func.width() {
            return Err(RailwayError::WidthMismatch { lo, hi, width: func.width() });
        }
        Ok(Gate { section, lo, hi, func })
    }

    pub fn section(&self) -> usize {
        self.section
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn width(&self) -> usize {
        self.func.width()
    }

    pub fn func(&self) -> &GateFunction {
        &self.func
    }

    pub fn is_local(&self, n: usize) -> bool {
        self.width() < n
    }

    /// Applies the gate to a full `n`-wire state, passing other wires through.
    #[inline]
    pub fn apply(&self, n: usize, state: u32) -> u32 {
        let shift = n - 1 - self.hi;
        let mask = ((1u32 << self.width()) - 1) << shift;
        let field = (state & mask) >> shift;
        (state & !mask) | (self.func.apply(field) << shift)
    }
}

/// The gate `g` extended to all `n` wires.
pub fn lift_gate(g: &Gate, n: usize) -> Result<FiniteFunction, RailwayError> {
    if n == 0 || n > MAX_WIRES {
        return Err(RailwayError::WireCount(n));
    }
    if g.hi >= n {
        return Err(RailwayError::Range { lo: g.lo, hi: g.hi, n });
    }
    let table = (0..1u32 << n).map(|x| g.apply(n, x)).collect();
    Ok(FiniteFunction::new(table).expect("lifted gate stays in range"))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RailwayCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl RailwayCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self, RailwayError> {
        if n == 0 || n > MAX_WIRES {
            return Err(RailwayError::WireCount(n));
        }
        for (position, g) in gates.iter().enumerate() {
            if g.section != position {
                return Err(RailwayError::SectionOrder { position, section: g.section });
            }
            if g.hi >= n {
                return Err(RailwayError::Range { lo: g.lo, hi: g.hi, n });
            }
        }
        Ok(RailwayCircuit { n, gates })
    }

    pub fn empty(n: usize) -> Result<Self, RailwayError> {
        RailwayCircuit::new(n, Vec::new())
    }

    /// Appends a gate in a new final section.
    pub fn push(&mut self, lo: usize, hi: usize, func: GateFunction) -> Result<(), RailwayError> {
        if hi >= self.n {
            return Err(RailwayError::Range { lo, hi, n: self.n });
        }
        let g = Gate::new(self.gates.len(), lo, hi, func)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn sections(&self) -> usize {
        self.gates.len()
    }

    pub fn states(&self) -> usize {
        1 << self.n
    }

    pub fn is_local(&self) -> bool {
        self.gates.iter().all(|g| g.is_local(self.n))
    }

    fn require_local(&self) -> Result<(), RailwayError> {
        match self.gates.iter().find(|g| !g.is_local(self.n)) {
            Some(g) => Err(RailwayError::NotLocal(g.section)),
            None => Ok(()),
        }
    }

    pub fn eval(&self, x: u32) -> Result<u32, RailwayError> {
        self.check_state(x)?;
        Ok(self.gates.iter().fold(x, |s, g| g.apply(self.n, s)))
    }

    fn check_state(&self, x: u32) -> Result<(), RailwayError> {
        if (x as usize) < self.states() {
            Ok(())
        } else {
            Err(RailwayError::StateOutOfRange { state: x, n: self.n })
        }
    }

    /// The composed function, section 0 applied first.
    pub fn function(&self) -> FiniteFunction {
        let table = (0..self.states() as u32)
            .map(|x| self.gates.iter().fold(x, |s, g| g.apply(self.n, s)))
            .collect();
        FiniteFunction::new(table).expect("circuit output stays in range")
    }

    pub fn atomic_components(&self) -> Result<Vec<AtomicComponent>, RailwayError> {
        self.require_local()?;
        self.gates
            .iter()
            .map(|g| {
                let func = lift_gate(g, self.n)?;
                let pass_through = (0..self.n)
                    .find(|&w| is_pass_through(&func, self.n, w))
                    .expect("a local gate leaves some wire untouched");
                Ok(AtomicComponent { section: g.section, func, pass_through })
            })
            .collect()
    }

    pub fn trace(&self, x: u32) -> Result<Vec<u32>, RailwayError> {
        self.check_state(x)?;
        let f = self.function();
        let mut out = Vec::with_capacity(self.states());
        let mut s = x;
        for _ in 0..self.states() {
            out.push(s);
            s = f.apply(s as usize) as u32;
        }
        Ok(out)
    }

    pub fn counter_value(&self) -> CounterReport {
        counter_report(&self.function())
    }

    pub fn verify_atomic_restrictions(&self) -> Result<AtomicReport, RailwayError> {
        let verdicts: Vec<_> = self
            .atomic_components()?
            .into_iter()
            .map(|c| ComponentVerdict::of(c.section, &c.func))
            .collect();
        let pass = verdicts.iter().all(|v| v.pass);
        Ok(AtomicReport { verdicts, pass })
    }
}

/// True when wire `w` is copied unchanged and no other output depends on it.
pub fn is_pass_through(f: &FiniteFunction, n: usize, w: usize) -> bool {
    let bit = 1u32 << (n - 1 - w);
    (0..f.m() as u32).all(|x| {
        let y = f.apply(x as usize) as u32;
        let y_flip = f.apply((x ^ bit) as usize) as u32;
        (y & bit) == (x & bit) && (y ^ y_flip) == bit
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicComponent {
    pub section: usize,
    pub func: FiniteFunction,
    pub pass_through: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub section: usize,
    pub class: FunctionClass,
    pub ramification: usize,
    pub pass: bool,
}

impl ComponentVerdict {
    pub fn of(section: usize, f: &FiniteFunction) -> Self {
        let class = f.classify();
        let ramification = f.ramification_degree();
        let pass = class != FunctionClass::Bijection(Parity::Odd) && ramification != 1;
        ComponentVerdict { section, class, ramification, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomicReport {
    pub verdicts: Vec<ComponentVerdict>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterReport {
    pub counter_value: usize,
    pub witness_input: u32,
    pub class: FunctionClass,
}

/// For every state, the number of distinct states on its forward orbit.
pub fn orbit_sizes(f: &FiniteFunction) -> Vec<u32> {
    const UNSEEN: u32 = 0;
    const ON_STACK: u32 = u32::MAX;
    let m = f.m();
    let mut size = vec![UNSEEN; m];
    let mut path = Vec::new();
    for start in 0..m {
        if size[start] != UNSEEN {
            continue;
        }
        let mut x = start;
        while size[x] == UNSEEN {
            size[x] = ON_STACK;
            path.push(x);
            x = f.apply(x);
        }
        let mut tail_end = path.len();
        if size[x] == ON_STACK {
            // Closed a new cycle: every member sees exactly the cycle.
            let pos = path.iter().rposition(|&p| p == x).expect("cycle start on path");
            let cycle_len = (path.len() - pos) as u32;
            for &p in &path[pos..] {
                size[p] = cycle_len;
            }
            tail_end = pos;
        }
        for &p in path[..tail_end].iter().rev() {
            size[p] = size[f.apply(p)] + 1;
        }
        path.clear();
    }
    size
}

/// Largest orbit size over all inputs; ties go to the smallest input.
pub fn counter_report(f: &FiniteFunction) -> CounterReport {
    let sizes = orbit_sizes(f);
    let (witness, &best) = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("non-empty domain");
    CounterReport {
        counter_value: best as usize,
        witness_input: witness as u32,
        class: f.classify(),
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    s: usize,
    i: usize,
    j: usize,
    table: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    n: usize,
    gates: Vec<GateRecord>,
}

impl Serialize for RailwayCircuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CircuitRecord {
            n: self.n,
            gates: self
                .gates
                .iter()
                .map(|g| GateRecord { s: g.section, i: g.lo, j: g.hi, table: g.func.table.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RailwayCircuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = CircuitRecord::deserialize(d)?;
        let gates = rec
            .gates
            .into_iter()
            .map(|g| {
                let width = (g.j + 1).checked_sub(g.i).unwrap_or(0);
                Gate::new(g.s, g.i, g.j, GateFunction::new(width, g.table)?)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        RailwayCircuit::new(rec.n, gates).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn not_on(n: usize, w: usize) -> RailwayCircuit {
        let mut c = RailwayCircuit::empty(n).unwrap();
        c.push(w, w, GateFunction::not()).unwrap();
        c
    }

    #[test]
    fn lift_not_on_wire_zero() {
        let g = Gate::new(0, 0, 0, GateFunction::not()).unwrap();
        assert_eq!(lift_gate(&g, 2).unwrap().table(), &[2, 3, 0, 1]);
        let id = Gate::new(0, 1, 1, GateFunction::identity(1).unwrap()).unwrap();
        assert_eq!(lift_gate(&id, 3).unwrap(), FiniteFunction::identity(8).unwrap());
        assert!(matches!(lift_gate(&g, 0), Err(RailwayError::WireCount(0))));
        let far = Gate::new(0, 2, 2, GateFunction::not()).unwrap();
        assert!(matches!(lift_gate(&far, 2), Err(RailwayError::Range { .. })));
    }

    #[test]
    fn lifted_wire_swap_is_even() {
        let swap = GateFunction::new(2, vec![0, 2, 1, 3]).unwrap();
        let g = Gate::new(0, 1, 2, swap).unwrap();
        let f = lift_gate(&g, 3).unwrap();
        assert_eq!(f.parity().unwrap(), Parity::Even);
    }

    #[test]
    fn circuit_functions() {
        assert_eq!(RailwayCircuit::empty(2).unwrap().function(), FiniteFunction::identity(4).unwrap());
        assert_eq!(not_on(2, 0).function().table(), &[2, 3, 0, 1]);
        let mut c = not_on(2, 0);
        c.push(0, 0, GateFunction::not()).unwrap();
        assert_eq!(c.function(), FiniteFunction::identity(4).unwrap());
    }

    #[test]
    fn components_and_locality() {
        let c = not_on(2, 0);
        let comps = c.atomic_components().unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].pass_through, 1);
        assert!(RailwayCircuit::empty(3).unwrap().is_local());
        let mut wide = RailwayCircuit::empty(2).unwrap();
        wide.push(0, 1, GateFunction::identity(2).unwrap()).unwrap();
        assert!(!wide.is_local());
        assert_eq!(wide.atomic_components(), Err(RailwayError::NotLocal(0)));
    }

    #[test]
    fn traces() {
        let c = not_on(2, 0);
        assert_eq!(c.trace(0).unwrap(), vec![0, 2, 0, 2]);
        let mut d = not_on(2, 0);
        d.push(1, 1, GateFunction::constant(1, 0).unwrap()).unwrap();
        assert_eq!(d.trace(1).unwrap(), vec![1, 2, 0, 2]);
        assert_eq!(RailwayCircuit::empty(2).unwrap().trace(3).unwrap(), vec![3; 4]);
        assert!(c.trace(4).is_err());
    }

    #[test]
    fn counter_values() {
        let mut d = not_on(2, 0);
        d.push(1, 1, GateFunction::constant(1, 0).unwrap()).unwrap();
        let rep = d.counter_value();
        assert_eq!(rep.counter_value, 3);
        assert_eq!(rep.witness_input, 1);
        assert_eq!(not_on(2, 0).counter_value().counter_value, 2);
        // A full-width increment is a 2^n-cycle.
        let mut inc = RailwayCircuit::empty(3).unwrap();
        inc.push(0, 2, GateFunction::new(3, vec![1, 2, 3, 4, 5, 6, 7, 0]).unwrap()).unwrap();
        let rep = inc.counter_value();
        assert_eq!(rep.counter_value, 8);
        assert_eq!(rep.class, FunctionClass::Bijection(Parity::Odd));
        assert!(!inc.is_local());
    }

    #[test]
    fn orbit_sizes_match_naive_count() {
        let f = FiniteFunction::new(vec![1, 2, 3, 1, 0, 4, 6]).unwrap();
        let naive: Vec<u32> = (0..7)
            .map(|x| {
                let mut seen = std::collections::BTreeSet::new();
                let mut s = x;
                for _ in 0..7 {
                    seen.insert(s);
                    s = f.apply(s);
                }
                seen.len() as u32
            })
            .collect();
        assert_eq!(orbit_sizes(&f), naive);
    }

    #[test]
    fn atomic_restrictions() {
        let rep = not_on(2, 0).verify_atomic_restrictions().unwrap();
        assert!(rep.pass);
        assert_eq!(rep.verdicts[0].class, FunctionClass::Bijection(Parity::Even));
        let mut wide = RailwayCircuit::empty(2).unwrap();
        wide.push(0, 1, GateFunction::new(2, vec![1, 0, 2, 3]).unwrap()).unwrap();
        assert_eq!(wide.verify_atomic_restrictions(), Err(RailwayError::NotLocal(0)));
    }

    #[test]
    fn construction_errors() {
        assert!(RailwayCircuit::empty(17).is_err());
        assert!(GateFunction::new(2, vec![0, 1, 2]).is_err());
        assert!(GateFunction::new(1, vec![0, 2]).is_err());
        assert!(GateFunction::new(13, vec![]).is_err());
        assert!(Gate::new(0, 1, 2, GateFunction::not()).is_err());
        let g = Gate::new(1, 0, 0, GateFunction::not()).unwrap();
        assert!(matches!(RailwayCircuit::new(2, vec![g]), Err(RailwayError::SectionOrder { .. })));
    }

    #[test]
    fn json_round_trip() {
        let mut c = not_on(3, 1);
        c.push(1, 2, GateFunction::new(2, vec![0, 2, 1, 3]).unwrap()).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(
            text,
            r#"{"n":3,"gates":[{"s":0,"i":1,"j":1,"table":[1,0]},{"s":1,"i":1,"j":2,"table":[0,2,1,3]}]}"#
        );
        let back: RailwayCircuit = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<RailwayCircuit>(r#"{"n":2,"gates":[{"s":0,"i":1,"j":0,"table":[0]}]}"#).is_err());
    }
}
