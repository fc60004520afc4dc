//! Enumeration and search over local railway circuits.
//!
//! Tiny wire counts are settled by closing the set of lifted local gates under
//! composition. Larger ones are certified gate by gate (no lifted local gate
//! is an odd bijection or has ramification degree one, and both properties
//! survive composition) and probed by seeded random sampling.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::permfn::FiniteFunction;
use crate::railway::{
    counter_report, lift_gate, ComponentVerdict, Gate, GateFunction, RailwayCircuit,
};

/// Enumerating every `2^w -> 2^w` table is only sensible up to this width.
pub const MAX_ENUM_WIDTH: usize = 4;
/// Largest wire count for exhaustive closure.
pub const MAX_CLOSURE_WIRES: usize = 2;
pub const MAX_SAMPLE_WIRES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("gate width {width} is not local or too wide to enumerate for {n} wires")]
    WidthTooLarge { n: usize, width: usize },
    #[error("exhaustive closure is limited to {MAX_CLOSURE_WIRES} wires, got {0}")]
    TooLarge(usize),
    #[error("sampling is limited to 1..={MAX_SAMPLE_WIRES} wires, got {0}")]
    SampleWires(usize),
    #[error("section shape {lo}..={hi} does not give a local gate on {n} wires")]
    BadShape { lo: usize, hi: usize, n: usize },
}

/// One gate choice: a placement together with its truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGate {
    pub lo: usize,
    pub hi: usize,
    pub func: GateFunction,
}

impl LocalGate {
    pub fn lift(&self, n: usize) -> FiniteFunction {
        let g = Gate::new(0, self.lo, self.hi, self.func.clone()).expect("width matches placement");
        lift_gate(&g, n).expect("placement fits")
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub n: usize,
    /// Gate choices before deduplication.
    pub choices: usize,
    /// Distinct lifted tables, sorted.
    pub lifted: Vec<FiniteFunction>,
}

/// Every table on `width` bits, in lexicographic order of the table.
fn all_tables(width: usize) -> impl Iterator<Item = Vec<u32>> {
    let size = 1usize << width;
    let total = (size as u64).pow(size as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0u32; size];
        for slot in t.iter_mut().rev() {
            *slot = (code % size as u64) as u32;
            code /= size as u64;
        }
        t
    })
}

fn check_width(n: usize, max_width: usize) -> Result<(), SearchError> {
    if max_width == 0 || max_width >= n || max_width > MAX_ENUM_WIDTH {
        return Err(SearchError::WidthTooLarge { n, width: max_width });
    }
    Ok(())
}

/// All local gate choices of width at most `max_width`, narrowest first, then
/// by lowest wire, then by table.
pub fn enumerate_gate_choices(n: usize, max_width: usize) -> Result<Vec<LocalGate>, SearchError> {
    check_width(n, max_width)?;
    let mut out = Vec::new();
    for width in 1..=max_width {
        for lo in 0..=n - width {
            for table in all_tables(width) {
                let func = GateFunction::new(width, table).expect("enumerated table is valid");
                out.push(LocalGate { lo, hi: lo + width - 1, func });
            }
        }
    }
    Ok(out)
}

pub fn enumerate_local_gates(n: usize, max_width: usize) -> Result<GeneratorSet, SearchError> {
    let choices = enumerate_gate_choices(n, max_width)?;
    let lifted: BTreeSet<FiniteFunction> = choices.iter().map(|g| g.lift(n)).collect();
    Ok(GeneratorSet { n, choices: choices.len(), lifted: lifted.into_iter().collect() })
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub reached: BTreeSet<FiniteFunction>,
    pub max_counter: usize,
    pub witness: FiniteFunction,
    pub certificate: Vec<ComponentVerdict>,
}

impl ClosureResult {
    /// No reached function is an odd bijection or has ramification degree one.
    pub fn closure_respects_restrictions(&self) -> bool {
        self.reached.iter().all(|f| ComponentVerdict::of(0, f).pass)
    }
}

/// Breadth-first closure of `generators` under left composition, starting from
/// the identity.
pub fn closure(m: usize, generators: &[FiniteFunction]) -> ClosureResult {
    let identity = FiniteFunction::identity(m).expect("m >= 1");
    let mut seen: HashSet<FiniteFunction> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(h) = queue.pop_front() {
        for g in generators {
            let next = g.compose(&h).expect("generators share the domain");
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let reached: BTreeSet<FiniteFunction> = seen.into_iter().collect();
    let (witness, max_counter) = reached
        .iter()
        .map(|f| (f, counter_report(f).counter_value))
        .fold(None, |best: Option<(&FiniteFunction, usize)>, (f, k)| match best {
            Some((_, bk)) if bk >= k => best,
            _ => Some((f, k)),
        })
        .expect("identity is always reached");
    let certificate = generators
        .iter()
        .enumerate()
        .map(|(i, g)| ComponentVerdict::of(i, g))
        .collect();
    ClosureResult { max_counter, witness: witness.clone(), reached, certificate }
}

pub fn monoid_closure_max_counter(n: usize) -> Result<ClosureResult, SearchError> {
    if n > MAX_CLOSURE_WIRES {
        return Err(SearchError::TooLarge(n));
    }
    if n < 2 {
        // No local gate exists on a single wire.
        return Ok(closure(1 << n, &[]));
    }
    let gens = enumerate_local_gates(n, n - 1)?;
    Ok(closure(1 << n, &gens.lifted))
}

/// One line of a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct GateVerdict {
    pub index: usize,
    pub lo: usize,
    pub hi: usize,
    pub table: Vec<u32>,
    pub class: String,
    pub ramification: usize,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub n: usize,
    pub max_width: usize,
    pub verdicts: Vec<GateVerdict>,
}

impl Certificate {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// JSON lines, one gate choice per line, in enumeration order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            out.push_str(&serde_json::to_string(v).expect("verdict serializes"));
            out.push('\n');
        }
        out
    }
}

pub fn certify_theorem_main(n: usize, max_width: usize) -> Result<Certificate, SearchError> {
    let verdicts = enumerate_gate_choices(n, max_width)?
        .into_iter()
        .enumerate()
        .map(|(index, g)| {
            let v = ComponentVerdict::of(index, &g.lift(n));
            GateVerdict {
                index,
                lo: g.lo,
                hi: g.hi,
                table: g.func.table().to_vec(),
                class: v.class.to_string(),
                ramification: v.ramification,
                pass: v.pass,
            }
        })
        .collect();
    Ok(Certificate { n, max_width, verdicts })
}

/// How sampled circuits choose where each section's gate sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionShape {
    /// Uniform width in `1..=max_width`, uniform placement.
    Random { max_width: usize },
    /// Fixed `(lo, hi)` per section, repeated cyclically.
    Fixed(Vec<(usize, usize)>),
}

impl SectionShape {
    /// The section layout of a 6-wire iterated Boolean circuit layer: one-bit
    /// gates on the outer wires and two-bit gates on neighbouring pairs.
    pub fn ibc6() -> Self {
        SectionShape::Fixed(vec![(0, 0), (1, 2), (3, 4), (5, 5), (0, 1), (2, 3), (4, 5)])
    }
}

/// A random gate table: a uniformly random permutation half the time,
/// otherwise a uniformly random function.
pub fn random_gate<R: Rng>(rng: &mut R, width: usize) -> GateFunction {
    let size = 1u32 << width;
    let table = if rng.random_bool(0.5) {
        let mut t: Vec<u32> = (0..size).collect();
        t.shuffle(rng);
        t
    } else {
        (0..size).map(|_| rng.random_range(0..size)).collect()
    };
    GateFunction::new(width, table).expect("random table is valid")
}

pub fn random_local_circuit<R: Rng>(
    rng: &mut R,
    n: usize,
    sections: usize,
    shape: &SectionShape,
) -> Result<RailwayCircuit, SearchError> {
    let mut c = RailwayCircuit::empty(n).map_err(|_| SearchError::SampleWires(n))?;
    for s in 0..sections {
        let (lo, hi) = match shape {
            SectionShape::Random { max_width } => {
                let w = rng.random_range(1..=*max_width);
                let lo = rng.random_range(0..=n - w);
                (lo, lo + w - 1)
            }
            SectionShape::Fixed(slots) => slots[s % slots.len()],
        };
        let func = random_gate(rng, hi - lo + 1);
        c.push(lo, hi, func).expect("shape validated");
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub struct SampleResult {
    pub max_counter: usize,
    pub witness: Option<RailwayCircuit>,
    pub samples: usize,
    pub seed: u64,
}

/// Largest counter value among `count` random local circuits. An empty sample
/// reports the identity baseline of 1.
pub fn sample_max_counter(
    n: usize,
    sections: usize,
    count: usize,
    seed: u64,
    shape: &SectionShape,
) -> Result<SampleResult, SearchError> {
    if n == 0 || n > MAX_SAMPLE_WIRES {
        return Err(SearchError::SampleWires(n));
    }
    match shape {
        SectionShape::Random { max_width } if *max_width == 0 || *max_width >= n => {
            return Err(SearchError::WidthTooLarge { n, width: *max_width });
        }
        SectionShape::Fixed(slots) => {
            if let Some(&(lo, hi)) = slots.iter().find(|&&(lo, hi)| hi < lo || hi >= n || hi - lo + 1 >= n) {
                return Err(SearchError::BadShape { lo, hi, n });
            }
            if slots.is_empty() && sections > 0 {
                return Err(SearchError::BadShape { lo: 0, hi: 0, n });
            }
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = SampleResult { max_counter: 1, witness: None, samples: count, seed };
    for _ in 0..count {
        let c = random_local_circuit(&mut rng, n, sections, shape)?;
        let k = c.counter_value().counter_value;
        if k > best.max_counter || best.witness.is_none() {
            best.max_counter = best.max_counter.max(k);
            best.witness = Some(c);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permfn::{FunctionClass, Parity};

    #[test]
    fn unary_generators_on_two_wires() {
        let gens = enumerate_local_gates(2, 1).unwrap();
        assert_eq!(gens.choices, 8);
        // The two identity lifts coincide; the other six are distinct.
        assert_eq!(gens.lifted.len(), 7);
    }

    #[test]
    fn gate_choice_count_on_three_wires() {
        assert_eq!(enumerate_gate_choices(3, 2).unwrap().len(), 3 * 4 + 2 * 256);
        assert_eq!(enumerate_gate_choices(4, 2).unwrap().len(), 4 * 4 + 3 * 256);
    }

    #[test]
    fn width_guards() {
        assert!(matches!(enumerate_local_gates(2, 2), Err(SearchError::WidthTooLarge { .. })));
        assert!(enumerate_local_gates(6, 5).is_err());
        assert!(enumerate_local_gates(3, 0).is_err());
    }

    #[test]
    fn closure_on_two_wires() {
        let res = monoid_closure_max_counter(2).unwrap();
        assert_eq!(res.max_counter, 3);
        assert!(res.reached.contains(&FiniteFunction::identity(4).unwrap()));
        assert!(res.reached.len() <= 256);
        assert!(res.closure_respects_restrictions());
        assert!(res.certificate.iter().all(|v| v.pass));
        assert!(monoid_closure_max_counter(3).is_err());
    }

    #[test]
    fn closure_of_identity_only() {
        let id = FiniteFunction::identity(4).unwrap();
        let res = closure(4, &[id]);
        assert_eq!(res.max_counter, 1);
        assert_eq!(res.reached.len(), 1);
    }

    #[test]
    fn closure_is_closed() {
        let gens = enumerate_local_gates(2, 1).unwrap();
        let res = closure(4, &gens.lifted);
        for h in &res.reached {
            for g in &gens.lifted {
                assert!(res.reached.contains(&g.compose(h).unwrap()));
            }
        }
    }

    #[test]
    fn certificate_lines_are_stable() {
        let a = certify_theorem_main(2, 1).unwrap();
        let b = certify_theorem_main(2, 1).unwrap();
        assert!(a.pass());
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        assert_eq!(a.to_json_lines().lines().count(), 8);
    }

    #[test]
    fn sampling() {
        let shape = SectionShape::Random { max_width: 2 };
        let r = sample_max_counter(3, 8, 500, 1, &shape).unwrap();
        assert!(r.max_counter <= 7);
        assert_eq!(r.max_counter, sample_max_counter(3, 8, 500, 1, &shape).unwrap().max_counter);
        assert_eq!(sample_max_counter(3, 8, 0, 1, &shape).unwrap().max_counter, 1);
        let w = r.witness.unwrap();
        assert!(w.is_local());
        assert_eq!(w.counter_value().counter_value, r.max_counter);
        assert!(sample_max_counter(3, 4, 1, 0, &SectionShape::Fixed(vec![(0, 2)])).is_err());
    }

    #[test]
    fn random_local_functions_are_never_odd_or_quasi() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=5 {
            for _ in 0..200 {
                let c = random_local_circuit(&mut rng, n, 6, &SectionShape::Random { max_width: 2 }).unwrap();
                let class = c.function().classify();
                assert_ne!(class, FunctionClass::Bijection(Parity::Odd));
                assert_ne!(class, FunctionClass::QuasiBijection);
            }
        }
    }
}
