//! Finite functions on `{0, .., m-1}`: ramification degree, bijection
//! classification, swap decomposition, parity and cycle structure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest domain accepted for table-based functions.
pub const MAX_DOMAIN: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("function domain must be non-empty")]
    EmptyDomain,
    #[error("domain size {0} exceeds the cap of {MAX_DOMAIN}")]
    TooLarge(usize),
    #[error("table entry f({index}) = {value} is outside 0..{m}")]
    OutOfRange { index: usize, value: u32, m: usize },
    #[error("function is not a bijection (ramification degree {0})")]
    NotABijection(usize),
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(usize, usize),
    #[error("swap indices must differ and lie in 0..{m}: ({i0}, {i1})")]
    InvalidSwap { i0: usize, i1: usize, m: usize },
    #[error("cannot parse function: {0}")]
    Parse(String),
}

/// A total function on `{0, .., m-1}` stored as its output table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FiniteFunction {
    table: Vec<u32>,
}

impl<'de> Deserialize<'de> for FiniteFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let table = Vec::<u32>::deserialize(d)?;
        FiniteFunction::new(table).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(count: u64) -> Self {
        if count % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of a composition, following the multiplication table of signs.
    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("Even"),
            Parity::Odd => f.write_str("Odd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "parity")]
pub enum FunctionClass {
    Bijection(Parity),
    QuasiBijection,
    Neither,
}

impl FunctionClass {
    pub fn is_bijection(&self) -> bool {
        matches!(self, FunctionClass::Bijection(_))
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionClass::Bijection(p) => write!(f, "Bijection {p}"),
            FunctionClass::QuasiBijection => f.write_str("QuasiBijection"),
            FunctionClass::Neither => f.write_str("Neither"),
        }
    }
}

/// A transposition of two distinct domain elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Swap {
    i0: usize,
    i1: usize,
}

impl Swap {
    pub fn new(i0: usize, i1: usize, m: usize) -> Result<Self, PermError> {
        if i0 == i1 || i0 >= m || i1 >= m {
            return Err(PermError::InvalidSwap { i0, i1, m });
        }
        Ok(Swap { i0, i1 })
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i0, self.i1)
    }

    pub fn apply(&self, x: usize) -> usize {
        if x == self.i0 {
            self.i1
        } else if x == self.i1 {
            self.i0
        } else {
            x
        }
    }
}

impl FiniteFunction {
    pub fn new(table: Vec<u32>) -> Result<Self, PermError> {
        let m = table.len();
        if m == 0 {
            return Err(PermError::EmptyDomain);
        }
        if m > MAX_DOMAIN {
            return Err(PermError::TooLarge(m));
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v as usize >= m) {
            return Err(PermError::OutOfRange { index, value, m });
        }
        Ok(FiniteFunction { table })
    }

    pub fn identity(m: usize) -> Result<Self, PermError> {
        FiniteFunction::new((0..m as u32).collect())
    }

    pub fn constant(m: usize, value: u32) -> Result<Self, PermError> {
        FiniteFunction::new(vec![value; m])
    }

    pub fn m(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u32> {
        self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    /// Number of antecedents of each value.
    pub fn antecedent_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.m()];
        for &v in &self.table {
            counts[v as usize] += 1;
        }
        counts
    }

    pub fn image_size(&self) -> usize {
        self.antecedent_counts().iter().filter(|&&c| c > 0).count()
    }

    /// Sum over values of `max(0, antecedents - 1)`.
    pub fn ramification_degree(&self) -> usize {
        let r = self
            .antecedent_counts()
            .iter()
            .map(|&c| c.saturating_sub(1) as usize)
            .sum();
        debug_assert_eq!(r, self.m() - self.image_size());
        r
    }

    pub fn classify(&self) -> FunctionClass {
        match self.ramification_degree() {
            0 => FunctionClass::Bijection(self.inversion_parity()),
            1 => FunctionClass::QuasiBijection,
            _ => FunctionClass::Neither,
        }
    }

    pub fn is_bijection(&self) -> bool {
        self.ramification_degree() == 0
    }

    fn require_bijection(&self) -> Result<(), PermError> {
        match self.ramification_degree() {
            0 => Ok(()),
            r => Err(PermError::NotABijection(r)),
        }
    }

    /// `h(i) = self(g(i))`.
    pub fn compose(&self, g: &FiniteFunction) -> Result<FiniteFunction, PermError> {
        if self.m() != g.m() {
            return Err(PermError::DomainMismatch(self.m(), g.m()));
        }
        Ok(FiniteFunction {
            table: g.table.iter().map(|&x| self.table[x as usize]).collect(),
        })
    }

    /// Adjacent transpositions performed by a bubble sort of the table, in the
    /// order they were performed. Applying them first-to-last reproduces `self`.
    pub fn swap_decomposition(&self) -> Result<Vec<Swap>, PermError> {
        self.require_bijection()?;
        let mut seq = self.table.clone();
        let mut swaps = Vec::new();
        let m = seq.len();
        for end in (1..m).rev() {
            let mut swapped = false;
            for j in 0..end {
                if seq[j] > seq[j + 1] {
                    seq.swap(j, j + 1);
                    swaps.push(Swap { i0: j, i1: j + 1 });
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        Ok(swaps)
    }

    pub fn parity(&self) -> Result<Parity, PermError> {
        self.require_bijection()?;
        let p = self.inversion_parity();
        #[cfg(debug_assertions)]
        if self.m() <= 64 {
            debug_assert_eq!(Ok(p), self.swap_parity());
        }
        Ok(p)
    }

    /// Parity of the number of bubble-sort swaps.
    pub fn swap_parity(&self) -> Result<Parity, PermError> {
        Ok(Parity::from_count(self.swap_decomposition()?.len() as u64))
    }

    fn inversion_parity(&self) -> Parity {
        Parity::from_count(inversion_count(&self.table))
    }

    /// Cycle lengths in ascending order, fixed points included.
    pub fn cycle_structure(&self) -> Result<Vec<usize>, PermError> {
        self.require_bijection()?;
        let m = self.m();
        let mut seen = vec![false; m];
        let mut lengths = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        Ok(lengths)
    }

    /// Exactly one cycle of length `k` and `m - k` fixed points.
    pub fn is_k_cycle(&self, k: usize) -> bool {
        let Ok(cycles) = self.cycle_structure() else {
            return false;
        };
        let non_trivial: Vec<_> = cycles.iter().filter(|&&c| c > 1).collect();
        match k {
            0 => false,
            1 => non_trivial.is_empty(),
            _ => non_trivial.len() == 1 && *non_trivial[0] == k,
        }
    }

    /// Text form: `m t0 t1 ... t(m-1)`.
    pub fn to_text(&self) -> String {
        let mut s = self.m().to_string();
        for v in &self.table {
            s.push(' ');
            s.push_str(&v.to_string());
        }
        s
    }
}

/// Applies `swaps[0]` first, then `swaps[1]`, and so on.
pub fn recompose(m: usize, swaps: &[Swap]) -> Result<FiniteFunction, PermError> {
    let table = (0..m)
        .map(|i| swaps.iter().fold(i, |x, s| s.apply(x)) as u32)
        .collect();
    FiniteFunction::new(table)
}

/// Counts pairs `i < j` with `seq[i] > seq[j]` by merge sort.
pub fn inversion_count(seq: &[u32]) -> u64 {
    fn sort_count(v: &mut [u32], buf: &mut Vec<u32>) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut count = sort_count(&mut v[..mid], buf) + sort_count(&mut v[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if v[i] <= v[j] {
                buf.push(v[i]);
                i += 1;
            } else {
                buf.push(v[j]);
                count += (mid - i) as u64;
                j += 1;
            }
        }
        buf.extend_from_slice(&v[i..mid]);
        buf.extend_from_slice(&v[j..n]);
        v.copy_from_slice(buf);
        count
    }
    let mut v = seq.to_vec();
    let mut buf = Vec::with_capacity(v.len());
    sort_count(&mut v, &mut buf)
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for FiniteFunction {
    type Err = PermError;

    /// Accepts either the text form or a JSON array of table entries.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('[') {
            let table: Vec<u32> =
                serde_json::from_str(s).map_err(|e| PermError::Parse(e.to_string()))?;
            return FiniteFunction::new(table);
        }
        let mut words = s.split_whitespace();
        let m: usize = words
            .next()
            .ok_or_else(|| PermError::Parse("missing domain size".into()))?
            .parse()
            .map_err(|e| PermError::Parse(format!("domain size: {e}")))?;
        let table = words
            .map(|w| w.parse::<u32>().map_err(|e| PermError::Parse(format!("{w}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if table.len() != m {
            return Err(PermError::Parse(format!(
                "expected {m} table entries, found {}",
                table.len()
            )));
        }
        FiniteFunction::new(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: &[u32]) -> FiniteFunction {
        FiniteFunction::new(t.to_vec()).unwrap()
    }

    #[test]
    fn potato_function() {
        let g = f(&[0, 1, 1, 1, 2, 2, 3]);
        assert_eq!(g.image_size(), 4);
        assert_eq!(g.ramification_degree(), 3);
        assert_eq!(g.classify(), FunctionClass::Neither);
    }

    #[test]
    fn small_image_sizes() {
        assert_eq!(FiniteFunction::identity(3).unwrap().image_size(), 3);
        assert_eq!(f(&[1, 1]).image_size(), 1);
        assert_eq!(FiniteFunction::identity(5).unwrap().ramification_degree(), 0);
        assert_eq!(FiniteFunction::constant(4, 0).unwrap().ramification_degree(), 3);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(f(&[1, 0, 3, 2]).classify(), FunctionClass::Bijection(Parity::Even));
        assert_eq!(f(&[0, 0, 1]).classify(), FunctionClass::QuasiBijection);
        assert_eq!(f(&[0, 0, 0, 1]).classify(), FunctionClass::Neither);
    }

    #[test]
    fn swap_decompositions() {
        assert!(FiniteFunction::identity(4).unwrap().swap_decomposition().unwrap().is_empty());
        let s = f(&[1, 0]).swap_decomposition().unwrap();
        assert_eq!(s, vec![Swap::new(0, 1, 2).unwrap()]);
        let g = f(&[1, 0, 3, 2]);
        let s = g.swap_decomposition().unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(recompose(4, &s).unwrap(), g);
        let g = f(&[1, 2, 0]);
        assert_eq!(recompose(3, &g.swap_decomposition().unwrap()).unwrap(), g);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(f(&[1, 0, 3, 2]).parity().unwrap(), Parity::Even);
        assert_eq!(f(&[0, 2, 1]).parity().unwrap(), Parity::Odd);
        assert_eq!(f(&[1, 2, 3, 4, 5, 6, 7, 0]).parity().unwrap(), Parity::Odd);
    }

    #[test]
    fn non_bijections_are_rejected() {
        let g = f(&[0, 0, 1]);
        assert_eq!(g.parity(), Err(PermError::NotABijection(1)));
        assert!(g.swap_decomposition().is_err());
        assert!(g.cycle_structure().is_err());
    }

    #[test]
    fn cycle_structures() {
        assert_eq!(f(&[1, 2, 3, 0]).cycle_structure().unwrap(), vec![4]);
        assert_eq!(FiniteFunction::identity(4).unwrap().cycle_structure().unwrap(), vec![1; 4]);
        assert_eq!(f(&[1, 0, 3, 2]).cycle_structure().unwrap(), vec![2, 2]);
        assert!(f(&[1, 2, 0, 3]).is_k_cycle(3));
        assert!(!f(&[1, 0, 3, 2]).is_k_cycle(2));
    }

    #[test]
    fn composition_examples() {
        let g = f(&[0, 1, 1, 1, 2, 2, 3]);
        assert_eq!(g.compose(&FiniteFunction::identity(7).unwrap()).unwrap(), g);
        let t = f(&[0, 2, 1]);
        let tt = t.compose(&t).unwrap();
        assert_eq!(tt, FiniteFunction::identity(3).unwrap());
        assert_eq!(tt.parity().unwrap(), Parity::Even);
        let q = f(&[0, 0, 1]).compose(&FiniteFunction::identity(3).unwrap()).unwrap();
        assert_eq!(q.ramification_degree(), 1);
        assert_eq!(
            t.compose(&FiniteFunction::identity(4).unwrap()),
            Err(PermError::DomainMismatch(3, 4))
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteFunction::new(vec![]), Err(PermError::EmptyDomain));
        assert!(matches!(
            FiniteFunction::new(vec![0, 2]),
            Err(PermError::OutOfRange { index: 1, value: 2, m: 2 })
        ));
        assert!(Swap::new(1, 1, 3).is_err());
        assert!(Swap::new(0, 3, 3).is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let g: FiniteFunction = "4 1 0 3 2".parse().unwrap();
        assert_eq!(g, f(&[1, 0, 3, 2]));
        assert_eq!(g.to_text(), "4 1 0 3 2");
        let h: FiniteFunction = "[1, 0, 3, 2]".parse().unwrap();
        assert_eq!(g, h);
        assert_eq!(serde_json::to_string(&g).unwrap(), "[1,0,3,2]");
        assert!("3 0 1".parse::<FiniteFunction>().is_err());
        assert!(serde_json::from_str::<FiniteFunction>("[5]").is_err());
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(inversion_count(&[3, 2, 1, 0]), 6);
        assert_eq!(inversion_count(&[0, 1, 2]), 0);
        assert_eq!(inversion_count(&[1, 0, 3, 2]), 2);
    }
}
