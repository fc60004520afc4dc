//! Railway circuits, finite-function parity analysis and a layer-computing
//! tile assembly simulator.
//!
//! The crate is organised around a single question: can a column of local
//! gates iterate through all `2^n` states of an `n`-bit register? [`permfn`]
//! answers the permutation side, [`railway`] models the circuits,
//! [`counterlab`] searches and certifies, and [`atam`] with [`exemplars`]
//! connects self-assembling tile sets to circuits.

pub mod atam;
pub mod cli;
pub mod counterlab;
pub mod exemplars;
pub mod io;
pub mod permfn;
pub mod railway;
pub mod render;

pub use permfn::{FiniteFunction, FunctionClass, Parity, PermError, Swap};
pub use railway::{CounterReport, Gate, GateFunction, RailwayCircuit, RailwayError};
