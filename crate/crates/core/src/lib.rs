//! Entanglement of assistance (EoA) and entanglement of collaboration (EoC)
//! for tripartite quantum states.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`qmath`]: a small dense complex linear-algebra kernel (Kronecker
//!   products, partial traces, a Jacobi Hermitian eigensolver, Schmidt
//!   decompositions, von Neumann entropy).
//! * [`states`]: party-labelled state types and a catalog of the concrete
//!   states used by the EoC > EoA counterexamples.
//! * [`measures`]: bipartite pure-state root measures.
//! * [`ensembles`]: pure-state decompositions, isometries and POVMs.
//! * [`assistance`]: numerical EoA maximisation, span scanning and the
//!   two-copy Schmidt-table machinery.
//! * [`locc`]: a multi-round LOCC protocol simulator.
//! * [`random`]: seeded samplers (Haar states, isometries, POVMs).
//! * [`checks`]: seeded single-instance invariant checks.
//!
//! Flat indices follow one fixed convention everywhere: for parties with
//! dimensions `(dA, dB, dC)` the basis state `|a b c>` sits at
//! `((a * dB) + b) * dC + c`, i.e. the first-listed party varies slowest.
#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod assistance;
pub mod checks;
pub mod ensembles;
mod error;
pub mod locc;
pub mod measures;
pub mod qmath;
pub mod random;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
