//! Compile quantum circuits into history-state spin Hamiltonians, rewrite
//! real 2-local Hamiltonians into the restricted ZZXX / ZX interaction sets
//! with perturbative mediator-qubit gadgets, and certify every construction
//! numerically by exact diagonalization and self-energy analysis.
//!
//! The crate is organized around six modules:
//!
//! - [`pauli`]: real-coefficient Pauli-string algebra, operator assembly,
//!   dense/implicit matrix realization, interaction-set validation, and the
//!   Hamiltonian text format.
//! - [`circuit`]: real self-inverse gate library, circuit container, the
//!   circuit text format, and state-vector simulation.
//! - [`history`]: the history-state Hamiltonian (input, clock, clock-init
//!   and propagation terms) on `n` logical + `T` clock qubits, and the
//!   history state itself.
//! - [`gadget`]: the three mediator-qubit gadgets (ZX-from-ZZXX,
//!   ZZ-from-ZX, XX-from-ZX), dressed couplings, and whole-Hamiltonian
//!   compilation into a restricted interaction set.
//! - [`spectral`]: dense and iterative extremal eigensolvers, exact and
//!   series self-energy operators, adiabatic gap sweeps, and overlaps.
//! - [`cli`]: the `gadgetc` command-line driver with reproducible file
//!   outputs.
//!
//! Most capabilities have a runnable walkthrough under `examples/`; see the
//! README for the list.

pub mod circuit;
pub mod cli;
pub mod gadget;
pub mod history;
pub mod pauli;
pub mod spectral;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("qubit count mismatch: {0}")]
    QubitMismatch(String),

    #[error("qubit index {index} out of range 1..={n}")]
    QubitRange { index: usize, n: usize },

    #[error("bit string has length {got}, expected {expected}")]
    BitLength { got: usize, expected: usize },

    #[error("dense realization capped at {limit} qubits, got {qubits} (set GADGETC_DENSE_LIMIT to override)")]
    DenseLimit { qubits: usize, limit: usize },

    #[error("operator is not real-valued (odd Y count in term {0})")]
    NonReal(String),

    #[error("matrix is not symmetric within tolerance")]
    NotHermitian,

    #[error("gate is not self-inverse within 1e-12")]
    NotSelfInverse,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("terms outside the {set} interaction set: {terms}")]
    InteractionViolation { set: String, terms: String },

    #[error("invalid projector spec: {0}")]
    Projector(String),

    #[error("resolvent block is singular at z = {z}")]
    SingularResolvent { z: f64 },

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("penalty gap delta = {delta} must exceed the energy scale {ebar}")]
    DeltaBound { delta: f64, ebar: f64 },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Format a float with 12 significant digits, the convention for all
/// numeric CLI and CSV output.
pub fn fmt_sig12(x: f64) -> String {
    format!("{:.11e}", x)
}
