//! Efficient measurement of ADAPT-VQE pool gradients.
//!
//! Pool gradients `⟨[H, A_i]⟩` are gathered term by term of the Hamiltonian:
//! the commutators of one Hamiltonian word (the pivot) with a set of mutually
//! commuting pool words commute with one another, so each set is measured
//! jointly. For the qubit pool the anchored partition needs only `2N` sets
//! per pivot, and every observable in a set carries the same weight
//! `2|h_j|`, which makes variance-optimal shot allocation a per-set problem.
//!
//! Modules, bottom-up:
//!
//! - [`pauli`]: symplectic Pauli words, products and commutation tests
//! - [`operator`], [`jw`], [`hamiltonian_file`]: weighted sums, Jordan–Wigner
//!   builders and the text Hamiltonian format
//! - [`pools`]: fermionic, qubit, QEB and `G` operator pools
//! - [`grouping`]: anchored and baseline partitions, gradient groups and
//!   measurement-basis synthesis
//! - [`shots`]: shot-allocation formulas and plans
//! - [`sim`]: statevector engine, exact gradients and joint sampling
//! - [`adapt`]: the ADAPT-VQE loop and its inner VQE
//! - [`commands`], [`cli`]: the report-producing entry points and the
//!   argument layer of the `pivotgrad` binary
//! - [`fixtures`]: random words, states and Hamiltonians

pub mod adapt;
pub mod cli;
pub mod commands;
pub mod error;
pub mod fixtures;
pub mod grouping;
pub mod hamiltonian_file;
pub mod jw;
pub mod operator;
pub mod pauli;
pub mod pools;
pub mod rng;
pub mod shots;
pub mod sim;

pub use error::{Error, Result};
pub use operator::{AntihermitianSum, WeightedPauliSum};
pub use pauli::{Pauli, PauliWord};
pub use pools::{OperatorPool, PoolKind, PoolOperator};
