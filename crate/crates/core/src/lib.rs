//! Knapsack public-key cryptosystem built on super-increasing private weights,
//! modular disguise and a permutation-combination step, together with the
//! lattice-reduction attack that recovers an equivalent private key from the
//! public weights alone.
//!
//! The crate is organised bottom-up:
//!
//! - [`knapsack`]: super-increasing sequences and the greedy subset-sum solver.
//! - [`permutation`]: factorial number system and Lehmer-code permutations.
//! - [`cryptosystem`]: key generation, encryption and decryption.
//! - [`lattice`]: exact rational Gram-Schmidt, LLL and a toy enumeration oracle.
//! - [`diophantine`]: simultaneous Diophantine approximation via LLL.
//! - [`attack`]: multiplier recovery, equivalent keys and ciphertext-only decryption.
//! - [`bench`]: seeded trial grids and summaries.
//! - [`format`]: JSON file formats shared with the command-line tool.

pub mod arith;
pub mod attack;
pub mod bench;
pub mod cryptosystem;
pub mod diophantine;
pub mod error;
pub mod format;
pub mod knapsack;
pub mod lattice;
pub mod permutation;

pub use error::{Error, Result};
