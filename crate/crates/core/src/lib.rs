//! Exact construction and verification of combinatorial t-designs through
//! higher tactical decomposition matrices.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: matrix
//! entries are arbitrary-precision integers and design parameters are exact
//! rationals, so every identity is checked with equality rather than a
//! tolerance.
//!
//! Pipeline overview:
//!
//! * [`permgroup`] builds a [`TacticalSequence`] of orbit partitions of the
//!   x-subsets of a point set under a permutation group.
//! * [`incidence`] computes the cell-level incidence matrices `R⁽ˣʸ⁾`,
//!   `K⁽ˣʸ⁾` and the size diagonals `D⁽ˣ⁾`.
//! * [`params`] holds `t-(v,k,λ)` arithmetic (`λ_s`, `λ_{i,j}`).
//! * [`decomp`] derives `ρ⁽ˣ⁾`/`κ⁽ˣ⁾` for a block selection and evaluates the
//!   product identities and the Fisher-type bound.
//! * [`solver`] enumerates candidate decomposition matrices.
//! * [`indexer`] turns a decomposition chain back into concrete block orbits.
//! * [`qanalog`] covers Gaussian binomials and subspace counting oracles.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod binom;
pub mod decomp;
mod error;
pub mod incidence;
pub mod indexer;
pub mod matrix;
pub mod params;
pub mod permgroup;
pub mod qanalog;
pub mod solver;
pub mod subset;

pub use error::{Error, Result};
pub use matrix::{DiagonalSizes, IntMatrix, Label, LabeledIntMatrix, RationalMatrix, RationalSymMatrix};
pub use params::{DesignParams, LambdaTable};
pub use permgroup::{GeneratorSet, PartitionCell, Permutation, PointBase, TacticalSequence};
pub use subset::Subset;
