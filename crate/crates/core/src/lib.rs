//! Finite groups as Cayley tables, their intersection-subgroup lattices, and
//! nim-numbers of the achievement game `GEN(G)` and avoidance game `DNG(G)`.
//!
//! Two independent routes compute `GEN(G)`: [`solver::brute_nim`] walks the
//! raw game tree from the empty position, while [`solver::structure_nim`]
//! works one structure class at a time on the lattice of intersections of
//! maximal subgroups. The [`theory`] module holds deficiency machinery and
//! closed-form predictions for generalized dihedral groups.

pub mod analysis;
pub mod bitset;
pub mod catalog;
pub mod diagram;
pub mod error;
pub mod group;
pub mod lattice;
pub mod solver;
pub mod spec;
pub mod suite;
pub mod theory;

pub use analysis::Analysis;
pub use bitset::ElementSet;
pub use error::{Error, Result};
pub use group::GroupTable;
pub use lattice::{ClassId, IntersectionLattice, LatticeConfig, SubgroupSet};
pub use solver::{GameVariant, Nim, SolveMode};
pub use spec::GroupSpec;

/// Version string stamped into cached and serialized results.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
