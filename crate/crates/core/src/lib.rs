//! Disjoint-path routing in tournaments.
//!
//! The [`linker`] module builds `k` vertex-disjoint paths between arbitrary
//! terminal pairs of a `(13k-6)`-strong tournament whose minimum out-degree
//! is at least `28k-13`, re-checking every counting step on the instance at
//! hand. The remaining modules supply the tournament model, flow-based
//! connectivity, an exhaustive linkage solver, anchored-set search, and
//! generators/verifiers used as independent oracles.

pub mod anchoring;
pub mod connectivity;
pub mod error;
pub mod exact;
mod flow;
pub mod generate;
pub mod linker;
pub mod tournament;
pub mod verify;

pub use connectivity::{CutWitness, Path};
pub use error::{Error, Result};
pub use exact::{Linkage, LinkageDocument};
pub use tournament::{Tournament, Vertex, VertexSet};
