//! Exact solvers for the minimum-span timeline cover problem on temporal
//! graphs.
//!
//! A temporal graph has a fixed set of base vertices and edges that exist at
//! single timestamps. A timeline cover assigns each base vertex one
//! contiguous interval of active timestamps so that every edge has an active
//! endpoint; the objective is the total span (interval length minus one,
//! summed). The fixed-parameter solver combines iterative compression over
//! base vertices with a reduction of each compression step to a constrained
//! digraph pair cut problem, solved by min-cut-guided branching. Exhaustive
//! oracles ([`oracle`]) validate every stage on small instances and back the
//! differential test suites.

pub mod cli;
pub mod compression;
#[doc(hidden)]
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod paircut;
pub mod temporal;
