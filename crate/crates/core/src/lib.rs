//! Seeded PageRank diffusions computed by push, with solution paths over the
//! accuracy parameter and best-conductance sweep sets at every achieved accuracy.
//!
//! The crate works on the degree-normalized system `(I - αPᵀ) y = b`, where
//! `P = A D⁻¹`, `b = D⁻¹ v` and the PageRank vector is `x = (1-α) D y`.
//!
//! Two multi-accuracy algorithms are provided:
//!
//! * [`ppr_path`] drives push from a max-heap of residuals and records the
//!   best sweep set every time `‖r‖∞` reaches a new minimum, maintaining the
//!   sweep incrementally in a [`RankedSolution`].
//! * [`ppr_grid`] processes residuals through a [`Shelf`] bucket structure
//!   over a geometric grid `ε_k = ε_0 θ^k` and runs a full sweep whenever an
//!   accuracy on the grid is first achieved.
//!
//! [`reference`] holds independent dense solvers and brute-force sweeps used
//! to validate everything else.

// Negated float comparisons are deliberate: they reject NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod error;
pub mod graph;
pub mod grid;
pub mod heap;
pub mod path;
pub mod reference;
pub mod shelf;
mod slots;
pub mod sweep;

pub use diffusion::{
    seed_vector, single_push_run, single_push_run_observed, to_pagerank, DiffusionParams,
    DiffusionState, PushCounters, PushObserver, PushRecord, QueueDiscipline, SeedVector,
};
pub use error::{Error, Result};
pub use graph::{conductance, Graph, GraphFormat, NodeSet};
pub use grid::{ppr_grid, ppr_grid_observed, GridRecord, GridResult};
pub use heap::ResidualHeap;
pub use path::{
    ppr_path, ppr_path_observed, trajectory, OverflowPolicy, PathEvent, PathOptions, PathResult,
    TrajectoryDelta,
};
pub use shelf::{shelf_index, EpsGrid, Shelf};
pub use sweep::{full_sweep, BestSet, RankedSolution, SweepBest, SweepProfile, SweepStats};

/// Node-keyed hash map used for all sparse per-node storage.
pub type NodeMap<V> = rustc_hash::FxHashMap<usize, V>;
