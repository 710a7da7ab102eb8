//! Push over a geometric grid of accuracies using the shelf structure.
//!
//! Residuals are bucketed by band; the top non-empty bucket is always
//! processed first, with full pushes. When buckets `0..=k` are all empty the
//! residual is below `ε_k`, so the solution is `ε_k`-accurate and a full
//! sweep is recorded for `k`.

use serde::Serialize;

use crate::diffusion::{check_alpha, DiffusionState, NoObserver, PushObserver, SeedVector};
use crate::error::Result;
use crate::graph::Graph;
use crate::shelf::{EpsGrid, Shelf};
use crate::sweep::{full_sweep, BestSet, SweepBest};

const AUDIT_INTERVAL: u64 = 1 << 16;

/// Sweep taken when accuracy `ε_k` was first reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRecord {
    pub k: usize,
    pub eps: f64,
    /// Cumulative pushes when the record was taken.
    pub pushes: u64,
    pub pushed_degree: u64,
    /// `‖r‖∞` at record time, below `eps`.
    pub max_residual: f64,
    pub support: usize,
    pub best: Option<SweepBest>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GridStats {
    pub shelf_ops: u64,
    pub top_scan_steps: u64,
    /// Full sweeps actually computed; records with no intervening push reuse
    /// the previous sweep.
    pub sweeps: u64,
}

#[derive(Debug, Clone)]
pub struct GridResult {
    pub alpha: f64,
    pub grid: EpsGrid,
    /// One record per `k = 0..=N`, in order.
    pub records: Vec<GridRecord>,
    /// Lowest-conductance set over all records.
    pub best: Option<BestSet>,
    pub state: DiffusionState,
    pub stats: GridStats,
}

pub fn ppr_grid(g: &Graph, seed: &SeedVector, alpha: f64, grid: &EpsGrid) -> Result<GridResult> {
    ppr_grid_observed(g, seed, alpha, grid, &mut NoObserver)
}

pub fn ppr_grid_observed<O: PushObserver>(
    g: &Graph,
    seed: &SeedVector,
    alpha: f64,
    grid: &EpsGrid,
    observer: &mut O,
) -> Result<GridResult> {
    check_alpha(alpha)?;
    let mut state = DiffusionState::new(seed);
    let mut shelf = Shelf::new(grid.clone());
    for &(j, b) in seed.entries() {
        shelf.move_to_shelf(j, b);
    }

    let mut records = Vec::with_capacity(grid.steps() + 1);
    let mut best: Option<BestSet> = None;
    let mut sweeps = 0u64;
    let mut touched = Vec::new();
    loop {
        let top = shelf.top();
        let cleared = top.unwrap_or(grid.steps() + 1);
        while records.len() < cleared {
            let k = records.len();
            let reuse = records
                .last()
                .filter(|r: &&GridRecord| r.pushes == state.counters.pushes)
                .map(|r| r.best);
            let sweep_best = match reuse {
                Some(b) => b,
                None if state.solution().is_empty() => None,
                None => {
                    sweeps += 1;
                    let profile = full_sweep(g, state.solution().iter().map(|(&j, &y)| (j, y)))?;
                    if best
                        .as_ref()
                        .is_none_or(|b| profile.best.conductance < b.conductance)
                    {
                        best = Some(BestSet {
                            index: k,
                            eps: grid.eps(k),
                            conductance: profile.best.conductance,
                            nodes: profile.best_set().to_vec(),
                        });
                    }
                    Some(profile.best)
                }
            };
            let max_residual = state.max_residual();
            debug_assert!(max_residual < grid.eps(k));
            records.push(GridRecord {
                k,
                eps: grid.eps(k),
                pushes: state.counters.pushes,
                pushed_degree: state.counters.pushed_degree,
                max_residual,
                support: state.solution().len(),
                best: sweep_best,
            });
        }
        if top.is_none() {
            break;
        }

        let (j, _) = shelf.pop().expect("top shelf is non-empty");
        touched.clear();
        let push = state.push_step(g, alpha, j, 0.0, &mut touched);
        for &(u, ru) in &touched {
            shelf.move_to_shelf(u, ru);
        }
        observer.on_push(g, &state, &push);

        if cfg!(debug_assertions) && state.counters.pushes.is_multiple_of(AUDIT_INTERVAL) {
            assert!(
                shelf.is_consistent(state.residuals()),
                "shelf band audit failed"
            );
        }
    }

    state.counters.residual_ops = shelf.ops();
    Ok(GridResult {
        alpha,
        grid: grid.clone(),
        records,
        best,
        state,
        stats: GridStats {
            shelf_ops: shelf.ops(),
            top_scan_steps: shelf.scan_steps(),
            sweeps,
        },
    })
}
