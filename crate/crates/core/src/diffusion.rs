//! The push (coordinate relaxation) core on the degree-normalized system
//! `(I - αPᵀ) y = b`.
//!
//! A push at node `j` with floor `f` moves `r_j - f` into `y_j`, sets
//! `r_j = f`, and adds `α (r_j - f) / d_i` to the residual of every neighbor
//! `i`. All updates add nonnegative quantities, so `y` and `r` stay
//! nonnegative and the mass identity
//! `(1-α) Σ d_j y_j + Σ d_j r_j = 1` holds after every push.

use std::collections::VecDeque;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::NodeMap;

/// Parameters shared by the path algorithm and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionParams {
    pub alpha: f64,
    pub rho: f64,
    pub eps_min: f64,
    pub eps_max: f64,
}

impl DiffusionParams {
    pub fn new(alpha: f64, rho: f64, eps_min: f64, eps_max: f64) -> Result<Self> {
        let params = DiffusionParams {
            alpha,
            rho,
            eps_min,
            eps_max,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_rho(self.rho)?;
        check_eps(self.eps_min)?;
        if !(self.eps_max > self.eps_min) || !self.eps_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eps_max must exceed eps_min (got eps_min={}, eps_max={})",
                self.eps_min, self.eps_max
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if (0.0..1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "rho must lie in [0, 1), got {rho}"
        )))
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )))
    }
}

/// Degree-normalized seed vector `b = D⁻¹ v` for `v` uniform on the seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedVector {
    seeds: Vec<usize>,
    entries: Vec<(usize, f64)>,
}

impl SeedVector {
    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    /// `(node, b_node)` in seed order.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn get(&self, node: usize) -> f64 {
        self.entries
            .iter()
            .find(|&&(j, _)| j == node)
            .map_or(0.0, |&(_, b)| b)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().map(|&(_, b)| b).fold(0.0, f64::max)
    }
}

/// Builds `b_j = 1 / (|S| d_j)` on the seed set `S`.
pub fn seed_vector(g: &Graph, seeds: &[usize]) -> Result<SeedVector> {
    if seeds.is_empty() {
        return Err(Error::InvalidSeed("seed list is empty".into()));
    }
    let mut seen = FxHashSet::default();
    for &s in seeds {
        if s >= g.node_count() {
            return Err(Error::InvalidSeed(format!(
                "seed {s} outside 0..{}",
                g.node_count()
            )));
        }
        if g.degree(s) == 0 {
            return Err(Error::InvalidSeed(format!("seed {s} has degree 0")));
        }
        if !seen.insert(s) {
            return Err(Error::InvalidSeed(format!("seed {s} listed twice")));
        }
    }
    let count = seeds.len() as f64;
    let entries = seeds
        .iter()
        .map(|&s| (s, 1.0 / (count * g.degree(s) as f64)))
        .collect();
    Ok(SeedVector {
        seeds: seeds.to_vec(),
        entries,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PushCounters {
    /// Number of pushes `T`.
    pub pushes: u64,
    /// `Σ_t d_{j(t)}` over all pushes.
    pub pushed_degree: u64,
    /// Insertions, updates and removals on the residual queue, heap, or shelf.
    pub residual_ops: u64,
}

/// Summary of a single push, passed to observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushRecord {
    pub node: usize,
    /// Residual at `node` before the push.
    pub residual: f64,
    /// Residual left behind at `node`.
    pub floor: f64,
    /// Amount moved into `y`, `residual - floor`.
    pub amount: f64,
    /// `y` at `node` after the push.
    pub value: f64,
    /// True when `node` had no solution mass before this push.
    pub first_touch: bool,
}

/// Callback invoked after every push of a run.
pub trait PushObserver {
    fn on_push(&mut self, g: &Graph, state: &DiffusionState, push: &PushRecord);
}

impl<F> PushObserver for F
where
    F: FnMut(&Graph, &DiffusionState, &PushRecord),
{
    fn on_push(&mut self, g: &Graph, state: &DiffusionState, push: &PushRecord) {
        self(g, state, push)
    }
}

/// Observer that does nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl PushObserver for NoObserver {
    fn on_push(&mut self, _: &Graph, _: &DiffusionState, _: &PushRecord) {}
}

/// Sparse solution and residual of one run.
///
/// Residual entries are kept even after falling below every threshold.
#[derive(Debug, Clone, Default)]
pub struct DiffusionState {
    y: NodeMap<f64>,
    r: NodeMap<f64>,
    pub counters: PushCounters,
}

impl DiffusionState {
    /// `y = 0`, `r = b`.
    pub fn new(seed: &SeedVector) -> Self {
        let mut r = NodeMap::default();
        for &(j, b) in seed.entries() {
            r.insert(j, b);
        }
        DiffusionState {
            y: NodeMap::default(),
            r,
            counters: PushCounters::default(),
        }
    }

    pub fn value(&self, node: usize) -> f64 {
        self.y.get(&node).copied().unwrap_or(0.0)
    }

    pub fn residual(&self, node: usize) -> f64 {
        self.r.get(&node).copied().unwrap_or(0.0)
    }

    pub fn solution(&self) -> &NodeMap<f64> {
        &self.y
    }

    pub fn residuals(&self) -> &NodeMap<f64> {
        &self.r
    }

    /// Nonzero solution entries sorted by node id.
    pub fn sorted_solution(&self) -> Vec<(usize, f64)> {
        let mut v: Vec<_> = self.y.iter().map(|(&j, &y)| (j, y)).collect();
        v.sort_unstable_by_key(|&(j, _)| j);
        v
    }

    /// `‖r‖∞` by a scan over stored residuals.
    pub fn max_residual(&self) -> f64 {
        self.r.values().copied().fold(0.0, f64::max)
    }

    /// `|(1-α) Σ d_j y_j + Σ d_j r_j - 1|`.
    pub fn mass_defect(&self, g: &Graph, alpha: f64) -> f64 {
        let solved: f64 = self.y.iter().map(|(&j, &y)| g.degree(j) as f64 * y).sum();
        let left: f64 = self.r.iter().map(|(&j, &r)| g.degree(j) as f64 * r).sum();
        ((1.0 - alpha) * solved + left - 1.0).abs()
    }

    /// Pushes at `node`, leaving `floor` behind. Neighbors whose residual
    /// changed are appended to `touched` with their new residual.
    pub fn push_step(
        &mut self,
        g: &Graph,
        alpha: f64,
        node: usize,
        floor: f64,
        touched: &mut Vec<(usize, f64)>,
    ) -> PushRecord {
        let r = self
            .r
            .get_mut(&node)
            .expect("push at a node without residual");
        let residual = *r;
        debug_assert!(
            residual > floor && floor >= 0.0,
            "push requires r_j > floor >= 0 (r_j={residual}, floor={floor})"
        );
        *r = floor;
        let amount = residual - floor;

        let y = self.y.entry(node).or_insert(0.0);
        let first_touch = *y == 0.0;
        *y += amount;
        let value = *y;

        let spread = alpha * amount;
        for &u in g.neighbors(node) {
            let ru = self.r.entry(u).or_insert(0.0);
            *ru += spread / g.degree(u) as f64;
            touched.push((u, *ru));
        }

        self.counters.pushes += 1;
        self.counters.pushed_degree += g.degree(node) as u64;
        PushRecord {
            node,
            residual,
            floor,
            amount,
            value,
            first_touch,
        }
    }
}

/// PageRank values `x_j = (1-α) d_j y_j`, sorted by node id.
pub fn to_pagerank(state: &DiffusionState, g: &Graph, alpha: f64) -> Vec<(usize, f64)> {
    state
        .sorted_solution()
        .into_iter()
        .map(|(j, y)| (j, (1.0 - alpha) * g.degree(j) as f64 * y))
        .collect()
}

/// Order in which [`single_push_run`] services its work queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueueDiscipline {
    #[default]
    Fifo,
    Lifo,
}

/// Classic queue-driven push at a single accuracy `eps`, with floor `rho * eps`.
/// Returns once every residual is below `eps`.
pub fn single_push_run(
    g: &Graph,
    seed: &SeedVector,
    alpha: f64,
    rho: f64,
    eps: f64,
    discipline: QueueDiscipline,
) -> Result<DiffusionState> {
    single_push_run_observed(g, seed, alpha, rho, eps, discipline, &mut NoObserver)
}

pub fn single_push_run_observed<O: PushObserver>(
    g: &Graph,
    seed: &SeedVector,
    alpha: f64,
    rho: f64,
    eps: f64,
    discipline: QueueDiscipline,
    observer: &mut O,
) -> Result<DiffusionState> {
    check_alpha(alpha)?;
    check_rho(rho)?;
    check_eps(eps)?;

    let mut state = DiffusionState::new(seed);
    let mut queue = VecDeque::new();
    let mut queued = FxHashSet::default();
    for &(j, b) in seed.entries() {
        if b >= eps {
            queue.push_back(j);
            queued.insert(j);
            state.counters.residual_ops += 1;
        }
    }

    let floor = rho * eps;
    let mut touched = Vec::new();
    loop {
        let next = match discipline {
            QueueDiscipline::Fifo => queue.pop_front(),
            QueueDiscipline::Lifo => queue.pop_back(),
        };
        let Some(j) = next else { break };
        queued.remove(&j);
        state.counters.residual_ops += 1;

        touched.clear();
        let push = state.push_step(g, alpha, j, floor, &mut touched);
        for &(u, ru) in &touched {
            if ru >= eps && queued.insert(u) {
                queue.push_back(u);
                state.counters.residual_ops += 1;
            }
        }
        observer.on_push(g, &state, &push);
    }
    Ok(state)
}
