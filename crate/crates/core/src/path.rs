//! Solution paths over the accuracy parameter.
//!
//! Push is driven from a max-heap of residuals `≥ ε_min`. Each time `‖r‖∞`
//! reaches a new minimum `ε_cur`, the solution satisfies the accuracy
//! criterion at `ε_cur` and the best sweep set of the incrementally
//! maintained ranking is recorded as an event. Pushes leave `ρ ε_cur` behind
//! at the pushed node.

use serde::Serialize;

use crate::diffusion::{DiffusionParams, DiffusionState, NoObserver, PushObserver, SeedVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::heap::ResidualHeap;
use crate::sweep::{BestSet, RankedSolution, SweepBest, SweepStats};
use crate::NodeMap;

const AUDIT_INTERVAL: u64 = 1 << 16;
const MAX_CHECK_SUPPORT: usize = 256;
const CHECK_INTERVAL: u64 = 1 << 10;

/// What to do when the number of stored events reaches `max_events`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverflowPolicy {
    /// Fail the run with [`Error::EventOverflow`].
    Error,
    /// Double the recording stride and thin the stored events. Events where
    /// the running best set improves are always kept.
    #[default]
    Downsample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    pub max_events: Option<usize>,
    pub overflow: OverflowPolicy,
    pub record_trajectories: bool,
    /// Relative improvement of the running best conductance that flags an
    /// event as significant.
    pub significance: f64,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            max_events: None,
            overflow: OverflowPolicy::Downsample,
            record_trajectories: true,
            significance: 0.05,
        }
    }
}

/// One newly achieved accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathEvent {
    /// Sequence number among all events of the run, stored or not.
    pub index: u64,
    /// `‖r‖∞` when the event fired.
    pub eps: f64,
    /// Pushes performed before the event.
    pub pushes: u64,
    /// Nonzeros in the solution.
    pub support: usize,
    /// Best sweep prefix of the solution at this event.
    pub best: Option<SweepBest>,
    /// The running best conductance strictly improved here.
    pub improved: bool,
    /// The running best improved by at least the significance threshold.
    pub significant: bool,
}

/// `node` holds `value` from event `event` on (until its next delta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryDelta {
    pub event: u64,
    pub node: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub params: DiffusionParams,
    /// Stored events, `eps` strictly decreasing.
    pub events: Vec<PathEvent>,
    /// Solution changes between stored events, sorted by event then node.
    pub deltas: Vec<TrajectoryDelta>,
    /// Lowest-conductance set over every event of the run.
    pub best: Option<BestSet>,
    pub state: DiffusionState,
    pub sweep: SweepStats,
    pub max_heap_len: usize,
    /// Events fired, including ones not stored.
    pub events_seen: u64,
    /// Final recording stride; 1 unless downsampling kicked in.
    pub stride: u64,
}

impl PathResult {
    pub fn event(&self, index: u64) -> Option<&PathEvent> {
        self.events
            .binary_search_by_key(&index, |e| e.index)
            .ok()
            .map(|i| &self.events[i])
    }

    pub fn final_event(&self) -> Option<&PathEvent> {
        self.events.last()
    }

    /// Walks the stored events in order, passing the solution as it stood
    /// at each one.
    pub fn replay<F>(&self, mut visit: F)
    where
        F: FnMut(&PathEvent, &NodeMap<f64>),
    {
        let mut y = NodeMap::default();
        let mut deltas = self.deltas.iter().peekable();
        for event in &self.events {
            while let Some(d) = deltas.next_if(|d| d.event <= event.index) {
                y.insert(d.node, d.value);
            }
            visit(event, &y);
        }
    }
}

/// Step function of one node: `(eps, value)` at each stored event where the
/// node's value changed. Empty for nodes the run never reached.
pub fn trajectory(result: &PathResult, node: usize) -> Vec<(f64, f64)> {
    result
        .deltas
        .iter()
        .filter(|d| d.node == node)
        .map(|d| {
            let eps = result.event(d.event).map_or(f64::NAN, |e| e.eps);
            (eps, d.value)
        })
        .collect()
}

pub fn ppr_path(
    g: &Graph,
    seed: &SeedVector,
    params: DiffusionParams,
    options: PathOptions,
) -> Result<PathResult> {
    ppr_path_observed(g, seed, params, options, &mut NoObserver)
}

pub fn ppr_path_observed<O: PushObserver>(
    g: &Graph,
    seed: &SeedVector,
    params: DiffusionParams,
    options: PathOptions,
    observer: &mut O,
) -> Result<PathResult> {
    params.validate()?;
    if options.max_events == Some(0) {
        return Err(Error::InvalidParameter(
            "max_events must be positive".into(),
        ));
    }
    let mut run = PathRun::new(g, seed, params, options);
    run.execute(observer)?;
    Ok(run.finish())
}

struct PathRun<'g> {
    g: &'g Graph,
    params: DiffusionParams,
    options: PathOptions,
    state: DiffusionState,
    heap: ResidualHeap,
    ranked: RankedSolution,
    events: Vec<PathEvent>,
    deltas: Vec<TrajectoryDelta>,
    dirty: Vec<usize>,
    is_dirty: NodeMap<()>,
    best: Option<BestSet>,
    events_seen: u64,
    stride: u64,
    max_heap_len: usize,
}

impl<'g> PathRun<'g> {
    fn new(g: &'g Graph, seed: &SeedVector, params: DiffusionParams, options: PathOptions) -> Self {
        let state = DiffusionState::new(seed);
        let mut heap = ResidualHeap::with_nodes(g.node_count());
        for &(j, b) in seed.entries() {
            if b >= params.eps_min {
                heap.upsert(j, b);
            }
        }
        PathRun {
            g,
            params,
            options,
            state,
            max_heap_len: heap.len(),
            heap,
            ranked: RankedSolution::new(g),
            events: Vec::new(),
            deltas: Vec::new(),
            dirty: Vec::new(),
            is_dirty: NodeMap::default(),
            best: None,
            events_seen: 0,
            stride: 1,
        }
    }

    fn residual_norm(&self) -> f64 {
        // entries below eps_min are not in the heap, but any heap entry beats them
        self.heap
            .peek()
            .map_or_else(|| self.state.max_residual(), |(_, r)| r)
    }

    fn execute<O: PushObserver>(&mut self, observer: &mut O) -> Result<()> {
        let DiffusionParams {
            alpha,
            rho,
            eps_min,
            eps_max,
        } = self.params;
        let mut eps_cur = eps_max;
        let norm = self.residual_norm();
        if norm < eps_cur {
            self.record_event(norm)?;
            eps_cur = norm;
        }

        let mut touched = Vec::new();
        while let Some((j, r)) = self.heap.peek() {
            // full scan on every push while the support is small, sampled beyond
            if cfg!(debug_assertions)
                && (self.state.residuals().len() <= MAX_CHECK_SUPPORT
                    || self.state.counters.pushes.is_multiple_of(CHECK_INTERVAL))
            {
                assert_eq!(
                    r,
                    self.state.max_residual(),
                    "heap top is not the max residual"
                );
            }
            let floor = rho * eps_cur;
            touched.clear();
            let push = self.state.push_step(self.g, alpha, j, floor, &mut touched);
            debug_assert!(!push.first_touch || push.amount >= (1.0 - rho) * eps_min);

            if floor >= eps_min {
                self.heap.upsert(j, floor);
            } else {
                self.heap.remove(j);
            }
            for &(u, ru) in &touched {
                if ru >= eps_min {
                    self.heap.upsert(u, ru);
                }
            }
            self.max_heap_len = self.max_heap_len.max(self.heap.len());

            self.ranked.update(self.g, j, push.value);
            if self.options.record_trajectories && self.is_dirty.insert(j, ()).is_none() {
                self.dirty.push(j);
            }
            observer.on_push(self.g, &self.state, &push);

            if cfg!(debug_assertions) && self.state.counters.pushes.is_multiple_of(AUDIT_INTERVAL) {
                self.audit();
            }

            let norm = self.residual_norm();
            if norm < eps_cur {
                self.record_event(norm)?;
                eps_cur = norm;
            }
        }
        Ok(())
    }

    fn audit(&self) {
        assert!(self.heap.is_consistent());
        for (&node, &r) in self.state.residuals() {
            let key = self.heap.key(node);
            if r >= self.params.eps_min {
                assert_eq!(
                    key,
                    Some(r),
                    "residual {r} at node {node} missing from heap"
                );
            } else {
                assert_eq!(key, None, "node {node} below eps_min still in heap");
            }
        }
    }

    fn record_event(&mut self, eps: f64) -> Result<()> {
        let index = self.events_seen;
        self.events_seen += 1;
        let is_final = self.heap.is_empty();

        let best = self.ranked.best();
        let previous = self.best.as_ref().map(|b| b.conductance);
        let improved = match (best, previous) {
            (Some(b), Some(p)) => b.conductance < p,
            (Some(_), None) => true,
            _ => false,
        };
        let significant = improved
            && previous.is_none_or(|p| {
                best.is_some_and(|b| b.conductance <= (1.0 - self.options.significance) * p)
            });
        if improved {
            let b = best.expect("improved implies a best prefix");
            self.best = Some(BestSet {
                index: index as usize,
                eps,
                conductance: b.conductance,
                nodes: self.ranked.prefix_nodes(b.size).to_vec(),
            });
        }

        if !(is_final || improved || index.is_multiple_of(self.stride)) {
            return Ok(());
        }
        if let Some(limit) = self.options.max_events {
            if self.events.len() >= limit {
                match self.options.overflow {
                    OverflowPolicy::Error => return Err(Error::EventOverflow { limit }),
                    OverflowPolicy::Downsample => {
                        while self.events.len() >= limit && self.stride <= self.events_seen {
                            self.compact();
                        }
                    }
                }
            }
        }

        self.events.push(PathEvent {
            index,
            eps,
            pushes: self.state.counters.pushes,
            support: self.ranked.len(),
            best,
            improved,
            significant,
        });
        let start = self.deltas.len();
        for node in self.dirty.drain(..) {
            self.deltas.push(TrajectoryDelta {
                event: index,
                node,
                value: self.state.value(node),
            });
        }
        self.deltas[start..].sort_unstable_by_key(|d| d.node);
        self.is_dirty.clear();
        Ok(())
    }

    /// Doubles the stride and drops stored events that no longer fall on it,
    /// moving their deltas forward to the next kept event.
    fn compact(&mut self) {
        self.stride *= 2;
        let stride = self.stride;
        self.events.retain(|e| e.improved || e.index % stride == 0);

        let kept: Vec<u64> = self.events.iter().map(|e| e.index).collect();
        let mut moved: Vec<(u64, usize, u64, f64)> = Vec::with_capacity(self.deltas.len());
        for d in self.deltas.drain(..) {
            match kept.partition_point(|&k| k < d.event) {
                i if i < kept.len() => moved.push((kept[i], d.node, d.event, d.value)),
                _ => {
                    if self.is_dirty.insert(d.node, ()).is_none() {
                        self.dirty.push(d.node);
                    }
                }
            }
        }
        moved.sort_unstable_by_key(|&(target, node, origin, _)| (target, node, origin));
        for i in 0..moved.len() {
            let (target, node, _, value) = moved[i];
            let superseded = moved
                .get(i + 1)
                .is_some_and(|&(t, n, _, _)| t == target && n == node);
            if !superseded {
                self.deltas.push(TrajectoryDelta {
                    event: target,
                    node,
                    value,
                });
            }
        }
    }

    fn finish(mut self) -> PathResult {
        self.state.counters.residual_ops = self.heap.ops();
        PathResult {
            params: self.params,
            events: self.events,
            deltas: self.deltas,
            best: self.best,
            sweep: self.ranked.stats().clone(),
            state: self.state,
            max_heap_len: self.max_heap_len,
            events_seen: self.events_seen,
            stride: self.stride,
        }
    }
}
