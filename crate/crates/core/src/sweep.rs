//! Sweep cuts: conductance of every prefix of the solution ranked by value.
//!
//! [`full_sweep`] sorts from scratch. [`RankedSolution`] keeps the ranking and
//! the prefix cut/volume arrays up to date as single entries grow, touching
//! only the prefixes between a node's old and new rank.
//!
//! Both use the same total order: larger value first, ties by smaller node id.

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cut_ratio, Graph};
use crate::slots::Slots;

/// Minimum-conductance prefix: the top `size` nodes have conductance `conductance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepBest {
    pub size: usize,
    pub conductance: f64,
}

/// A materialized best set together with where in a run it was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestSet {
    /// Index of the path event or grid record that produced the set.
    pub index: usize,
    pub eps: f64,
    pub conductance: f64,
    pub nodes: Vec<usize>,
}

#[inline]
fn ranks_before(a_value: f64, a_node: usize, b_value: f64, b_node: usize) -> bool {
    a_value > b_value || (a_value == b_value && a_node < b_node)
}

/// Result of a from-scratch sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepProfile {
    /// Nonzero nodes in rank order.
    pub order: Vec<usize>,
    /// `conductances[m - 1]` is the conductance of the top-`m` prefix, `None`
    /// when its complement has zero volume.
    pub conductances: Vec<Option<f64>>,
    pub best: SweepBest,
}

impl SweepProfile {
    pub fn best_set(&self) -> &[usize] {
        &self.order[..self.best.size]
    }
}

/// Sorts the nonzero entries of `values` and computes every prefix conductance.
pub fn full_sweep<I>(g: &Graph, values: I) -> Result<SweepProfile>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut ranked: Vec<(usize, f64)> = values.into_iter().filter(|&(_, v)| v > 0.0).collect();
    if ranked.is_empty() {
        return Err(Error::EmptySupport);
    }
    ranked.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let total = g.total_volume();
    let mut inside = FxHashSet::default();
    let mut cut = 0u64;
    let mut volume = 0u64;
    let mut conductances = Vec::with_capacity(ranked.len());
    let mut best: Option<SweepBest> = None;
    for (i, &(u, _)) in ranked.iter().enumerate() {
        let d = g.degree(u) as u64;
        let internal = g
            .neighbors(u)
            .iter()
            .filter(|v| inside.contains(*v))
            .count() as u64;
        inside.insert(u);
        cut = cut + d - 2 * internal;
        volume += d;
        let phi = cut_ratio(cut, volume, total);
        if let Some(phi) = phi {
            if best.is_none_or(|b| phi < b.conductance) {
                best = Some(SweepBest {
                    size: i + 1,
                    conductance: phi,
                });
            }
        }
        conductances.push(phi);
    }
    let best = best.ok_or(Error::UndefinedSet("every prefix of the sweep"))?;
    Ok(SweepProfile {
        order: ranked.into_iter().map(|(u, _)| u).collect(),
        conductances,
        best,
    })
}

/// Work done by one call to [`RankedSolution::update`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PrefixUpdate {
    /// Number of rank positions the node moved up.
    pub delta: usize,
    /// Prefixes whose cut/volume were rewritten.
    pub touched_prefixes: usize,
    /// Neighbor entries inspected.
    pub neighbor_scans: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepStats {
    pub promotions: u64,
    pub total_delta: u64,
    pub max_delta: u64,
    /// Bucket 0 counts `Δ = 0`; bucket `k ≥ 1` counts `2^(k-1) ≤ Δ < 2^k`.
    pub delta_histogram: Vec<u64>,
    pub touched_prefixes: u64,
    pub neighbor_scans: u64,
}

impl SweepStats {
    fn record(&mut self, update: &PrefixUpdate) {
        let delta = update.delta as u64;
        self.promotions += 1;
        self.total_delta += delta;
        self.max_delta = self.max_delta.max(delta);
        let bucket = (u64::BITS - delta.leading_zeros()) as usize;
        if self.delta_histogram.len() <= bucket {
            self.delta_histogram.resize(bucket + 1, 0);
        }
        self.delta_histogram[bucket] += 1;
        self.touched_prefixes += update.touched_prefixes as u64;
        self.neighbor_scans += update.neighbor_scans as u64;
    }
}

/// Solution entries in rank order with per-prefix cut and volume.
///
/// Ranks are 1-based: `order()[m - 1]` has rank `m`, and prefix `m` is the
/// set of the top `m` nodes.
#[derive(Debug, Clone)]
pub struct RankedSolution {
    order: Vec<usize>,
    values: Vec<f64>,
    rank: Slots,
    prefix_cut: Vec<u64>,
    prefix_vol: Vec<u64>,
    total_volume: u64,
    minima: MinTree,
    scratch: Vec<u32>,
    stats: SweepStats,
}

impl RankedSolution {
    pub fn new(g: &Graph) -> Self {
        RankedSolution {
            order: Vec::new(),
            values: Vec::new(),
            rank: Slots::with_nodes(g.node_count()),
            prefix_cut: vec![0],
            prefix_vol: vec![0],
            total_volume: g.total_volume(),
            minima: MinTree::default(),
            scratch: Vec::new(),
            stats: SweepStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rank(&self, node: usize) -> Option<usize> {
        self.rank.get(node)
    }

    /// `|∂ S(m)|` for `m` in `0..=len()`.
    pub fn prefix_cut(&self, m: usize) -> u64 {
        self.prefix_cut[m]
    }

    /// `vol S(m)` for `m` in `0..=len()`.
    pub fn prefix_volume(&self, m: usize) -> u64 {
        self.prefix_vol[m]
    }

    pub fn prefix_conductance(&self, m: usize) -> Option<f64> {
        cut_ratio(self.prefix_cut[m], self.prefix_vol[m], self.total_volume)
    }

    /// Minimum-conductance prefix of the current ranking.
    pub fn best(&self) -> Option<SweepBest> {
        self.minima
            .min()
            .map(|(conductance, size)| SweepBest { size, conductance })
    }

    /// Nodes of the top-`m` prefix.
    pub fn prefix_nodes(&self, m: usize) -> &[usize] {
        &self.order[..m]
    }

    pub fn stats(&self) -> &SweepStats {
        &self.stats
    }

    /// Raises `node` to `value` (appending it if new), restores rank order,
    /// and repairs the prefix arrays.
    pub fn update(&mut self, g: &Graph, node: usize, value: f64) -> PrefixUpdate {
        let (old_rank, delta) = self.promote(node, value);
        let update = self.update_prefixes(g, node, old_rank, delta);
        self.stats.record(&update);
        update
    }

    /// Moves `node` up to its rank for `value` by bubbling past smaller
    /// entries. A node not yet ranked is appended first. Returns the rank it
    /// started from (`len()` for a new node) and how many positions it moved.
    ///
    /// Prefix arrays are left stale; follow with [`Self::update_prefixes`].
    pub fn promote(&mut self, node: usize, value: f64) -> (usize, usize) {
        let old_rank = match self.rank.get(node) {
            Some(m) => {
                debug_assert!(value >= self.values[m - 1], "values may only grow");
                self.values[m - 1] = value;
                m
            }
            None => {
                self.order.push(node);
                self.values.push(value);
                self.order.len()
            }
        };
        let mut pos = old_rank - 1;
        while pos > 0 && ranks_before(value, node, self.values[pos - 1], self.order[pos - 1]) {
            self.order[pos] = self.order[pos - 1];
            self.values[pos] = self.values[pos - 1];
            self.rank.set(self.order[pos], pos + 1);
            pos -= 1;
        }
        self.order[pos] = node;
        self.values[pos] = value;
        self.rank.set(node, pos + 1);
        (old_rank, old_rank - 1 - pos)
    }

    /// Rewrites prefixes `old_rank - delta ..= old_rank` after `node` moved
    /// from `old_rank` to `old_rank - delta`. Uses
    /// `S_new(m) = S_old(m - 1) ∪ {node}` and one pass over the neighbors.
    pub fn update_prefixes(
        &mut self,
        g: &Graph,
        node: usize,
        old_rank: usize,
        delta: usize,
    ) -> PrefixUpdate {
        let is_new = self.prefix_cut.len() == old_rank;
        if is_new {
            self.prefix_cut.push(0);
            self.prefix_vol.push(0);
        } else if delta == 0 {
            return PrefixUpdate::default();
        }

        let new_rank = old_rank - delta;
        self.scratch.clear();
        self.scratch.resize(delta, 0);
        let mut above = 0u64;
        let neighbors = g.neighbors(node);
        for u in neighbors {
            match self.rank.get(*u) {
                Some(m) if m < new_rank => above += 1,
                Some(m) if m <= old_rank => self.scratch[m - new_rank - 1] += 1,
                _ => {}
            }
        }

        let d = g.degree(node) as u64;
        let mut inside: u64 = above + self.scratch.iter().map(|&c| c as u64).sum::<u64>();
        for m in (new_rank..=old_rank).rev() {
            if m > new_rank {
                // neighbors ranked in (new_rank, m] are inside S_new(m)
                let here = self.scratch[m - new_rank - 1] as u64;
                self.prefix_cut[m] = self.prefix_cut[m - 1] + d - 2 * inside;
                inside -= here;
            } else {
                debug_assert_eq!(inside, above);
                self.prefix_cut[m] = self.prefix_cut[m - 1] + d - 2 * inside;
            }
            self.prefix_vol[m] = self.prefix_vol[m - 1] + d;
            let phi = cut_ratio(self.prefix_cut[m], self.prefix_vol[m], self.total_volume);
            self.minima.set(m, phi);
        }

        PrefixUpdate {
            delta,
            touched_prefixes: delta + 1,
            neighbor_scans: neighbors.len(),
        }
    }
}

/// Segment tree over `(conductance, prefix size)` pairs keyed by prefix size,
/// answering the lexicographic minimum in `O(1)`.
#[derive(Debug, Clone, Default)]
struct MinTree {
    capacity: usize,
    nodes: Vec<(f64, usize)>,
}

const EMPTY: (f64, usize) = (f64::INFINITY, usize::MAX);

fn smaller(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

impl MinTree {
    fn set(&mut self, m: usize, phi: Option<f64>) {
        if m > self.capacity {
            self.grow(m);
        }
        let mut i = self.capacity + m - 1;
        let leaf = phi.map_or(EMPTY, |p| (p, m));
        if self.nodes[i] == leaf {
            return;
        }
        self.nodes[i] = leaf;
        while i > 1 {
            i /= 2;
            let merged = smaller(self.nodes[2 * i], self.nodes[2 * i + 1]);
            // ancestors of an unchanged node are unchanged too
            if self.nodes[i] == merged {
                break;
            }
            self.nodes[i] = merged;
        }
    }

    fn grow(&mut self, m: usize) {
        let capacity = m.next_power_of_two().max(16);
        let mut nodes = vec![EMPTY; 2 * capacity];
        if self.capacity > 0 {
            nodes[capacity..capacity + self.capacity]
                .copy_from_slice(&self.nodes[self.capacity..2 * self.capacity]);
        }
        for i in (1..capacity).rev() {
            nodes[i] = smaller(nodes[2 * i], nodes[2 * i + 1]);
        }
        self.capacity = capacity;
        self.nodes = nodes;
    }

    fn min(&self) -> Option<(f64, usize)> {
        self.nodes
            .get(1)
            .copied()
            .filter(|&(phi, _)| phi.is_finite())
    }
}
