//! Geometric accuracy grids and the shelf bucket structure over residuals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::NodeMap;

/// Accuracies `ε_k = ε_0 θ^k` for `k = 0..=N`, strictly decreasing in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsGrid {
    eps0: f64,
    theta: f64,
    table: Vec<f64>,
}

impl EpsGrid {
    pub fn new(eps0: f64, theta: f64, steps: usize) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eps0 must lie in (0, 1), got {eps0}"
            )));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in (0, 1), got {theta}"
            )));
        }
        let table: Vec<f64> = (0..=steps).map(|k| eps0 * theta.powi(k as i32)).collect();
        if table.windows(2).any(|w| !(w[1] < w[0])) || table[steps] <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid with eps0={eps0}, theta={theta}, N={steps} underflows"
            )));
        }
        Ok(EpsGrid { eps0, theta, table })
    }

    /// Grid with `N = steps` whose ratio is chosen so that the grid ends at
    /// `eps_last`; the last entry is pinned to exactly `eps_last`.
    pub fn spanning(eps0: f64, eps_last: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Self::new(eps0, 0.5, 0);
        }
        if !(eps_last > 0.0 && eps_last < eps0) {
            return Err(Error::InvalidParameter(format!(
                "grid end {eps_last} must lie in (0, eps0={eps0})"
            )));
        }
        let theta = (eps_last / eps0).powf(1.0 / steps as f64);
        let mut grid = Self::new(eps0, theta, steps)?;
        if eps_last < grid.table[steps - 1] {
            grid.table[steps] = eps_last;
        }
        Ok(grid)
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `N`, the index of the smallest accuracy.
    pub fn steps(&self) -> usize {
        self.table.len() - 1
    }

    pub fn eps(&self, k: usize) -> f64 {
        self.table[k]
    }

    pub fn last(&self) -> f64 {
        self.table[self.steps()]
    }

    pub fn values(&self) -> &[f64] {
        &self.table
    }

    /// Band of `r ≥ ε_N`: 0 when `r ≥ ε_0`, otherwise the `k` with
    /// `ε_{k-1} > r ≥ ε_k`. The log formula is corrected against the stored
    /// table so that boundary values land in the right band.
    #[inline]
    pub(crate) fn band(&self, r: f64) -> usize {
        if r >= self.table[0] {
            return 0;
        }
        let steps = self.steps();
        let guess = ((r / self.eps0).ln() / self.theta.ln()).ceil();
        let mut k = if guess.is_nan() || guess < 1.0 {
            1
        } else if guess > steps as f64 {
            steps
        } else {
            guess as usize
        };
        while k < steps && r < self.table[k] {
            k += 1;
        }
        while k > 1 && r >= self.table[k - 1] {
            k -= 1;
        }
        k
    }
}

/// Shelf index of a residual value `r ≥ ε_N` on `grid`.
pub fn shelf_index(r: f64, grid: &EpsGrid) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shelf index of nonpositive residual {r}"
        )));
    }
    Ok(grid.band(r))
}

/// Buckets `H_0..H_N` of node ids keyed by residual band, with a locator map
/// and a cursor at the highest non-empty bucket.
///
/// Values below `ε_N` are never shelved.
#[derive(Debug, Clone)]
pub struct Shelf {
    grid: EpsGrid,
    buckets: Vec<Vec<usize>>,
    locator: NodeMap<(usize, usize)>,
    top: usize,
    ops: u64,
    scan_steps: u64,
}

impl Shelf {
    pub fn new(grid: EpsGrid) -> Self {
        let n = grid.steps() + 1;
        Shelf {
            grid,
            buckets: vec![Vec::new(); n],
            locator: NodeMap::default(),
            top: n,
            ops: 0,
            scan_steps: 0,
        }
    }

    pub fn grid(&self) -> &EpsGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.locator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locator.is_empty()
    }

    pub fn location(&self, node: usize) -> Option<usize> {
        self.locator.get(&node).map(|&(k, _)| k)
    }

    pub fn bucket(&self, k: usize) -> &[usize] {
        &self.buckets[k]
    }

    /// Shelf insertions and removals so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Empty buckets skipped while advancing the top cursor.
    pub fn scan_steps(&self) -> u64 {
        self.scan_steps
    }

    /// Cursor value; never past the first non-empty bucket.
    pub fn top_hint(&self) -> usize {
        self.top
    }

    /// Moves `node` to the bucket for residual `r`, or drops it when
    /// `r < ε_N`.
    pub fn move_to_shelf(&mut self, node: usize, r: f64) {
        let target = (r >= self.grid.last()).then(|| self.grid.band(r));
        let current = self.locator.get(&node).map(|&(k, _)| k);
        if target == current {
            return;
        }
        if current.is_some() {
            self.detach(node);
        }
        if let Some(k) = target {
            self.locator.insert(node, (k, self.buckets[k].len()));
            self.buckets[k].push(node);
            self.top = self.top.min(k);
            self.ops += 1;
        }
    }

    /// Index of the highest non-empty bucket, advancing the cursor past
    /// emptied buckets.
    pub fn top(&mut self) -> Option<usize> {
        while self.top < self.buckets.len() && self.buckets[self.top].is_empty() {
            self.top += 1;
            self.scan_steps += 1;
        }
        (self.top < self.buckets.len()).then_some(self.top)
    }

    /// Removes and returns the most recently shelved node of the top bucket.
    pub fn pop(&mut self) -> Option<(usize, usize)> {
        let k = self.top()?;
        let node = self.buckets[k].pop().expect("top bucket is non-empty");
        self.locator.remove(&node);
        self.ops += 1;
        Some((node, k))
    }

    fn detach(&mut self, node: usize) {
        let (k, slot) = self.locator.remove(&node).expect("node is shelved");
        let bucket = &mut self.buckets[k];
        bucket.swap_remove(slot);
        if let Some(&moved) = bucket.get(slot) {
            self.locator.insert(moved, (k, slot));
        }
        self.ops += 1;
    }

    /// Full audit against the residuals: every shelved node sits in its band,
    /// every unshelved residual is below `ε_N`, and the cursor is not past the
    /// first non-empty bucket.
    pub fn is_consistent(&self, residuals: &NodeMap<f64>) -> bool {
        for (k, bucket) in self.buckets.iter().enumerate() {
            for (slot, node) in bucket.iter().enumerate() {
                if self.locator.get(node) != Some(&(k, slot)) {
                    return false;
                }
                let r = residuals.get(node).copied().unwrap_or(0.0);
                let upper_ok = k == 0 || r < self.grid.eps(k - 1);
                if !(upper_ok && r >= self.grid.eps(k)) {
                    return false;
                }
            }
        }
        let shelved: usize = self.buckets.iter().map(Vec::len).sum();
        let first = self
            .buckets
            .iter()
            .position(|b| !b.is_empty())
            .unwrap_or(self.buckets.len());
        shelved == self.locator.len()
            && self.top <= first
            && residuals
                .iter()
                .all(|(node, &r)| self.locator.contains_key(node) || r < self.grid.last())
    }
}
