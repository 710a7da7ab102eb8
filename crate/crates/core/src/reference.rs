//! Independent oracles: dense PageRank solves and brute-force sweeps.
//!
//! Nothing here shares code with the push algorithms or the incremental
//! sweep, so results can be cross-checked against them.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::diffusion::check_alpha;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::sweep::SweepBest;

/// Largest graph solved by dense LU.
pub const DIRECT_LIMIT: usize = 2000;
/// Largest graph solved by power iteration.
pub const POWER_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Direct for graphs up to [`DIRECT_LIMIT`] nodes, power iteration above.
    #[default]
    Auto,
    Direct,
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseSolution {
    /// PageRank vector solving `(I - αP) x = (1-α) v`.
    pub x: Vec<f64>,
    /// `y = D⁻¹ x / (1-α)`, zero on isolated nodes.
    pub y: Vec<f64>,
    /// `‖(I - αPᵀ) y - b‖∞`.
    pub residual: f64,
    pub solver: Solver,
    pub iterations: usize,
}

/// Uniform distribution on `seeds`, as a dense vector.
pub fn seed_distribution(g: &Graph, seeds: &[usize]) -> Result<Vec<f64>> {
    if seeds.is_empty() {
        return Err(Error::InvalidSeed("seed list is empty".into()));
    }
    let mut v = vec![0.0; g.node_count()];
    for &s in seeds {
        if s >= v.len() {
            return Err(Error::InvalidSeed(format!(
                "seed {s} outside 0..{}",
                v.len()
            )));
        }
        v[s] += 1.0 / seeds.len() as f64;
    }
    Ok(v)
}

/// Solves the PageRank system for a stochastic teleport vector `v`. The
/// power-iteration path stops once the error is provably at most `tol` in
/// the 1-norm.
pub fn exact_pagerank(
    g: &Graph,
    v: &[f64],
    alpha: f64,
    tol: f64,
    solver: Solver,
) -> Result<DenseSolution> {
    check_alpha(alpha)?;
    let n = g.node_count();
    if v.len() != n {
        return Err(Error::InvalidParameter(format!(
            "teleport vector has length {}, graph has {n} nodes",
            v.len()
        )));
    }
    if v.iter().any(|&p| !(p >= 0.0)) || (v.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(
            "teleport vector is not stochastic".into(),
        ));
    }
    if v.iter()
        .enumerate()
        .any(|(j, &p)| p > 0.0 && g.degree(j) == 0)
    {
        return Err(Error::InvalidParameter(
            "teleport mass on an isolated node".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let solver = match solver {
        Solver::Auto if n <= DIRECT_LIMIT => Solver::Direct,
        Solver::Auto => Solver::Power,
        s => s,
    };
    let (y, iterations) = match solver {
        Solver::Direct => {
            if n > DIRECT_LIMIT {
                return Err(Error::SizeGuard {
                    nodes: n,
                    limit: DIRECT_LIMIT,
                });
            }
            (solve_direct(g, v, alpha)?, 0)
        }
        _ => {
            if n > POWER_LIMIT {
                return Err(Error::SizeGuard {
                    nodes: n,
                    limit: POWER_LIMIT,
                });
            }
            power_iteration(g, v, alpha, tol)
        }
    };
    let x = y
        .iter()
        .enumerate()
        .map(|(j, &yj)| (1.0 - alpha) * g.degree(j) as f64 * yj)
        .collect();
    let residual = system_residual(g, v, alpha, &y);
    Ok(DenseSolution {
        x,
        y,
        residual,
        solver,
        iterations,
    })
}

fn normalized_rhs(g: &Graph, v: &[f64]) -> Vec<f64> {
    v.iter()
        .enumerate()
        .map(|(j, &p)| if p > 0.0 { p / g.degree(j) as f64 } else { 0.0 })
        .collect()
}

/// LU solve of `(I - αPᵀ) y = D⁻¹ v`.
fn solve_direct(g: &Graph, v: &[f64], alpha: f64) -> Result<Vec<f64>> {
    let n = g.node_count();
    let mut m = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        let d = g.degree(i) as f64;
        for &j in g.neighbors(i) {
            m[(i, j)] -= alpha / d;
        }
    }
    let b = DVector::from_vec(normalized_rhs(g, v));
    let y = m
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::InvalidParameter("PageRank system is singular".into()))?;
    Ok(y.iter().copied().collect())
}

/// `x ← αPx + (1-α)v` from `x = v`. Since `P` is column stochastic the map
/// contracts by `α` in the 1-norm, so `‖x - x_k‖₁ ≤ α/(1-α) ‖x_k - x_{k-1}‖₁`
/// and also `‖x - x_k‖₁ ≤ 2α^k`. The second bound caps the iteration count
/// when rounding keeps the first from ever dropping below `tol`.
fn power_iteration(g: &Graph, v: &[f64], alpha: f64, tol: f64) -> (Vec<f64>, usize) {
    let n = g.node_count();
    let mut x = v.to_vec();
    let mut next = vec![0.0; n];
    let cap = ((tol / 2.0).ln() / alpha.ln()).ceil().max(1.0) as usize;
    let mut iterations = 0;
    while iterations < cap {
        iterations += 1;
        for i in 0..n {
            let walk: f64 = g
                .neighbors(i)
                .iter()
                .map(|&j| x[j] / g.degree(j) as f64)
                .sum();
            next[i] = alpha * walk + (1.0 - alpha) * v[i];
        }
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if alpha * change <= tol * (1.0 - alpha) {
            break;
        }
    }
    let y = x
        .iter()
        .enumerate()
        .map(|(j, &xj)| match g.degree(j) {
            0 => 0.0,
            d => xj / ((1.0 - alpha) * d as f64),
        })
        .collect();
    (y, iterations)
}

fn system_residual(g: &Graph, v: &[f64], alpha: f64, y: &[f64]) -> f64 {
    let b = normalized_rhs(g, v);
    (0..g.node_count())
        .map(|i| {
            let d = g.degree(i);
            let walk = if d == 0 {
                0.0
            } else {
                g.neighbors(i).iter().map(|&j| y[j]).sum::<f64>() / d as f64
            };
            (y[i] - alpha * walk - b[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Nonzero entries of `values` in sweep order: value descending, ties by
/// node id.
pub fn sweep_order<I>(values: I) -> Vec<usize>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut ranked: Vec<(usize, f64)> = values.into_iter().filter(|&(_, v)| v > 0.0).collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("values are comparable")
            .then(a.0.cmp(&b.0))
    });
    ranked.into_iter().map(|(u, _)| u).collect()
}

/// `(cut, volume)` of every prefix of `order`, each computed from scratch.
pub fn brute_force_prefixes(g: &Graph, order: &[usize]) -> Vec<(u64, u64)> {
    (1..=order.len())
        .map(|m| {
            let set = NodeSet::new(g, order[..m].iter().copied()).expect("nodes are in range");
            (set.cut(), set.volume())
        })
        .collect()
}

/// Minimum-conductance prefix of a fixed ranking, recomputing every prefix
/// from scratch. Prefixes whose complement has zero volume are skipped.
pub fn brute_force_best_of_order(g: &Graph, order: &[usize]) -> Result<SweepBest> {
    if order.is_empty() {
        return Err(Error::EmptySupport);
    }
    let total = g.total_volume();
    let mut best: Option<SweepBest> = None;
    for (i, (cut, vol)) in brute_force_prefixes(g, order).into_iter().enumerate() {
        let denom = vol.min(total - vol);
        if denom == 0 {
            continue;
        }
        let phi = cut as f64 / denom as f64;
        if best.is_none_or(|b| phi < b.conductance) {
            best = Some(SweepBest {
                size: i + 1,
                conductance: phi,
            });
        }
    }
    best.ok_or(Error::UndefinedSet("every prefix of the sweep"))
}

/// Minimum-conductance sweep prefix of `values` by brute force.
pub fn brute_force_best_conductance<I>(g: &Graph, values: I) -> Result<SweepBest>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    brute_force_best_of_order(g, &sweep_order(values))
}
