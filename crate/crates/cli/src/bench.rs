//! Seed-by-seed comparison of the grid and path algorithms against
//! from-scratch runs at each accuracy.

use std::time::Instant;

use pprpaths::{
    full_sweep, ppr_grid, ppr_path, seed_vector, single_push_run, DiffusionParams, EpsGrid, Graph,
    PathOptions, QueueDiscipline, SeedVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::BenchArgs;
use crate::commands::make_grid;
use crate::error::{CliError, CliResult};
use crate::io::{emit, load_graph, GraphInfo};

const GROW_MULTIPLIERS: [f64; 6] = [2.0, 3.0, 4.0, 5.0, 10.0, 15.0];
const MULT_STEPS: usize = 10_000;

/// Push totals and best conductance of one method on one seed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MethodStats {
    pub runs: usize,
    pub pushes: u64,
    pub pushed_degree: u64,
    pub conductance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Trial {
    pub node: usize,
    /// One grid run.
    pub grid: MethodStats,
    /// Separate runs at every grid accuracy.
    pub grid_separate: MethodStats,
    /// Separate runs at the reciprocals of `10^j · {2, 3, 4, 5, 10, 15}`.
    pub grow: MethodStats,
    /// One path run with `ρ = 0`.
    pub path: MethodStats,
    /// One run at `eps_min`.
    pub single: MethodStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<MethodStats>,
}

#[derive(Debug, Serialize)]
struct BenchParams {
    alpha: f64,
    eps0: f64,
    eps_min: f64,
    num_eps: usize,
    rng_seed: u64,
    trials: usize,
    grow_eps: Vec<f64>,
    with_mult: bool,
}

#[derive(Debug, Default, Serialize)]
struct Summary {
    /// Medians over trials where both sides are defined.
    grow_over_grid_pushes: Option<f64>,
    separate_over_grid_pushes: Option<f64>,
    path_over_single_pushes: Option<f64>,
    grid_over_grow_conductance: Option<f64>,
    path_over_single_conductance: Option<f64>,
    grid_over_separate_conductance: Option<f64>,
    grid_pushes_at_most_separate: usize,
}

#[derive(Debug, Serialize)]
struct BenchReport {
    command: &'static str,
    graph: GraphInfo,
    params: BenchParams,
    nodes: Vec<usize>,
    trials: Vec<Trial>,
    summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TrialRow {
    node: usize,
    grid_pushes: u64,
    grid_separate_pushes: u64,
    grow_pushes: u64,
    path_pushes: u64,
    single_pushes: u64,
    grid_conductance: Option<f64>,
    grid_separate_conductance: Option<f64>,
    grow_conductance: Option<f64>,
    path_conductance: Option<f64>,
    single_conductance: Option<f64>,
}

/// Accuracies `1 / (10^j c)` for the grow multipliers `c`, within `[eps_min, eps0]`,
/// largest first.
pub fn grow_accuracies(eps0: f64, eps_min: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 0..=20 {
        for c in GROW_MULTIPLIERS {
            let eps = 1.0 / (10f64.powi(j) * c);
            if eps <= eps0 && eps >= eps_min {
                out.push(eps);
            }
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out.dedup();
    out
}

/// Up to `trials` distinct non-isolated nodes, uniformly at random.
pub fn pick_nodes(g: &Graph, trials: usize, rng_seed: u64) -> Vec<usize> {
    let eligible: Vec<usize> = (0..g.node_count()).filter(|&u| g.degree(u) > 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rand::seq::index::sample(&mut rng, eligible.len(), trials.min(eligible.len()))
        .into_iter()
        .map(|i| eligible[i])
        .collect()
}

fn time<T>(deterministic: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (
        out,
        (!deterministic).then(|| start.elapsed().as_secs_f64() * 1e3),
    )
}

fn separate_runs(
    g: &Graph,
    seed: &SeedVector,
    alpha: f64,
    accuracies: &[f64],
    deterministic: bool,
) -> CliResult<MethodStats> {
    let (stats, wall) = time(deterministic, || -> CliResult<MethodStats> {
        let mut stats = MethodStats {
            runs: accuracies.len(),
            pushes: 0,
            pushed_degree: 0,
            conductance: None,
            wall_time_ms: None,
        };
        for &eps in accuracies {
            let state = single_push_run(g, seed, alpha, 0.0, eps, QueueDiscipline::Fifo)?;
            stats.pushes += state.counters.pushes;
            stats.pushed_degree += state.counters.pushed_degree;
            if let Ok(profile) = full_sweep(g, state.solution().iter().map(|(&n, &v)| (n, v))) {
                let phi = profile.best.conductance;
                stats.conductance = Some(stats.conductance.map_or(phi, |c: f64| c.min(phi)));
            }
        }
        Ok(stats)
    });
    Ok(MethodStats {
        wall_time_ms: wall,
        ..stats?
    })
}

struct TrialConfig<'a> {
    alpha: f64,
    grid: &'a EpsGrid,
    grow_eps: &'a [f64],
    mult_eps: Option<&'a [f64]>,
    params: DiffusionParams,
    deterministic: bool,
}

fn run_trial(g: &Graph, node: usize, cfg: &TrialConfig) -> CliResult<Trial> {
    let seed = seed_vector(g, &[node])?;
    let (grid, grid_wall) = time(cfg.deterministic, || {
        ppr_grid(g, &seed, cfg.alpha, cfg.grid)
    });
    let grid = grid?;
    let options = PathOptions {
        record_trajectories: false,
        ..PathOptions::default()
    };
    let (path, path_wall) = time(cfg.deterministic, || {
        ppr_path(g, &seed, cfg.params, options)
    });
    let path = path?;
    let single = separate_runs(
        g,
        &seed,
        cfg.alpha,
        &[cfg.params.eps_min],
        cfg.deterministic,
    )?;
    let mult = cfg
        .mult_eps
        .map(|eps| separate_runs(g, &seed, cfg.alpha, eps, cfg.deterministic))
        .transpose()?;
    Ok(Trial {
        node,
        grid: MethodStats {
            runs: 1,
            pushes: grid.state.counters.pushes,
            pushed_degree: grid.state.counters.pushed_degree,
            conductance: grid.best.as_ref().map(|b| b.conductance),
            wall_time_ms: grid_wall,
        },
        grid_separate: separate_runs(g, &seed, cfg.alpha, cfg.grid.values(), cfg.deterministic)?,
        grow: separate_runs(g, &seed, cfg.alpha, cfg.grow_eps, cfg.deterministic)?,
        path: MethodStats {
            runs: 1,
            pushes: path.state.counters.pushes,
            pushed_degree: path.state.counters.pushed_degree,
            conductance: path.best.as_ref().map(|b| b.conductance),
            wall_time_ms: path_wall,
        },
        single,
        mult,
    })
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    })
}

fn ratio_median(trials: &[Trial], f: impl Fn(&Trial) -> (Option<f64>, Option<f64>)) -> Option<f64> {
    median(
        trials
            .iter()
            .filter_map(|t| match f(t) {
                (Some(a), Some(b)) if b > 0.0 => Some(a / b),
                _ => None,
            })
            .collect(),
    )
}

fn summarize(trials: &[Trial]) -> Summary {
    let pushes = |m: &MethodStats| Some(m.pushes as f64);
    Summary {
        grow_over_grid_pushes: ratio_median(trials, |t| (pushes(&t.grow), pushes(&t.grid))),
        separate_over_grid_pushes: ratio_median(trials, |t| {
            (pushes(&t.grid_separate), pushes(&t.grid))
        }),
        path_over_single_pushes: ratio_median(trials, |t| (pushes(&t.path), pushes(&t.single))),
        grid_over_grow_conductance: ratio_median(trials, |t| {
            (t.grid.conductance, t.grow.conductance)
        }),
        path_over_single_conductance: ratio_median(trials, |t| {
            (t.path.conductance, t.single.conductance)
        }),
        grid_over_separate_conductance: ratio_median(trials, |t| {
            (t.grid.conductance, t.grid_separate.conductance)
        }),
        grid_pushes_at_most_separate: trials
            .iter()
            .filter(|t| t.grid.pushes <= t.grid_separate.pushes)
            .count(),
    }
}

pub fn run_bench(args: BenchArgs) -> CliResult<()> {
    let (g, info) = load_graph(&args.graph)?;
    let grid = make_grid(args.eps0, None, args.num_eps, args.eps_min)?;
    let params = DiffusionParams::new(args.alpha, 0.0, args.eps_min, args.eps0)?;
    let grow_eps = grow_accuracies(args.eps0, args.eps_min);
    let mult_eps: Vec<f64> = (1..=MULT_STEPS).map(|k| 1.0 / k as f64).collect();
    let nodes = pick_nodes(&g, args.trials, args.rng_seed);
    let deterministic = args.output.deterministic;
    let cfg = TrialConfig {
        alpha: args.alpha,
        grid: &grid,
        grow_eps: &grow_eps,
        mult_eps: args.with_mult.then_some(mult_eps.as_slice()),
        params,
        deterministic,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let start = Instant::now();
    let trials: Vec<Trial> = pool.install(|| {
        nodes
            .par_iter()
            .map(|&node| run_trial(&g, node, &cfg))
            .collect::<CliResult<_>>()
    })?;
    let wall_time_ms = (!deterministic).then(|| start.elapsed().as_secs_f64() * 1e3);

    let rows: Vec<TrialRow> = trials
        .iter()
        .map(|t| TrialRow {
            node: t.node,
            grid_pushes: t.grid.pushes,
            grid_separate_pushes: t.grid_separate.pushes,
            grow_pushes: t.grow.pushes,
            path_pushes: t.path.pushes,
            single_pushes: t.single.pushes,
            grid_conductance: t.grid.conductance,
            grid_separate_conductance: t.grid_separate.conductance,
            grow_conductance: t.grow.conductance,
            path_conductance: t.path.conductance,
            single_conductance: t.single.conductance,
        })
        .collect();
    let report = BenchReport {
        command: "bench",
        graph: info,
        params: BenchParams {
            alpha: args.alpha,
            eps0: args.eps0,
            eps_min: args.eps_min,
            num_eps: args.num_eps,
            rng_seed: args.rng_seed,
            trials: nodes.len(),
            grow_eps,
            with_mult: args.with_mult,
        },
        summary: summarize(&trials),
        nodes,
        trials,
        wall_time_ms,
    };
    emit(&args.output, &report, rows)
}
