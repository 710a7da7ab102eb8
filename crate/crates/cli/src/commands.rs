use std::fs::File;
use std::io::BufReader;
use std::time::Instant;

use pprpaths::reference::{exact_pagerank, seed_distribution, Solver};
use pprpaths::{
    conductance, full_sweep, ppr_grid, ppr_path, seed_vector, single_push_run, BestSet,
    DiffusionParams, EpsGrid, Graph, NodeSet, OverflowPolicy, PathOptions, PathResult,
    QueueDiscipline, SweepStats,
};
use serde::{Deserialize, Serialize};

use crate::args::{
    DisciplineArg, ExactArgs, GridArgs, OverflowArg, PathArgs, SingleArgs, SolverArg, SweepArgs,
};
use crate::error::{CliError, CliResult};
use crate::io::{emit, load_graph, write_csv, GraphInfo};

fn elapsed_ms(start: Instant, deterministic: bool) -> Option<f64> {
    (!deterministic).then(|| start.elapsed().as_secs_f64() * 1e3)
}

/// Best set of the final solution of a one-shot run.
#[derive(Debug, Serialize, Deserialize)]
pub struct SweptSet {
    pub size: usize,
    pub conductance: f64,
    pub nodes: Vec<usize>,
}

pub fn sweep_solution<I>(g: &Graph, values: I) -> Option<SweptSet>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let profile = full_sweep(g, values).ok()?;
    Some(SweptSet {
        size: profile.best.size,
        conductance: profile.best.conductance,
        nodes: profile.best_set().to_vec(),
    })
}

#[derive(Debug, Serialize)]
struct PathEventRow {
    index: u64,
    eps: f64,
    pushes: u64,
    support: usize,
    best_size: Option<usize>,
    conductance: Option<f64>,
    improved: bool,
    significant: bool,
}

#[derive(Debug, Serialize)]
struct PathCounters {
    pushes: u64,
    pushed_degree: u64,
    heap_ops: u64,
    max_heap_len: usize,
    support: usize,
    sweep: SweepStats,
}

#[derive(Debug, Serialize)]
struct PathReport {
    command: &'static str,
    graph: GraphInfo,
    seeds: Vec<usize>,
    params: DiffusionParams,
    events_seen: u64,
    stride: u64,
    events: Vec<PathEventRow>,
    best: Option<BestSet>,
    counters: PathCounters,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TrajectoryRow {
    node: usize,
    eps: f64,
    value: f64,
}

pub fn run_path(args: PathArgs) -> CliResult<()> {
    let (g, info) = load_graph(&args.graph)?;
    let rho = args
        .rho
        .unwrap_or(if args.traj.is_some() { 0.9 } else { 0.0 });
    let params = DiffusionParams::new(args.alpha, rho, args.eps_min, args.eps_max)?;
    let seed = seed_vector(&g, &args.seeds)?;
    let options = PathOptions {
        max_events: args.max_events,
        overflow: match args.on_overflow {
            OverflowArg::Error => OverflowPolicy::Error,
            OverflowArg::Downsample => OverflowPolicy::Downsample,
        },
        record_trajectories: args.traj.is_some(),
        ..PathOptions::default()
    };
    let start = Instant::now();
    let result = ppr_path(&g, &seed, params, options)?;
    let wall_time_ms = elapsed_ms(start, args.output.deterministic);

    if let Some(traj) = &args.traj {
        write_trajectories(traj, &result, args.dense_traj)?;
    }

    let events: Vec<PathEventRow> = result
        .events
        .iter()
        .map(|e| PathEventRow {
            index: e.index,
            eps: e.eps,
            pushes: e.pushes,
            support: e.support,
            best_size: e.best.map(|b| b.size),
            conductance: e.best.map(|b| b.conductance),
            improved: e.improved,
            significant: e.significant,
        })
        .collect();
    let report = PathReport {
        command: "path",
        graph: info,
        seeds: args.seeds,
        params,
        events_seen: result.events_seen,
        stride: result.stride,
        best: result.best.clone(),
        counters: PathCounters {
            pushes: result.state.counters.pushes,
            pushed_degree: result.state.counters.pushed_degree,
            heap_ops: result.state.counters.residual_ops,
            max_heap_len: result.max_heap_len,
            support: result.state.solution().len(),
            sweep: result.sweep.clone(),
        },
        events,
        wall_time_ms,
    };
    emit(&args.output, &report, report.events.iter())
}

fn write_trajectories(
    path: &std::path::PathBuf,
    result: &PathResult,
    dense: bool,
) -> CliResult<()> {
    let eps_of = |event: u64| result.event(event).map_or(f64::NAN, |e| e.eps);
    if !dense {
        let rows = result.deltas.iter().map(|d| TrajectoryRow {
            node: d.node,
            eps: eps_of(d.event),
            value: d.value,
        });
        return write_csv(Some(path), rows);
    }
    let mut rows = Vec::new();
    result.replay(|event, y| {
        let mut nodes: Vec<(usize, f64)> = y.iter().map(|(&n, &v)| (n, v)).collect();
        nodes.sort_unstable_by_key(|&(n, _)| n);
        rows.extend(nodes.into_iter().map(|(node, value)| TrajectoryRow {
            node,
            eps: event.eps,
            value,
        }));
    });
    write_csv(Some(path), rows)
}

#[derive(Debug, Serialize)]
struct GridParams {
    alpha: f64,
    eps0: f64,
    theta: f64,
    num_eps: usize,
    eps_last: f64,
}

#[derive(Debug, Serialize)]
struct GridRecordRow {
    k: usize,
    eps: f64,
    pushes: u64,
    pushed_degree: u64,
    max_residual: f64,
    support: usize,
    best_size: Option<usize>,
    conductance: Option<f64>,
}

#[derive(Debug, Serialize)]
struct GridCounters {
    pushes: u64,
    pushed_degree: u64,
    shelf_ops: u64,
    top_scan_steps: u64,
    sweeps: u64,
    support: usize,
}

#[derive(Debug, Serialize)]
struct GridReport {
    command: &'static str,
    graph: GraphInfo,
    seeds: Vec<usize>,
    params: GridParams,
    records: Vec<GridRecordRow>,
    best: Option<BestSet>,
    counters: GridCounters,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

pub fn make_grid(
    eps0: f64,
    theta: Option<f64>,
    num_eps: usize,
    eps_min: f64,
) -> CliResult<EpsGrid> {
    Ok(match theta {
        Some(theta) => EpsGrid::new(eps0, theta, num_eps)?,
        None => EpsGrid::spanning(eps0, eps_min, num_eps)?,
    })
}

pub fn run_grid(args: GridArgs) -> CliResult<()> {
    let (g, info) = load_graph(&args.graph)?;
    let grid = make_grid(args.eps0, args.theta, args.num_eps, args.eps_min)?;
    let seed = seed_vector(&g, &args.seeds)?;
    let start = Instant::now();
    let result = ppr_grid(&g, &seed, args.alpha, &grid)?;
    let wall_time_ms = elapsed_ms(start, args.output.deterministic);

    let records = result
        .records
        .iter()
        .map(|r| GridRecordRow {
            k: r.k,
            eps: r.eps,
            pushes: r.pushes,
            pushed_degree: r.pushed_degree,
            max_residual: r.max_residual,
            support: r.support,
            best_size: r.best.map(|b| b.size),
            conductance: r.best.map(|b| b.conductance),
        })
        .collect();
    let report = GridReport {
        command: "grid",
        graph: info,
        seeds: args.seeds,
        params: GridParams {
            alpha: args.alpha,
            eps0: grid.eps0(),
            theta: grid.theta(),
            num_eps: grid.steps(),
            eps_last: grid.last(),
        },
        records,
        best: result.best.clone(),
        counters: GridCounters {
            pushes: result.state.counters.pushes,
            pushed_degree: result.state.counters.pushed_degree,
            shelf_ops: result.stats.shelf_ops,
            top_scan_steps: result.stats.top_scan_steps,
            sweeps: result.stats.sweeps,
            support: result.state.solution().len(),
        },
        wall_time_ms,
    };
    emit(&args.output, &report, report.records.iter())
}

#[derive(Debug, Serialize)]
struct SingleParams {
    alpha: f64,
    rho: f64,
    eps: f64,
    discipline: &'static str,
}

#[derive(Debug, Serialize)]
struct SingleCounters {
    pushes: u64,
    pushed_degree: u64,
    queue_ops: u64,
    support: usize,
}

#[derive(Debug, Serialize)]
struct SingleReport {
    command: &'static str,
    graph: GraphInfo,
    seeds: Vec<usize>,
    params: SingleParams,
    max_residual: f64,
    best: Option<SweptSet>,
    counters: SingleCounters,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ValueRow {
    node: usize,
    value: f64,
}

pub fn run_single(args: SingleArgs) -> CliResult<()> {
    let (g, info) = load_graph(&args.graph)?;
    let seed = seed_vector(&g, &args.seeds)?;
    let (discipline, name) = match args.discipline {
        DisciplineArg::Fifo => (QueueDiscipline::Fifo, "fifo"),
        DisciplineArg::Lifo => (QueueDiscipline::Lifo, "lifo"),
    };
    let start = Instant::now();
    let state = single_push_run(&g, &seed, args.alpha, args.rho, args.eps, discipline)?;
    let wall_time_ms = elapsed_ms(start, args.output.deterministic);

    let solution = state.sorted_solution();
    let report = SingleReport {
        command: "single",
        graph: info,
        seeds: args.seeds,
        params: SingleParams {
            alpha: args.alpha,
            rho: args.rho,
            eps: args.eps,
            discipline: name,
        },
        max_residual: state.max_residual(),
        best: sweep_solution(&g, solution.iter().copied()),
        counters: SingleCounters {
            pushes: state.counters.pushes,
            pushed_degree: state.counters.pushed_degree,
            queue_ops: state.counters.residual_ops,
            support: solution.len(),
        },
        wall_time_ms,
    };
    let rows = solution
        .iter()
        .map(|&(node, value)| ValueRow { node, value });
    emit(&args.output, &report, rows)
}

#[derive(Debug, Serialize)]
struct PrefixRow {
    rank: usize,
    node: usize,
    conductance: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SweepReport {
    command: &'static str,
    graph: GraphInfo,
    support: usize,
    best: SweptSet,
    conductances: Vec<Option<f64>>,
}

#[derive(Debug, Serialize)]
struct SetReport {
    command: &'static str,
    graph: GraphInfo,
    source: String,
    size: usize,
    cut: u64,
    volume: u64,
    conductance: f64,
    reported_conductance: Option<f64>,
    matches: bool,
    nodes: Vec<usize>,
}

#[derive(Debug, Deserialize)]
struct ReportedBest {
    conductance: f64,
    nodes: Vec<usize>,
}

#[derive(Debug, Deserialize)]
struct ReportWithBest {
    best: Option<ReportedBest>,
}

pub fn run_sweep(args: SweepArgs) -> CliResult<()> {
    let (g, info) = load_graph(&args.graph)?;
    if let Some(source) = &args.set_from {
        let file = File::open(source).map_err(|e| CliError::io(source, e))?;
        let report: ReportWithBest =
            serde_json::from_reader(BufReader::new(file)).map_err(|e| CliError::io(source, e))?;
        let best = report.best.ok_or_else(|| {
            CliError::Numeric(format!("{}: no best set reported", source.display()))
        })?;
        let set = NodeSet::new(&g, best.nodes.iter().copied())?;
        let phi = conductance(&g, &set)?;
        let report = SetReport {
            command: "sweep",
            graph: info,
            source: source.display().to_string(),
            size: set.len(),
            cut: set.cut(),
            volume: set.volume(),
            conductance: phi,
            reported_conductance: Some(best.conductance),
            matches: phi == best.conductance,
            nodes: set.members().to_vec(),
        };
        let rows = report
            .nodes
            .iter()
            .map(|&node| ValueRow { node, value: 1.0 });
        return emit(&args.output, &report, rows);
    }

    let path = args
        .values
        .as_ref()
        .expect("clap requires --values or --set-from");
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut values = Vec::new();
    for row in reader.deserialize::<(usize, f64)>() {
        let (node, value) = row.map_err(|e| CliError::io(path, e))?;
        if node >= g.node_count() {
            return Err(CliError::Config(format!(
                "node {node} outside 0..{}",
                g.node_count()
            )));
        }
        values.push((node, value));
    }
    let profile = full_sweep(&g, values)?;
    let report = SweepReport {
        command: "sweep",
        graph: info,
        support: profile.order.len(),
        best: SweptSet {
            size: profile.best.size,
            conductance: profile.best.conductance,
            nodes: profile.best_set().to_vec(),
        },
        conductances: profile.conductances.clone(),
    };
    let rows = profile
        .order
        .iter()
        .zip(&profile.conductances)
        .enumerate()
        .map(|(i, (&node, &conductance))| PrefixRow {
            rank: i + 1,
            node,
            conductance,
        });
    emit(&args.output, &report, rows)
}

#[derive(Debug, Serialize)]
struct ExactReport {
    command: &'static str,
    graph: GraphInfo,
    seeds: Vec<usize>,
    alpha: f64,
    tol: f64,
    solver: Solver,
    iterations: usize,
    residual: f64,
    best: Option<SweptSet>,
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct ExactRow {
    node: usize,
    x: f64,
    y: f64,
}

pub fn run_exact(args: ExactArgs) -> CliResult<()> {
    let (g, info) = load_graph(&args.graph)?;
    let solver = match args.solver {
        SolverArg::Auto => Solver::Auto,
        SolverArg::Direct => Solver::Direct,
        SolverArg::Power => Solver::Power,
    };
    let v = seed_distribution(&g, &args.seeds)?;
    let solution = exact_pagerank(&g, &v, args.alpha, args.tol, solver)?;
    let report = ExactReport {
        command: "exact",
        graph: info,
        seeds: args.seeds,
        alpha: args.alpha,
        tol: args.tol,
        solver: solution.solver,
        iterations: solution.iterations,
        residual: solution.residual,
        best: sweep_solution(&g, solution.y.iter().copied().enumerate()),
        x: solution.x,
        y: solution.y,
    };
    let rows = report
        .x
        .iter()
        .zip(&report.y)
        .enumerate()
        .map(|(node, (&x, &y))| ExactRow { node, x, y });
    emit(&args.output, &report, rows)
}
