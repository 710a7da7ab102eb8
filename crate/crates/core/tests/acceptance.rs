//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p pprpaths --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use pprpaths::reference::{
    brute_force_best_conductance, brute_force_prefixes, exact_pagerank, seed_distribution,
    sweep_order, Solver,
};
use pprpaths::sweep::RankedSolution;
use pprpaths::{
    full_sweep, ppr_grid, ppr_grid_observed, ppr_path, ppr_path_observed, seed_vector, shelf_index,
    single_push_run, single_push_run_observed, DiffusionParams, DiffusionState, EpsGrid, Graph,
    NodeMap, NodeSet, PathOptions, PushRecord, QueueDiscipline,
};
use rand::Rng;

struct Outcome {
    failures: Vec<String>,
    checks: u64,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Largest deviation from the mass identity seen after any push.
struct MassAudit {
    alpha: f64,
    worst: f64,
}

impl MassAudit {
    fn new(alpha: f64) -> Self {
        MassAudit { alpha, worst: 0.0 }
    }
}

impl pprpaths::PushObserver for MassAudit {
    fn on_push(&mut self, g: &Graph, state: &DiffusionState, _: &PushRecord) {
        self.worst = self.worst.max(state.mass_defect(g, self.alpha));
    }
}

fn dense(values: &NodeMap<f64>, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (&j, &v) in values {
        out[j] = v;
    }
    out
}

fn work_bound(eps: f64, alpha: f64, rho: f64) -> f64 {
    1.0 / (eps * (1.0 - alpha) * (1.0 - rho))
}

/// Results of criteria 1, 2, 3 (bound part), 7 and 9, which share the same
/// random instances.
struct InstanceOutcomes {
    accuracy: Outcome,
    mass: Outcome,
    work: Outcome,
    trajectory: Outcome,
    dominance: Outcome,
    instances: usize,
    worst_mass: f64,
}

fn run_instances() -> InstanceOutcomes {
    const ALPHAS: [f64; 3] = [0.5, 0.85, 0.99];
    const EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];
    const RHOS: [f64; 3] = [0.0, 0.5, 0.9];
    const INSTANCES: usize = 324;

    let mut out = InstanceOutcomes {
        accuracy: Outcome::new(),
        mass: Outcome::new(),
        work: Outcome::new(),
        trajectory: Outcome::new(),
        dominance: Outcome::new(),
        instances: INSTANCES,
        worst_mass: 0.0,
    };
    let mut rng = common::rng(2024);
    for i in 0..INSTANCES {
        let alpha = ALPHAS[i % 3];
        let eps = EPSILONS[(i / 3) % 3];
        let rho = RHOS[(i / 9) % 3];
        let (name, g) = common::random_instance(&mut rng);
        let n = g.node_count();
        let seeds: Vec<usize> = if rng.gen_bool(0.7) {
            vec![rng.gen_range(0..n)]
        } else {
            let a = rng.gen_range(0..n);
            let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
            vec![a, b]
        };
        let tag = format!("#{i} {name} seeds={seeds:?} α={alpha} ε={eps} ρ={rho}");

        let seed = seed_vector(&g, &seeds).unwrap();
        let v = seed_distribution(&g, &seeds).unwrap();
        let oracle = exact_pagerank(&g, &v, alpha, 1e-14, Solver::Direct)
            .unwrap()
            .y;

        let params = DiffusionParams::new(alpha, rho, eps, 0.1).unwrap();
        let options = PathOptions {
            record_trajectories: true,
            ..PathOptions::default()
        };
        let mut audit = MassAudit::new(alpha);
        let path = ppr_path_observed(&g, &seed, params, options, &mut audit).unwrap();
        let path_mass = audit.worst;

        let grid = EpsGrid::spanning(0.1, eps, 8).unwrap();
        let mut audit = MassAudit::new(alpha);
        let gridded = ppr_grid_observed(&g, &seed, alpha, &grid, &mut audit).unwrap();
        let grid_mass = audit.worst;

        let mut audit = MassAudit::new(alpha);
        let single = single_push_run_observed(
            &g,
            &seed,
            alpha,
            rho,
            eps,
            QueueDiscipline::Fifo,
            &mut audit,
        )
        .unwrap();
        let single_mass = audit.worst;

        // 1: oracle accuracy of every final solution
        let slack = eps / (1.0 - alpha) + 1e-9;
        for (label, state) in [
            ("path", &path.state),
            ("grid", &gridded.state),
            ("single", &single),
        ] {
            let y = dense(state.solution(), n);
            let worst_gap = oracle
                .iter()
                .zip(&y)
                .map(|(o, y)| o - y)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                    (lo.min(d), hi.max(d))
                });
            out.accuracy
                .check(worst_gap.0 >= -1e-9 && worst_gap.1 <= slack, || {
                    format!(
                        "{tag} {label}: y*-y in [{:.3e}, {:.3e}]",
                        worst_gap.0, worst_gap.1
                    )
                });
            let max_r = state.max_residual();
            out.accuracy
                .check(max_r < eps, || format!("{tag} {label}: ‖r‖∞={max_r:.3e}"));
        }

        // 2: mass identity after every push
        for (label, worst) in [
            ("path", path_mass),
            ("grid", grid_mass),
            ("single", single_mass),
        ] {
            out.worst_mass = out.worst_mass.max(worst);
            out.mass.check(worst <= 1e-9, || {
                format!("{tag} {label}: defect {worst:.3e}")
            });
        }

        // 3: integer pushed-degree sum against the work bound
        for (label, pd, bound) in [
            (
                "path",
                path.state.counters.pushed_degree,
                work_bound(eps, alpha, rho),
            ),
            (
                "grid",
                gridded.state.counters.pushed_degree,
                work_bound(grid.last(), alpha, 0.0),
            ),
            (
                "single",
                single.counters.pushed_degree,
                work_bound(eps, alpha, rho),
            ),
        ] {
            out.work.check(pd as f64 <= bound, || {
                format!("{tag} {label}: {pd} > {bound}")
            });
        }

        // 7: every stored event is within eps/(1-alpha) of the exact solution
        if rho != 0.5 {
            path.replay(|event, y| {
                let bound = event.eps / (1.0 - alpha) + 1e-12;
                let worst = (0..n)
                    .map(|j| (oracle[j] - y.get(&j).copied().unwrap_or(0.0)).abs())
                    .fold(0.0, f64::max);
                out.trajectory.check(worst <= bound, || {
                    format!(
                        "{tag} event {} ε={:.3e}: {worst:.3e} > {bound:.3e}",
                        event.index, event.eps
                    )
                });
            });
        }

        // 9: the best set over all events is no worse than the final sweep
        let final_sweep = full_sweep(&g, path.state.solution().iter().map(|(&j, &y)| (j, y)));
        if let (Some(best), Ok(profile)) = (&path.best, &final_sweep) {
            out.dominance
                .check(best.conductance <= profile.best.conductance, || {
                    format!(
                        "{tag} path: best {} > final {}",
                        best.conductance, profile.best.conductance
                    )
                });
            let last = path.final_event().and_then(|e| e.best);
            out.dominance.check(last == Some(profile.best), || {
                format!(
                    "{tag} path: final event {last:?} != final sweep {:?}",
                    profile.best
                )
            });
        }
        let last_record = gridded.records.last().and_then(|r| r.best);
        if let (Some(best), Some(last)) = (&gridded.best, last_record) {
            out.dominance
                .check(best.conductance <= last.conductance, || {
                    format!(
                        "{tag} grid: best {} > final {}",
                        best.conductance, last.conductance
                    )
                });
        }
    }
    out
}

fn criterion_3_invariance() -> (bool, String) {
    let params = DiffusionParams::new(0.99, 0.0, 1e-5, 0.1).unwrap();
    let counts: Vec<(u64, u64)> = [1_000, 10_000]
        .into_iter()
        .map(|host| {
            let g = common::embedded_community(host);
            let seed = seed_vector(&g, &[10]).unwrap();
            let res = ppr_path(&g, &seed, params, PathOptions::default()).unwrap();
            (res.state.counters.pushed_degree, res.state.counters.pushes)
        })
        .collect();
    (
        counts[0] == counts[1],
        format!(
            "pushed-degree {} (host 10³) vs {} (host 10⁴)",
            counts[0].0, counts[1].0
        ),
    )
}

/// Prefix cuts and volumes of `order` in one fresh pass.
fn scan_prefixes(g: &Graph, order: &[usize]) -> Vec<(u64, u64)> {
    let mut inside = vec![false; g.node_count()];
    let (mut cut, mut vol) = (0i64, 0u64);
    let mut out = Vec::with_capacity(order.len());
    for &u in order {
        let internal = g.neighbors(u).iter().filter(|&&v| inside[v]).count() as i64;
        cut += g.degree(u) as i64 - 2 * internal;
        vol += g.degree(u) as u64;
        inside[u] = true;
        out.push((cut as u64, vol));
    }
    out
}

fn criterion_4() -> (Outcome, u64) {
    let mut out = Outcome::new();
    let mut rng = common::rng(44);
    let mut promotions = 0u64;
    let mut run = 0;
    while promotions < 12_000 {
        run += 1;
        let n = rng.gen_range(5..=200);
        let g = common::connected_er(n, 4.0 / n as f64, &mut rng);
        let mut ranked = RankedSolution::new(&g);
        let mut values = vec![0.0f64; n];
        let steps = rng.gen_range(50..400);
        for step in 0..steps {
            let u = rng.gen_range(0..n);
            // coarse increments make ties common
            values[u] += rng.gen_range(1..4) as f64 * 0.25;
            ranked.update(&g, u, values[u]);
            promotions += 1;

            let order = sweep_order(values.iter().copied().enumerate());
            out.check(ranked.order() == order.as_slice(), || {
                format!("run {run} step {step}: order mismatch")
            });
            let truth = scan_prefixes(&g, &order);
            for (m, &(cut, vol)) in truth.iter().enumerate() {
                let got = (ranked.prefix_cut(m + 1), ranked.prefix_volume(m + 1));
                out.check(got == (cut, vol), || {
                    format!(
                        "run {run} step {step} prefix {}: {got:?} != {:?}",
                        m + 1,
                        (cut, vol)
                    )
                });
            }
            if step % 25 == 0 && order.len() <= 120 {
                out.check(brute_force_prefixes(&g, &order) == truth, || {
                    format!("run {run} step {step}: linear scan disagrees with recomputation")
                });
            }
            let expected =
                brute_force_best_conductance(&g, values.iter().copied().enumerate()).ok();
            let got = ranked.best();
            let agree = match (got, expected) {
                (Some(a), Some(b)) => {
                    a.size == b.size && (a.conductance - b.conductance).abs() <= 1e-12
                }
                (None, None) => true,
                _ => false,
            };
            out.check(agree, || {
                format!("run {run} step {step}: best {got:?} != {expected:?}")
            });
        }
    }
    (out, promotions)
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = common::rng(55);
    let mut drawn = 0u64;
    while drawn < 1_000_000 {
        let eps0 = 10f64.powf(rng.gen_range(-6.0..-0.05));
        let theta = rng.gen_range(0.05..0.98);
        let steps = rng.gen_range(0..=1500usize);
        let Ok(grid) = EpsGrid::new(eps0, theta, steps) else {
            continue;
        };
        let lo = grid.last().ln();
        for i in 0..2_000 {
            let r = match i % 10 {
                0 => grid.eps(rng.gen_range(0..=steps)),
                1 => rng.gen_range(eps0..1.0),
                _ => rng.gen_range(lo..eps0.ln()).exp().max(grid.last()),
            };
            let k = shelf_index(r, &grid).unwrap();
            let upper = k == 0 || grid.eps(k - 1) > r;
            out.check(k <= steps && upper && r >= grid.eps(k), || {
                format!("r={r:e} ε0={eps0:e} θ={theta} N={steps}: band {k}")
            });
            drawn += 1;
        }
    }
    out
}

fn criterion_6() -> (Outcome, String) {
    let mut out = Outcome::new();
    let theta = 0.66f64;
    let analytic = (1.0 - theta.powi(33)) / (1.0 - theta);
    out.check((analytic - 2.94).abs() <= 0.01, || {
        format!("analytic ratio {analytic}")
    });

    let grid = EpsGrid::spanning(1e-1, 1e-6 / 3.0, 32).unwrap();
    let alpha = 0.5;
    let mut ratios = Vec::new();
    for i in 0..20u64 {
        let n = 20_000 + 10_000 * (i as usize % 4);
        let avg_degree = [10.0, 20.0, 30.0][i as usize % 3];
        let g = common::heavy_tailed(n, avg_degree, &mut common::rng(100 + i));
        let seed = seed_vector(&g, &[n / 2]).unwrap();
        let gridded = ppr_grid(&g, &seed, alpha, &grid).unwrap();
        let separate: u64 = grid
            .values()
            .iter()
            .map(|&eps| {
                single_push_run(&g, &seed, alpha, 0.0, eps, QueueDiscipline::Fifo)
                    .unwrap()
                    .counters
                    .pushes
            })
            .sum();
        let ratio = separate as f64 / gridded.state.counters.pushes as f64;
        out.check((1.5..=4.0).contains(&ratio), || {
            format!("graph {i} (n={n}): ratio {ratio:.3}")
        });
        ratios.push(ratio);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    (
        out,
        format!(
            "analytic {analytic:.4}; empirical {lo:.2}..{hi:.2} over {} graphs",
            ratios.len()
        ),
    )
}

fn sorted(nodes: &[usize]) -> Vec<usize> {
    let mut out = nodes.to_vec();
    out.sort_unstable();
    out
}

fn criterion_8() -> (Outcome, String) {
    let mut out = Outcome::new();
    let g = common::bridged_cliques(20, 2);
    let clique: Vec<usize> = (0..20).collect();
    let expected = 2.0 / (20.0 * 19.0 + 2.0);
    let set = NodeSet::new(&g, clique.iter().copied()).unwrap();
    out.check(set.cut() == 2 && set.volume() == 382, || {
        format!("clique cut/vol {}/{}", set.cut(), set.volume())
    });

    let seed = seed_vector(&g, &[10]).unwrap();
    let params = DiffusionParams::new(0.99, 0.0, 1e-5, 0.1).unwrap();
    let path = ppr_path(&g, &seed, params, PathOptions::default()).unwrap();
    let best = path.best.clone();
    out.check(
        best.as_ref()
            .is_some_and(|b| sorted(&b.nodes) == clique && b.conductance == expected),
        || format!("path best {best:?}"),
    );
    let grid = EpsGrid::spanning(1e-1, 1e-6 / 3.0, 32).unwrap();
    let gridded = ppr_grid(&g, &seed, 0.99, &grid).unwrap();
    let gbest = gridded.best.clone();
    out.check(
        gbest
            .as_ref()
            .is_some_and(|b| sorted(&b.nodes) == clique && b.conductance == expected),
        || format!("grid best {gbest:?}"),
    );
    (out, format!("φ = 2/382 = {expected}"))
}

fn best_time<F: FnMut()>(mut f: F) -> Duration {
    (0..3)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .unwrap()
}

fn criterion_10() -> (Outcome, String) {
    let mut out = Outcome::new();
    let g = common::sparse_connected(400, 900, &mut common::rng(10));
    let seed = seed_vector(&g, &[0]).unwrap();
    let params = DiffusionParams::new(0.99, 0.9, 1e-5, 1e-1).unwrap();
    let mut pushes = 0;
    let t_path = best_time(|| {
        pushes = ppr_path(&g, &seed, params, PathOptions::default())
            .unwrap()
            .state
            .counters
            .pushes;
    });
    out.check(t_path < Duration::from_secs(1), || {
        format!("ppr_path took {t_path:?}")
    });

    let coarse = EpsGrid::spanning(1e-1, 1e-6 / 3.0, 32).unwrap();
    let fine = EpsGrid::spanning(1e-1, 1e-6 / 3.0, 1256).unwrap();
    let t_coarse = best_time(|| {
        ppr_grid(&g, &seed, 0.99, &coarse).unwrap();
    });
    let t_fine = best_time(|| {
        ppr_grid(&g, &seed, 0.99, &fine).unwrap();
    });
    let ratio = t_fine.as_secs_f64() / t_coarse.as_secs_f64();
    out.check(ratio < 10.0, || {
        format!("N=1256 / N=32 time ratio {ratio:.2}")
    });
    (
        out,
        format!(
            "path {t_path:.2?} ({pushes} pushes); grid N=32 {t_coarse:.2?}, N=1256 {t_fine:.2?}, ratio {ratio:.2}"
        ),
    )
}

fn report(number: u32, name: &str, outcome: &Outcome, detail: &str) -> bool {
    let status = if outcome.passed() { "PASS" } else { "FAIL" };
    println!(
        "criterion {number:>2} [{name}]: {status} ({} checks; {detail})",
        outcome.checks
    );
    for failure in &outcome.failures {
        println!("    {failure}");
    }
    outcome.passed()
}

fn main() {
    let shared = run_instances();
    let (invariant, invariant_detail) = criterion_3_invariance();
    let mut work = shared.work;
    work.check(invariant, || format!("size invariance: {invariant_detail}"));
    let (sweeps, promotions) = criterion_4();
    let shelves = criterion_5();
    let (speedup, speedup_detail) = criterion_6();
    let (discovery, discovery_detail) = criterion_8();
    let (timing, timing_detail) = criterion_10();

    let instances = format!("{} instances", shared.instances);
    let results = [
        report(1, "oracle accuracy", &shared.accuracy, &instances),
        report(
            2,
            "mass identity",
            &shared.mass,
            &format!("worst defect {:.2e}", shared.worst_mass),
        ),
        report(3, "work bound", &work, &invariant_detail),
        report(
            4,
            "incremental sweep",
            &sweeps,
            &format!("{promotions} promotions"),
        ),
        report(5, "shelf index", &shelves, "random geometric grids"),
        report(6, "grid speedup", &speedup, &speedup_detail),
        report(7, "path vs exact", &shared.trajectory, "ρ ∈ {0, 0.9}"),
        report(8, "conductance discovery", &discovery, &discovery_detail),
        report(9, "best-over-path dominance", &shared.dominance, &instances),
        report(10, "desk-scale performance", &timing, &timing_detail),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
