//! Graph generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use pprpaths::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Erdős–Rényi `G(n, p)`, redrawn until connected.
pub fn connected_er(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(n, edges) {
            if is_connected(&g) {
                return g;
            }
        }
    }
}

/// Sparse random graph with about `m` edges on `n` nodes, built from a
/// random spanning tree plus uniform extra edges, so it is connected.
pub fn sparse_connected(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| (perm[rng.gen_range(0..i)], perm[i]))
        .collect();
    let mut seen: std::collections::HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    while edges.len() < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Chung–Lu style graph with a heavy-tailed expected degree sequence,
/// restricted to a connected backbone through a spanning path.
pub fn heavy_tailed(n: usize, avg_degree: f64, rng: &mut ChaCha8Rng) -> Graph {
    let weights: Vec<f64> = (0..n).map(|i| 1.0 / ((i + 1) as f64).powf(0.6)).collect();
    let total: f64 = weights.iter().sum();
    let m = (avg_degree * n as f64 / 2.0) as usize;
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for w in &weights {
        acc += w / total;
        cumulative.push(acc);
    }
    let draw = |rng: &mut ChaCha8Rng| {
        let t: f64 = rng.gen::<f64>() * acc;
        cumulative.partition_point(|&c| c < t).min(n - 1)
    };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = perm.windows(2).map(|w| (w[0], w[1])).collect();
    for _ in 0..m {
        let (u, v) = (draw(rng), draw(rng));
        if u != v {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn clique_edges(nodes: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in nodes.clone() {
        for v in u + 1..nodes.end {
            edges.push((u, v));
        }
    }
    edges
}

/// Two `k`-cliques joined by a single edge.
pub fn barbell(k: usize) -> Graph {
    let mut edges = clique_edges(0..k);
    edges.extend(clique_edges(k..2 * k));
    edges.push((k - 1, k));
    Graph::from_edges(2 * k, edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Star with center 0.
pub fn star(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (0, i))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// Two `k`-cliques, nodes `0..k` and `k..2k`, joined by `bridges` disjoint
/// edges `(i, k + i)`.
pub fn bridged_cliques(k: usize, bridges: usize) -> Graph {
    let mut edges = clique_edges(0..k);
    edges.extend(clique_edges(k..2 * k));
    edges.extend((0..bridges).map(|i| (i, k + i)));
    Graph::from_edges(2 * k, edges).unwrap()
}

/// Nodes `0..50` form a dense random community attached by three edges to
/// the middle of a degree-4 circulant host on `host` further nodes. Node
/// ids around the attachment differ between host sizes only by a constant
/// shift, so local structure and ordering are identical.
pub fn embedded_community(host: usize) -> Graph {
    const C: usize = 50;
    let mut rng = rng(0xC0FFEE);
    let mut edges = Vec::new();
    for u in 0..C {
        for v in u + 1..C {
            if rng.gen::<f64>() < 0.3 {
                edges.push((u, v));
            }
        }
        edges.push((u, (u + 1) % C));
    }
    for i in 0..host {
        edges.push((C + i, C + (i + 1) % host));
        edges.push((C + i, C + (i + 2) % host));
    }
    let mid = C + host / 2;
    edges.extend([(0, mid), (1, mid + 7), (2, mid + 15)]);
    Graph::from_edges(C + host, edges).unwrap()
}

/// One random instance from the mixed families used by the accuracy checks.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (String, Graph) {
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(10..=200);
            (format!("er{n}"), connected_er(n, 4.0 / n as f64, rng))
        }
        1 => {
            let k = rng.gen_range(3..=15);
            (format!("barbell{k}"), barbell(k))
        }
        2 => {
            let n = rng.gen_range(3..=200);
            (format!("cycle{n}"), cycle(n))
        }
        _ => {
            let n = rng.gen_range(2..=200);
            (format!("star{n}"), star(n))
        }
    }
}
