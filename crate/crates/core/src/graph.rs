//! Undirected simple graphs in compressed adjacency form.

use std::io::{BufRead, Write};
use std::str::FromStr;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};

/// Input formats accepted by [`Graph::load`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// One `u v` pair per line, 0-based ids, `#` comment lines.
    EdgeList,
    /// Matrix Market coordinate format, 1-based ids, values ignored.
    MatrixMarket,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "txt" => Ok(GraphFormat::EdgeList),
            "matrix-market" | "mtx" => Ok(GraphFormat::MatrixMarket),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph format `{other}`"
            ))),
        }
    }
}

/// An immutable undirected graph without self-loops or multi-edges.
///
/// Neighbor lists are sorted ascending, so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    total_volume: u64,
}

impl Graph {
    /// Builds the symmetrized simple graph on `n` nodes from a list of
    /// (possibly directed, repeated, or self-looping) edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut arcs = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u != v {
                arcs.push((u, v));
                arcs.push((v, u));
            }
        }
        if arcs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<usize> = arcs.into_iter().map(|(_, v)| v).collect();
        let total_volume = targets.len() as u64;
        Ok(Graph {
            offsets,
            targets,
            total_volume,
        })
    }

    pub fn load<R: BufRead>(reader: R, format: GraphFormat) -> Result<Graph> {
        match format {
            GraphFormat::EdgeList => Self::load_edge_list(reader),
            GraphFormat::MatrixMarket => Self::load_matrix_market(reader),
        }
    }

    /// Reads whitespace-separated `u v` pairs; the node count is one more
    /// than the largest id seen.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max_id = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let u = parse_id(tokens.next(), lineno)?;
            let v = parse_id(tokens.next(), lineno)?;
            max_id = max_id.max(Some(u.max(v)));
            edges.push((u, v));
        }
        let n = max_id.map_or(0, |m| m + 1);
        Self::from_edges(n, edges)
    }

    /// Reads a Matrix Market coordinate file. Entries are 1-based and shifted
    /// down by one; numeric values are ignored.
    pub fn load_matrix_market<R: BufRead>(reader: R) -> Result<Graph> {
        let mut lines = reader.lines().enumerate();

        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let header = header?;
        let fields: Vec<String> = header
            .split_whitespace()
            .map(str::to_ascii_lowercase)
            .collect();
        if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
            return Err(parse_err(1, "expected `%%MatrixMarket matrix ...` header"));
        }
        if fields[2] != "coordinate" {
            return Err(parse_err(1, "only coordinate matrices are supported"));
        }
        if !matches!(fields[3].as_str(), "pattern" | "real" | "integer") {
            return Err(parse_err(1, &format!("unsupported field `{}`", fields[3])));
        }
        if !matches!(fields[4].as_str(), "general" | "symmetric") {
            return Err(parse_err(
                1,
                &format!("unsupported symmetry `{}`", fields[4]),
            ));
        }

        let mut size: Option<(usize, usize)> = None;
        let mut expected = 0usize;
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            match size {
                None => {
                    let rows = parse_id(tokens.next(), lineno)?;
                    let cols = parse_id(tokens.next(), lineno)?;
                    expected = parse_id(tokens.next(), lineno)?;
                    if rows != cols {
                        return Err(parse_err(lineno, "adjacency matrix must be square"));
                    }
                    size = Some((rows, cols));
                    edges.reserve(expected);
                }
                Some((rows, _)) => {
                    let i = parse_id(tokens.next(), lineno)?;
                    let j = parse_id(tokens.next(), lineno)?;
                    if i == 0 || j == 0 || i > rows || j > rows {
                        return Err(parse_err(
                            lineno,
                            &format!("entry ({i}, {j}) outside 1..={rows}"),
                        ));
                    }
                    if edges.len() == expected {
                        return Err(parse_err(lineno, "more entries than declared"));
                    }
                    edges.push((i - 1, j - 1));
                }
            }
        }
        let (n, _) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
        if edges.len() != expected {
            return Err(Error::Parse {
                line: 0,
                message: format!("declared {expected} entries, found {}", edges.len()),
            });
        }
        Self::from_edges(n, edges)
    }

    /// Writes each undirected edge once as `u v` with `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Writes a symmetric pattern Matrix Market file (lower triangle).
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
        writeln!(
            out,
            "{} {} {}",
            self.node_count(),
            self.node_count(),
            self.edge_count()
        )?;
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", v + 1, u + 1)?;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sum of all degrees, `2|E|`.
    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    /// Undirected edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }
}

fn parse_id(token: Option<&str>, line: usize) -> Result<usize> {
    let token = token.ok_or_else(|| parse_err(line, "expected two node ids"))?;
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, &format!("`{token}` is not a nonnegative integer")))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// A set of nodes together with its boundary size and volume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<usize>,
    cut: u64,
    volume: u64,
}

impl NodeSet {
    pub fn new<I>(g: &Graph, members: I) -> Result<NodeSet>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&u| u >= g.node_count()) {
            return Err(Error::InvalidParameter(format!(
                "node {bad} outside 0..{}",
                g.node_count()
            )));
        }
        let inside: FxHashSet<usize> = members.iter().copied().collect();
        let mut cut = 0u64;
        let mut volume = 0u64;
        for &u in &members {
            volume += g.degree(u) as u64;
            cut += g
                .neighbors(u)
                .iter()
                .filter(|v| !inside.contains(v))
                .count() as u64;
        }
        Ok(NodeSet {
            members,
            cut,
            volume,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of edges with exactly one endpoint in the set.
    pub fn cut(&self) -> u64 {
        self.cut
    }

    pub fn volume(&self) -> u64 {
        self.volume
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `cut / min(vol, total - vol)`, or `None` when the smaller side has no volume.
#[inline]
pub(crate) fn cut_ratio(cut: u64, volume: u64, total_volume: u64) -> Option<f64> {
    let denom = volume.min(total_volume - volume);
    (denom > 0).then(|| cut as f64 / denom as f64)
}

/// Conductance `|∂S| / min(vol S, vol(V - S))`.
pub fn conductance(g: &Graph, set: &NodeSet) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::UndefinedSet("the empty set"));
    }
    cut_ratio(set.cut, set.volume, g.total_volume).ok_or(Error::UndefinedSet(
        "a set whose complement has zero volume",
    ))
}
