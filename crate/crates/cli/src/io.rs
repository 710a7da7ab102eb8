use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use pprpaths::{Graph, GraphFormat};
use serde::Serialize;

use crate::args::{GraphArgs, GraphFormatArg, OutputArgs, OutputFormat};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub file: String,
    pub nodes: usize,
    pub edges: usize,
}

pub fn graph_format(path: &Path, explicit: Option<GraphFormatArg>) -> GraphFormat {
    match explicit {
        Some(GraphFormatArg::EdgeList) => GraphFormat::EdgeList,
        Some(GraphFormatArg::MatrixMarket) => GraphFormat::MatrixMarket,
        None if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("mtx")) =>
        {
            GraphFormat::MatrixMarket
        }
        None => GraphFormat::EdgeList,
    }
}

pub fn load_graph(args: &GraphArgs) -> CliResult<(Graph, GraphInfo)> {
    let file = File::open(&args.graph).map_err(|e| CliError::io(&args.graph, e))?;
    let format = graph_format(&args.graph, args.graph_format);
    let g = Graph::load(BufReader::new(file), format).map_err(|e| match CliError::from(e) {
        CliError::Io(m) => CliError::io(&args.graph, m),
        other => other,
    })?;
    let info = GraphInfo {
        file: args.graph.display().to_string(),
        nodes: g.node_count(),
        edges: g.edge_count(),
    };
    Ok((g, info))
}

fn open_out(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(path: Option<&PathBuf>, value: &T) -> CliResult<()> {
    let mut out = open_out(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn write_csv<T: Serialize>(
    path: Option<&PathBuf>,
    rows: impl IntoIterator<Item = T>,
) -> CliResult<()> {
    let mut writer = csv::Writer::from_writer(open_out(path)?);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes the report as JSON, or its table as CSV.
pub fn emit<T: Serialize, R: Serialize>(
    output: &OutputArgs,
    report: &T,
    rows: impl IntoIterator<Item = R>,
) -> CliResult<()> {
    match output.format {
        OutputFormat::Json => write_json(output.out.as_ref(), report),
        OutputFormat::Csv => write_csv(output.out.as_ref(), rows),
    }
}
