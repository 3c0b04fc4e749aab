use std::collections::BTreeMap;
use std::path::Path;

use netcorr::io::{read_edge_list, write_results, Format, Metadata, NodeTable, ResultDocument};
use netcorr::{Graph, NodeData, NullSpec, Tail, WeightKind};
use sha2::{Digest, Sha256};

use crate::args::{NullArgs, OutputArgs, OutputFormat};
use crate::error::{CliError, CliResult};

pub fn digest_file(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    read_edge_list(path).map_err(CliError::input)
}

pub fn load_table(path: &Path) -> CliResult<NodeTable> {
    NodeTable::read(path).map_err(CliError::input)
}

pub fn load_column(table: &NodeTable, column: &str, g: &Graph, log10: bool) -> CliResult<NodeData> {
    let aligned = table.align(column, g, log10).map_err(CliError::input)?;
    if !aligned.missing.is_empty() {
        log::warn!("masked (no value): {}", aligned.missing.join(", "));
    }
    if !aligned.non_positive.is_empty() {
        log::warn!("masked (not positive under log10): {}", aligned.non_positive.join(", "));
    }
    Ok(aligned.data)
}

pub fn weight_kind(self_loops: bool) -> WeightKind {
    if self_loops {
        WeightKind::RowNormalizedSelfLoops
    } else {
        WeightKind::RowNormalized
    }
}

pub fn data_spec(args: &NullArgs, tail: Tail) -> NullSpec {
    NullSpec::data_permutation(args.nperm, args.seed).with_tail(tail)
}

pub fn config_spec(args: &NullArgs, tail: Tail) -> NullSpec {
    let spec = NullSpec::configuration(args.nperm, args.seed).with_tail(tail);
    match args.swaps {
        Some(s) => spec.with_swaps(s),
        None => spec,
    }
}

/// Provenance block: input digests and every parameter that shaped the run.
pub struct Provenance {
    inputs: BTreeMap<String, String>,
    parameters: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new() -> Self {
        Provenance {
            inputs: BTreeMap::new(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn input(mut self, name: &str, path: &Path) -> CliResult<Self> {
        self.inputs
            .insert(name.to_string(), format!("sha256:{}", digest_file(path)?));
        Ok(self)
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.parameters.insert(name.to_string(), value.to_string());
        self
    }

    pub fn nulls(self, args: &NullArgs) -> Self {
        self.param("null", format!("{:?}", args.null).to_lowercase())
            .param("nperm", args.nperm)
            .param("seed", args.seed)
            .param("swaps", args.swaps.map_or("10E".to_string(), |s| s.to_string()))
            .param("alpha", args.alpha)
    }

    /// Sizes echoed on stdout.
    pub fn counts(self, g: &Graph, x: &NodeData) -> Self {
        self.param("nodes", g.n_nodes())
            .param("edges", g.n_edges())
            .param("present", x.n_present())
    }

    pub fn metadata(self) -> Metadata {
        Metadata {
            tool: concat!("netcorr ", env!("CARGO_PKG_VERSION")).to_string(),
            inputs: self.inputs,
            parameters: self.parameters,
            timestamp: None,
        }
    }
}

pub fn emit(doc: &ResultDocument, output: &OutputArgs) -> CliResult<()> {
    let Some(path) = &output.out else { return Ok(()) };
    let format = match output.format {
        Some(OutputFormat::Json) => Format::Structured,
        Some(OutputFormat::Csv) => Format::Delimited,
        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Delimited,
        None => Format::Structured,
    };
    write_results(doc, path, format).map_err(CliError::runtime)
}

/// Stdout rendering of an optional value; the same number is written to the
/// result document.
pub fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub fn mark(p: Option<f64>, alpha: f64) -> &'static str {
    if p.is_some_and(|p| p < alpha) {
        " *"
    } else {
        ""
    }
}

pub fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}
