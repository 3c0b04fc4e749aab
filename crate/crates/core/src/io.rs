//! Edge lists, node-value tables and result documents.
//!
//! Edge lists hold one edge per line as two whitespace-separated labels;
//! `#` starts a comment and blank lines are skipped. Node values are
//! comma-separated with a header row whose first column holds the labels.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::inference::{NullKind, NullResult, NullSpec, Tail};

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Nodes are indexed in [`label_order`](crate::graph::label_order), so line
/// order never affects results.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                path: origin.to_string(),
                line: lineno + 1,
                message: format!("expected two labels, found {}", tokens.len()),
            });
        }
        builder.edge(tokens[0], tokens[1]);
    }
    builder.build_sorted()
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    parse_edge_list(&read_text(path)?, &path.display().to_string())
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (i, j) in g.edges() {
        out.push_str(g.label(i));
        out.push(' ');
        out.push_str(g.label(j));
        out.push('\n');
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_edge_list(g))
}

/// A delimited table of numeric columns keyed by node label.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTable {
    pub labels: Vec<String>,
    pub columns: Vec<String>,
    /// `values[c][r]`; empty cells are `None`.
    pub values: Vec<Vec<Option<f64>>>,
}

impl NodeTable {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
        if header.len() < 2 {
            return Err(parse_err(1, "need a label column and at least one value column".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut labels = Vec::new();
        let mut values = vec![Vec::new(); columns.len()];
        let mut seen = HashMap::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                parse_err(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let label = record.get(0).unwrap_or("").to_string();
            if let Some(first) = seen.insert(label.clone(), line) {
                return Err(parse_err(
                    line,
                    format!("duplicate label {label:?} (first on line {first})"),
                ));
            }
            for (c, column) in columns.iter().enumerate() {
                let cell = record.get(c + 1).unwrap_or("");
                let v = if cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan") {
                    None
                } else {
                    Some(
                        cell.parse::<f64>()
                            .map_err(|_| parse_err(line, format!("column {column:?}: non-numeric value {cell:?}")))?,
                    )
                };
                values[c].push(v);
            }
            labels.push(label);
        }
        Ok(NodeTable {
            labels,
            columns,
            values,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_text(path)?, &path.display().to_string())
    }

    pub fn column_index(&self, column: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == column)
    }

    /// Aligns one column to `g` by label.
    pub fn align(&self, column: &str, g: &Graph, log10: bool) -> Result<NodeValues> {
        let c = self
            .column_index(column)
            .ok_or_else(|| Error::InvalidParameter(format!("no column named {column:?}")))?;
        let unmatched: Vec<&str> = self
            .labels
            .iter()
            .filter(|l| g.index_of(l).is_none())
            .map(String::as_str)
            .collect();
        if !unmatched.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "labels not in graph: {}",
                unmatched.join(", ")
            )));
        }
        let mut values = vec![f64::NAN; g.n_nodes()];
        let mut mask = vec![false; g.n_nodes()];
        for (label, v) in self.labels.iter().zip(&self.values[c]) {
            let i = g.index_of(label).expect("checked above");
            if let Some(v) = v {
                values[i] = *v;
                mask[i] = true;
            }
        }
        let missing: Vec<String> = (0..g.n_nodes())
            .filter(|&i| !mask[i])
            .map(|i| g.label(i).to_string())
            .collect();
        if !missing.is_empty() {
            log::warn!("{} node(s) have no value for {column:?} and are masked", missing.len());
        }
        let mut data = NodeData::with_mask(column, values, mask)?;
        let mut non_positive = Vec::new();
        if log10 {
            let (logged, dropped) = data.log10();
            if !dropped.is_empty() {
                log::warn!("{} non-positive value(s) masked under log10", dropped.len());
            }
            non_positive = dropped.into_iter().map(|i| g.label(i).to_string()).collect();
            data = logged;
        }
        Ok(NodeValues {
            data,
            missing,
            non_positive,
        })
    }
}

/// A node-value column aligned to a graph, with the labels that were masked.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeValues {
    pub data: NodeData,
    /// Graph nodes absent from the file or with an empty cell.
    pub missing: Vec<String>,
    /// Nodes masked because their value was not positive under log10.
    pub non_positive: Vec<String>,
}

pub fn read_node_values(path: impl AsRef<Path>, column: &str, g: &Graph, log10: bool) -> Result<NodeValues> {
    NodeTable::read(path)?.align(column, g, log10)
}

/// Comma-separated node values, one row per node in index order.
pub fn format_node_values(g: &Graph, columns: &[&NodeData]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string()];
    header.extend(columns.iter().map(|c| c.name().to_string()));
    w.write_record(&header).map_err(|e| Error::io("<csv>", e))?;
    for i in 0..g.n_nodes() {
        let mut row = vec![g.label(i).to_string()];
        for c in columns {
            c.check_len(g.n_nodes())?;
            row.push(c.get(i).map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&row).map_err(|e| Error::io("<csv>", e))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

pub fn write_node_values(g: &Graph, columns: &[&NodeData], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_node_values(g, columns)?)
}

/// Provenance of one p-value column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSummary {
    pub column: String,
    pub kind: NullKind,
    pub seed: u64,
    pub replicates: usize,
    pub tail: Tail,
    pub swaps_per_sample: Option<usize>,
    /// Replicate mean and standard deviation, for scalar statistics.
    pub null_mean: Option<f64>,
    pub null_sd: Option<f64>,
    pub failed: usize,
}

impl NullSummary {
    pub fn from_spec(column: impl Into<String>, spec: &NullSpec) -> Self {
        NullSummary {
            column: column.into(),
            kind: spec.kind,
            seed: spec.seed,
            replicates: spec.replicates,
            tail: spec.tail,
            swaps_per_sample: spec.swaps_per_sample,
            null_mean: None,
            null_sd: None,
            failed: 0,
        }
    }

    pub fn from_result(column: impl Into<String>, spec: &NullSpec, r: &NullResult) -> Self {
        NullSummary {
            null_mean: finite(r.null_mean),
            null_sd: finite(r.null_sd),
            failed: r.failed,
            ..Self::from_spec(column, spec)
        }
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub key: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    /// Input name to content digest.
    pub inputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, String>,
    pub timestamp: Option<String>,
}

/// One analysis run: a table of values keyed by node label, distance class
/// or `global`, plus the provenance of every p-value column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub statistic: String,
    pub weights: String,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
    pub nulls: Vec<NullSummary>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Pretty-printed JSON.
    Structured,
    /// Comma-separated table with a `#` preamble.
    Delimited,
}

impl ResultDocument {
    pub fn new(statistic: impl Into<String>, weights: impl Into<String>, columns: Vec<String>) -> Self {
        ResultDocument {
            statistic: statistic.into(),
            weights: weights.into(),
            columns,
            rows: Vec::new(),
            nulls: Vec::new(),
            metadata: Metadata {
                tool: format!("netcorr {}", env!("CARGO_PKG_VERSION")),
                ..Metadata::default()
            },
        }
    }

    pub fn push_row(&mut self, key: impl Into<String>, values: Vec<Option<f64>>) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                got: values.len(),
            });
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("result values must be finite".into()));
        }
        self.rows.push(ResultRow {
            key: key.into(),
            values,
        });
        Ok(())
    }

    pub fn value(&self, key: &str, column: &str) -> Option<f64> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows.iter().find(|r| r.key == key)?.values[c]
    }

    pub fn to_string(&self, format: Format) -> Result<String> {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::io("<json>", e))?;
                s.push('\n');
                Ok(s)
            }
            Format::Delimited => self.to_delimited(),
        }
    }

    fn to_delimited(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# statistic: {}\n", json(&self.statistic)));
        out.push_str(&format!("# weights: {}\n", json(&self.weights)));
        for null in &self.nulls {
            out.push_str(&format!("# null: {}\n", json(null)));
        }
        out.push_str(&format!("# metadata: {}\n", json(&self.metadata)));
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["key".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).map_err(|e| Error::io("<csv>", e))?;
        for row in &self.rows {
            let mut rec = vec![row.key.clone()];
            rec.extend(row.values.iter().map(|v| v.map(|v| v.to_string()).unwrap_or_default()));
            w.write_record(&rec).map_err(|e| Error::io("<csv>", e))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e))?;
        out.push_str(std::str::from_utf8(&bytes).expect("utf8"));
        Ok(out)
    }

    pub fn parse(text: &str, format: Format, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        match format {
            Format::Structured => serde_json::from_str(text).map_err(|e| err(e.line(), e.to_string())),
            Format::Delimited => {
                let mut statistic = None;
                let mut weights = None;
                let mut nulls = Vec::new();
                let mut metadata = None;
                let mut body_start = 0;
                for (lineno, line) in text.lines().enumerate() {
                    let Some(rest) = line.strip_prefix("# ") else {
                        break;
                    };
                    body_start += line.len() + 1;
                    let (key, value) = rest
                        .split_once(": ")
                        .ok_or_else(|| err(lineno + 1, "malformed preamble line".into()))?;
                    let bad = |e: serde_json::Error| err(lineno + 1, e.to_string());
                    match key {
                        "statistic" => statistic = Some(serde_json::from_str(value).map_err(bad)?),
                        "weights" => weights = Some(serde_json::from_str(value).map_err(bad)?),
                        "null" => nulls.push(serde_json::from_str(value).map_err(bad)?),
                        "metadata" => metadata = Some(serde_json::from_str(value).map_err(bad)?),
                        other => return Err(err(lineno + 1, format!("unknown preamble key {other:?}"))),
                    }
                }
                let preamble_lines = text[..body_start.min(text.len())].lines().count();
                let table = NodeTable::parse(&text[body_start.min(text.len())..], origin).map_err(|e| match e {
                    Error::Parse { path, line, message } => Error::Parse {
                        path,
                        line: line + preamble_lines,
                        message,
                    },
                    e => e,
                })?;
                let rows = (0..table.labels.len())
                    .map(|r| ResultRow {
                        key: table.labels[r].clone(),
                        values: table.values.iter().map(|col| col[r]).collect(),
                    })
                    .collect();
                Ok(ResultDocument {
                    statistic: statistic.ok_or_else(|| err(1, "missing statistic".into()))?,
                    weights: weights.ok_or_else(|| err(1, "missing weights".into()))?,
                    columns: table.columns,
                    rows,
                    nulls,
                    metadata: metadata.ok_or_else(|| err(1, "missing metadata".into()))?,
                })
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn write_results(doc: &ResultDocument, path: impl AsRef<Path>, format: Format) -> Result<()> {
    write_text(path.as_ref(), &doc.to_string(format)?)
}

pub fn read_results(path: impl AsRef<Path>, format: Format) -> Result<ResultDocument> {
    let path = path.as_ref();
    ResultDocument::parse(&read_text(path)?, format, &path.display().to_string())
}
