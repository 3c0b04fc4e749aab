//! Sparse row-compressed interaction matrices.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// How a [`WeightMatrix`] was derived from its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    BinaryAdjacency,
    RowNormalized,
    RowNormalizedSelfLoops,
    DistanceClass {
        d: usize,
        row_normalized: bool,
    },
    /// Hand-built matrix with no graph recipe.
    Custom,
}

impl WeightKind {
    /// Rebuilds a matrix of this kind for `g`.
    pub fn build(self, g: &Graph) -> Result<WeightMatrix> {
        match self {
            WeightKind::BinaryAdjacency => Ok(WeightMatrix::binary_adjacency(g)),
            WeightKind::RowNormalized => Ok(WeightMatrix::row_normalized(g, false)),
            WeightKind::RowNormalizedSelfLoops => Ok(WeightMatrix::row_normalized(g, true)),
            WeightKind::DistanceClass { d, row_normalized } => {
                let m = WeightMatrix::distance_class(g, d)?;
                Ok(if row_normalized { m.normalize_rows() } else { m })
            }
            WeightKind::Custom => Err(Error::InvalidParameter(
                "custom weight matrices cannot be rebuilt from a graph".into(),
            )),
        }
    }

    pub fn is_row_normalized(self) -> bool {
        matches!(
            self,
            WeightKind::RowNormalized
                | WeightKind::RowNormalizedSelfLoops
                | WeightKind::DistanceClass {
                    row_normalized: true,
                    ..
                }
        )
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::BinaryAdjacency => write!(f, "binary-adjacency"),
            WeightKind::RowNormalized => write!(f, "row-normalized"),
            WeightKind::RowNormalizedSelfLoops => write!(f, "row-normalized-with-self-loops"),
            WeightKind::DistanceClass {
                d,
                row_normalized: false,
            } => write!(f, "distance-class({d})"),
            WeightKind::DistanceClass {
                d,
                row_normalized: true,
            } => write!(f, "distance-class({d}),row-normalized"),
            WeightKind::Custom => write!(f, "custom"),
        }
    }
}

/// Row-compressed `n × n` matrix of weights `w_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    kind: WeightKind,
    total_weight: f64,
}

impl WeightMatrix {
    /// Builds from per-row `(column, weight)` lists. Zero weights are dropped
    /// and repeated columns summed.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>, kind: WeightKind) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, w) in row {
                if j >= n {
                    return Err(Error::NodeOutOfRange { index: j, n });
                }
                if !w.is_finite() {
                    return Err(Error::InvalidParameter(format!("non-finite weight {w}")));
                }
                if w == 0.0 {
                    continue;
                }
                if cols.len() > *row_ptr.last().unwrap() && *cols.last().unwrap() == j {
                    *vals.last_mut().unwrap() += w;
                } else {
                    cols.push(j);
                    vals.push(w);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Self::from_parts(n, row_ptr, cols, vals, kind))
    }

    fn from_parts(n: usize, row_ptr: Vec<usize>, cols: Vec<usize>, vals: Vec<f64>, kind: WeightKind) -> Self {
        let total_weight = vals.iter().sum();
        WeightMatrix {
            n,
            row_ptr,
            cols,
            vals,
            kind,
            total_weight,
        }
    }

    /// `w_ij = 1` for every edge.
    pub fn binary_adjacency(g: &Graph) -> Self {
        let mut row_ptr = Vec::with_capacity(g.n_nodes() + 1);
        let mut cols = Vec::with_capacity(2 * g.n_edges());
        row_ptr.push(0);
        for i in 0..g.n_nodes() {
            cols.extend_from_slice(g.neighbors(i));
            row_ptr.push(cols.len());
        }
        let vals = vec![1.0; cols.len()];
        Self::from_parts(g.n_nodes(), row_ptr, cols, vals, WeightKind::BinaryAdjacency)
    }

    /// `w_ij = 1/k_i` over neighbours, or `1/(k_i + 1)` over neighbours and
    /// `i` itself when `self_loops` is set. Isolated nodes get an empty row
    /// (without self-loops) and a logged warning.
    pub fn row_normalized(g: &Graph, self_loops: bool) -> Self {
        let n = g.n_nodes();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(2 * g.n_edges() + if self_loops { n } else { 0 });
        let mut vals = Vec::with_capacity(cols.capacity());
        row_ptr.push(0);
        let mut isolated = 0;
        for i in 0..n {
            let nbrs = g.neighbors(i);
            if self_loops {
                let w = 1.0 / (nbrs.len() + 1) as f64;
                let split = nbrs.partition_point(|&j| j < i);
                cols.extend_from_slice(&nbrs[..split]);
                cols.push(i);
                cols.extend_from_slice(&nbrs[split..]);
                vals.extend(std::iter::repeat_n(w, nbrs.len() + 1));
            } else if nbrs.is_empty() {
                isolated += 1;
            } else {
                let w = 1.0 / nbrs.len() as f64;
                cols.extend_from_slice(nbrs);
                vals.extend(std::iter::repeat_n(w, nbrs.len()));
            }
            row_ptr.push(cols.len());
        }
        if isolated > 0 {
            log::warn!("{isolated} isolated node(s) have all-zero weight rows");
        }
        let kind = if self_loops {
            WeightKind::RowNormalizedSelfLoops
        } else {
            WeightKind::RowNormalized
        };
        Self::from_parts(n, row_ptr, cols, vals, kind)
    }

    /// Binary matrix linking pairs whose shortest path has exactly `d` hops.
    pub fn distance_class(g: &Graph, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("distance class must be >= 1".into()));
        }
        let rows: Vec<Vec<usize>> = (0..g.n_nodes())
            .into_par_iter()
            .map(|s| {
                g.bfs_distances(s)
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, dist)| dist == Some(d))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Ok(Self::binary_from_columns(g.n_nodes(), rows, d))
    }

    fn binary_from_columns(n: usize, rows: Vec<Vec<usize>>, d: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        for row in rows {
            cols.extend(row);
            row_ptr.push(cols.len());
        }
        let vals = vec![1.0; cols.len()];
        Self::from_parts(
            n,
            row_ptr,
            cols,
            vals,
            WeightKind::DistanceClass {
                d,
                row_normalized: false,
            },
        )
    }

    /// Rescales every non-empty row to sum to one.
    pub fn normalize_rows(&self) -> Self {
        let mut vals = self.vals.clone();
        for i in 0..self.n {
            let range = self.row_ptr[i]..self.row_ptr[i + 1];
            let s: f64 = vals[range.clone()].iter().sum();
            if s != 0.0 {
                vals[range].iter_mut().for_each(|w| *w /= s);
            }
        }
        let kind = match self.kind {
            WeightKind::BinaryAdjacency => WeightKind::RowNormalized,
            WeightKind::DistanceClass { d, .. } => WeightKind::DistanceClass {
                d,
                row_normalized: true,
            },
            k => k,
        };
        Self::from_parts(self.n, self.row_ptr.clone(), self.cols.clone(), vals, kind)
    }

    /// Drops the rows and columns of nodes whose `present` flag is false.
    /// Row-normalized kinds are renormalized over the surviving entries.
    pub fn restrict(&self, present: &[bool]) -> Self {
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        row_ptr.push(0);
        for (i, &keep_row) in present.iter().enumerate().take(self.n) {
            if keep_row {
                let start = cols.len();
                for (j, w) in self.row(i) {
                    if present[j] {
                        cols.push(j);
                        vals.push(w);
                    }
                }
                if self.kind.is_row_normalized() {
                    let s: f64 = vals[start..].iter().sum();
                    if s != 0.0 {
                        vals[start..].iter_mut().for_each(|w| *w /= s);
                    }
                }
            }
            row_ptr.push(cols.len());
        }
        Self::from_parts(self.n, row_ptr, cols, vals, self.kind)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// `|W| = Σ_ij w_ij`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.vals[self.row_ptr[i]..self.row_ptr[i + 1]].iter().sum()
    }

    /// Indices of rows with no stored entries.
    pub fn empty_rows(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.row_len(i) == 0).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn max_weight(&self) -> f64 {
        self.vals.iter().copied().fold(0.0, f64::max)
    }

    /// `out_i = Σ_j w_ij z_j`.
    pub fn mul_vec_into(&self, z: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let range = self.row_ptr[i]..self.row_ptr[i + 1];
            *o = self.cols[range.clone()]
                .iter()
                .zip(&self.vals[range])
                .map(|(&j, &w)| w * z[j])
                .sum();
        }
    }

    pub fn mul_vec(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.mul_vec_into(z, &mut out);
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n]; self.n];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, w) in self.row(i) {
                row[j] = w;
            }
        }
        dense
    }
}

/// All-pairs hop distances, computed once and sliced into distance classes.
#[derive(Debug, Clone)]
pub struct DistanceClasses {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceClasses {
    const UNREACHABLE: u32 = u32::MAX;

    pub fn new(g: &Graph) -> Self {
        let n = g.n_nodes();
        let dist = (0..n)
            .into_par_iter()
            .flat_map_iter(|s| {
                g.bfs_distances(s)
                    .into_iter()
                    .map(|d| d.map_or(Self::UNREACHABLE, |d| d as u32))
            })
            .collect();
        DistanceClasses { n, dist }
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<usize> {
        match self.dist[i * self.n + j] {
            Self::UNREACHABLE => None,
            d => Some(d as usize),
        }
    }

    pub fn max_distance(&self) -> usize {
        self.dist
            .iter()
            .filter(|&&d| d != Self::UNREACHABLE)
            .max()
            .copied()
            .unwrap_or(0) as usize
    }

    pub fn matrix(&self, d: usize) -> Result<WeightMatrix> {
        if d == 0 {
            return Err(Error::InvalidParameter("distance class must be >= 1".into()));
        }
        let rows = (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.dist[i * self.n + j] == d as u32).collect())
            .collect();
        Ok(WeightMatrix::binary_from_columns(self.n, rows, d))
    }
}
