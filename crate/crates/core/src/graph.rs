//! Undirected simple graphs with a label table.
//!
//! Nodes are numbered `0..n` in first-appearance order. Self-loops are
//! dropped and repeated edges collapsed on ingest, so every `Graph` is
//! simple.

use std::collections::{HashMap, VecDeque};
use std::fmt::Display;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    n_edges: usize,
}

/// Incremental construction by label.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a node, returning its index. Existing labels keep their index.
    pub fn node(&mut self, label: impl Display) -> usize {
        let label = label.to_string();
        if let Some(&i) = self.index.get(&label) {
            return i;
        }
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        i
    }

    pub fn edge(&mut self, a: impl Display, b: impl Display) -> &mut Self {
        let i = self.node(a);
        let j = self.node(b);
        if i != j {
            self.adjacency[i].push(j);
            self.adjacency[j].push(i);
        }
        self
    }

    pub fn build(self) -> Result<Graph> {
        if self.labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Graph::assemble(self.adjacency, self.labels, self.index))
    }

    /// As [`build`](Self::build) but with nodes indexed in [`label_order`],
    /// so the result does not depend on insertion order.
    pub fn build_sorted(self) -> Result<Graph> {
        if self.labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&a, &b| label_order(&self.labels[a], &self.labels[b]));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let labels: Vec<String> = order.iter().map(|&old| self.labels[old].clone()).collect();
        let adjacency = order
            .iter()
            .map(|&old| self.adjacency[old].iter().map(|&j| new_index[j]).collect())
            .collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(Graph::assemble(adjacency, labels, index))
    }
}

/// Integer labels first in numeric order, then the rest lexically.
pub fn label_order(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl Graph {
    /// Builds a graph from label pairs. Self-loops are dropped, duplicates collapsed.
    pub fn from_label_pairs<I, A, B>(pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Display,
        B: Display,
    {
        let mut builder = GraphBuilder::new();
        for (a, b) in pairs {
            builder.edge(a, b);
        }
        builder.build()
    }

    /// Builds a graph on `n` index-labelled nodes (`"0"`, `"1"`, ...).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::NodeOutOfRange { index: v, n });
                }
            }
            if i != j {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = labels.iter().cloned().zip(0..).collect();
        Ok(Graph::assemble(adjacency, labels, index))
    }

    /// Same node set and labels, different edges.
    pub fn with_edges<I>(&self, edges: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); self.n_nodes()];
        for (i, j) in edges {
            if i != j {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
        Graph::assemble(adjacency, self.labels.clone(), self.index.clone())
    }

    fn assemble(mut adjacency: Vec<Vec<usize>>, labels: Vec<String>, index: HashMap<String, usize>) -> Graph {
        let mut twice_edges = 0;
        for nbrs in adjacency.iter_mut() {
            nbrs.sort_unstable();
            nbrs.dedup();
            twice_edges += nbrs.len();
        }
        Graph {
            adjacency,
            labels,
            index,
            n_edges: twice_edges / 2,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Sorted neighbour indices of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn isolated_nodes(&self) -> Vec<usize> {
        (0..self.n_nodes()).filter(|&i| self.degree(i) == 0).collect()
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_nodes()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Longest finite shortest-path length over all pairs.
    pub fn diameter(&self) -> usize {
        (0..self.n_nodes())
            .filter_map(|s| self.bfs_distances(s).into_iter().flatten().max())
            .max()
            .unwrap_or(0)
    }
}
