//! Synthetic graphs and autocorrelated node data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationSpec {
    pub source: usize,
    pub steps: usize,
    pub noise_sd: f64,
    pub seed: u64,
}

/// `steps` synchronous rounds of neighbour averaging with `source` clamped
/// to 1. The source is set to 1 before the first round and after every
/// round. Isolated nodes keep their value.
pub fn propagate(g: &Graph, initial: &[f64], source: usize, steps: usize) -> Result<Vec<f64>> {
    if source >= g.n_nodes() {
        return Err(Error::NodeOutOfRange {
            index: source,
            n: g.n_nodes(),
        });
    }
    if initial.len() != g.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: g.n_nodes(),
            got: initial.len(),
        });
    }
    let mut x = initial.to_vec();
    x[source] = 1.0;
    let mut next = vec![0.0; x.len()];
    for _ in 0..steps {
        for (i, out) in next.iter_mut().enumerate() {
            let nbrs = g.neighbors(i);
            *out = if nbrs.is_empty() {
                x[i]
            } else {
                nbrs.iter().map(|&j| x[j]).sum::<f64>() / nbrs.len() as f64
            };
        }
        next[source] = 1.0;
        std::mem::swap(&mut x, &mut next);
    }
    Ok(x)
}

/// Adds i.i.d. `N(0, sd²)` noise to every entry, in index order.
pub fn add_noise(values: &mut [f64], sd: f64, seed: u64) -> Result<()> {
    if !(sd >= 0.0 && sd.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise sd must be >= 0, got {sd}")));
    }
    if sd == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in values.iter_mut() {
        *v += normal.sample(&mut rng);
    }
    Ok(())
}

/// Value propagation from a single clamped source followed by Gaussian noise
/// on every node, the source included.
pub fn value_propagation(g: &Graph, spec: &PropagationSpec) -> Result<NodeData> {
    if !g.is_connected() {
        log::warn!("graph is disconnected; nodes unreachable from the source stay at 0 before noise");
    }
    let mut x = propagate(g, &vec![0.0; g.n_nodes()], spec.source, spec.steps)?;
    add_noise(&mut x, spec.noise_sd, spec.seed)?;
    Ok(NodeData::new("x", x))
}

fn random_pairs<F>(n: usize, seed: u64, prob: F) -> Result<Graph>
where
    F: Fn(usize, usize) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < prob(i, j) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// G(n, p): each unordered pair independently with probability `p`.
pub fn er_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    random_pairs(n, seed, |_, _| p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedPartition {
    pub graph: Graph,
    /// Block index of every node.
    pub blocks: Vec<usize>,
}

/// Nodes split evenly into contiguous blocks; pairs inside a block are wired
/// with `p_in`, across blocks with `p_out`.
pub fn planted_partition(n: usize, blocks: usize, p_in: f64, p_out: f64, seed: u64) -> Result<PlantedPartition> {
    if blocks == 0 || blocks > n {
        return Err(Error::InvalidParameter(format!(
            "blocks must be between 1 and n = {n}, got {blocks}"
        )));
    }
    check_probability("p_in", p_in)?;
    check_probability("p_out", p_out)?;
    if p_in <= p_out {
        return Err(Error::InvalidParameter(format!(
            "p_in ({p_in}) must exceed p_out ({p_out})"
        )));
    }
    let block: Vec<usize> = (0..n).map(|i| i * blocks / n).collect();
    let graph = random_pairs(n, seed, |i, j| if block[i] == block[j] { p_in } else { p_out })?;
    Ok(PlantedPartition { graph, blocks: block })
}

/// Zachary's karate club, nodes labelled 1..=34.
pub fn karate() -> Graph {
    let mut b = GraphBuilder::new();
    for i in 1..=34 {
        b.node(i);
    }
    for &(i, j) in KARATE_EDGES {
        b.edge(i, j);
    }
    b.build().expect("non-empty dataset")
}

const KARATE_EDGES: &[(u8, u8)] = &[
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 11),
    (1, 12),
    (1, 13),
    (1, 14),
    (1, 18),
    (1, 20),
    (1, 22),
    (1, 32),
    (2, 3),
    (2, 4),
    (2, 8),
    (2, 14),
    (2, 18),
    (2, 20),
    (2, 22),
    (2, 31),
    (3, 4),
    (3, 8),
    (3, 9),
    (3, 10),
    (3, 14),
    (3, 28),
    (3, 29),
    (3, 33),
    (4, 8),
    (4, 13),
    (4, 14),
    (5, 7),
    (5, 11),
    (6, 7),
    (6, 11),
    (6, 17),
    (7, 17),
    (9, 31),
    (9, 33),
    (9, 34),
    (10, 34),
    (14, 34),
    (15, 33),
    (15, 34),
    (16, 33),
    (16, 34),
    (19, 33),
    (19, 34),
    (20, 34),
    (21, 33),
    (21, 34),
    (23, 33),
    (23, 34),
    (24, 26),
    (24, 28),
    (24, 30),
    (24, 33),
    (24, 34),
    (25, 26),
    (25, 28),
    (25, 32),
    (26, 32),
    (27, 30),
    (27, 34),
    (28, 34),
    (29, 32),
    (29, 34),
    (30, 33),
    (30, 34),
    (31, 33),
    (31, 34),
    (32, 33),
    (32, 34),
    (33, 34),
];
