//! Null models and one-sided p-values.
//!
//! Every replicate draws from its own ChaCha stream keyed by
//! `(seed, replicate)` (or `(seed, node)` for conditional permutation), so
//! results are bitwise identical at any thread count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stats::prepare;
use crate::weights::{WeightKind, WeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullKind {
    DataPermutation,
    ConditionalPermutation,
    Configuration,
}

impl NullKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NullKind::DataPermutation => "data-permutation",
            NullKind::ConditionalPermutation => "conditional-permutation",
            NullKind::Configuration => "configuration",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    #[default]
    Upper,
    Lower,
    TwoSided,
}

impl Tail {
    pub fn as_str(self) -> &'static str {
        match self {
            Tail::Upper => "upper",
            Tail::Lower => "lower",
            Tail::TwoSided => "two-sided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullSpec {
    pub kind: NullKind,
    pub replicates: usize,
    pub seed: u64,
    /// Accepted swaps per configuration replicate; `None` means `10·E`.
    pub swaps_per_sample: Option<usize>,
    pub tail: Tail,
}

impl NullSpec {
    pub const DEFAULT_REPLICATES: usize = 999;

    fn new(kind: NullKind, replicates: usize, seed: u64) -> Self {
        NullSpec {
            kind,
            replicates,
            seed,
            swaps_per_sample: None,
            tail: Tail::Upper,
        }
    }

    pub fn data_permutation(replicates: usize, seed: u64) -> Self {
        Self::new(NullKind::DataPermutation, replicates, seed)
    }

    pub fn conditional_permutation(replicates: usize, seed: u64) -> Self {
        Self::new(NullKind::ConditionalPermutation, replicates, seed)
    }

    pub fn configuration(replicates: usize, seed: u64) -> Self {
        Self::new(NullKind::Configuration, replicates, seed)
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_swaps(mut self, swaps: usize) -> Self {
        self.swaps_per_sample = Some(swaps);
        self
    }

    pub fn swaps_for(&self, g: &Graph) -> usize {
        self.swaps_per_sample.unwrap_or(10 * g.n_edges())
    }

    fn validate(&self, expected: NullKind) -> Result<()> {
        if self.kind != expected {
            return Err(Error::InvalidParameter(format!(
                "expected a {} null, got {}",
                expected.as_str(),
                self.kind.as_str()
            )));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be >= 1".into()));
        }
        if self.swaps_per_sample == Some(0) {
            return Err(Error::InvalidParameter("swaps_per_sample must be >= 1".into()));
        }
        Ok(())
    }
}

impl Default for NullSpec {
    fn default() -> Self {
        Self::data_permutation(Self::DEFAULT_REPLICATES, 0)
    }
}

/// Observed statistic against its replicate distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullResult {
    pub observed: f64,
    pub p_value: f64,
    pub replicate_values: Vec<f64>,
    pub null_mean: f64,
    pub null_sd: f64,
    /// Replicates whose statistic could not be evaluated.
    pub failed: usize,
    pub kind: NullKind,
    pub seed: u64,
    pub replicates: usize,
    pub tail: Tail,
}

impl NullResult {
    fn from_replicates(observed: f64, values: Vec<f64>, failed: usize, spec: &NullSpec) -> Self {
        let (null_mean, null_sd) = mean_sd(&values);
        let p_value = p_value(observed, &values, spec.tail, null_mean);
        NullResult {
            observed,
            p_value,
            replicate_values: values,
            null_mean,
            null_sd,
            failed,
            kind: spec.kind,
            seed: spec.seed,
            replicates: spec.replicates,
            tail: spec.tail,
        }
    }
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Plus-one Monte Carlo p-value, `(1 + #{extreme}) / (1 + R)`.
///
/// A replicate is extreme if it is at least as large as the observed value
/// (upper), at most as large (lower), or at least as far from the null mean
/// (two-sided). Values within a relative 1e-12 of the threshold count as ties.
pub fn p_value(observed: f64, replicates: &[f64], tail: Tail, null_mean: f64) -> f64 {
    let extreme = replicates
        .iter()
        .filter(|&&r| match tail {
            Tail::Upper => r >= observed || ties(r, observed),
            Tail::Lower => r <= observed || ties(r, observed),
            Tail::TwoSided => {
                let (dr, dobs) = ((r - null_mean).abs(), (observed - null_mean).abs());
                dr >= dobs || ties(dr, dobs)
            }
        })
        .count();
    (1 + extreme) as f64 / (1 + replicates.len()) as f64
}

/// Independent stream for replicate (or node) `stream` under `seed`.
pub fn replicate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn collect_outcomes(outcomes: Vec<Result<f64>>, total: usize) -> Result<(Vec<f64>, usize)> {
    let mut values = Vec::with_capacity(outcomes.len());
    let mut failed = 0;
    let mut last = None;
    for o in outcomes {
        match o {
            Ok(v) => values.push(v),
            Err(e) => {
                failed += 1;
                last = Some(e);
            }
        }
    }
    if failed * 10 > total {
        return Err(Error::TooManyFailures {
            failed,
            total,
            last: Box::new(last.expect("at least one failure")),
        });
    }
    Ok((values, failed))
}

/// Data-permutation null: shuffle the present values of `x` over the present
/// nodes and re-evaluate `stat`. For a bivariate statistic capture the second
/// variable in the closure; only `x` is permuted.
pub fn permutation_null<F>(stat: F, w: &WeightMatrix, x: &NodeData, spec: &NullSpec) -> Result<NullResult>
where
    F: Fn(&WeightMatrix, &NodeData) -> Result<f64> + Sync,
{
    spec.validate(NullKind::DataPermutation)?;
    let observed = stat(w, x)?;
    let present = x.present_indices();
    let base: Vec<f64> = present.iter().map(|&i| x.values()[i]).collect();

    let outcomes: Vec<Result<f64>> = (0..spec.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(spec.seed, r as u64);
            let mut shuffled = base.clone();
            shuffled.shuffle(&mut rng);
            let mut values = x.values().to_vec();
            for (&i, v) in present.iter().zip(shuffled) {
                values[i] = v;
            }
            stat(w, &x.with_values(values)?)
        })
        .collect();
    let (values, failed) = collect_outcomes(outcomes, spec.replicates)?;
    Ok(NullResult::from_replicates(observed, values, failed, spec))
}

/// Conditional randomisation for node Moran indices: for each node `i` the
/// value at `i` stays fixed while the remaining present values are permuted.
/// Returns `None` for absent nodes.
pub fn conditional_permutation_local(
    w: &WeightMatrix,
    x: &NodeData,
    spec: &NullSpec,
) -> Result<Vec<Option<NullResult>>> {
    spec.validate(NullKind::ConditionalPermutation)?;
    let p = prepare(w, x)?;
    let w = p.w.as_ref();
    let z = &p.z;
    let present = x.present_indices();

    let results = (0..x.len())
        .into_par_iter()
        .map(|i| {
            if !x.mask()[i] {
                return None;
            }
            let mut self_weight = 0.0;
            let mut nbr_weights = Vec::with_capacity(w.row_len(i));
            let mut observed_lag = 0.0;
            for (j, wij) in w.row(i) {
                observed_lag += wij * z[j];
                if j == i {
                    self_weight = wij;
                } else {
                    nbr_weights.push(wij);
                }
            }
            let observed = z[i] * observed_lag / p.zz;

            // Partial Fisher–Yates over the other present values draws the
            // neighbours' values under a uniform permutation.
            let mut pool: Vec<f64> = present.iter().filter(|&&j| j != i).map(|&j| z[j]).collect();
            let mut rng = replicate_rng(spec.seed, i as u64);
            let values = (0..spec.replicates)
                .map(|_| {
                    let mut lag = self_weight * z[i];
                    for (t, wt) in nbr_weights.iter().enumerate() {
                        let k = rng.random_range(t..pool.len());
                        pool.swap(t, k);
                        lag += wt * pool[t];
                    }
                    z[i] * lag / p.zz
                })
                .collect();
            Some(NullResult::from_replicates(observed, values, 0, spec))
        })
        .collect();
    Ok(results)
}

/// Edge list after `n_swaps` accepted degree-preserving double-edge swaps.
///
/// Each proposal picks two edges `(a,b)`, `(c,d)` and rewires them to
/// `(a,d)`, `(c,b)`; proposals that would create a self-loop or a repeated
/// edge are rejected. Gives up after `100·n_swaps` proposals.
pub fn swap_chain<R: Rng>(g: &Graph, n_swaps: usize, rng: &mut R) -> Result<Vec<(usize, usize)>> {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let budget = n_swaps.saturating_mul(100);
    if edges.len() < 2 {
        return Err(Error::NotRewireable {
            accepted: 0,
            requested: n_swaps,
            proposals: 0,
        });
    }
    let mut adj: Vec<Vec<usize>> = (0..g.n_nodes()).map(|i| g.neighbors(i).to_vec()).collect();
    let m = edges.len();
    let mut accepted = 0;
    let mut proposals = 0;
    while accepted < n_swaps {
        if proposals >= budget {
            return Err(Error::NotRewireable {
                accepted,
                requested: n_swaps,
                proposals,
            });
        }
        proposals += 1;
        let e1 = rng.random_range(0..m);
        let mut e2 = rng.random_range(0..m - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let (a, b) = edges[e1];
        let (c, d) = if rng.random::<bool>() {
            edges[e2]
        } else {
            (edges[e2].1, edges[e2].0)
        };
        if a == c || a == d || b == c || b == d {
            continue;
        }
        if adj[a].contains(&d) || adj[c].contains(&b) {
            continue;
        }
        replace(&mut adj[a], b, d);
        replace(&mut adj[b], a, c);
        replace(&mut adj[c], d, b);
        replace(&mut adj[d], c, a);
        edges[e1] = (a, d);
        edges[e2] = (c, b);
        accepted += 1;
    }
    Ok(edges)
}

fn replace(list: &mut [usize], old: usize, new: usize) {
    if let Some(slot) = list.iter_mut().find(|v| **v == old) {
        *slot = new;
    }
}

/// Degree-preserving rewiring of `g` with `n_swaps` accepted swaps.
pub fn double_edge_swap(g: &Graph, n_swaps: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = swap_chain(g, n_swaps, &mut rng)?;
    Ok(g.with_edges(edges))
}

/// Rewired weight matrices, one fresh swap chain from `g` per replicate.
/// Graphs on which no swap is ever accepted are rigid; their only
/// configuration sample is `g` itself.
fn configuration_samples<T, F>(g: &Graph, kind: WeightKind, spec: &NullSpec, eval: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(&WeightMatrix) -> Result<T> + Sync,
{
    let swaps = spec.swaps_for(g).max(1);
    (0..spec.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(spec.seed, r as u64);
            let rewired = match swap_chain(g, swaps, &mut rng) {
                Ok(edges) => g.with_edges(edges),
                Err(Error::NotRewireable { accepted: 0, .. }) => g.clone(),
                Err(e) => return Err(e),
            };
            eval(&kind.build(&rewired)?)
        })
        .collect()
}

fn check_rewire_error<T>(outcomes: &[Result<T>]) -> Result<()> {
    for o in outcomes {
        if let Err(e @ Error::NotRewireable { .. }) = o {
            return Err(e.clone());
        }
    }
    Ok(())
}

/// Configuration null: hold `x` fixed, rewire the edges preserving every
/// degree, rebuild the weights of `kind` and re-evaluate `stat`.
pub fn configuration_null<F>(stat: F, g: &Graph, kind: WeightKind, x: &NodeData, spec: &NullSpec) -> Result<NullResult>
where
    F: Fn(&WeightMatrix, &NodeData) -> Result<f64> + Sync,
{
    spec.validate(NullKind::Configuration)?;
    let observed = stat(&kind.build(g)?, x)?;
    let outcomes = configuration_samples(g, kind, spec, |w| stat(w, x));
    check_rewire_error(&outcomes)?;
    let (values, failed) = collect_outcomes(outcomes, spec.replicates)?;
    Ok(NullResult::from_replicates(observed, values, failed, spec))
}

/// Configuration null for a per-node statistic. Returns `None` where the
/// observed statistic is undefined.
pub fn configuration_null_local<F>(
    stat: F,
    g: &Graph,
    kind: WeightKind,
    x: &NodeData,
    spec: &NullSpec,
) -> Result<Vec<Option<NullResult>>>
where
    F: Fn(&WeightMatrix, &NodeData) -> Result<Vec<Option<f64>>> + Sync,
{
    spec.validate(NullKind::Configuration)?;
    let observed = stat(&kind.build(g)?, x)?;
    let outcomes = configuration_samples(g, kind, spec, |w| stat(w, x));
    check_rewire_error(&outcomes)?;
    let mut samples = Vec::with_capacity(outcomes.len());
    let mut failed = 0;
    let mut last = None;
    for o in outcomes {
        match o {
            Ok(v) => samples.push(v),
            Err(e) => {
                failed += 1;
                last = Some(e);
            }
        }
    }
    if failed * 10 > spec.replicates {
        return Err(Error::TooManyFailures {
            failed,
            total: spec.replicates,
            last: Box::new(last.expect("at least one failure")),
        });
    }
    Ok(observed
        .iter()
        .enumerate()
        .map(|(i, obs)| {
            obs.map(|obs| {
                let values: Vec<f64> = samples.iter().filter_map(|s| s[i]).collect();
                let node_failed = failed + samples.len() - values.len();
                NullResult::from_replicates(obs, values, node_failed, spec)
            })
        })
        .collect())
}
