use super::restricted;
use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weights::WeightMatrix;

/// Unbinned assortativity of raw node values,
/// `(Σ_ij x_i A_ij x_j - Σ_ij x_i (k_i k_j / 2E) x_j) / σ_k²`,
/// with σ_k² the population variance of the degrees.
pub fn assortativity_continuous(g: &Graph, x: &NodeData) -> Result<f64> {
    assortativity_weights(&WeightMatrix::binary_adjacency(g), x)
}

/// As [`assortativity_continuous`] with the adjacency supplied as a binary
/// weight matrix. Degrees are row sums.
pub fn assortativity_weights(a: &WeightMatrix, x: &NodeData) -> Result<f64> {
    x.check_len(a.n())?;
    let a = restricted(a, x.mask());
    let present = x.present_indices();
    if present.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: present.len(),
        });
    }
    let two_e = a.total_weight();
    if two_e == 0.0 {
        return Err(Error::EmptyWeights);
    }
    let degrees: Vec<f64> = present.iter().map(|&i| a.row_sum(i)).collect();
    if degrees.iter().all(|&k| k == degrees[0]) {
        return Err(Error::DegenerateDegreeVariance);
    }
    let n = degrees.len() as f64;
    let mean_k = degrees.iter().sum::<f64>() / n;
    let var_k = degrees.iter().map(|k| (k - mean_k).powi(2)).sum::<f64>() / n;

    let xv = |i: usize| x.values()[i];
    let mut observed = 0.0;
    for &i in &present {
        for (j, aij) in a.row(i) {
            observed += xv(i) * aij * xv(j);
        }
    }
    let kx: f64 = present.iter().zip(&degrees).map(|(&i, k)| k * xv(i)).sum();
    Ok((observed - kx * kx / two_e) / var_k)
}
