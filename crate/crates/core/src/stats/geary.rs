use super::prepare;
use crate::data::NodeData;
use crate::error::Result;
use crate::weights::WeightMatrix;

/// Geary's contiguity ratio
/// `C = (N-1) Σ_ij w_ij (x_i - x_j)² / (2 |W| Σ_i z_i²)`.
///
/// Values below 1 indicate positive autocorrelation.
pub fn geary_c(w: &WeightMatrix, x: &NodeData) -> Result<f64> {
    let p = prepare(w, x)?;
    let mut num = 0.0;
    for i in 0..p.w.n() {
        for (j, wij) in p.w.row(i) {
            let d = p.z[i] - p.z[j];
            num += wij * d * d;
        }
    }
    Ok((p.n as f64 - 1.0) * num / (2.0 * p.w.total_weight() * p.zz))
}
