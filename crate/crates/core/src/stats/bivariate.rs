use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{centered, check_constant, dot, restricted};
use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::weights::WeightMatrix;

/// Relative threshold under which a network variance is treated as zero.
pub const VARIANCE_RTOL: f64 = 1e-10;

struct Pair<'a> {
    w: std::borrow::Cow<'a, WeightMatrix>,
    zx: Vec<f64>,
    zy: Vec<f64>,
    n: usize,
}

fn prepare_pair<'a>(w: &'a WeightMatrix, x: &NodeData, y: &NodeData) -> Result<Pair<'a>> {
    x.check_len(w.n())?;
    let mask = x.joint_mask(y)?;
    check_constant(x, &mask)?;
    check_constant(y, &mask)?;
    let zx = centered(x.values(), &mask)?;
    let zy = centered(y.values(), &mask)?;
    let n = mask.iter().filter(|&&m| m).count();
    Ok(Pair {
        w: restricted(w, &mask),
        zx,
        zy,
        n,
    })
}

/// Network correlation with a single lag factor,
/// `ρ_G = Σ_ij w_ij x_i y_j / sqrt(Σ_ij w_ij x_i x_j · Σ_ij w_ij y_i y_j)`
/// on centred data. Fails when either network variance is not positive.
pub fn coscia_rho(w: &WeightMatrix, x: &NodeData, y: &NodeData) -> Result<f64> {
    let p = prepare_pair(w, x, y)?;
    let ly = p.w.mul_vec(&p.zy);
    let lx = p.w.mul_vec(&p.zx);
    let var_x = dot(&p.zx, &lx);
    let var_y = dot(&p.zy, &ly);
    // Values at rounding level of the scale Σw·|z|²/N count as zero.
    let scale = p.w.total_weight() / p.n as f64;
    let tiny = |v: f64, z: &[f64]| v <= VARIANCE_RTOL * scale * dot(z, z);
    if tiny(var_x, &p.zx) || tiny(var_y, &p.zy) {
        return Err(Error::NetworkVarianceNotPositive);
    }
    Ok(dot(&p.zx, &ly) / (var_x.sqrt() * var_y.sqrt()))
}

/// Lee's bivariate association
/// `L = (N / Σ_i (Σ_j w_ij)²) (x̃·ỹ) / (|x| |y|)` on centred data.
///
/// The usual choice of `w` is the row-normalized adjacency with self-loops,
/// so that `x_i` and `y_i` interact directly.
pub fn lee_l(w: &WeightMatrix, x: &NodeData, y: &NodeData) -> Result<f64> {
    let p = prepare_pair(w, x, y)?;
    let row_sq: f64 = (0..p.w.n()).map(|i| p.w.row_sum(i).powi(2)).sum();
    if row_sq == 0.0 {
        return Err(Error::EmptyWeights);
    }
    let lx = p.w.mul_vec(&p.zx);
    let ly = p.w.mul_vec(&p.zy);
    let norm = (dot(&p.zx, &p.zx) * dot(&p.zy, &p.zy)).sqrt();
    Ok(p.n as f64 / row_sq * dot(&lx, &ly) / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pearson {
    pub r: f64,
    /// Two-sided p-value from the t distribution with `n - 2` degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

/// Ordinary Pearson correlation over the jointly present nodes.
pub fn pearson(x: &NodeData, y: &NodeData) -> Result<Pearson> {
    let mask = x.joint_mask(y)?;
    check_constant(x, &mask)?;
    check_constant(y, &mask)?;
    let zx = centered(x.values(), &mask)?;
    let zy = centered(y.values(), &mask)?;
    let n = mask.iter().filter(|&&m| m).count();
    let r = (dot(&zx, &zy) / (dot(&zx, &zx) * dot(&zy, &zy)).sqrt()).clamp(-1.0, 1.0);
    let p_value = if n <= 2 {
        1.0
    } else if r.abs() == 1.0 {
        0.0
    } else {
        let df = (n - 2) as f64;
        let t = r * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    Ok(Pearson { r, p_value, n })
}
