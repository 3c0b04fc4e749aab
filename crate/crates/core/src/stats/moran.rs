use serde::{Deserialize, Serialize};

use super::{centered, dot, prepare};
use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::weights::WeightMatrix;

/// `z_i = x_i - mean(x)` over present nodes; absent nodes carry 0.
pub fn center(x: &NodeData) -> Result<Vec<f64>> {
    centered(x.values(), x.mask())
}

/// Lagged vector `z̃ = W z`.
pub fn lag(w: &WeightMatrix, z: &[f64]) -> Result<Vec<f64>> {
    if z.len() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: z.len(),
        });
    }
    Ok(w.mul_vec(z))
}

/// Global Moran index `I = (N/|W|) (z·z̃)/|z|²` over the present nodes.
pub fn global_moran(w: &WeightMatrix, x: &NodeData) -> Result<f64> {
    let p = prepare(w, x)?;
    let zl = p.w.mul_vec(&p.z);
    Ok(p.n as f64 / p.w.total_weight() * dot(&p.z, &zl) / p.zz)
}

/// Node Moran indices `I_i = z_i z̃_i / |z|²`; `None` for absent nodes.
pub fn local_moran(w: &WeightMatrix, x: &NodeData) -> Result<Vec<Option<f64>>> {
    let p = prepare(w, x)?;
    let zl = p.w.mul_vec(&p.z);
    Ok((0..x.len())
        .map(|i| x.mask()[i].then(|| p.z[i] * zl[i] / p.zz))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    HH,
    HL,
    LH,
    LL,
}

impl Quadrant {
    /// Zero on either axis counts as low.
    pub fn classify(z: f64, lag: f64) -> Self {
        match (z > 0.0, lag > 0.0) {
            (true, true) => Quadrant::HH,
            (true, false) => Quadrant::HL,
            (false, true) => Quadrant::LH,
            (false, false) => Quadrant::LL,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Quadrant::HH => "HH",
            Quadrant::HL => "HL",
            Quadrant::LH => "LH",
            Quadrant::LL => "LL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub node: usize,
    pub z: f64,
    pub lag: f64,
    pub quadrant: Quadrant,
}

/// Moran scatter plot: centred values against their lag, one point per
/// present node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoranScatter {
    pub points: Vec<ScatterPoint>,
    /// Least-squares slope through the origin of lag on z.
    pub slope: f64,
}

impl MoranScatter {
    /// Residual of each point from the origin regression line.
    pub fn residuals(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lag - self.slope * p.z).collect()
    }

    /// Points whose residual exceeds `k` standard deviations of all residuals.
    pub fn outliers(&self, k: f64) -> Vec<usize> {
        let r = self.residuals();
        if r.len() < 2 {
            return Vec::new();
        }
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let sd = (r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r.len() - 1) as f64).sqrt();
        if sd == 0.0 {
            return Vec::new();
        }
        r.iter()
            .enumerate()
            .filter(|(_, &v)| (v - mean).abs() > k * sd)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn moran_scatter(w: &WeightMatrix, x: &NodeData) -> Result<MoranScatter> {
    let p = prepare(w, x)?;
    let zl = p.w.mul_vec(&p.z);
    let points = (0..x.len())
        .filter(|&i| x.mask()[i])
        .map(|i| ScatterPoint {
            node: i,
            z: p.z[i],
            lag: zl[i],
            quadrant: Quadrant::classify(p.z[i], zl[i]),
        })
        .collect();
    Ok(MoranScatter {
        points,
        slope: dot(&p.z, &zl) / p.zz,
    })
}
