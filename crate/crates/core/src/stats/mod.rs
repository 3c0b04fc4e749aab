//! Point estimates: Moran-type autocorrelation, Geary, Getis–Ord,
//! assortativity, bivariate network correlation and correlograms.

use std::borrow::Cow;

use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::weights::WeightMatrix;

mod assortativity;
mod bivariate;
mod correlogram;
mod geary;
mod getis;
mod moran;

pub use assortativity::{assortativity_continuous, assortativity_weights};
pub use bivariate::{coscia_rho, lee_l, pearson, Pearson, VARIANCE_RTOL};
pub use correlogram::{correlogram, correlogram_with, CorrelogramPoint};
pub use geary::geary_c;
pub use getis::{getis_ord_global, getis_ord_local};
pub use moran::{center, global_moran, lag, local_moran, moran_scatter, MoranScatter, Quadrant, ScatterPoint};

/// Weight matrix restricted to the present nodes, borrowed when nothing is
/// masked.
pub(crate) fn restricted<'a>(w: &'a WeightMatrix, mask: &[bool]) -> Cow<'a, WeightMatrix> {
    if mask.iter().all(|&m| m) {
        Cow::Borrowed(w)
    } else {
        Cow::Owned(w.restrict(mask))
    }
}

/// Mean-centred values over `mask`; absent nodes carry 0.
pub(crate) fn centered(values: &[f64], mask: &[bool]) -> Result<Vec<f64>> {
    let present: Vec<f64> = values.iter().zip(mask).filter(|(_, &m)| m).map(|(&v, _)| v).collect();
    if present.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: present.len(),
        });
    }
    let mean = present.iter().sum::<f64>() / present.len() as f64;
    Ok(values
        .iter()
        .zip(mask)
        .map(|(&v, &m)| if m { v - mean } else { 0.0 })
        .collect())
}

fn is_constant(values: &[f64], mask: &[bool]) -> bool {
    let mut present = values.iter().zip(mask).filter(|(_, &m)| m).map(|(&v, _)| v);
    match present.next() {
        Some(first) => present.all(|v| v == first),
        None => true,
    }
}

/// Centred data plus the restricted weights shared by the univariate statistics.
pub(crate) struct Prepared<'a> {
    pub w: Cow<'a, WeightMatrix>,
    pub z: Vec<f64>,
    pub zz: f64,
    pub n: usize,
}

pub(crate) fn prepare<'a>(w: &'a WeightMatrix, x: &NodeData) -> Result<Prepared<'a>> {
    x.check_len(w.n())?;
    let z = centered(x.values(), x.mask())?;
    if is_constant(x.values(), x.mask()) {
        return Err(Error::ConstantData);
    }
    let w = restricted(w, x.mask());
    if w.total_weight() == 0.0 {
        return Err(Error::EmptyWeights);
    }
    let zz = dot(&z, &z);
    Ok(Prepared {
        w,
        z,
        zz,
        n: x.n_present(),
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_constant(x: &NodeData, mask: &[bool]) -> Result<()> {
    if is_constant(x.values(), mask) {
        Err(Error::ConstantData)
    } else {
        Ok(())
    }
}
