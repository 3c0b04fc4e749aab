use super::restricted;
use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::weights::WeightMatrix;

fn check_nonnegative(x: &NodeData) -> Result<()> {
    let present = x.values().iter().zip(x.mask()).filter(|(_, &m)| m);
    let mut any_positive = false;
    for (&v, _) in present {
        if v < 0.0 {
            return Err(Error::NegativeData);
        }
        any_positive |= v > 0.0;
    }
    if any_positive {
        Ok(())
    } else {
        Err(Error::DegenerateGetisOrd)
    }
}

/// Global Getis–Ord `G = Σ_{i≠j} w_ij x_i x_j / Σ_{i≠j} x_i x_j` on raw,
/// nonnegative data.
pub fn getis_ord_global(w: &WeightMatrix, x: &NodeData) -> Result<f64> {
    x.check_len(w.n())?;
    check_nonnegative(x)?;
    let w = restricted(w, x.mask());
    let v = |i: usize| if x.mask()[i] { x.values()[i] } else { 0.0 };

    let mut num = 0.0;
    for i in 0..w.n() {
        for (j, wij) in w.row(i) {
            if i != j {
                num += wij * v(i) * v(j);
            }
        }
    }
    let (sum, sum_sq) = (0..x.len()).map(v).fold((0.0, 0.0), |(s, q), a| (s + a, q + a * a));
    let den = sum * sum - sum_sq;
    if den <= 0.0 {
        return Err(Error::DegenerateGetisOrd);
    }
    Ok(num / den)
}

/// Local Getis–Ord `G_i = Σ_{j≠i} w_ij x_j / Σ_{j≠i} x_j`. `None` marks
/// absent nodes and nodes whose denominator is zero.
pub fn getis_ord_local(w: &WeightMatrix, x: &NodeData) -> Result<Vec<Option<f64>>> {
    x.check_len(w.n())?;
    check_nonnegative(x)?;
    let w = restricted(w, x.mask());
    let v = |i: usize| if x.mask()[i] { x.values()[i] } else { 0.0 };
    let total: f64 = (0..x.len()).map(v).sum();

    Ok((0..x.len())
        .map(|i| {
            if !x.mask()[i] {
                return None;
            }
            let den = total - v(i);
            if den <= 0.0 {
                return None;
            }
            let num: f64 = w.row(i).filter(|&(j, _)| j != i).map(|(j, wij)| wij * v(j)).sum();
            Some(num / den)
        })
        .collect())
}
