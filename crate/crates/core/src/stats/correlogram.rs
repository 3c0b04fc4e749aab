use serde::{Deserialize, Serialize};

use super::global_moran;
use crate::data::NodeData;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::inference::{configuration_null, permutation_null, NullKind, NullSpec};
use crate::weights::{DistanceClasses, WeightKind};

/// Moran index at one hop distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramPoint {
    pub d: usize,
    /// `None` when no present pair lies at distance `d`.
    pub value: Option<f64>,
    pub total_weight: f64,
    pub p_value: Option<f64>,
}

/// Moran correlogram `I(d)` for `d = 1..=d_max` with binary distance-class
/// weights.
pub fn correlogram(g: &Graph, x: &NodeData, d_max: usize, null: Option<&NullSpec>) -> Result<Vec<CorrelogramPoint>> {
    correlogram_with(g, x, d_max, false, null)
}

/// As [`correlogram`], optionally row-normalizing each distance class.
pub fn correlogram_with(
    g: &Graph,
    x: &NodeData,
    d_max: usize,
    row_normalized: bool,
    null: Option<&NullSpec>,
) -> Result<Vec<CorrelogramPoint>> {
    if d_max == 0 {
        return Err(Error::InvalidParameter("d_max must be >= 1".into()));
    }
    x.check_len(g.n_nodes())?;
    let classes = DistanceClasses::new(g);
    (1..=d_max)
        .map(|d| {
            let mut w = classes.matrix(d)?;
            if row_normalized {
                w = w.normalize_rows();
            }
            let total_weight = w.restrict(x.mask()).total_weight();
            if total_weight == 0.0 {
                return Ok(CorrelogramPoint {
                    d,
                    value: None,
                    total_weight,
                    p_value: None,
                });
            }
            let (value, p_value) = match null {
                None => (global_moran(&w, x)?, None),
                Some(spec) => {
                    let r = match spec.kind {
                        NullKind::DataPermutation => permutation_null(global_moran, &w, x, spec)?,
                        NullKind::Configuration => {
                            let kind = WeightKind::DistanceClass { d, row_normalized };
                            configuration_null(global_moran, g, kind, x, spec)?
                        }
                        NullKind::ConditionalPermutation => {
                            return Err(Error::InvalidParameter(
                                "conditional permutation applies to node statistics only".into(),
                            ))
                        }
                    };
                    (r.observed, Some(r.p_value))
                }
            };
            Ok(CorrelogramPoint {
                d,
                value: Some(value),
                total_weight,
                p_value,
            })
        })
        .collect()
}
