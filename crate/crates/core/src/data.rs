use crate::error::{Error, Result};

/// Real values attached to nodes, with a presence mask.
///
/// Absent nodes are excluded from every mean, norm and sum.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeData {
    name: String,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl NodeData {
    /// All finite values are present; NaN or infinite entries are masked.
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        let mask = values.iter().map(|v| v.is_finite()).collect();
        Self::assemble(name.into(), values, mask)
    }

    pub fn with_mask(name: impl Into<String>, values: Vec<f64>, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                got: mask.len(),
            });
        }
        let mask = mask.into_iter().zip(&values).map(|(m, v)| m && v.is_finite()).collect();
        Ok(Self::assemble(name.into(), values, mask))
    }

    fn assemble(name: String, mut values: Vec<f64>, mask: Vec<bool>) -> Self {
        for (v, &m) in values.iter_mut().zip(&mask) {
            if !m {
                *v = f64::NAN;
            }
        }
        NodeData { name, values, mask }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw values; absent entries hold NaN.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.mask[i].then(|| self.values[i])
    }

    pub fn is_complete(&self) -> bool {
        self.mask.iter().all(|&m| m)
    }

    pub fn n_present(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn present_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.mask[i]).collect()
    }

    /// Replaces values while keeping the mask.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::with_mask(self.name.clone(), values, self.mask.clone())
    }

    /// Base-10 logarithm; non-positive values become absent. Returns the
    /// newly masked node indices alongside.
    pub fn log10(&self) -> (Self, Vec<usize>) {
        let mut dropped = Vec::new();
        let mut mask = self.mask.clone();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if mask[i] && v <= 0.0 {
                    mask[i] = false;
                    dropped.push(i);
                }
                v.log10()
            })
            .collect();
        (Self::assemble(self.name.clone(), values, mask), dropped)
    }

    /// Joint mask of two aligned vectors.
    pub fn joint_mask(&self, other: &NodeData) -> Result<Vec<bool>> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self.mask.iter().zip(&other.mask).map(|(&a, &b)| a && b).collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.len(),
            });
        }
        Ok(())
    }
}
