//! JSON interchange format for density matrices:
//! `{"labels": ["A","B"], "dim": 4, "re": [...], "im": [...]}` with row-major arrays.

use serde::{Deserialize, Serialize};

use super::density::{DensityMatrix, SystemLabel};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub labels: Vec<String>,
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl DensityFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let entries = rho.matrix().entries();
        Self {
            labels: rho.labels().names().to_vec(),
            dim: rho.dim(),
            re: entries.iter().map(|z| z.re).collect(),
            im: entries.iter().map(|z| z.im).collect(),
        }
    }

    /// Validates shape and density invariants.
    pub fn into_density(self) -> Result<DensityMatrix> {
        let labels = SystemLabel::new(self.labels)?;
        if labels.dim() != self.dim {
            return Err(Error::DimensionError {
                expected: labels.dim(),
                got: self.dim,
            });
        }
        let matrix = ComplexMatrix::from_parts(self.dim, &self.re, &self.im)?;
        DensityMatrix::new(matrix, labels)
    }
}

pub fn from_json_str(text: &str) -> Result<DensityMatrix> {
    let file: DensityFile = serde_json::from_str(text)?;
    file.into_density()
}

pub fn to_json_string(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&DensityFile::from_density(rho)).expect("density file serializes")
}
