use serde::{Deserialize, Serialize};

use crate::error::{ChaosError, Result};

use super::{MultiIndex, SymmetricTensor};

/// On-disk tensor: `{"dim", "order", "entries": [{"index": [..], "value"}]}`
/// with 1-based nondecreasing indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub dim: usize,
    pub order: usize,
    pub entries: Vec<EntryFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryFile {
    pub index: Vec<usize>,
    pub value: f64,
}

impl From<&SymmetricTensor> for TensorFile {
    fn from(t: &SymmetricTensor) -> Self {
        Self {
            dim: t.dim(),
            order: t.order(),
            entries: t
                .entries()
                .map(|(alpha, value)| EntryFile {
                    index: alpha.as_slice().iter().map(|k| k + 1).collect(),
                    value,
                })
                .collect(),
        }
    }
}

impl TryFrom<TensorFile> for SymmetricTensor {
    type Error = ChaosError;

    fn try_from(file: TensorFile) -> Result<Self> {
        let dim = file.dim;
        let entries = file
            .entries
            .into_iter()
            .map(|e| {
                if e.index.iter().any(|&k| k == 0 || k > dim) {
                    return Err(ChaosError::InvalidIndex {
                        index: e.index,
                        reason: format!("1-based index out of range 1..={dim}"),
                    });
                }
                let zero_based = e.index.iter().map(|k| k - 1).collect();
                Ok((MultiIndex::from_sorted(zero_based)?, e.value))
            })
            .collect::<Result<Vec<_>>>()?;
        SymmetricTensor::from_entries(dim, file.order, entries)
    }
}

impl SymmetricTensor {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&TensorFile::from(self)).expect("tensor serialization cannot fail")
    }
}
