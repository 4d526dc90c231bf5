use serde::{Deserialize, Serialize};

use crate::error::{ChaosError, Result};
use crate::symtensor::{SymmetricTensor, TensorFile};

use super::ChaosExpansion;

/// On-disk chaos expansion: `{"dim", "terms": [{"order", "tensor"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosFile {
    pub dim: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub order: usize,
    pub tensor: TensorFile,
}

impl From<&ChaosExpansion> for ChaosFile {
    fn from(f: &ChaosExpansion) -> Self {
        Self {
            dim: f.dim(),
            terms: f
                .terms()
                .map(|(order, t)| TermFile {
                    order,
                    tensor: t.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ChaosFile> for ChaosExpansion {
    type Error = ChaosError;

    fn try_from(file: ChaosFile) -> Result<Self> {
        let mut out = ChaosExpansion::zero(file.dim);
        let mut seen = std::collections::BTreeSet::new();
        for term in file.terms {
            let t = SymmetricTensor::try_from(term.tensor)?;
            if t.order() != term.order {
                return Err(ChaosError::InvalidConfig(format!(
                    "term declares order {} but its tensor has order {}",
                    term.order,
                    t.order()
                )));
            }
            if !seen.insert(term.order) {
                return Err(ChaosError::InvalidConfig(format!(
                    "duplicate term of order {}",
                    term.order
                )));
            }
            out.add_kernel(1.0, &t)?;
        }
        Ok(out)
    }
}

impl ChaosExpansion {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ChaosFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&ChaosFile::from(self)).expect("chaos serialization cannot fail")
    }
}
