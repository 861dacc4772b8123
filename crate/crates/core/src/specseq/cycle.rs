use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Pos, SpecSeqError};
use crate::exact::{Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generators {
    /// Basis of the source homology, one label per matrix row.
    pub rows: Vec<String>,
    /// Basis of the target homology, one label per matrix column.
    pub columns: Vec<String>,
}

/// Homology-level model of one degree-2 Gysin map.
///
/// A chain `c` (row vector over `rows`) maps to `c * matrix`. The model keeps
/// only generators outside the image of the incoming differential and outside
/// the parts that are visibly injective, so its left kernel is the cohomology
/// at the source grid position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleModel {
    pub map: Pos,
    pub generators: Generators,
    pub matrix: Matrix<Rational>,
    /// Optional chain claimed to span the kernel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<BTreeMap<String, Rational>>,
}

impl CycleModel {
    pub fn validate(&self) -> Result<(), SpecSeqError> {
        let g = &self.generators;
        if self.matrix.rows() != g.rows.len() || self.matrix.cols() != g.columns.len() {
            return Err(SpecSeqError::BadModel(format!(
                "matrix is {}x{} but there are {} row and {} column labels",
                self.matrix.rows(),
                self.matrix.cols(),
                g.rows.len(),
                g.columns.len()
            )));
        }
        for labels in [&g.rows, &g.columns] {
            let mut seen = BTreeSet::new();
            if let Some(l) = labels.iter().find(|l| !seen.insert(*l)) {
                return Err(SpecSeqError::BadModel(format!("duplicate label {l}")));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Basis of `{c : c * matrix = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        self.matrix.transpose().rref().kernel
    }

    pub fn left_kernel_dim(&self) -> Result<usize, SpecSeqError> {
        self.validate()?;
        Ok(self.matrix.rows() - self.rank())
    }

    /// Dense row vector of a labelled chain.
    pub fn chain_vector(&self, chain: &BTreeMap<String, Rational>) -> Result<Vec<Rational>, SpecSeqError> {
        let mut v = vec![Rational::zero(); self.generators.rows.len()];
        for (label, c) in chain {
            let i = self
                .generators
                .rows
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| SpecSeqError::UnknownLabel(label.clone()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

/// True iff the chain is annihilated by the model map.
pub fn verify_cycle_chain(cm: &CycleModel, chain: &BTreeMap<String, Rational>) -> Result<bool, SpecSeqError> {
    cm.validate()?;
    let v = cm.chain_vector(chain)?;
    Ok(cm.matrix.transpose().mul_vec(&v).iter().all(|x| x.is_zero()))
}
