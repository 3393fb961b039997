//! Operator specification files.
//!
//! ```json
//! { "mode": "exact", "matrix": [["0+1i", 2], [0, "0-1i"]], "eigen_hints": ["0+1i", "0-1i"] }
//! { "mode": "float", "jordan_blocks": [{"z": [1, 0], "size": 2}, {"z": [-1, 0], "size": 1}] }
//! { "mode": "exact", "shift": {"polynomial": [1, 1], "prefix": 32} }
//! ```
//!
//! Exactly one of `matrix`, `jordan_blocks` and `shift` must be present.
//! Jordan blocks are assembled as an orthogonal direct sum; polynomial
//! coefficients are listed from the constant term up.

use std::path::Path;

use misolab_core::shift::{shift_from_polynomial, WeightedShift};
use misolab_core::spectral::{jordan_direct_sum, JordanSpec};
use misolab_core::{Matrix, Mode, Polynomial, Scalar};
use serde::{Deserialize, Serialize};

use crate::entry::Entry;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTag {
    Exact,
    Float,
}

impl ModeTag {
    pub fn of<S: Scalar>() -> Self {
        match S::MODE {
            Mode::Exact => ModeTag::Exact,
            Mode::Float => ModeTag::Float,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JordanEntry {
    pub z: Entry,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftEntry {
    pub polynomial: Vec<Entry>,
    pub prefix: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpecFile {
    pub mode: ModeTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jordan_blocks: Option<Vec<JordanEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_hints: Option<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Operator<S> {
    Matrix { matrix: Matrix<S>, hints: Option<Vec<S>> },
    Shift { shift: WeightedShift<S>, polynomial: Polynomial<S> },
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl OperatorSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: OperatorSpecFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Structural checks that need no arithmetic.
    pub fn validate(&self) -> Result<(), CliError> {
        let sources = [self.matrix.is_some(), self.jordan_blocks.is_some(), self.shift.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(parse_err("exactly one of matrix, jordan_blocks and shift is required"));
        }
        if let Some(rows) = &self.matrix {
            if rows.is_empty() {
                return Err(parse_err("matrix has no rows"));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != rows.len() {
                    return Err(parse_err(format!("row {i} has {} entries, expected {}", row.len(), rows.len())));
                }
            }
        }
        if let Some(blocks) = &self.jordan_blocks {
            if blocks.is_empty() {
                return Err(parse_err("jordan_blocks is empty"));
            }
            if blocks.iter().any(|b| b.size == 0) {
                return Err(parse_err("Jordan block sizes must be at least 1"));
            }
        }
        if let Some(shift) = &self.shift {
            if shift.polynomial.is_empty() {
                return Err(parse_err("shift polynomial has no coefficients"));
            }
            if self.eigen_hints.is_some() {
                return Err(parse_err("eigen_hints apply to matrices only"));
            }
        }
        Ok(())
    }

    pub fn resolve<S: Scalar>(&self) -> Result<Operator<S>, CliError> {
        if ModeTag::of::<S>() != self.mode {
            return Err(parse_err("spec mode does not match the requested arithmetic"));
        }
        self.validate()?;
        let hints = match &self.eigen_hints {
            Some(h) => Some(h.iter().map(Entry::to_scalar).collect::<Result<Vec<S>, _>>()?),
            None => None,
        };
        if let Some(rows) = &self.matrix {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(Entry::to_scalar).collect::<Result<Vec<S>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let matrix = Matrix::from_rows(rows).map_err(|e| parse_err(e.to_string()))?;
            return Ok(Operator::Matrix { matrix, hints });
        }
        if let Some(blocks) = &self.jordan_blocks {
            let specs = blocks
                .iter()
                .map(|b| Ok(JordanSpec::new(b.z.to_scalar::<S>()?, b.size)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let matrix = jordan_direct_sum(&specs).map_err(|e| parse_err(e.to_string()))?;
            let hints = hints.or_else(|| {
                let mut zs: Vec<S> = Vec::new();
                for s in &specs {
                    if !zs.contains(&s.z) {
                        zs.push(s.z.clone());
                    }
                }
                Some(zs)
            });
            return Ok(Operator::Matrix { matrix, hints });
        }
        let shift = self.shift.as_ref().expect("validated");
        let coeffs = shift.polynomial.iter().map(Entry::to_scalar).collect::<Result<Vec<S>, _>>()?;
        let polynomial = Polynomial::new(coeffs);
        if polynomial.is_zero() {
            return Err(parse_err("shift polynomial is zero"));
        }
        let w = shift_from_polynomial(&polynomial, shift.prefix)?;
        Ok(Operator::Shift { shift: w, polynomial })
    }

    pub fn from_matrix<S: Scalar>(matrix: &Matrix<S>, hints: Option<&[S]>) -> Self {
        OperatorSpecFile {
            mode: ModeTag::of::<S>(),
            matrix: Some(matrix.rows().iter().map(|r| r.iter().map(Entry::from_scalar).collect()).collect()),
            jordan_blocks: None,
            shift: None,
            eigen_hints: hints.map(|h| h.iter().map(Entry::from_scalar).collect()),
        }
    }

    pub fn from_jordan<S: Scalar>(blocks: &[JordanSpec<S>]) -> Self {
        OperatorSpecFile {
            mode: ModeTag::of::<S>(),
            matrix: None,
            jordan_blocks: Some(
                blocks.iter().map(|b| JordanEntry { z: Entry::from_scalar(&b.z), size: b.size }).collect(),
            ),
            shift: None,
            eigen_hints: None,
        }
    }

    pub fn from_polynomial<S: Scalar>(p: &Polynomial<S>, prefix: usize) -> Self {
        OperatorSpecFile {
            mode: ModeTag::of::<S>(),
            matrix: None,
            jordan_blocks: None,
            shift: Some(ShiftEntry { polynomial: p.coeffs().iter().map(Entry::from_scalar).collect(), prefix }),
            eigen_hints: None,
        }
    }
}
