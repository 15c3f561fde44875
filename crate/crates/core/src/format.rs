//! JSON interchange formats.
//!
//! Ring descriptor: `{"kind": "modular", "m": 4}` or `{"kind": "integers"}`.
//!
//! Factor-system file:
//!
//! ```json
//! {"ring": {"kind": "modular", "m": 8}, "n": 2,
//!  "factors": {"type": "binary", "s": 2, "classes": [1, 2]}}
//! ```
//!
//! `factors` is one of
//! - `{"type": "explicit", "table": [[[..]]], "s": 2}` where `table[i][j][k]`
//!   holds `s_{i+1, j+1, k+1}` (the file is 0-based, the library 1-based) and
//!   `s` is optional;
//! - `{"type": "binary", "s": 2, "classes": [1, 1, 2]}` with 1-based class labels;
//! - `{"type": "coboundary", "s": 2, "g": [[0, 1], [0, 0]]}`.
//!
//! Matrix literals are row-major arrays of arrays of integers.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::binary_value;
use crate::factor::{ExponentMatrix, FactorError, FactorSystem};
use crate::ring::{BaseRing, RingElement, RingError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingDescriptor {
    Modular { m: i64 },
    Integers,
}

impl RingDescriptor {
    pub fn to_ring(self) -> Result<BaseRing, RingError> {
        match self {
            RingDescriptor::Modular { m } => BaseRing::modular(m),
            RingDescriptor::Integers => Ok(BaseRing::Integers),
        }
    }

    pub fn from_ring(ring: BaseRing) -> Self {
        match ring {
            BaseRing::Modular(m) => RingDescriptor::Modular { m },
            BaseRing::Integers => RingDescriptor::Integers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Factors {
    Explicit {
        table: Vec<Vec<Vec<i64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<i64>,
    },
    Binary {
        s: i64,
        classes: Vec<usize>,
    },
    Coboundary {
        s: i64,
        g: Vec<Vec<u32>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub ring: RingDescriptor,
    pub n: usize,
    pub factors: Factors,
}

/// A certified system together with its distinguished element `s`, when the
/// file names one or the table has exactly one factor value besides 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedSystem {
    pub system: FactorSystem,
    pub s: Option<RingElement>,
}

fn element(ring: BaseRing, v: i64) -> Result<RingElement, FormatError> {
    if !ring.contains(v) {
        return Err(FormatError::Invalid(format!(
            "s = {v} is not a canonical element of {ring}"
        )));
    }
    Ok(ring.element(v))
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system files always serialize")
    }

    /// Explicit-table file for an existing system.
    pub fn explicit(sys: &FactorSystem, s: Option<&RingElement>) -> Self {
        SystemFile {
            ring: RingDescriptor::from_ring(sys.ring()),
            n: sys.n(),
            factors: Factors::Explicit {
                table: sys.to_nested(),
                s: s.map(RingElement::value),
            },
        }
    }

    /// Build and certify the system. Explicit tables go through validation;
    /// a violated identity surfaces as `FormatError::Factor(Violation)`.
    pub fn build(&self) -> Result<LoadedSystem, FormatError> {
        let ring = self.ring.to_ring()?;
        let n = self.n;
        let dims = |what: &str, got: usize| {
            FormatError::Factor(FactorError::DimensionMismatch(format!(
                "n = {n} but {what} has size {got}"
            )))
        };
        let (system, s) = match &self.factors {
            Factors::Explicit { table, s } => {
                if table.len() != n {
                    return Err(dims("table", table.len()));
                }
                let sys = FactorSystem::validate(ring, table)?;
                let s = match s {
                    Some(v) => Some(element(ring, *v)?),
                    None => binary_value(&sys).ok().flatten(),
                };
                (sys, s)
            }
            Factors::Binary { s, classes } => {
                if classes.len() != n {
                    return Err(dims("classes", classes.len()));
                }
                let s = element(ring, *s)?;
                (FactorSystem::binary(classes, &s)?, Some(s))
            }
            Factors::Coboundary { s, g } => {
                if g.len() != n {
                    return Err(dims("g", g.len()));
                }
                let s = element(ring, *s)?;
                let g = ExponentMatrix::new(g.clone())?;
                (FactorSystem::coboundary(&g, &s)?, Some(s))
            }
        };
        Ok(LoadedSystem { system, s })
    }
}

impl SystemFile {
    /// Like [`SystemFile::build`], but an explicit table is only checked for
    /// shape and canonical entries, so a broken table can still be probed.
    pub fn build_unchecked(&self) -> Result<FactorSystem, FormatError> {
        match &self.factors {
            Factors::Explicit { table, .. } => {
                let ring = self.ring.to_ring()?;
                let n = self.n;
                let well_shaped = table.len() == n
                    && table
                        .iter()
                        .all(|m| m.len() == n && m.iter().all(|r| r.len() == n));
                if !well_shaped {
                    return Err(FormatError::Factor(FactorError::DimensionMismatch(
                        format!("table is not {n} x {n} x {n}"),
                    )));
                }
                let flat = table.iter().flatten().flatten().copied().collect();
                Ok(FactorSystem::unchecked(ring, n, flat)?)
            }
            _ => Ok(self.build()?.system),
        }
    }
}

pub fn read_system_file(path: &Path) -> Result<SystemFile, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    SystemFile::parse(&text)
}

pub fn load_system(path: &Path) -> Result<LoadedSystem, FormatError> {
    read_system_file(path)?.build()
}

pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    Ok(serde_json::from_str(text)?)
}
