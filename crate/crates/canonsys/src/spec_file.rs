//! Hamiltonian spec files.
//!
//! ```json
//! {"interval": [0, 1], "kind": "family", "family": "power-log",
//!  "params": {"alpha": 2, "alpha1": 1, "alpha2": 0}}
//! {"interval": [0, "inf"], "kind": "table", "breakpoints": [0, 1, "inf"],
//!  "cells": [[1, 2, 0.5], [[1, 0], [0, 1]]]}
//! ```
//!
//! Table cells are either `[h1, h2, h3]` or a symmetric 2×2 matrix `[[h1, h3], [h3, h2]]`.

use crate::error::{CliError, Result};
use canonsys_core::hamiltonian::{Endpoint, Family, Interval, Repr, Table};
use canonsys_core::{HamiltonianSpec, Mat2};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

/// A real number or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Word(String),
}

impl Bound {
    fn value(&self) -> Result<f64> {
        match self {
            Bound::Number(x) => Ok(*x),
            Bound::Word(w) if matches!(w.as_str(), "inf" | "+inf" | "infinity" | "Infinity") => Ok(f64::INFINITY),
            Bound::Word(w) => Err(CliError::Parse(format!("expected a number or \"inf\", got \"{w}\""))),
        }
    }

    fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            Bound::Word("inf".into())
        } else {
            Bound::Number(x)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellValue {
    Triple([f64; 3]),
    Matrix([[f64; 2]; 2]),
}

impl CellValue {
    fn matrix(&self, k: usize) -> Result<Mat2> {
        match *self {
            CellValue::Triple([h1, h2, h3]) => Ok(Mat2::sym(h1, h2, h3)),
            CellValue::Matrix([[a, b], [c, d]]) => {
                if b != c {
                    return Err(CliError::Parse(format!("cell {k} is not symmetric: {b} vs {c}")));
                }
                Ok(Mat2::sym(a, d, b))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpecKind {
    Family {
        family: String,
        #[serde(default)]
        params: Value,
    },
    Table {
        breakpoints: Vec<Bound>,
        cells: Vec<CellValue>,
    },
}

/// The on-disk form of a Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub interval: [Bound; 2],
    #[serde(flatten)]
    pub kind: SpecKind,
}

fn param(params: &Value, names: &[&str], default: Option<f64>) -> Result<f64> {
    for name in names {
        if let Some(v) = params.get(*name) {
            return v
                .as_f64()
                .ok_or_else(|| CliError::Parse(format!("parameter \"{name}\" must be a number, got {v}")));
        }
    }
    default.ok_or_else(|| CliError::Parse(format!("missing parameter \"{}\"", names[0])))
}

fn family_of(name: &str, params: &Value) -> Result<Family> {
    let p = |names: &[&str], d| param(params, names, d);
    Ok(match name {
        "constant" => {
            if let Some(arr) = params.as_array() {
                let v: Vec<f64> = arr.iter().filter_map(Value::as_f64).collect();
                if v.len() != 3 || arr.len() != 3 {
                    return Err(CliError::Parse("constant needs three reals [h1, h2, h3]".into()));
                }
                Family::Constant { h1: v[0], h2: v[1], h3: v[2] }
            } else {
                Family::Constant { h1: p(&["h1"], None)?, h2: p(&["h2"], None)?, h3: p(&["h3"], Some(0.0))? }
            }
        }
        "diag-exp" => Family::DiagExp,
        "power-log" => Family::PowerLog {
            alpha: p(&["alpha"], None)?,
            alpha1: p(&["alpha1"], Some(0.0))?,
            alpha2: p(&["alpha2"], Some(0.0))?,
        },
        "rank-one-power-log" => {
            Family::RankOnePowerLog { alpha1: p(&["alpha1"], None)?, alpha2: p(&["alpha2"], Some(0.0))? }
        }
        "string-rank-one" => Family::StringRankOne {
            alpha: p(&["alpha"], None)?,
            alpha1: p(&["alpha1"], Some(0.0))?,
            alpha2: p(&["alpha2"], Some(0.0))?,
        },
        other => return Err(CliError::Parse(format!("unknown family \"{other}\""))),
    })
}

impl SpecFile {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| CliError::Json { origin: origin.to_string(), source })
    }

    pub fn interval(&self) -> Result<Interval> {
        let (a, b) = (self.interval[0].value()?, self.interval[1].value()?);
        let end = if b == f64::INFINITY { Endpoint::Infinite } else { Endpoint::Finite(b) };
        Ok(Interval::new(a, end)?)
    }

    pub fn build(&self) -> Result<HamiltonianSpec> {
        let iv = self.interval()?;
        match &self.kind {
            SpecKind::Family { family, params } => Ok(HamiltonianSpec::from_family(iv, family_of(family, params)?)?),
            SpecKind::Table { breakpoints, cells } => {
                let bps = breakpoints.iter().map(Bound::value).collect::<Result<Vec<f64>>>()?;
                let mats = cells.iter().enumerate().map(|(k, c)| c.matrix(k)).collect::<Result<Vec<Mat2>>>()?;
                let table = Table::new(bps, mats)?;
                if table.interval() != iv {
                    return Err(CliError::Parse(format!(
                        "breakpoints span [{}, {}) but the interval is [{}, {})",
                        table.interval().a,
                        table.interval().b_value(),
                        iv.a,
                        iv.b_value()
                    )));
                }
                Ok(HamiltonianSpec::from_table(table))
            }
        }
    }

    /// The file form of a Hamiltonian (families keep their parameters; scaled or
    /// diagonalized families are written as samples).
    pub fn from_spec(h: &HamiltonianSpec) -> Result<Self> {
        let iv = h.interval();
        let interval = [Bound::Number(iv.a), Bound::from_f64(iv.b_value())];
        let kind = match h.repr() {
            Repr::Family { family, scale, diagonal } if *scale == 1.0 && !*diagonal => {
                let (name, params) = match *family {
                    Family::Constant { h1, h2, h3 } => ("constant", serde_json::json!({"h1": h1, "h2": h2, "h3": h3})),
                    Family::DiagExp => ("diag-exp", serde_json::json!({})),
                    Family::PowerLog { alpha, alpha1, alpha2 } => {
                        ("power-log", serde_json::json!({"alpha": alpha, "alpha1": alpha1, "alpha2": alpha2}))
                    }
                    Family::RankOnePowerLog { alpha1, alpha2 } => {
                        ("rank-one-power-log", serde_json::json!({"alpha1": alpha1, "alpha2": alpha2}))
                    }
                    Family::StringRankOne { alpha, alpha1, alpha2 } => {
                        ("string-rank-one", serde_json::json!({"alpha": alpha, "alpha1": alpha1, "alpha2": alpha2}))
                    }
                };
                SpecKind::Family { family: name.to_string(), params }
            }
            _ => {
                let t = match h.repr() {
                    Repr::Table(t) => t.clone(),
                    _ => h.to_table(Default::default())?,
                };
                SpecKind::Table {
                    breakpoints: t.breakpoints().iter().map(|&x| Bound::from_f64(x)).collect(),
                    cells: t.cells().iter().map(|m| CellValue::Triple([m.h1(), m.h2(), m.h3()])).collect(),
                }
            }
        };
        Ok(SpecFile { interval, kind })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files serialize")
    }
}

/// Reads and builds a Hamiltonian from a JSON file.
pub fn load(path: &Path) -> Result<HamiltonianSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    SpecFile::from_json(&text, &path.display().to_string())?.build()
}
