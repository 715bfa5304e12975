//! Growth-function specs: JSON files or the inline form `rho=2,betas=[1,-0.5],r0=20`.
//!
//! ```json
//! {"kind": "lindelof", "rho": 2, "betas": [1, -0.5], "r0": 20}
//! {"kind": "table", "r": [1, 10, 100], "g": [1, 50, 3000]}
//! ```

use crate::error::{CliError, Result};
use canonsys_core::growth::GrowthFunction;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GrowthFile {
    Lindelof {
        rho: f64,
        #[serde(default)]
        betas: Vec<f64>,
        #[serde(default)]
        r0: Option<f64>,
    },
    Table {
        r: Vec<f64>,
        g: Vec<f64>,
    },
}

impl GrowthFile {
    pub fn build(&self) -> Result<GrowthFunction> {
        Ok(match self {
            GrowthFile::Lindelof { rho, betas, r0 } => GrowthFunction::lindelof(*rho, betas.clone(), *r0)?,
            GrowthFile::Table { r, g } => GrowthFunction::table(r.clone(), g.clone())?,
        })
    }
}

/// Splits on commas outside square brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| CliError::Parse(format!("growth: {key} must be a number, got \"{}\"", v.trim())))
}

/// Parses `rho=ρ[,betas=[β₁,…]][,r0=r₀]`.
pub fn parse_inline(s: &str) -> Result<GrowthFile> {
    let (mut rho, mut betas, mut r0) = (None, Vec::new(), None);
    for part in split_top_level(s) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("growth: expected key=value, got \"{part}\"")))?;
        match key.trim() {
            "rho" => rho = Some(number("rho", value)?),
            "r0" => r0 = Some(number("r0", value)?),
            "betas" => {
                let v = value.trim();
                let inner = v
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| CliError::Parse(format!("growth: betas must be a [list], got \"{v}\"")))?;
                betas = inner
                    .split(',')
                    .filter(|x| !x.trim().is_empty())
                    .map(|x| number("beta", x))
                    .collect::<Result<_>>()?;
            }
            other => return Err(CliError::Parse(format!("growth: unknown key \"{other}\""))),
        }
    }
    let rho = rho.ok_or_else(|| CliError::Parse("growth: missing rho".into()))?;
    Ok(GrowthFile::Lindelof { rho, betas, r0 })
}

/// Resolves a `--growth` argument: an existing file is read as JSON, anything else
/// is parsed inline.
pub fn resolve(arg: &str) -> Result<GrowthFunction> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        let file: GrowthFile = serde_json::from_str(&text)
            .map_err(|source| CliError::Json { origin: path.display().to_string(), source })?;
        file.build()
    } else {
        parse_inline(arg)?.build()
    }
}
