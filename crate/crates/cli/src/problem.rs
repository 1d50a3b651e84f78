//! Problem files: JSON documents describing either a matrix system
//! `(A, beta, v)` or a complete-intersection family, plus run defaults.

use std::path::Path;

use gkz::ci::CiSpec;
use gkz::rational::parse_rational;
use gkz::{GkzSystem, IntMatrix, Rational};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// An integer or rational written either as a JSON number or as a string
/// `"p"` / `"p/q"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn rational(&self, field: &str) -> Result<Rational, CliError> {
        match self {
            Scalar::Int(n) => Ok(gkz::rational::int(*n)),
            Scalar::Text(s) => {
                parse_rational(s).map_err(|e| CliError::Input(format!("field `{field}`: {e}")))
            }
        }
    }

    fn integer(&self, field: &str) -> Result<i64, CliError> {
        match self {
            Scalar::Int(n) => Ok(*n),
            Scalar::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("field `{field}`: `{s}` is not an integer"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub beta: Option<Vec<Scalar>>,
    #[serde(default)]
    pub v: Option<Vec<Scalar>>,
    /// Point sets; the first point of each set is distinguished.
    #[serde(default)]
    pub ci: Option<Vec<Vec<Vec<Scalar>>>>,
    #[serde(default)]
    pub radius: Option<u32>,
    #[serde(default)]
    pub grade: Option<i64>,
    #[serde(default)]
    pub order: Option<u8>,
    #[serde(default)]
    pub l: Option<Vec<Scalar>>,
    #[serde(default)]
    pub lp: Option<Vec<Scalar>>,
    #[serde(default)]
    pub index: Option<[usize; 2]>,
}

/// A loaded and validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub path: String,
    pub sha256: String,
    pub system: GkzSystem,
    pub ci: Option<CiSpec>,
    pub file: ProblemFile,
}

fn int_vec(xs: &[Scalar], field: &str) -> Result<Vec<i64>, CliError> {
    xs.iter().map(|x| x.integer(field)).collect()
}

fn rat_vec(xs: &[Scalar], field: &str) -> Result<Vec<Rational>, CliError> {
    xs.iter().map(|x| x.rational(field)).collect()
}

impl ProblemFile {
    pub fn l(&self) -> Result<Option<Vec<i64>>, CliError> {
        self.l.as_deref().map(|l| int_vec(l, "l")).transpose()
    }

    pub fn lp(&self) -> Result<Option<Vec<i64>>, CliError> {
        self.lp.as_deref().map(|l| int_vec(l, "lp")).transpose()
    }
}

impl Problem {
    pub fn parse(text: &str, path: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("{path}:{}:{}: {e}", e.line(), e.column())))?;
        let (system, ci) = match (&file.ci, &file.matrix) {
            (Some(_), Some(_)) => {
                return Err(CliError::Input(
                    "give either `matrix` or `ci`, not both".into(),
                ))
            }
            (Some(sets), None) => {
                if file.beta.is_some() || file.v.is_some() {
                    return Err(CliError::Input(
                        "`beta` and `v` are derived for `ci` problems".into(),
                    ));
                }
                let sets = sets
                    .iter()
                    .map(|s| s.iter().map(|p| int_vec(p, "ci")).collect())
                    .collect::<Result<Vec<Vec<Vec<i64>>>, _>>()?;
                let spec = CiSpec::new(sets)?;
                (spec.build_system()?, Some(spec))
            }
            (None, Some(rows)) => {
                let rows = rows
                    .iter()
                    .map(|r| int_vec(r, "matrix"))
                    .collect::<Result<Vec<_>, _>>()?;
                let a = IntMatrix::from_i64(&rows)?;
                let beta = rat_vec(
                    file.beta
                        .as_deref()
                        .ok_or_else(|| CliError::Input("missing field `beta`".into()))?,
                    "beta",
                )?;
                let v = rat_vec(
                    file.v
                        .as_deref()
                        .ok_or_else(|| CliError::Input("missing field `v`".into()))?,
                    "v",
                )?;
                if v.len() != a.ncols() {
                    return Err(CliError::Input(format!(
                        "`v` has {} entries, the matrix has {} columns",
                        v.len(),
                        a.ncols()
                    )));
                }
                (GkzSystem::new(a, beta, v)?, None)
            }
            (None, None) => {
                return Err(CliError::Input(
                    "problem needs either `matrix` or `ci`".into(),
                ))
            }
        };
        let name = file.name.clone().unwrap_or_else(|| {
            Path::new(path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "problem".into())
        });
        Ok(Problem {
            name,
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
            system,
            ci,
            file,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }
}
