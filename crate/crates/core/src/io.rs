//! Serialization schemas for the file formats the CLI consumes: operator
//! matrices, block operators, finite-space feature tables, and suite
//! configurations. All parsing from text happens in the CLI; this module
//! owns the shapes and their conversions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::opmatrix::BlockOperator;
use crate::rkhs::{DirectSumSpace, SpaceModel};

/// Matrix file: `{"rows": n, "cols": m, "re": [...], "im": [...]}`,
/// row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.rows * self.cols || self.im.len() != self.re.len() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} with {} re / {} im entries",
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        ComplexMatrix::new(
            self.rows,
            self.cols,
            self.re
                .iter()
                .zip(&self.im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
        )
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.entries().iter().map(|z| z.re).collect(),
            im: m.entries().iter().map(|z| z.im).collect(),
        }
    }
}

/// Feature table for a finite space: one label and one `[re, im]` row per
/// point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteSpaceFile {
    pub points: Vec<String>,
    pub features: Vec<Vec<[f64; 2]>>,
}

impl FiniteSpaceFile {
    pub fn to_space(&self) -> Result<SpaceModel> {
        let features = self
            .features
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        SpaceModel::finite(self.points.clone(), features)
    }
}

/// Block operator file: `{"spaces": [...], "blocks": [[matrix, ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockFile {
    pub spaces: Vec<String>,
    pub blocks: Vec<Vec<MatrixFile>>,
}

impl BlockFile {
    /// Resolves descriptors through `resolve` (which loads any `finite:`
    /// tables) and assembles the operator.
    pub fn to_block_operator(
        &self,
        resolve: impl Fn(&str) -> Result<SpaceModel>,
    ) -> Result<BlockOperator> {
        let components: Vec<SpaceModel> = self
            .spaces
            .iter()
            .map(|d| resolve(d))
            .collect::<Result<_>>()?;
        let blocks: Vec<Vec<ComplexMatrix>> = self
            .blocks
            .iter()
            .map(|row| row.iter().map(MatrixFile::to_matrix).collect())
            .collect::<Result<_>>()?;
        BlockOperator::assemble(blocks, DirectSumSpace::new(components)?)
    }
}

/// Suite configuration:
/// `{"checkers": [...], "n": int, "seed": int, "mode": "certified"|"tight"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfigFile {
    pub checkers: Vec<String>,
    pub n: usize,
    pub seed: u64,
    pub mode: String,
}

/// Parsed space descriptor; `finite:` carries the path for the caller to
/// load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceDescriptor {
    Hardy(usize),
    Bergman(usize),
    FinitePath(String),
}

/// Parses `"hardy:N"`, `"bergman:N"`, or `"finite:<path>"`.
pub fn parse_space_descriptor(s: &str) -> Result<SpaceDescriptor> {
    let bad = || Error::BadSpec(format!("unrecognized space descriptor `{s}`"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "hardy" => rest
            .parse::<usize>()
            .map(SpaceDescriptor::Hardy)
            .map_err(|_| bad()),
        "bergman" => rest
            .parse::<usize>()
            .map(SpaceDescriptor::Bergman)
            .map_err(|_| bad()),
        "finite" if !rest.is_empty() => Ok(SpaceDescriptor::FinitePath(rest.to_string())),
        _ => Err(bad()),
    }
}
