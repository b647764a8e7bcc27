//! Block operator matrices over direct sums: assembly, the off-diagonal and
//! corner-embedding constructions, and entrywise-nonnegative compressions.

use num_complex::Complex64;

use crate::berezin::{berezin_number, SearchConfig};
use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::rkhs::DirectSumSpace;

/// Which scalar stands in for each block in a compression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompressMode {
    /// Operator norm everywhere.
    HouNorm,
    /// Berezin-number search estimate on the diagonal, operator norm off it.
    BerDiag,
}

/// A block matrix over a direct sum, stored both as blocks and flattened.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    blocks: Vec<Vec<ComplexMatrix>>,
    spaces: DirectSumSpace,
    flat: ComplexMatrix,
}

impl BlockOperator {
    /// Assembles an n x n grid of blocks; block (i, j) must map component j
    /// into component i.
    pub fn assemble(blocks: Vec<Vec<ComplexMatrix>>, spaces: DirectSumSpace) -> Result<Self> {
        let n = spaces.components().len();
        if blocks.len() != n || blocks.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "expected an {n}x{n} block grid"
            )));
        }
        let dims: Vec<usize> = spaces.components().iter().map(|c| c.dim()).collect();
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if b.rows() != dims[i] || b.cols() != dims[j] {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        dims[i],
                        dims[j]
                    )));
                }
            }
        }
        let offsets = spaces.block_offsets();
        let total = spaces.total_dim();
        let mut data = vec![Complex64::new(0.0, 0.0); total * total];
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                for bi in 0..b.rows() {
                    for bj in 0..b.cols() {
                        data[(offsets[i] + bi) * total + offsets[j] + bj] = b.get(bi, bj);
                    }
                }
            }
        }
        let flat = ComplexMatrix::new(total, total, data)?;
        Ok(Self {
            blocks,
            spaces,
            flat,
        })
    }

    /// The off-diagonal construction `((0, x), (y, 0))` over two components.
    pub fn off_diag(x: ComplexMatrix, y: ComplexMatrix, spaces: DirectSumSpace) -> Result<Self> {
        if spaces.components().len() != 2 {
            return Err(Error::ShapeMismatch(
                "off-diagonal form needs two components".into(),
            ));
        }
        let d0 = spaces.components()[0].dim();
        let d1 = spaces.components()[1].dim();
        let blocks = vec![
            vec![ComplexMatrix::zeros(d0, d0), x],
            vec![y, ComplexMatrix::zeros(d1, d1)],
        ];
        Self::assemble(blocks, spaces)
    }

    /// Embeds `x` as the leading corner block, padding with zeros.
    pub fn embed_corner(x: ComplexMatrix, spaces: DirectSumSpace) -> Result<Self> {
        let dims: Vec<usize> = spaces.components().iter().map(|c| c.dim()).collect();
        if x.rows() != dims[0] || x.cols() != dims[0] {
            return Err(Error::ShapeMismatch(format!(
                "corner block is {}x{}, expected {}x{}",
                x.rows(),
                x.cols(),
                dims[0],
                dims[0]
            )));
        }
        let n = dims.len();
        let mut blocks: Vec<Vec<ComplexMatrix>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ComplexMatrix::zeros(dims[i], dims[j]))
                    .collect()
            })
            .collect();
        blocks[0][0] = x;
        Self::assemble(blocks, spaces)
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<ComplexMatrix>] {
        &self.blocks
    }

    pub fn spaces(&self) -> &DirectSumSpace {
        &self.spaces
    }

    pub fn flat(&self) -> &ComplexMatrix {
        &self.flat
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Cuts the flat matrix back into blocks at the component offsets.
    pub fn split_flat(&self) -> Vec<Vec<ComplexMatrix>> {
        let offsets = self.spaces.block_offsets();
        let dims: Vec<usize> = self.spaces.components().iter().map(|c| c.dim()).collect();
        (0..dims.len())
            .map(|i| {
                (0..dims.len())
                    .map(|j| {
                        ComplexMatrix::from_fn(dims[i], dims[j], |bi, bj| {
                            self.flat.get(offsets[i] + bi, offsets[j] + bj)
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Entrywise-nonnegative scalar compression of the block structure.
    pub fn compress(&self, mode: CompressMode, cfg: &SearchConfig) -> Result<ComplexMatrix> {
        let n = self.block_count();
        let mut entries = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = if i == j && mode == CompressMode::BerDiag {
                    berezin_number(&self.blocks[i][i], &self.spaces.components()[i], cfg)?.value
                } else {
                    self.blocks[i][j].operator_norm()
                };
            }
        }
        ComplexMatrix::from_real(n, n, &entries)
    }
}
