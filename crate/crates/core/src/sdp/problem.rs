use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of one diagonal block of the matrix variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// `k × k` positive semidefinite block.
    Psd(usize),
    /// `k` nonnegative scalars (a diagonal block).
    Nonneg(usize),
}

impl BlockKind {
    pub fn size(&self) -> usize {
        match *self {
            BlockKind::Psd(k) | BlockKind::Nonneg(k) => k,
        }
    }
}

/// One stored entry of a sparse symmetric block matrix. Off-diagonal entries
/// stand for both `(row, col)` and `(col, row)`; only `row ≤ col` is kept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Sparse symmetric block matrix used for `C` and the `A_i`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseBlockMatrix {
    entries: Vec<Entry>,
}

impl SparseBlockMatrix {
    pub fn new() -> Self {
        SparseBlockMatrix {
            entries: Vec::new(),
        }
    }

    /// Adds `value` at `(row, col)` and its mirror; repeated positions accumulate.
    pub fn push(&mut self, block: usize, row: usize, col: usize, value: f64) {
        if value == 0.0 {
            return;
        }
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        self.entries.push(Entry {
            block,
            row,
            col,
            value,
        });
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merges duplicate positions and drops exact zeros.
    pub(crate) fn normalize(&mut self) {
        self.entries
            .sort_by(|a, b| (a.block, a.row, a.col).cmp(&(b.block, b.row, b.col)));
        let mut out: Vec<Entry> = Vec::with_capacity(self.entries.len());
        for e in self.entries.drain(..) {
            match out.last_mut() {
                Some(last) if (last.block, last.row, last.col) == (e.block, e.row, e.col) => {
                    last.value += e.value;
                }
                _ => out.push(e),
            }
        }
        out.retain(|e| e.value != 0.0);
        self.entries = out;
    }

    pub fn inner(&self, x: &BlockMatrix) -> f64 {
        self.entries
            .iter()
            .map(|e| match &x.blocks[e.block] {
                Block::Dense(m) => {
                    if e.row == e.col {
                        e.value * m[(e.row, e.row)]
                    } else {
                        2.0 * e.value * m[(e.row, e.col)]
                    }
                }
                Block::Diag(d) => e.value * d[e.row],
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.value.abs()))
    }

    pub(crate) fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                if e.row == e.col {
                    e.value * e.value
                } else {
                    2.0 * e.value * e.value
                }
            })
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn scaled(&self, s: f64) -> SparseBlockMatrix {
        SparseBlockMatrix {
            entries: self
                .entries
                .iter()
                .map(|e| Entry {
                    value: e.value * s,
                    ..*e
                })
                .collect(),
        }
    }
}

/// A linear equality `⟨A, X⟩ = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub a: SparseBlockMatrix,
    pub b: f64,
}

/// Standard-form block SDP: `min ⟨C, X⟩  s.t.  ⟨A_i, X⟩ = b_i,  X ⪰ 0` blockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSdp {
    blocks: Vec<BlockKind>,
    objective: SparseBlockMatrix,
    constraints: Vec<Constraint>,
}

impl BlockSdp {
    /// Validates every matrix against the block pattern.
    pub fn new(
        blocks: Vec<BlockKind>,
        mut objective: SparseBlockMatrix,
        mut constraints: Vec<Constraint>,
    ) -> Result<Self> {
        check_conforms(&blocks, &objective, "objective")?;
        objective.normalize();
        for (i, c) in constraints.iter_mut().enumerate() {
            check_conforms(&blocks, &c.a, &format!("constraint {}", i))?;
            if !c.b.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "constraint {} has non-finite rhs",
                    i
                )));
            }
            c.a.normalize();
        }
        Ok(BlockSdp {
            blocks,
            objective,
            constraints,
        })
    }

    pub fn blocks(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn objective(&self) -> &SparseBlockMatrix {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn rhs(&self) -> DVector<f64> {
        DVector::from_iterator(self.constraints.len(), self.constraints.iter().map(|c| c.b))
    }

    /// Barrier degree: sum of block sides.
    pub fn degree(&self) -> usize {
        self.blocks.iter().map(BlockKind::size).sum()
    }

    /// `(⟨A_i, X⟩)_i`
    pub fn apply(&self, x: &BlockMatrix) -> DVector<f64> {
        DVector::from_iterator(
            self.constraints.len(),
            self.constraints.iter().map(|c| c.a.inner(x)),
        )
    }

    /// `Σ y_i A_i` as a dense block matrix.
    pub fn adjoint(&self, y: &DVector<f64>) -> BlockMatrix {
        let mut out = BlockMatrix::zeros(&self.blocks);
        for (c, &yi) in self.constraints.iter().zip(y.iter()) {
            if yi != 0.0 {
                out.add_sparse(&c.a, yi);
            }
        }
        out
    }

    /// Largest violation `max_i |⟨A_i, X⟩ − b_i|`.
    pub fn max_violation(&self, x: &BlockMatrix) -> f64 {
        self.constraints
            .iter()
            .fold(0.0, |m, c| m.max((c.a.inner(x) - c.b).abs()))
    }
}

fn check_conforms(blocks: &[BlockKind], m: &SparseBlockMatrix, what: &str) -> Result<()> {
    for e in m.entries() {
        let kind = blocks.get(e.block).ok_or_else(|| {
            Error::Dimension(format!("{}: block {} does not exist", what, e.block))
        })?;
        if e.col >= kind.size() {
            return Err(Error::Dimension(format!(
                "{}: entry ({}, {}) outside block {} of size {}",
                what,
                e.row,
                e.col,
                e.block,
                kind.size()
            )));
        }
        if matches!(kind, BlockKind::Nonneg(_)) && e.row != e.col {
            return Err(Error::Dimension(format!(
                "{}: off-diagonal entry in nonnegative block {}",
                what, e.block
            )));
        }
        if !e.value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "{}: non-finite entry",
                what
            )));
        }
    }
    Ok(())
}

/// Value of one block: dense symmetric for PSD blocks, a vector for nonnegative ones.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    Dense(DMatrix<f64>),
    Diag(DVector<f64>),
}

impl Block {
    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            Block::Dense(m) if m.nrows() == 0 => f64::INFINITY,
            Block::Dense(m) => m.clone().symmetric_eigenvalues().min(),
            Block::Diag(d) if d.is_empty() => f64::INFINITY,
            Block::Diag(d) => d.min(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Block::Dense(m) => m.amax(),
            Block::Diag(d) => d.amax(),
        }
    }
}

/// Dense value of a block-diagonal matrix conforming to a block pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    pub blocks: Vec<Block>,
}

impl BlockMatrix {
    pub fn zeros(kinds: &[BlockKind]) -> Self {
        BlockMatrix {
            blocks: kinds
                .iter()
                .map(|k| match *k {
                    BlockKind::Psd(s) => Block::Dense(DMatrix::zeros(s, s)),
                    BlockKind::Nonneg(s) => Block::Diag(DVector::zeros(s)),
                })
                .collect(),
        }
    }

    pub fn identity(kinds: &[BlockKind]) -> Self {
        BlockMatrix {
            blocks: kinds
                .iter()
                .map(|k| match *k {
                    BlockKind::Psd(s) => Block::Dense(DMatrix::identity(s, s)),
                    BlockKind::Nonneg(s) => Block::Diag(DVector::from_element(s, 1.0)),
                })
                .collect(),
        }
    }

    pub fn conforms(&self, kinds: &[BlockKind]) -> bool {
        self.blocks.len() == kinds.len()
            && self.blocks.iter().zip(kinds).all(|(b, k)| match (b, k) {
                (Block::Dense(m), BlockKind::Psd(s)) => m.nrows() == *s && m.ncols() == *s,
                (Block::Diag(d), BlockKind::Nonneg(s)) => d.len() == *s,
                _ => false,
            })
    }

    pub fn add_sparse(&mut self, a: &SparseBlockMatrix, coeff: f64) {
        for e in a.entries() {
            let v = coeff * e.value;
            match &mut self.blocks[e.block] {
                Block::Dense(m) => {
                    m[(e.row, e.col)] += v;
                    if e.row != e.col {
                        m[(e.col, e.row)] += v;
                    }
                }
                Block::Diag(d) => d[e.row] += v,
            }
        }
    }

    pub fn inner(&self, other: &BlockMatrix) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (Block::Dense(x), Block::Dense(y)) => x.dot(y),
                (Block::Diag(x), Block::Diag(y)) => x.dot(y),
                _ => panic!("block pattern mismatch"),
            })
            .sum()
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &BlockMatrix) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            match (a, b) {
                (Block::Dense(x), Block::Dense(y)) => *x += y * s,
                (Block::Diag(x), Block::Diag(y)) => *x += y * s,
                _ => panic!("block pattern mismatch"),
            }
        }
    }

    pub fn scaled(&self, s: f64) -> BlockMatrix {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|b| match b {
                    Block::Dense(m) => Block::Dense(m * s),
                    Block::Diag(d) => Block::Diag(d * s),
                })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |m, b| m.max(b.max_abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .fold(f64::INFINITY, |m, b| m.min(b.min_eigenvalue()))
    }

    /// Replaces every dense block by its symmetric part.
    pub fn symmetrize(&mut self) {
        for b in &mut self.blocks {
            if let Block::Dense(m) = b {
                *m = (&*m + m.transpose()) * 0.5;
            }
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn dense(&self, i: usize) -> Option<&DMatrix<f64>> {
        match &self.blocks[i] {
            Block::Dense(m) => Some(m),
            Block::Diag(_) => None,
        }
    }

    pub fn diag(&self, i: usize) -> Option<&DVector<f64>> {
        match &self.blocks[i] {
            Block::Diag(d) => Some(d),
            Block::Dense(_) => None,
        }
    }
}
