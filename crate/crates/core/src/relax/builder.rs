use nalgebra::DVector;

use super::program::ConicProgram;
use crate::cones::{ConeKind, GramLayout};
use crate::error::{Error, Result};
use crate::poly::to_f64;
use crate::sdp::{BlockKind, BlockMatrix, BlockSdp, Constraint, SparseBlockMatrix};

/// Block SDP of a relaxed conic program together with the maps needed to
/// read `y` and the Gram blocks back out of a primal point.
#[derive(Clone, Debug)]
pub struct RelaxationSdp {
    pub kind: ConeKind,
    pub level: u32,
    pub box_bound: f64,
    pub m: usize,
    pub sdp: BlockSdp,
    /// One layout per cone constraint.
    pub layouts: Vec<GramLayout>,
    /// Index of the first SDP block of each cone constraint.
    pub block_offsets: Vec<usize>,
    /// First SDP row of each cone constraint.
    pub row_offsets: Vec<usize>,
    /// Index of the `NONNEG(2m)` block `D = (d₁⁺, d₁⁻, …)`.
    pub d_block: usize,
}

impl RelaxationSdp {
    /// `yᵢ = dᵢ⁺ − 2R`, the value the coefficient rows see.
    pub fn decode(&self, x: &BlockMatrix) -> Vec<f64> {
        let d = x.diag(self.d_block).expect("D block is diagonal");
        (0..self.m)
            .map(|i| d[2 * i] - 2.0 * self.box_bound)
            .collect()
    }

    /// `D` for a given `y`: `dᵢ⁺ = 2R + yᵢ`, `dᵢ⁻ = 2R − yᵢ`.
    pub fn encode(&self, y: &[f64]) -> DVector<f64> {
        let r = self.box_bound;
        DVector::from_iterator(
            2 * self.m,
            y.iter().flat_map(|&yi| [2.0 * r + yi, 2.0 * r - yi]),
        )
    }

    /// Number of linear rows coupling the Gram blocks of constraint `c` to `D`.
    pub fn coupling_rows(&self, c: usize) -> usize {
        self.layouts[c].rows.len()
    }
}

/// Assembles the relaxation of `prog` with every cone constraint replaced by
/// `K^(r)` or `Q^(r)` and `y` boxed to `[−2R, 2R]^m` through `D`.
pub fn build_relaxation_sdp(
    prog: &ConicProgram,
    r: u32,
    kind: ConeKind,
    box_bound: f64,
) -> Result<RelaxationSdp> {
    if !(box_bound > 0.0 && box_bound.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "box bound must be positive, got {}",
            box_bound
        )));
    }
    let m = prog.m;
    let mut blocks: Vec<BlockKind> = Vec::new();
    let mut layouts = Vec::new();
    let mut block_offsets = Vec::new();
    for c in &prog.constraints {
        let layout = GramLayout::new(kind, c.n(), r)?;
        block_offsets.push(blocks.len());
        blocks.extend(layout.block_kinds());
        layouts.push(layout);
    }
    let d_block = blocks.len();
    blocks.push(BlockKind::Nonneg(2 * m));

    let mut constraints = Vec::new();
    let mut row_offsets = Vec::new();
    for ((c, layout), &offset) in prog.constraints.iter().zip(&layouts).zip(&block_offsets) {
        row_offsets.push(constraints.len());
        let lift_c = layout.lift(&c.c);
        let lift_a: Vec<_> = c.a.iter().map(|a| layout.lift(a)).collect();
        for (mut row, gamma) in layout.row_matrices(offset).into_iter().zip(&layout.rows) {
            // ⟨Q, Ã_γ⟩ = Σ yᵢ a_iγ − ℓ_γ with yᵢ = dᵢ⁺ − 2R
            let mut rhs = -to_f64(&lift_c.coeff(gamma));
            for (i, la) in lift_a.iter().enumerate() {
                let a = to_f64(&la.coeff(gamma));
                if a != 0.0 {
                    row.push(d_block, 2 * i, 2 * i, -a);
                    rhs -= 2.0 * box_bound * a;
                }
            }
            constraints.push(Constraint { a: row, b: rhs });
        }
    }
    for i in 0..m {
        let mut row = SparseBlockMatrix::new();
        row.push(d_block, 2 * i, 2 * i, 1.0);
        row.push(d_block, 2 * i + 1, 2 * i + 1, 1.0);
        constraints.push(Constraint {
            a: row,
            b: 4.0 * box_bound,
        });
    }
    let mut objective = SparseBlockMatrix::new();
    for (i, bi) in prog.b.iter().enumerate() {
        let v = to_f64(bi) / 2.0;
        objective.push(d_block, 2 * i, 2 * i, v);
        objective.push(d_block, 2 * i + 1, 2 * i + 1, -v);
    }
    let sdp = BlockSdp::new(blocks, objective, constraints)?;
    Ok(RelaxationSdp {
        kind,
        level: r,
        box_bound,
        m,
        sdp,
        layouts,
        block_offsets,
        row_offsets,
        d_block,
    })
}

/// CP-K: every cone constraint replaced by `K^(r)`.
pub fn build_cpk_sdp(prog: &ConicProgram, r: u32, box_bound: f64) -> Result<RelaxationSdp> {
    build_relaxation_sdp(prog, r, ConeKind::K, box_bound)
}

/// CP-Q: every cone constraint replaced by `Q^(r)`.
pub fn build_cpq_sdp(prog: &ConicProgram, r: u32, box_bound: f64) -> Result<RelaxationSdp> {
    build_relaxation_sdp(prog, r, ConeKind::Q, box_bound)
}
