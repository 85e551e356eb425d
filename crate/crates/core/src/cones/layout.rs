use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    monomials_of_degree, polya_lift, quadratic_form, quartic_form, LiftKind, MultiIndex, Poly,
    SymMatrix,
};
use crate::sdp::{BlockKind, SparseBlockMatrix};

/// Which inner approximation of the copositive cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeKind {
    /// `(Σxᵢ²)^r (x∘x)^T M (x∘x)` is a sum of squares.
    K,
    /// `(Σxᵢ)^r x^T M x = Σ_{|β|=r} x^β σ_β + Σ_{|β|=r+2} c_β x^β`.
    Q,
}

impl fmt::Display for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConeKind::K => "K",
            ConeKind::Q => "Q",
        })
    }
}

impl FromStr for ConeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" | "k" => Ok(ConeKind::K),
            "Q" | "q" => Ok(ConeKind::Q),
            _ => Err(Error::Parse(format!("unknown cone kind '{}'", s))),
        }
    }
}

/// Largest Gram side and row count the builders accept.
pub const MAX_GRAM_SIDE: usize = 400;
pub const MAX_ROWS: usize = 4000;

/// One Gram block: the polynomial `x^multiplier · [basis]^T G [basis]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSpec {
    pub multiplier: MultiIndex,
    pub basis: Vec<MultiIndex>,
}

/// The shape of an SoS decomposition for one cone at one level: Gram blocks,
/// nonnegative scalar monomials, and the coefficient rows that tie them to
/// the lifted polynomial.
#[derive(Clone, Debug)]
pub struct GramLayout {
    pub kind: ConeKind,
    pub n: usize,
    pub level: u32,
    pub grams: Vec<GramSpec>,
    pub scalars: Vec<MultiIndex>,
    /// Row monomials `γ`, one linear constraint each.
    pub rows: Vec<MultiIndex>,
}

fn binom(n: usize, k: usize) -> Option<usize> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    usize::try_from(acc).ok()
}

impl GramLayout {
    pub fn new(kind: ConeKind, n: usize, level: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix side must be at least 1".into(),
            ));
        }
        let r = level as usize;
        let (side, rows) = match kind {
            ConeKind::K => (binom(n + r + 1, r + 2), binom(n + 2 * r + 3, 2 * r + 4)),
            ConeKind::Q => (Some(n), binom(n + r + 1, r + 2)),
        };
        let side = side.unwrap_or(usize::MAX);
        let rows = rows.unwrap_or(usize::MAX);
        if side > MAX_GRAM_SIDE || rows > MAX_ROWS {
            return Err(Error::SizeCap(format!(
                "{} at n = {}, r = {} needs Gram side {} and {} rows (limits {} and {})",
                kind, n, level, side, rows, MAX_GRAM_SIDE, MAX_ROWS
            )));
        }
        Ok(match kind {
            ConeKind::K => GramLayout {
                kind,
                n,
                level,
                grams: vec![GramSpec {
                    multiplier: MultiIndex::zero(n),
                    basis: monomials_of_degree(n, level + 2),
                }],
                scalars: Vec::new(),
                rows: monomials_of_degree(n, 2 * level + 4),
            },
            ConeKind::Q => {
                let units: Vec<MultiIndex> = (0..n).map(|i| MultiIndex::unit(n, i)).collect();
                GramLayout {
                    kind,
                    n,
                    level,
                    grams: monomials_of_degree(n, level)
                        .into_iter()
                        .map(|beta| GramSpec {
                            multiplier: beta,
                            basis: units.clone(),
                        })
                        .collect(),
                    scalars: monomials_of_degree(n, level + 2),
                    rows: monomials_of_degree(n, level + 2),
                }
            }
        })
    }

    /// Degree of the lifted polynomial.
    pub fn degree(&self) -> u32 {
        match self.kind {
            ConeKind::K => 2 * self.level + 4,
            ConeKind::Q => self.level + 2,
        }
    }

    /// Gram blocks followed by one nonnegative block when there are scalars.
    pub fn block_kinds(&self) -> Vec<BlockKind> {
        let mut out: Vec<BlockKind> = self
            .grams
            .iter()
            .map(|g| BlockKind::Psd(g.basis.len()))
            .collect();
        if !self.scalars.is_empty() {
            out.push(BlockKind::Nonneg(self.scalars.len()));
        }
        out
    }

    pub fn row_index(&self) -> HashMap<MultiIndex, usize> {
        self.rows
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect()
    }

    /// For every row `γ`, the matrix `Ã_γ` with `⟨Ã_γ, X⟩` equal to the
    /// coefficient of `x^γ` in the decomposition; block indices start at `offset`.
    pub fn row_matrices(&self, offset: usize) -> Vec<SparseBlockMatrix> {
        let index = self.row_index();
        let mut out = vec![SparseBlockMatrix::new(); self.rows.len()];
        for (t, g) in self.grams.iter().enumerate() {
            for i in 0..g.basis.len() {
                let mi = g.multiplier.add(&g.basis[i]);
                for j in i..g.basis.len() {
                    let gamma = mi.add(&g.basis[j]);
                    out[index[&gamma]].push(offset + t, i, j, 1.0);
                }
            }
        }
        if !self.scalars.is_empty() {
            let block = offset + self.grams.len();
            for (k, beta) in self.scalars.iter().enumerate() {
                out[index[beta]].push(block, k, k, 1.0);
            }
        }
        out
    }

    /// The lifted polynomial the decomposition has to reproduce.
    pub fn lift(&self, m: &SymMatrix) -> Poly {
        match self.kind {
            ConeKind::K => polya_lift(&quartic_form(m), self.level, LiftKind::Quadratic),
            ConeKind::Q => polya_lift(&quadratic_form(m), self.level, LiftKind::Linear),
        }
    }
}
