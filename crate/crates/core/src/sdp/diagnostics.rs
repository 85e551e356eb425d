use serde::{Deserialize, Serialize};

use super::problem::{BlockMatrix, BlockSdp};
use crate::error::{Error, Result};

/// Numerical check of a candidate interior point and the ball radii around it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `max_i |⟨A_i, X0⟩ − b_i|`
    pub residual: f64,
    /// Constraints whose violation exceeds `tol`, with the violation.
    pub violations: Vec<(usize, f64)>,
    /// Smallest eigenvalue over all blocks of `X0`.
    pub margin: f64,
    /// `log(R2 / R1)`
    pub log_ratio: f64,
    pub r1: f64,
    pub r2: f64,
    /// `true` when no constraint is violated and the margin is positive.
    pub interior: bool,
}

pub const SANDWICH_TOL: f64 = 1e-9;

pub fn sandwich_diagnostics(
    sdp: &BlockSdp,
    x0: &BlockMatrix,
    r1: f64,
    r2: f64,
) -> Result<SandwichReport> {
    if !x0.conforms(sdp.blocks()) {
        return Err(Error::Dimension(
            "X0 does not conform to the block pattern".into(),
        ));
    }
    let mut residual = 0.0f64;
    let mut violations = Vec::new();
    for (i, c) in sdp.constraints().iter().enumerate() {
        let v = (c.a.inner(x0) - c.b).abs();
        residual = residual.max(v);
        if v > SANDWICH_TOL {
            violations.push((i, v));
        }
    }
    let margin = x0.min_eigenvalue();
    let log_ratio = if r1 > 0.0 && r2 > 0.0 {
        (r2 / r1).ln()
    } else {
        f64::NAN
    };
    Ok(SandwichReport {
        residual,
        interior: violations.is_empty() && margin > 0.0,
        violations,
        margin,
        log_ratio,
        r1,
        r2,
    })
}
