use num_traits::{Signed, Zero};

use super::graph::Graph;
use super::sqp::{split_from_parts, sqp_reciprocal_bound, AppBound};
use crate::cones::ConeKind;
use crate::error::{Error, Result};
use crate::poly::{rat, Rational, SymMatrix};

/// Member of `M(G, ω)` with `B_ii = 1/ωᵢ`, `B_ij = (B_ii + B_jj)/2` on edges
/// and zero elsewhere.
pub fn ms_matrix(g: &Graph) -> SymMatrix {
    let n = g.n();
    let d: Vec<Rational> = (0..n).map(|i| g.weight(i).recip()).collect();
    let mut b = SymMatrix::diag(&d);
    for (i, j) in g.edges() {
        b.set(i, j, (&d[i] + &d[j]) / rat(2));
    }
    b
}

/// Checks that `b` belongs to `M(G, ω)`.
pub fn validate_ms_matrix(g: &Graph, b: &SymMatrix) -> Result<()> {
    let n = g.n();
    if b.n() != n {
        return Err(Error::Dimension(format!(
            "B has side {}, graph has {} vertices",
            b.n(),
            n
        )));
    }
    for i in 0..n {
        if b.get(i, i) != &g.weight(i).recip() {
            return Err(Error::InvalidArgument(format!(
                "B[{i}][{i}] must equal 1/ω_{i}"
            )));
        }
        for j in (i + 1)..n {
            let v = b.get(i, j);
            if g.has_edge(i, j) {
                if v < &((b.get(i, i) + b.get(j, j)) / rat(2)) {
                    return Err(Error::InvalidArgument(format!(
                        "B[{i}][{j}] is below the average of its diagonal entries"
                    )));
                }
            } else if !v.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "B[{i}][{j}] must be zero on a non-edge"
                )));
            }
        }
    }
    Ok(())
}

/// `min { t : tB − J ∈ cone }`, an upper bound on the weighted stability
/// number. `B` defaults to [`ms_matrix`].
pub fn stability_bound(
    g: &Graph,
    b: Option<&SymMatrix>,
    r: u32,
    kind: ConeKind,
    eps: f64,
) -> Result<AppBound> {
    if g.n() == 0 {
        return Err(Error::Dimension("graph has no vertices".into()));
    }
    let b = match b {
        Some(b) => {
            validate_ms_matrix(g, b)?;
            b.clone()
        }
        None => ms_matrix(g),
    };
    // B = Diag(1/ω) + (nonnegative off-diagonal part)
    let d: Vec<Rational> = (0..g.n()).map(|i| b.get(i, i).clone()).collect();
    debug_assert!(d.iter().all(|v| v.is_positive()));
    let split = split_from_parts(&b, &SymMatrix::diag(&d))?;
    sqp_reciprocal_bound(&b, r, kind, eps, Some(&split))
}

/// `ϑ^(r)(G, ω)`
pub fn theta_r(g: &Graph, r: u32, eps: f64) -> Result<AppBound> {
    stability_bound(g, None, r, ConeKind::K, eps)
}

/// `ν^(r)(G, ω)`
pub fn nu_r(g: &Graph, r: u32, eps: f64) -> Result<AppBound> {
    stability_bound(g, None, r, ConeKind::Q, eps)
}
