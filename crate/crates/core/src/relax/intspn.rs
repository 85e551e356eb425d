use num_traits::{Signed, Zero};
use serde::Serialize;

use super::program::ConeConstraint;
use crate::error::{Error, Result};
use crate::poly::{from_f64, to_f64, Rational, SymMatrix};
use crate::sdp::{
    solve_with, BlockKind, BlockSdp, Constraint, SdpStatus, SolverSettings, SparseBlockMatrix,
};

/// Exact decomposition `Σ ȳᵢAᵢ − C = P + N` with `N ≥ 0` and
/// `λ_min(P) ≥ lambda_min_lb > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpnWitness {
    pub ybar: Vec<Rational>,
    pub p: SymMatrix,
    pub n: SymMatrix,
    pub lambda_min_lb: Rational,
}

#[derive(Clone, Debug)]
pub enum IntSpnOutcome {
    Witness(SpnWitness),
    /// No witness: best `λ` found (≤ tol).
    Refused {
        lambda: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct IntSpnReport {
    pub lambda_star: f64,
    pub status: SdpStatus,
}

/// Margin subtracted from a floating-point smallest eigenvalue to obtain a
/// lower bound.
fn eig_margin(p: &SymMatrix) -> f64 {
    let scale = to_f64(&p.max_abs()).max(1.0);
    1e-10 * p.n() as f64 * scale
}

/// Validates an explicit decomposition exactly and wraps it as a witness.
pub fn witness_from_decomposition(
    constraint: &ConeConstraint,
    ybar: &[Rational],
    p: SymMatrix,
    n: SymMatrix,
) -> Result<SpnWitness> {
    let m = constraint.slack(ybar);
    if p.n() != m.n() || n.n() != m.n() {
        return Err(Error::Dimension(
            "decomposition sides do not match the constraint".into(),
        ));
    }
    if p.add(&n) != m {
        return Err(Error::InvalidArgument(
            "P + N differs from the slack matrix".into(),
        ));
    }
    if !n.is_nonnegative() {
        return Err(Error::InvalidArgument("N has a negative entry".into()));
    }
    let lb = p.min_eigenvalue() - eig_margin(&p);
    if !(lb > 0.0) {
        return Err(Error::NoWitness(lb));
    }
    Ok(SpnWitness {
        ybar: ybar.to_vec(),
        p,
        n,
        lambda_min_lb: from_f64(lb),
    })
}

/// Solves `max λ s.t. M = P + N, P ⪰ λI, N ≥ 0` for `M = Σ ȳᵢAᵢ − C`, then
/// rounds the split so that `P + N = M` holds exactly.
pub fn check_intspn(
    constraint: &ConeConstraint,
    ybar: &[Rational],
    tol: f64,
) -> Result<(IntSpnOutcome, IntSpnReport)> {
    let m = constraint.slack(ybar);
    let n = m.n();
    let l_min = (0..n).map(|i| m.get(i, i).clone()).min().expect("n ≥ 1");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let s_index = pairs.len();
    // P = P' + λI with λ = L − s, so P' + (L − s)I + N = M
    let mut cons = Vec::with_capacity(pairs.len());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let mut a = SparseBlockMatrix::new();
        a.push(0, i, j, if i == j { 1.0 } else { 0.5 });
        a.push(1, k, k, 1.0);
        let mut rhs = m.get(i, j).clone();
        if i == j {
            a.push(1, s_index, s_index, -1.0);
            rhs -= &l_min;
        }
        cons.push(Constraint { a, b: to_f64(&rhs) });
    }
    let mut obj = SparseBlockMatrix::new();
    obj.push(1, s_index, s_index, 1.0);
    let sdp = BlockSdp::new(
        vec![BlockKind::Psd(n), BlockKind::Nonneg(pairs.len() + 1)],
        obj,
        cons,
    )?;
    let sol = solve_with(
        &sdp,
        &SolverSettings {
            max_iter: 150,
            ..SolverSettings::default()
        },
    );
    if sol.status != SdpStatus::Optimal {
        return Err(Error::InvalidArgument(format!(
            "auxiliary SDP for the SPN witness ended with {:?}: {}",
            sol.status, sol.message
        )));
    }
    let lambda = to_f64(&l_min) - sol.x.diag(1).unwrap()[s_index];
    let report = IntSpnReport {
        lambda_star: lambda,
        status: sol.status,
    };

    // exact rounding: P from the solver, N := M − P, negative parts of N moved back into P
    let pd = sol.x.dense(0).unwrap();
    let mut p = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut v = 0.5 * (pd[(i, j)] + pd[(j, i)]);
            if i == j {
                v += lambda;
            }
            p.set(i, j, from_f64(v));
        }
    }
    let mut nn = m.sub(&p);
    for i in 0..n {
        for j in i..n {
            if nn.get(i, j).is_negative() {
                p.set(i, j, m.get(i, j).clone());
                nn.set(i, j, Rational::zero());
            }
        }
    }
    let lb = p.min_eigenvalue() - eig_margin(&p);
    if lb > tol {
        let w = SpnWitness {
            ybar: ybar.to_vec(),
            p,
            n: nn,
            lambda_min_lb: from_f64(lb),
        };
        Ok((IntSpnOutcome::Witness(w), report))
    } else {
        Ok((
            IntSpnOutcome::Refused {
                lambda: lambda.min(lb),
            },
            report,
        ))
    }
}
