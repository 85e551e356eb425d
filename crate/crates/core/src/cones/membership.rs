use serde::{Deserialize, Serialize};

use super::certificate::{
    validate_certificate, CertificateTolerances, GramEntry, ScalarEntry, SosCertificate,
    ValidationReport,
};
use super::layout::{ConeKind, GramLayout};
use crate::error::Result;
use crate::poly::{to_f64, Poly, SymMatrix};
use crate::sdp::{
    solve_with, Block, BlockMatrix, BlockSdp, Constraint, SdpSolution, SdpStatus, SolverSettings,
    SparseBlockMatrix,
};

/// Feasibility SDP deciding `M ∈ K^(r)` or `M ∈ Q^(r)`.
#[derive(Clone, Debug)]
pub struct MembershipProblem {
    pub matrix: SymMatrix,
    pub level: u32,
    pub kind: ConeKind,
    pub layout: GramLayout,
    /// Row `i` of the SDP matches the coefficient of `layout.rows[i]`.
    pub sdp: BlockSdp,
    pub lifted: Poly,
}

fn build(kind: ConeKind, m: &SymMatrix, r: u32) -> Result<MembershipProblem> {
    let layout = GramLayout::new(kind, m.n(), r)?;
    let lifted = layout.lift(m);
    let constraints = layout
        .row_matrices(0)
        .into_iter()
        .zip(&layout.rows)
        .map(|(a, gamma)| Constraint {
            a,
            b: to_f64(&lifted.coeff(gamma)),
        })
        .collect();
    let sdp = BlockSdp::new(layout.block_kinds(), SparseBlockMatrix::new(), constraints)?;
    Ok(MembershipProblem {
        matrix: m.clone(),
        level: r,
        kind,
        layout,
        sdp,
        lifted,
    })
}

/// Gram-matrix feasibility problem for `M ∈ K^(r)`.
pub fn build_k_membership(m: &SymMatrix, r: u32) -> Result<MembershipProblem> {
    build(ConeKind::K, m, r)
}

/// Gram-matrix feasibility problem for `M ∈ Q^(r)`.
pub fn build_q_membership(m: &SymMatrix, r: u32) -> Result<MembershipProblem> {
    build(ConeKind::Q, m, r)
}

pub fn build_membership(kind: ConeKind, m: &SymMatrix, r: u32) -> Result<MembershipProblem> {
    build(kind, m, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Member,
    NotMember,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverSummary {
    pub status: SdpStatus,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub certificate_quality: Option<f64>,
    pub message: String,
}

impl From<&SdpSolution> for SolverSummary {
    fn from(s: &SdpSolution) -> Self {
        SolverSummary {
            status: s.status,
            iterations: s.iterations,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
            gap: s.gap,
            certificate_quality: s.certificate_quality,
            message: s.message.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MembershipOutcome {
    pub verdict: Verdict,
    pub certificate: Option<SosCertificate>,
    pub validation: Option<ValidationReport>,
    pub solver: SolverSummary,
}

/// Solver tolerance used for a requested certificate accuracy `eps`.
pub fn solver_settings_for(eps: f64) -> SolverSettings {
    let t = (eps * 1e-2).clamp(1e-11, 1e-8);
    SolverSettings {
        tol_feas: t,
        tol_gap: t,
        tol_infeas: t,
        max_iter: 200,
    }
}

/// Orthogonal projection of `x` onto `{X : ⟨A_i, X⟩ = b_i}` when the `A_i`
/// have pairwise disjoint supports (true for every Gram layout).
pub(crate) fn project_disjoint(sdp: &BlockSdp, x: &mut BlockMatrix) {
    for c in sdp.constraints() {
        let e = c.b - c.a.inner(x);
        // a unit change of an off-diagonal pair moves the row by 2v at Frobenius cost 2
        let denom: f64 =
            c.a.entries()
                .iter()
                .map(|t| {
                    if t.row == t.col {
                        t.value * t.value
                    } else {
                        2.0 * t.value * t.value
                    }
                })
                .sum();
        if denom == 0.0 {
            continue;
        }
        let lambda = e / denom;
        for t in c.a.entries() {
            let d = lambda * t.value;
            match &mut x.blocks[t.block] {
                Block::Dense(m) => {
                    m[(t.row, t.col)] += d;
                    if t.row != t.col {
                        m[(t.col, t.row)] += d;
                    }
                }
                Block::Diag(v) => v[t.row] += d,
            }
        }
    }
}

/// Reads Gram blocks (starting at block `offset`) and scalars out of a primal point.
pub(crate) fn extract_certificate(
    layout: &GramLayout,
    x: &BlockMatrix,
    offset: usize,
    tolerances: Option<CertificateTolerances>,
) -> SosCertificate {
    let grams = layout
        .grams
        .iter()
        .enumerate()
        .map(|(t, spec)| {
            let m = x.dense(offset + t).expect("Gram block is dense");
            let k = spec.basis.len();
            let mut entries = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    entries.push(0.5 * (m[(i, j)] + m[(j, i)]));
                }
            }
            GramEntry {
                multiplier: spec.multiplier.clone(),
                side: k,
                entries,
            }
        })
        .collect();
    let scalars = if layout.scalars.is_empty() {
        Vec::new()
    } else {
        let d = x
            .diag(offset + layout.grams.len())
            .expect("scalar block is diagonal");
        layout
            .scalars
            .iter()
            .zip(d.iter())
            .map(|(m, v)| ScalarEntry {
                monomial: m.clone(),
                value: *v,
            })
            .collect()
    };
    SosCertificate {
        kind: layout.kind,
        level: layout.level,
        n: layout.n,
        grams,
        scalars,
        tolerances,
    }
}

/// MEMBER needs a validated certificate (residual ≤ eps, eigenvalues and
/// scalars ≥ −eps); NOT_MEMBER needs the solver's infeasibility ray with
/// quality ≤ eps; anything else is INCONCLUSIVE.
pub fn decide_membership(problem: &MembershipProblem, eps: f64) -> MembershipOutcome {
    assert!(eps > 0.0, "eps must be positive");
    let settings = solver_settings_for(eps);
    let sol = solve_with(&problem.sdp, &settings);
    let solver = SolverSummary::from(&sol);
    match sol.status {
        SdpStatus::Optimal => {
            let mut x = sol.x.clone();
            project_disjoint(&problem.sdp, &mut x);
            let cert = extract_certificate(
                &problem.layout,
                &x,
                0,
                Some(CertificateTolerances {
                    eps,
                    solver: settings,
                }),
            );
            match validate_certificate(&problem.matrix, &cert, eps) {
                Ok(report) => MembershipOutcome {
                    verdict: if report.passed {
                        Verdict::Member
                    } else {
                        Verdict::Inconclusive
                    },
                    certificate: Some(cert),
                    validation: Some(report),
                    solver,
                },
                Err(_) => MembershipOutcome {
                    verdict: Verdict::Inconclusive,
                    certificate: None,
                    validation: None,
                    solver,
                },
            }
        }
        SdpStatus::PrimalInfeasible if sol.certificate_quality.is_some_and(|q| q <= eps) => {
            MembershipOutcome {
                verdict: Verdict::NotMember,
                certificate: None,
                validation: None,
                solver,
            }
        }
        _ => MembershipOutcome {
            verdict: Verdict::Inconclusive,
            certificate: None,
            validation: None,
            solver,
        },
    }
}

/// Certificate for `m` read from the blocks of `x` starting at `offset`,
/// after projecting them onto the coefficient equations of `m`.
pub fn projected_certificate(
    layout: &GramLayout,
    m: &SymMatrix,
    x: &BlockMatrix,
    offset: usize,
    tolerances: Option<CertificateTolerances>,
) -> Result<SosCertificate> {
    let count = layout.block_kinds().len();
    let mut sub = BlockMatrix {
        blocks: x.blocks[offset..offset + count].to_vec(),
    };
    let lifted = layout.lift(m);
    let constraints = layout
        .row_matrices(0)
        .into_iter()
        .zip(&layout.rows)
        .map(|(a, gamma)| Constraint {
            a,
            b: to_f64(&lifted.coeff(gamma)),
        })
        .collect();
    let sdp = BlockSdp::new(layout.block_kinds(), SparseBlockMatrix::new(), constraints)?;
    project_disjoint(&sdp, &mut sub);
    Ok(extract_certificate(layout, &sub, 0, tolerances))
}
