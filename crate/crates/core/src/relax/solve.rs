use serde::Serialize;

use super::builder::{build_relaxation_sdp, RelaxationSdp};
use super::interior::build_interior_start;
use super::intspn::SpnWitness;
use super::program::ConicProgram;
use crate::cones::{
    projected_certificate, solver_settings_for, validate_certificate, CertificateTolerances,
    ConeKind, SolverSummary, SosCertificate, ValidationReport,
};
use crate::error::Result;
use crate::poly::{from_f64, Rational};
use crate::sdp::{sandwich_diagnostics, solve_with, BlockSdp, SandwichReport, SdpStatus};

#[derive(Clone, Debug, Serialize)]
pub struct SdpSize {
    pub blocks: usize,
    pub largest_block: usize,
    pub rows: usize,
}

impl SdpSize {
    fn of(sdp: &BlockSdp) -> Self {
        SdpSize {
            blocks: sdp.blocks().len(),
            largest_block: sdp.blocks().iter().map(|b| b.size()).max().unwrap_or(0),
            rows: sdp.num_constraints(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelaxationResult {
    pub kind: ConeKind,
    pub level: u32,
    pub status: SdpStatus,
    /// `b^T y*` when the solver reached OPTIMAL.
    pub value: Option<f64>,
    pub y_star: Vec<f64>,
    pub certificates: Vec<SosCertificate>,
    pub validations: Vec<ValidationReport>,
    /// `false` when the solver was OPTIMAL but some certificate failed validation.
    pub certified: bool,
    pub solver: SolverSummary,
    pub sandwich: Option<SandwichReport>,
    pub size: SdpSize,
}

/// Builds, solves and decodes the relaxation; with witnesses, also reports
/// the interior-point diagnostics of the exact start `X₀`.
pub fn solve_relaxation(
    prog: &ConicProgram,
    r: u32,
    kind: ConeKind,
    box_bound: f64,
    eps: f64,
    witnesses: Option<&[SpnWitness]>,
) -> Result<RelaxationResult> {
    let rsdp = build_relaxation_sdp(prog, r, kind, box_bound)?;
    solve_built(prog, &rsdp, eps, witnesses)
}

pub fn solve_built(
    prog: &ConicProgram,
    rsdp: &RelaxationSdp,
    eps: f64,
    witnesses: Option<&[SpnWitness]>,
) -> Result<RelaxationResult> {
    let settings = solver_settings_for(eps);
    let sol = solve_with(&rsdp.sdp, &settings);
    let solver = SolverSummary::from(&sol);
    let size = SdpSize::of(&rsdp.sdp);

    let sandwich = match witnesses {
        Some(ws) => {
            let start = build_interior_start(prog, rsdp, ws)?;
            // the outer radius is reported from the distance to the computed optimum
            let mut diff = sol.x.clone();
            diff.axpy(-1.0, &start.x0);
            let r2 = (2.0 * diff.frobenius())
                .max(start.x0.frobenius())
                .max(start.r1);
            Some(sandwich_diagnostics(&rsdp.sdp, &start.x0, start.r1, r2)?)
        }
        None => None,
    };

    let mut out = RelaxationResult {
        kind: rsdp.kind,
        level: rsdp.level,
        status: sol.status,
        value: None,
        y_star: Vec::new(),
        certificates: Vec::new(),
        validations: Vec::new(),
        certified: false,
        solver,
        sandwich,
        size,
    };
    if sol.status != SdpStatus::Optimal {
        return Ok(out);
    }
    let y = rsdp.decode(&sol.x);
    let yq: Vec<Rational> = y.iter().map(|&v| from_f64(v)).collect();
    let mut certified = true;
    for (c, (cons, layout)) in prog.constraints.iter().zip(&rsdp.layouts).enumerate() {
        let slack = cons.slack(&yq);
        let cert = projected_certificate(
            layout,
            &slack,
            &sol.x,
            rsdp.block_offsets[c],
            Some(CertificateTolerances {
                eps,
                solver: settings,
            }),
        )?;
        let rep = validate_certificate(&slack, &cert, eps)?;
        certified &= rep.passed;
        out.certificates.push(cert);
        out.validations.push(rep);
    }
    out.value = Some(
        prog.b
            .iter()
            .zip(&y)
            .map(|(b, y)| crate::poly::to_f64(b) * y)
            .sum(),
    );
    out.y_star = y;
    out.certified = certified;
    if !certified {
        out.status = SdpStatus::Inconclusive;
        out.solver.message = format!("{}; certificate validation failed", out.solver.message);
    }
    Ok(out)
}
