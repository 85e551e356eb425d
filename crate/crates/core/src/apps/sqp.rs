use num_traits::{One, Signed};
use serde::Serialize;

use crate::cones::ConeKind;
use crate::error::{Error, Result};
use crate::poly::{rat, to_f64, Rational, SymMatrix};
use crate::relax::{
    check_intspn, solve_relaxation, witness_from_decomposition, ConeConstraint, ConicProgram,
    IntSpnOutcome, RelaxationResult, SpnWitness,
};

/// A bound obtained from one relaxation solve.
#[derive(Clone, Debug, Serialize)]
pub struct AppBound {
    /// The application quantity (already sign-adjusted), when the SDP was solved.
    pub value: Option<f64>,
    pub box_bound: f64,
    pub relaxation: RelaxationResult,
}

impl AppBound {
    fn from_relaxation(rel: RelaxationResult, box_bound: f64, map: impl Fn(f64) -> f64) -> Self {
        AppBound {
            value: rel.value.map(map),
            box_bound,
            relaxation: rel,
        }
    }
}

/// `min { λ : λJ + M ∈ COP }`, whose value is `−p_min`.
pub fn sqp_program(m: &SymMatrix) -> ConicProgram {
    ConicProgram::new(
        vec![rat(1)],
        vec![ConeConstraint {
            c: m.scale(&rat(-1)),
            a: vec![SymMatrix::ones(m.n())],
        }],
    )
    .expect("well-formed")
}

/// `R = max|M_ij| + 1`
pub fn sqp_box_bound(m: &SymMatrix) -> Rational {
    m.max_abs() + Rational::one()
}

/// At `λ = R`: `M + RJ = I + (M + RJ − I)`.
pub fn sqp_witness(m: &SymMatrix) -> Result<SpnWitness> {
    let n = m.n();
    let r = sqp_box_bound(m);
    let prog = sqp_program(m);
    let p = SymMatrix::identity(n);
    let nn = m.add(&SymMatrix::ones(n).scale(&r)).sub(&p);
    witness_from_decomposition(&prog.constraints[0], &[r], p, nn)
}

/// `p_K^(r)` or `p_Q^(r)`: a lower bound on `min { xᵀMx : x ∈ Δ }`.
pub fn sqp_bound(m: &SymMatrix, r: u32, kind: ConeKind, eps: f64) -> Result<AppBound> {
    if m.n() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let prog = sqp_program(m);
    let rb = to_f64(&sqp_box_bound(m));
    let w = sqp_witness(m)?;
    let rel = solve_relaxation(&prog, r, kind, rb, eps, Some(std::slice::from_ref(&w)))?;
    Ok(AppBound::from_relaxation(rel, rb, |v| -v))
}

/// `min { λ : λM − J ∈ COP }`, whose value is `1/p_min`.
pub fn reciprocal_program(m: &SymMatrix) -> ConicProgram {
    ConicProgram::new(
        vec![rat(1)],
        vec![ConeConstraint {
            c: SymMatrix::ones(m.n()),
            a: vec![m.clone()],
        }],
    )
    .expect("well-formed")
}

/// Splits `M = P + N` with `N ≥ 0` and `λ_min(P)` bounded away from zero.
pub fn spn_split(m: &SymMatrix, tol: f64) -> Result<SpnWitness> {
    let cons = ConeConstraint {
        c: m.scale(&rat(-1)),
        a: vec![],
    };
    match check_intspn(&cons, &[], tol)?.0 {
        IntSpnOutcome::Witness(w) => Ok(w),
        IntSpnOutcome::Refused { lambda } => Err(Error::NoWitness(lambda)),
    }
}

/// From `M = P + N` with `λ_min(P) ≥ a > b`: at `λ̄ = 4n/b`,
/// `λ̄M − J = (λ̄P − J) + λ̄N` with `λ_min(λ̄P − J) ≥ 3n`.
pub fn reciprocal_witness(m: &SymMatrix, split: &SpnWitness) -> Result<(SpnWitness, Rational)> {
    let n = m.n();
    let a = &split.lambda_min_lb;
    if !a.is_positive() {
        return Err(Error::NoWitness(to_f64(a)));
    }
    let b = a / rat(2);
    let lbar = rat(4 * n as i64) / b;
    let prog = reciprocal_program(m);
    let p = split.p.scale(&lbar).sub(&SymMatrix::ones(n));
    let nn = split.n.scale(&lbar);
    let w = witness_from_decomposition(&prog.constraints[0], &[lbar.clone()], p, nn)?;
    Ok((w, lbar))
}

/// `q_K^(r)` or `q_Q^(r)`: an upper bound on `1/p_min`. Without a supplied
/// split `M = P + N` one is searched for and the call is refused if none exists.
pub fn sqp_reciprocal_bound(
    m: &SymMatrix,
    r: u32,
    kind: ConeKind,
    eps: f64,
    split: Option<&SpnWitness>,
) -> Result<AppBound> {
    if m.n() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let found;
    let split = match split {
        Some(s) => s,
        None => {
            found = spn_split(m, 1e-9)?;
            &found
        }
    };
    let (w, lbar) = reciprocal_witness(m, split)?;
    let prog = reciprocal_program(m);
    let rb = to_f64(&lbar);
    let rel = solve_relaxation(&prog, r, kind, rb, eps, Some(std::slice::from_ref(&w)))?;
    Ok(AppBound::from_relaxation(rel, rb, |v| v))
}

/// Validates an explicit split `M = P + (M − P)`.
pub fn split_from_parts(m: &SymMatrix, p: &SymMatrix) -> Result<SpnWitness> {
    let cons = ConeConstraint {
        c: m.scale(&rat(-1)),
        a: vec![],
    };
    witness_from_decomposition(&cons, &[], p.clone(), m.sub(p))
}
