use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::builder::RelaxationSdp;
use super::intspn::SpnWitness;
use super::program::ConicProgram;
use crate::cones::{ConeKind, GramLayout};
use crate::error::{Error, Result};
use crate::poly::{
    multinomial, polya_lift, quadratic_form, rat, to_f64, LiftKind, MultiIndex, Poly, Rational,
    SymMatrix,
};
use crate::sdp::{Block, BlockMatrix};

/// Maximum number of halvings of the J-shift `b`.
pub const MAX_HALVINGS: usize = 60;

/// Exact interior point of a relaxation SDP built from SPN witnesses.
#[derive(Clone, Debug)]
pub struct InteriorStart {
    pub x0: BlockMatrix,
    /// Gram blocks and scalars of each constraint, exactly.
    pub grams: Vec<Vec<SymMatrix>>,
    pub scalars: Vec<Vec<Rational>>,
    /// The J-shift `b` used for each constraint.
    pub shifts: Vec<Rational>,
    /// Inner radius `min(b/k, R)` (K) or `min(b/(4n²), R)` (Q), smallest over constraints.
    pub r1: f64,
    /// Smallest eigenvalue over the Gram blocks and scalars of `X₀`.
    pub margin: f64,
}

fn is_psd(m: &SymMatrix) -> bool {
    m.n() == 0 || m.min_eigenvalue() >= 0.0
}

/// Largest `b` of the form `lb/2^k` (k ≥ 1, at most `MAX_HALVINGS` halvings)
/// with `P − bJ ⪰ 0`.
fn choose_shift(w: &SpnWitness) -> Result<(Rational, SymMatrix)> {
    let n = w.p.n();
    let mut b = &w.lambda_min_lb / rat(2);
    for _ in 0..=MAX_HALVINGS {
        let pb = w.p.sub(&SymMatrix::ones(n).scale(&b));
        if is_psd(&pb) {
            return Ok((b, pb));
        }
        b /= rat(2);
    }
    Err(Error::NoWitness(to_f64(&w.lambda_min_lb)))
}

/// Gram matrix and scalars for one constraint.
fn constraint_start(
    layout: &GramLayout,
    w: &SpnWitness,
) -> Result<(Vec<SymMatrix>, Vec<Rational>, Rational)> {
    let n = layout.n;
    let r = layout.level;
    let (b, pb) = choose_shift(w)?;
    let shifted = w.n.add(&SymMatrix::ones(n).scale(&b));
    match layout.kind {
        ConeKind::K => {
            let basis = &layout.grams[0].basis;
            let pos: HashMap<&MultiIndex, usize> =
                basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut g = SymMatrix::zeros(basis.len());
            // (Σxᵢ²)^r (x∘x)^T P_b (x∘x) = Σ_{|α|=r} (r choose α) Σ_ij P_b,ij x^{α+2eᵢ} x^{α+2eⱼ}
            for alpha in crate::poly::monomials_of_degree(n, r) {
                let weight = Rational::from_integer(BigInt::from(multinomial(&alpha)));
                let idx: Vec<usize> = (0..n).map(|i| pos[&alpha.add_pair(i, i)]).collect();
                for i in 0..n {
                    for j in i..n {
                        let v = pb.get(i, j) * &weight;
                        if !v.is_zero() {
                            let cur = g.get(idx[i], idx[j]).clone();
                            g.set(idx[i], idx[j], cur + v);
                        }
                    }
                }
            }
            // (Σxᵢ²)^r (x∘x)^T (bJ + N)(x∘x) has only square monomials x^{2δ}: put them on the diagonal at x^δ
            let sq = polya_lift(&quadratic_form(&shifted), r, LiftKind::Linear);
            for (delta, c) in sq.terms() {
                let i = pos[delta];
                let cur = g.get(i, i).clone();
                g.set(i, i, cur + c);
            }
            Ok((vec![g], Vec::new(), b))
        }
        ConeKind::Q => {
            let extra = &b / rat(2 * n as i64);
            let mut grams = Vec::new();
            let mut expansion = Poly::zero(n);
            for spec in &layout.grams {
                let a = Rational::from_integer(BigInt::from(multinomial(&spec.multiplier)));
                let blk = pb.scale(&a).add(&SymMatrix::identity(n).scale(&extra));
                for i in 0..n {
                    for j in 0..n {
                        expansion.add_term(spec.multiplier.add_pair(i, j), blk.get(i, j).clone());
                    }
                }
                grams.push(blk);
            }
            let target = layout.lift(&w.p.add(&w.n));
            let rest = target.sub(&expansion);
            let scalars: Vec<Rational> =
                layout.scalars.iter().map(|beta| rest.coeff(beta)).collect();
            Ok((grams, scalars, b))
        }
    }
}

/// Builds `X₀` from one witness per cone constraint (all sharing `ȳ`).
pub fn build_interior_start(
    prog: &ConicProgram,
    rsdp: &RelaxationSdp,
    witnesses: &[SpnWitness],
) -> Result<InteriorStart> {
    if witnesses.len() != prog.constraints.len() {
        return Err(Error::Dimension(format!(
            "{} witnesses for {} cone constraints",
            witnesses.len(),
            prog.constraints.len()
        )));
    }
    let ybar = &witnesses[0].ybar;
    if witnesses.iter().any(|w| &w.ybar != ybar) || ybar.len() != prog.m {
        return Err(Error::InvalidArgument(
            "witnesses must share one ȳ of length m".into(),
        ));
    }
    let mut x0 = BlockMatrix::zeros(rsdp.sdp.blocks());
    let mut grams_out = Vec::new();
    let mut scalars_out = Vec::new();
    let mut shifts = Vec::new();
    let mut r1 = rsdp.box_bound;
    let mut margin = f64::INFINITY;
    for (c, (layout, w)) in rsdp.layouts.iter().zip(witnesses).enumerate() {
        let (grams, scalars, b) = constraint_start(layout, w)?;
        let off = rsdp.block_offsets[c];
        for (t, g) in grams.iter().enumerate() {
            let d = g.to_f64();
            margin = margin.min(g.min_eigenvalue());
            x0.blocks[off + t] = Block::Dense(d);
        }
        if !scalars.is_empty() {
            let v: Vec<f64> = scalars.iter().map(to_f64).collect();
            margin = margin.min(v.iter().cloned().fold(f64::INFINITY, f64::min));
            x0.blocks[off + grams.len()] = Block::Diag(nalgebra::DVector::from_vec(v));
        }
        let bf = to_f64(&b);
        let radius = match layout.kind {
            ConeKind::K => bf / layout.grams[0].basis.len() as f64,
            ConeKind::Q => bf / (4.0 * (layout.n * layout.n) as f64),
        };
        r1 = r1.min(radius);
        grams_out.push(grams);
        scalars_out.push(scalars);
        shifts.push(b);
    }
    let y: Vec<f64> = ybar.iter().map(to_f64).collect();
    let d = rsdp.encode(&y);
    margin = margin.min(d.iter().cloned().fold(f64::INFINITY, f64::min));
    x0.blocks[rsdp.d_block] = Block::Diag(d);
    Ok(InteriorStart {
        x0,
        grams: grams_out,
        scalars: scalars_out,
        shifts,
        r1,
        margin,
    })
}

/// Largest Gram/scalar magnitude in an interior start, for reporting.
pub fn max_entry(start: &InteriorStart) -> f64 {
    start
        .grams
        .iter()
        .flatten()
        .map(|g| to_f64(&g.max_abs()))
        .chain(start.scalars.iter().flatten().map(|s| to_f64(&s.abs())))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{certificate_polynomial, GramEntry, ScalarEntry, SosCertificate};
    use crate::relax::builder::build_relaxation_sdp;
    use crate::relax::intspn::witness_from_decomposition;
    use crate::relax::program::ConeConstraint;

    fn exact_cert(
        layout: &GramLayout,
        grams: &[SymMatrix],
        scalars: &[Rational],
    ) -> (Poly, SosCertificate) {
        let mut p = Poly::zero(layout.n);
        for (spec, g) in layout.grams.iter().zip(grams) {
            for i in 0..g.n() {
                for j in 0..g.n() {
                    p.add_term(
                        spec.multiplier.add(&spec.basis[i]).add(&spec.basis[j]),
                        g.get(i, j).clone(),
                    );
                }
            }
        }
        for (beta, c) in layout.scalars.iter().zip(scalars) {
            p.add_term(beta.clone(), c.clone());
        }
        let cert = SosCertificate {
            kind: layout.kind,
            level: layout.level,
            n: layout.n,
            grams: layout
                .grams
                .iter()
                .zip(grams)
                .map(|(s, g)| GramEntry {
                    multiplier: s.multiplier.clone(),
                    side: g.n(),
                    entries: g.rows().into_iter().flatten().map(|v| to_f64(&v)).collect(),
                })
                .collect(),
            scalars: layout
                .scalars
                .iter()
                .zip(scalars)
                .map(|(m, v)| ScalarEntry {
                    monomial: m.clone(),
                    value: to_f64(v),
                })
                .collect(),
            tolerances: None,
        };
        (p, cert)
    }

    #[test]
    fn start_reproduces_lift_exactly() {
        let m = SymMatrix::from_i64_rows(&[&[3, -1, 2], &[-1, 4, 0], &[2, 0, 5]]).unwrap();
        let cons = ConeConstraint {
            c: m.scale(&rat(-1)),
            a: vec![],
        };
        let prog = ConicProgram::new(vec![], vec![cons.clone()]).unwrap();
        let p = SymMatrix::from_i64_rows(&[&[3, -1, 0], &[-1, 4, 0], &[0, 0, 3]]).unwrap();
        let w = witness_from_decomposition(&cons, &[], p.clone(), m.sub(&p)).unwrap();
        for kind in [ConeKind::K, ConeKind::Q] {
            for r in 0..3 {
                let rs = build_relaxation_sdp(&prog, r, kind, 1.0).unwrap();
                let st = build_interior_start(&prog, &rs, &[w.clone()]).unwrap();
                let layout = &rs.layouts[0];
                let (poly, cert) = exact_cert(layout, &st.grams[0], &st.scalars[0]);
                assert_eq!(poly, layout.lift(&m), "{:?} r={}", kind, r);
                assert!(st.margin > 0.0);
                assert!(st.r1 > 0.0);
                let _ = certificate_polynomial(&cert).unwrap();
                if kind == ConeKind::Q {
                    let b = &st.shifts[0];
                    assert!(st.scalars[0].iter().all(|c| c >= &(b / rat(2))));
                }
            }
        }
    }
}
