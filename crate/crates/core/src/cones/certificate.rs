use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::layout::{ConeKind, GramLayout};
use crate::error::{Error, Result};
use crate::poly::{coeff_norm, from_f64, to_f64, MultiIndex, Poly, Rational, SymMatrix};
use crate::sdp::SolverSettings;

/// One Gram matrix of a certificate, row-major over the layout's basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramEntry {
    pub multiplier: MultiIndex,
    pub side: usize,
    pub entries: Vec<f64>,
}

impl GramEntry {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.side, self.side, &self.entries)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarEntry {
    pub monomial: MultiIndex,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateTolerances {
    pub eps: f64,
    pub solver: SolverSettings,
}

/// Sum-of-squares certificate for `M ∈ K^(r)` or `M ∈ Q^(r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SosCertificate {
    pub kind: ConeKind,
    pub level: u32,
    pub n: usize,
    pub grams: Vec<GramEntry>,
    #[serde(default)]
    pub scalars: Vec<ScalarEntry>,
    pub tolerances: Option<CertificateTolerances>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Coefficient norm of (lifted polynomial − certificate expansion).
    pub residual: f64,
    pub min_gram_eigenvalue: f64,
    /// Smallest scalar `c_β`; `+∞` when there are none.
    pub min_scalar: f64,
    /// Largest absolute certificate entry.
    pub max_entry: f64,
    /// `log2` of `max_entry`.
    pub max_entry_bits: f64,
    pub tol: f64,
    pub passed: bool,
}

fn check_shape(layout: &GramLayout, cert: &SosCertificate) -> Result<()> {
    if cert.grams.len() != layout.grams.len() {
        return Err(Error::Dimension(format!(
            "certificate has {} Gram blocks, expected {}",
            cert.grams.len(),
            layout.grams.len()
        )));
    }
    for (g, spec) in cert.grams.iter().zip(&layout.grams) {
        if g.multiplier != spec.multiplier
            || g.side != spec.basis.len()
            || g.entries.len() != g.side * g.side
        {
            return Err(Error::Dimension(format!(
                "Gram block for multiplier {:?} has the wrong shape",
                g.multiplier
            )));
        }
    }
    if cert.scalars.len() != layout.scalars.len()
        || cert
            .scalars
            .iter()
            .zip(&layout.scalars)
            .any(|(s, m)| &s.monomial != m)
    {
        return Err(Error::Dimension(
            "certificate scalars do not match the layout".into(),
        ));
    }
    if cert
        .grams
        .iter()
        .flat_map(|g| g.entries.iter())
        .chain(cert.scalars.iter().map(|s| &s.value))
        .any(|v| !v.is_finite())
    {
        return Err(Error::InvalidArgument(
            "certificate has non-finite entries".into(),
        ));
    }
    Ok(())
}

/// Exact expansion `Σ x^β [basis]^T G_β [basis] + Σ c_β x^β` of a certificate.
pub fn certificate_polynomial(cert: &SosCertificate) -> Result<Poly> {
    let layout = GramLayout::new(cert.kind, cert.n, cert.level)?;
    check_shape(&layout, cert)?;
    let mut p = Poly::zero(cert.n);
    for (g, spec) in cert.grams.iter().zip(&layout.grams) {
        let k = g.side;
        for i in 0..k {
            let mi = spec.multiplier.add(&spec.basis[i]);
            for j in 0..k {
                let v = g.entries[i * k + j];
                if v != 0.0 {
                    p.add_term(mi.add(&spec.basis[j]), from_f64(v));
                }
            }
        }
    }
    for s in &cert.scalars {
        if s.value != 0.0 {
            p.add_term(s.monomial.clone(), from_f64(s.value));
        }
    }
    Ok(p)
}

pub fn validate_certificate(
    m: &SymMatrix,
    cert: &SosCertificate,
    tol: f64,
) -> Result<ValidationReport> {
    if m.n() != cert.n {
        return Err(Error::Dimension(format!(
            "matrix side {} but certificate n = {}",
            m.n(),
            cert.n
        )));
    }
    let layout = GramLayout::new(cert.kind, cert.n, cert.level)?;
    check_shape(&layout, cert)?;
    let target = layout.lift(m);
    let expansion = certificate_polynomial(cert)?;
    let residual: Rational = coeff_norm(&target.sub(&expansion));
    let residual = to_f64(&residual);
    let min_gram_eigenvalue = cert
        .grams
        .iter()
        .map(|g| {
            let a = g.matrix();
            let sym = (&a + a.transpose()) * 0.5;
            if g.side == 0 {
                f64::INFINITY
            } else {
                sym.symmetric_eigenvalues().min()
            }
        })
        .fold(f64::INFINITY, f64::min);
    let min_scalar = cert
        .scalars
        .iter()
        .map(|s| s.value)
        .fold(f64::INFINITY, f64::min);
    let max_entry = cert
        .grams
        .iter()
        .flat_map(|g| g.entries.iter().copied())
        .chain(cert.scalars.iter().map(|s| s.value))
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let passed = residual <= tol && min_gram_eigenvalue >= -tol && min_scalar >= -tol;
    Ok(ValidationReport {
        residual,
        min_gram_eigenvalue,
        min_scalar,
        max_entry,
        max_entry_bits: if max_entry > 0.0 {
            max_entry.log2()
        } else {
            f64::NEG_INFINITY
        },
        tol,
        passed,
    })
}

/// Exact check that the certificate reproduces the lifted polynomial.
pub fn is_exact(m: &SymMatrix, cert: &SosCertificate) -> Result<bool> {
    let layout = GramLayout::new(cert.kind, cert.n, cert.level)?;
    let diff = layout.lift(m).sub(&certificate_polynomial(cert)?);
    Ok(diff.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_cert(n: usize) -> SosCertificate {
        // x∘x^T I x∘x = Σ xᵢ⁴ = Σ (xᵢ²)²: diagonal Gram on the squares
        let layout = GramLayout::new(ConeKind::K, n, 0).unwrap();
        let basis = &layout.grams[0].basis;
        let k = basis.len();
        let mut entries = vec![0.0; k * k];
        for (i, b) in basis.iter().enumerate() {
            if b.exponents().contains(&2) {
                entries[i * k + i] = 1.0;
            }
        }
        SosCertificate {
            kind: ConeKind::K,
            level: 0,
            n,
            grams: vec![GramEntry {
                multiplier: MultiIndex::zero(n),
                side: k,
                entries,
            }],
            scalars: vec![],
            tolerances: None,
        }
    }

    #[test]
    fn identity_certificate_is_exact() {
        let m = SymMatrix::identity(3);
        let cert = identity_cert(3);
        let rep = validate_certificate(&m, &cert, 1e-9).unwrap();
        assert_eq!(rep.residual, 0.0);
        assert!(rep.passed);
        assert!(is_exact(&m, &cert).unwrap());
    }

    #[test]
    fn perturbation_is_flagged() {
        let m = SymMatrix::identity(3);
        let mut cert = identity_cert(3);
        cert.grams[0].entries[1] += 0.1;
        let rep = validate_certificate(&m, &cert, 1e-3).unwrap();
        // entry (0,1) pairs x1^2 with x1x2: monomial x1^3 x2 has multinomial 4
        assert!(rep.residual >= 0.1 / 4.0 - 1e-12);
        assert!(!rep.passed);
    }

    #[test]
    fn dimension_mismatch() {
        let cert = identity_cert(3);
        assert!(validate_certificate(&SymMatrix::identity(2), &cert, 1e-9).is_err());
        let mut bad = cert.clone();
        bad.grams[0].entries.pop();
        assert!(validate_certificate(&SymMatrix::identity(3), &bad, 1e-9).is_err());
    }
}
