use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{rat, Rational, SymMatrix};

/// One cone constraint `Σ yᵢ Aᵢ − C ∈ cone`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeConstraint {
    pub c: SymMatrix,
    pub a: Vec<SymMatrix>,
}

impl ConeConstraint {
    pub fn n(&self) -> usize {
        self.c.n()
    }

    /// `Σ yᵢ Aᵢ − C`
    pub fn slack(&self, y: &[Rational]) -> SymMatrix {
        let mut out = self.c.scale(&rat(-1));
        for (ai, yi) in self.a.iter().zip(y) {
            if !yi.is_zero() {
                out = out.add(&ai.scale(yi));
            }
        }
        out
    }
}

/// `min { b^T y : Σ yᵢ A⁽ᶜ⁾ᵢ − C⁽ᶜ⁾ ∈ COP for every constraint c }`
#[derive(Clone, Debug, PartialEq)]
pub struct ConicProgram {
    pub m: usize,
    pub b: Vec<Rational>,
    pub constraints: Vec<ConeConstraint>,
}

impl ConicProgram {
    pub fn new(b: Vec<Rational>, constraints: Vec<ConeConstraint>) -> Result<Self> {
        let m = b.len();
        if constraints.is_empty() {
            return Err(Error::InvalidArgument(
                "a program needs at least one cone constraint".into(),
            ));
        }
        for (k, c) in constraints.iter().enumerate() {
            if c.n() == 0 {
                return Err(Error::Dimension(format!("constraint {} has side 0", k)));
            }
            if c.a.len() != m {
                return Err(Error::Dimension(format!(
                    "constraint {} has {} matrices A_i, expected m = {}",
                    k,
                    c.a.len(),
                    m
                )));
            }
            if let Some(i) = c.a.iter().position(|a| a.n() != c.n()) {
                return Err(Error::Dimension(format!(
                    "constraint {}: A_{} has side {}, C has side {}",
                    k,
                    i + 1,
                    c.a[i].n(),
                    c.n()
                )));
            }
        }
        Ok(ConicProgram { m, b, constraints })
    }

    pub fn objective(&self, y: &[Rational]) -> Rational {
        self.b.iter().zip(y).map(|(b, y)| b * y).sum()
    }
}

/// Appends the box diagonal to every constraint: `Āᵢ = Aᵢ ⊕ diag(…, −1, +1, …)`
/// at positions `(2i, 2i+1)` and `C̄ = C ⊕ (−2R)·I_{2m}`, so that the slack
/// gains `Diag(2R − y₁, 2R + y₁, …, 2R − y_m, 2R + y_m)`.
pub fn to_bounded(prog: &ConicProgram, r_box: &Rational) -> ConicProgram {
    let m = prog.m;
    let constraints = prog
        .constraints
        .iter()
        .map(|c| {
            let a =
                c.a.iter()
                    .enumerate()
                    .map(|(i, ai)| {
                        let mut d = vec![Rational::zero(); 2 * m];
                        d[2 * i] = rat(-1);
                        d[2 * i + 1] = rat(1);
                        ai.direct_sum(&SymMatrix::diag(&d))
                    })
                    .collect();
            let cbar =
                c.c.direct_sum(&SymMatrix::diag(&vec![-r_box.clone() * rat(2); 2 * m]));
            ConeConstraint { c: cbar, a }
        })
        .collect();
    ConicProgram {
        m,
        b: prog.b.clone(),
        constraints,
    }
}
