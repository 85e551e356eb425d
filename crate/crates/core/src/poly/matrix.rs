use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use super::multi_index::MultiIndex;
use super::polynomial::Poly;
use super::{to_f64, Rational};
use crate::error::{Error, Result};

/// Dense symmetric matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        SymMatrix {
            n,
            entries: vec![Rational::one(); n * n],
        }
    }

    pub fn diag(d: &[Rational]) -> Self {
        let n = d.len();
        let mut m = SymMatrix::zeros(n);
        for (i, v) in d.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    /// Builds from rows, rejecting ragged or asymmetric input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            entries.extend(row);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { n, entries })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        SymMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    /// Exact conversion of a symmetric float matrix (each `f64` is a dyadic rational).
    pub fn from_f64(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                let q = Rational::from_float(v)
                    .ok_or_else(|| Error::InvalidArgument("non-finite matrix entry".into()))?;
                out.set(i, j, q);
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    /// Sets `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v.clone();
        self.entries[j * self.n + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .take(self.n)
            .collect()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> SymMatrix {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// `self ⊕ other`
    pub fn direct_sum(&self, other: &SymMatrix) -> SymMatrix {
        let n = self.n + other.n;
        let mut m = SymMatrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i * n + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.entries[(self.n + i) * n + self.n + j] = other.get(i, j).clone();
            }
        }
        m
    }

    /// Places `self` in the top-left corner of a zero `size × size` matrix.
    pub fn pad_to(&self, size: usize) -> SymMatrix {
        assert!(size >= self.n);
        self.direct_sum(&SymMatrix::zeros(size - self.n))
    }

    pub fn max_abs(&self) -> Rational {
        self.entries
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| to_f64(self.get(i, j)))
    }

    /// `x^T M x` for a rational point.
    pub fn quad_eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.n);
        let mut total = Rational::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                total += self.get(i, j) * &x[i] * &x[j];
            }
        }
        total
    }

    /// Smallest eigenvalue computed in floating point.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        self.to_f64().symmetric_eigenvalues().min()
    }
}

/// `Σ M_ij xᵢ xⱼ`
pub fn quadratic_form(m: &SymMatrix) -> Poly {
    let n = m.n();
    let mut p = Poly::zero(n.max(1));
    let zero = MultiIndex::zero(n);
    for i in 0..n {
        for j in 0..n {
            p.add_term(zero.add_pair(i, j), m.get(i, j).clone());
        }
    }
    p
}

/// `Σ M_ij xᵢ² xⱼ²`
pub fn quartic_form(m: &SymMatrix) -> Poly {
    let n = m.n();
    let mut p = Poly::zero(n.max(1));
    let zero = MultiIndex::zero(n);
    for i in 0..n {
        for j in 0..n {
            p.add_term(zero.add_pair(i, j).add_pair(i, j), m.get(i, j).clone());
        }
    }
    p
}
