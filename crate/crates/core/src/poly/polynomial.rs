use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::multi_index::MultiIndex;
use super::Rational;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by [`MultiIndex`] and kept in graded lexicographic
/// order; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

/// Which Pólya multiplier a lift uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    /// `(Σ xᵢ)^r`
    Linear,
    /// `(Σ xᵢ²)^r`
    Quadratic,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "polynomials need at least one variable");
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn monomial(alpha: MultiIndex, c: Rational) -> Self {
        let mut p = Poly::zero(alpha.nvars());
        p.add_term(alpha, c);
        p
    }

    /// `Σᵢ xᵢ`
    pub fn linear_sum(nvars: usize) -> Self {
        let mut p = Poly::zero(nvars);
        for i in 0..nvars {
            p.add_term(MultiIndex::unit(nvars, i), Rational::one());
        }
        p
    }

    /// `Σᵢ xᵢ²`
    pub fn square_sum(nvars: usize) -> Self {
        let mut p = Poly::zero(nvars);
        for i in 0..nvars {
            p.add_term(MultiIndex::unit(nvars, i).scale(2), Rational::one());
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = Poly::zero(nvars);
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(MultiIndex::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Adds `c·x^α`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        assert_eq!(alpha.nvars(), self.nvars, "multi-index length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a.add(b), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut total = Rational::zero();
        for (a, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(a.exponents()) {
                if e > 0 {
                    term *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            total += term;
        }
        total
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(a, c)| {
                let mut t = super::to_f64(c);
                for (xi, &e) in x.iter().zip(a.exponents()) {
                    t *= xi.powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// `max_α |c_α|`
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &e) in a.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Multiplies `p` by `(Σxᵢ)^r` or `(Σxᵢ²)^r`.
pub fn polya_lift(p: &Poly, r: u32, kind: LiftKind) -> Poly {
    let factor = match kind {
        LiftKind::Linear => Poly::linear_sum(p.nvars()),
        LiftKind::Quadratic => Poly::square_sum(p.nvars()),
    };
    let mut out = p.clone();
    for _ in 0..r {
        out = out.mul(&factor);
    }
    out
}
