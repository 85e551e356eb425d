use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial `x^α`.
///
/// Ordering is graded lexicographic: total degree first, then, within a
/// degree, the vector with the larger leading exponent sorts first. Under
/// this order the degree-one monomials of two variables come out as
/// `x₁, x₂`, i.e. `(1,0) < (0,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The exponent vector of the single variable `x_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|α| = α₁ + … + αₙ`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.nvars(), other.nvars());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `α + e_i + e_j`.
    pub fn add_pair(&self, i: usize, j: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[i] += 1;
        e[j] += 1;
        MultiIndex(e)
    }

    pub fn scale(&self, k: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `self - other`, or `None` if some component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }

    /// `α/2` for an even multi-index.
    pub fn halve(&self) -> Option<MultiIndex> {
        if self.is_even() {
            Some(MultiIndex(self.0.iter().map(|a| a / 2).collect()))
        } else {
            None
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// `|α|! / (α₁!·…·αₙ!)`, computed as a product of binomials.
pub fn multinomial(alpha: &MultiIndex) -> BigUint {
    let mut acc = BigUint::one();
    let mut partial = 0u32;
    for &a in alpha.exponents() {
        partial += a;
        acc *= num_integer::binomial(BigUint::from(partial), BigUint::from(a));
    }
    acc
}

/// All multi-indices of exactly degree `d` in `n` variables, in graded
/// lexicographic order. The count is `binom(n+d-1, d)`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    let mut cur = vec![0u32; n];
    fill_degree(&mut cur, 0, d, &mut out);
    out
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        cur[pos] = a;
        fill_degree(cur, pos + 1, remaining - a, out);
    }
    cur[pos] = 0;
}

/// All multi-indices with `|α| ≤ d`, graded lexicographic. The count is
/// `binom(n+d, d)`.
pub fn monomial_basis(n: usize, d: u32) -> Vec<MultiIndex> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        num_integer::binomial(n, k)
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(
            multinomial(&MultiIndex::new(vec![0, 0])),
            BigUint::from(1u32)
        );
        assert_eq!(
            multinomial(&MultiIndex::new(vec![1, 1])),
            BigUint::from(2u32)
        );
        assert_eq!(
            multinomial(&MultiIndex::new(vec![2, 1, 1])),
            BigUint::from(12u32)
        );
    }

    #[test]
    fn basis_order_and_counts() {
        let b = monomial_basis(2, 1);
        assert_eq!(
            b,
            vec![
                MultiIndex::new(vec![0, 0]),
                MultiIndex::new(vec![1, 0]),
                MultiIndex::new(vec![0, 1])
            ]
        );
        assert_eq!(monomials_of_degree(6, 3).len(), 56);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        for n in 1..=8usize {
            for d in 0..=6u32 {
                let exact = monomials_of_degree(n, d);
                assert_eq!(exact.len() as u64, binom(n as u64 + d as u64 - 1, d as u64));
                assert!(exact.windows(2).all(|w| w[0] < w[1]));
                let all = monomial_basis(n, d);
                assert_eq!(all.len() as u64, binom(n as u64 + d as u64, d as u64));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn multinomials_sum_to_power() {
        for n in 1..=5usize {
            for d in 0..=6u32 {
                let total: BigUint = monomials_of_degree(n, d).iter().map(multinomial).sum();
                assert_eq!(total, BigUint::from(n).pow(d));
            }
        }
    }

    #[test]
    fn halve_and_sub() {
        let a = MultiIndex::new(vec![2, 0, 4]);
        assert_eq!(a.halve(), Some(MultiIndex::new(vec![1, 0, 2])));
        assert_eq!(MultiIndex::new(vec![1, 0]).halve(), None);
        assert_eq!(a.checked_sub(&MultiIndex::new(vec![0, 1, 0])), None);
    }
}
