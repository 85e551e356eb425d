//! Coefficient norm and the coefficient-versus-supremum inequalities.
//!
//! The right-hand sides replace the supremum of `|p|` by its exact value
//! when `p` has a recognised closed form (constants, linear forms and
//! `c·(Σxᵢ²)^k`), and otherwise by an interval-arithmetic enclosure, which
//! can only over-estimate. No sampling is ever used: a sampled maximum can
//! under-estimate the supremum.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multi_index::{multinomial, MultiIndex};
use super::polynomial::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// `‖p‖ = max_α |c_α| / (|α| choose α)`; zero for the zero polynomial.
pub fn coeff_norm(p: &Poly) -> Rational {
    p.terms()
        .map(|(a, c)| c.abs() / Rational::from_integer(BigInt::from(multinomial(a))))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// A bound right-hand side together with the supremum it was built from.
#[derive(Clone, Debug)]
pub struct BoundRhs {
    pub rhs: Rational,
    pub sup: Rational,
    /// `true` when `sup` is the exact supremum, `false` for an enclosure.
    pub sup_exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum ClosedForm {
    Constant(Rational),
    Linear(Vec<Rational>),
    /// `c·(Σxᵢ²)^k`
    SquareSumPower(Rational, u32),
}

fn closed_form(p: &Poly) -> Option<ClosedForm> {
    let n = p.nvars();
    if p.is_zero() {
        return Some(ClosedForm::Constant(Rational::zero()));
    }
    if p.degree() == 0 {
        return Some(ClosedForm::Constant(p.coeff(&MultiIndex::zero(n))));
    }
    if p.is_homogeneous() && p.degree() == 1 {
        return Some(ClosedForm::Linear(
            (0..n).map(|i| p.coeff(&MultiIndex::unit(n, i))).collect(),
        ));
    }
    let d = p.degree();
    if p.is_homogeneous() && d % 2 == 0 {
        let k = d / 2;
        let lead = p.coeff(&MultiIndex::unit(n, 0).scale(d));
        if !lead.is_zero() && Poly::square_sum(n).pow(k).scale(&lead) == *p {
            return Some(ClosedForm::SquareSumPower(lead, k));
        }
    }
    None
}

/// Smallest convenient rational `s` with `s ≥ √q`; exact when `q` is a
/// rational square.
pub fn sqrt_upper(q: &Rational) -> Rational {
    assert!(!q.is_negative());
    let (num, den) = (q.numer(), q.denom());
    let (rn, rd) = (num.sqrt(), den.sqrt());
    if &(&rn * &rn) == num && &(&rd * &rd) == den {
        return Rational::new(rn, rd);
    }
    let f = q.to_f64().unwrap_or(f64::MAX).sqrt();
    let mut s = Rational::from_float(f * (1.0 + 1e-12) + f64::MIN_POSITIVE).unwrap();
    let bump = Rational::new(
        BigInt::from(1_000_000_001i64),
        BigInt::from(1_000_000_000i64),
    );
    while &(&s * &s) < q {
        s *= &bump;
    }
    s
}

#[derive(Clone, Debug)]
struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    fn point(v: Rational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: c.iter().max().unwrap().clone(),
        }
    }

    fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            Interval { lo: a, hi: b }
        } else if self.lo.is_negative() && self.hi.is_positive() {
            Interval {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        } else {
            Interval {
                lo: a.clone().min(b.clone()),
                hi: a.max(b),
            }
        }
    }

    fn abs_max(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Interval enclosure of `max |p|` over the cube `[-s, s]^n`, split into
/// `pieces` sub-intervals per axis.
fn interval_sup(p: &Poly, s: &Rational, pieces: usize) -> Rational {
    let n = p.nvars();
    let pieces = pieces.max(1);
    let width = Rational::from_integer(2.into()) * s / Rational::from_integer(pieces.into());
    let cells: Vec<Interval> = (0..pieces)
        .map(|k| {
            let lo = -s.clone() + &width * Rational::from_integer(k.into());
            let hi = &lo + &width;
            Interval { lo, hi }
        })
        .collect();
    let total = pieces.pow(n as u32);
    let mut best = Rational::zero();
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let mut acc = Interval::point(Rational::zero());
        for (a, c) in p.terms() {
            let mut t = Interval::point(c.clone());
            for (i, &e) in a.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&cells[idx[i]].pow(e));
                }
            }
            acc = Interval {
                lo: acc.lo + t.lo,
                hi: acc.hi + t.hi,
            };
        }
        best = best.max(acc.abs_max());
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < pieces {
                break;
            }
            *slot = 0;
        }
    }
    best
}

fn box_sup(p: &Poly) -> (Rational, bool) {
    let n = p.nvars();
    match closed_form(p) {
        Some(ClosedForm::Constant(c)) => (c.abs(), true),
        Some(ClosedForm::Linear(a)) => (a.iter().map(|v| v.abs()).sum(), true),
        Some(ClosedForm::SquareSumPower(c, k)) => (
            c.abs() * num_traits::pow(Rational::from_integer(n.into()), k as usize),
            true,
        ),
        None => (interval_sup(p, &Rational::one(), 1), false),
    }
}

fn ball_sup(p: &Poly, radius_sq: &Rational, pieces: usize) -> (Rational, bool) {
    match closed_form(p) {
        Some(ClosedForm::Constant(c)) => (c.abs(), true),
        Some(ClosedForm::Linear(a)) => {
            let norm_sq: Rational = a.iter().map(|v| v * v).sum::<Rational>() * radius_sq;
            let s = sqrt_upper(&norm_sq);
            let exact = &s * &s == norm_sq;
            (s, exact)
        }
        Some(ClosedForm::SquareSumPower(c, k)) => (
            c.abs() * num_traits::pow(radius_sq.clone(), k as usize),
            true,
        ),
        None => {
            let s = sqrt_upper(radius_sq);
            (interval_sup(p, &s, pieces), false)
        }
    }
}

fn factorial(d: u32) -> Rational {
    Rational::from_integer((1..=d as u64).map(BigInt::from).product::<BigInt>())
}

/// Right-hand side of `max_α |c_α| ≤ 3^{d+1} max_{[-1,1]^n} |p|`.
pub fn korda_bound_rhs(p: &Poly) -> BoundRhs {
    let d = p.degree();
    let (sup, sup_exact) = box_sup(p);
    let three = Rational::from_integer(3.into());
    BoundRhs {
        rhs: num_traits::pow(three, d as usize + 1) * &sup,
        sup,
        sup_exact,
    }
}

/// Right-hand side of
/// `max_α |c_α| ≤ 3^{d+1} d! (n/r)^{d/2} max_{Σxᵢ² ≤ r} |p|`, for `0 < r < n`.
///
/// `samples` is the number of sub-intervals per axis used by the interval
/// enclosure when `p` has no closed-form supremum.
pub fn scaled_bound_rhs(p: &Poly, radius_sq: &Rational, samples: usize) -> Result<BoundRhs> {
    let n = Rational::from_integer(p.nvars().into());
    if !radius_sq.is_positive() || radius_sq >= &n {
        return Err(Error::InvalidArgument(format!(
            "radius {} must satisfy 0 < r < n = {}",
            radius_sq, n
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let d = p.degree();
    let (sup, sup_exact) = ball_sup(p, radius_sq, samples);
    let ratio = &n / radius_sq;
    let mut ratio_pow = num_traits::pow(ratio.clone(), (d / 2) as usize);
    if d % 2 == 1 {
        ratio_pow *= sqrt_upper(&ratio);
    }
    let three = Rational::from_integer(3.into());
    let rhs = num_traits::pow(three, d as usize + 1) * factorial(d) * ratio_pow * &sup;
    Ok(BoundRhs {
        rhs,
        sup,
        sup_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn coeff_norm_examples() {
        assert_eq!(
            coeff_norm(&Poly::from_terms(2, [(mi(&[1, 1]), rat(1))])),
            ratio(1, 2)
        );
        assert_eq!(coeff_norm(&Poly::constant(2, rat(5))), rat(5));
        let p = Poly::from_terms(2, [(mi(&[2, 0]), rat(1)), (mi(&[1, 1]), rat(4))]);
        assert_eq!(coeff_norm(&p), rat(2));
        assert_eq!(coeff_norm(&Poly::zero(3)), rat(0));
    }

    #[test]
    fn korda_examples() {
        let c = korda_bound_rhs(&Poly::constant(2, rat(-4)));
        assert_eq!(c.rhs, rat(12));
        assert!(c.sup_exact);
        let x1 = korda_bound_rhs(&Poly::monomial(mi(&[1, 0]), rat(1)));
        assert_eq!(x1.rhs, rat(9));
    }

    #[test]
    fn scaled_example_square_sum() {
        let p = Poly::square_sum(2);
        let b = scaled_bound_rhs(&p, &rat(1), 1).unwrap();
        assert_eq!(b.rhs, rat(108));
        assert!(b.sup_exact);
        assert!(p.max_abs_coeff() <= b.rhs);
    }

    #[test]
    fn scaled_rejects_radius_out_of_range() {
        let p = Poly::square_sum(2);
        assert!(scaled_bound_rhs(&p, &rat(2), 1).is_err());
        assert!(scaled_bound_rhs(&p, &rat(0), 1).is_err());
    }

    #[test]
    fn sqrt_upper_is_upper() {
        for q in [ratio(2, 1), ratio(5, 3), ratio(9, 4), ratio(1, 7)] {
            let s = sqrt_upper(&q);
            assert!(&s * &s >= q);
        }
        assert_eq!(sqrt_upper(&ratio(9, 4)), ratio(3, 2));
    }

    #[test]
    fn interval_enclosure_dominates_closed_form() {
        // x1*x2 - x1^2 on the unit box: true sup is 2 (at x=(1,-1))
        let p = Poly::from_terms(2, [(mi(&[1, 1]), rat(1)), (mi(&[2, 0]), rat(-1))]);
        let (s, exact) = box_sup(&p);
        assert!(!exact);
        assert!(s >= rat(2));
    }
}
