use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

use copo_core::poly::{
    coeff_norm, korda_bound_rhs, monomial_basis, monomials_of_degree, multinomial, polya_lift,
    quadratic_form, quartic_form, ratio, scaled_bound_rhs, LiftKind, MultiIndex, Poly, Rational,
    SymMatrix,
};

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

fn sym_matrix(max_n: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(rational(), n * n).prop_map(move |v| {
            let mut m = SymMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    m.set(i, j, v[i * n + j].clone());
                }
            }
            m
        })
    })
}

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..3, nvars), rational()),
        0..6,
    )
    .prop_map(move |terms| {
        Poly::from_terms(
            nvars,
            terms.into_iter().map(|(e, c)| (MultiIndex::new(e), c)),
        )
    })
}

#[test]
fn multinomials_sum_to_powers() {
    for n in 1..=5usize {
        for d in 0..=6u32 {
            let total: BigUint = monomials_of_degree(n, d).iter().map(multinomial).sum();
            assert_eq!(total, BigUint::from(n).pow(d), "n={} d={}", n, d);
        }
    }
}

#[test]
fn basis_counts() {
    for n in 1..=8u64 {
        for d in 0..=6u64 {
            assert_eq!(
                BigUint::from(monomial_basis(n as usize, d as u32).len()),
                binom(n + d, d)
            );
            assert_eq!(
                BigUint::from(monomials_of_degree(n as usize, d as u32).len()),
                binom(n + d - 1, d)
            );
        }
    }
    assert_eq!(monomials_of_degree(6, 3).len(), 56);
}

#[test]
fn basis_is_graded_lex_sorted() {
    let b = monomial_basis(3, 3);
    assert!(b.windows(2).all(|w| w[0] < w[1]));
    assert!(b.windows(2).all(|w| w[0].degree() <= w[1].degree()));
}

#[test]
fn lift_examples() {
    let mi = |v: &[u32]| MultiIndex::new(v.to_vec());
    let p = quartic_form(&SymMatrix::ones(2));
    let lifted = polya_lift(&p, 1, LiftKind::Quadratic);
    assert_eq!(lifted, Poly::square_sum(2).pow(3));
    let q = Poly::from_terms(2, [(mi(&[1, 1]), Rational::one())]);
    let lifted = polya_lift(&q, 2, LiftKind::Linear);
    let expect = Poly::from_terms(
        2,
        [
            (mi(&[3, 1]), Rational::one()),
            (mi(&[2, 2]), Rational::from_integer(2.into())),
            (mi(&[1, 3]), Rational::one()),
        ],
    );
    assert_eq!(lifted, expect);
}

/// Closed-form corpus: constants, linear forms and `c(Σxᵢ²)^k`.
fn closed_form_corpus() -> Vec<Poly> {
    let mut out = Vec::new();
    for n in 1..=6usize {
        out.push(Poly::constant(n, ratio(-7, 3)));
        let lin = Poly::from_terms(
            n,
            (0..n).map(|i| {
                (
                    MultiIndex::unit(n, i),
                    ratio(if i % 2 == 0 { 2 } else { -1 }, (i + 1) as i64),
                )
            }),
        );
        out.push(lin);
        for k in 1..=4 {
            out.push(Poly::square_sum(n).pow(k).scale(&ratio(3, 2)));
        }
    }
    out
}

#[test]
fn coefficient_bounds_hold_on_closed_forms() {
    for p in closed_form_corpus() {
        let lhs = p.max_abs_coeff();
        let k = korda_bound_rhs(&p);
        assert!(k.sup_exact);
        assert!(lhs <= k.rhs, "box bound fails for {:?}", p);
        let n = p.nvars() as i64;
        if n < 2 {
            continue;
        }
        for r in [ratio(1, 2), ratio(1, 1), ratio(n - 1, 1)] {
            let s = scaled_bound_rhs(&p, &r, 1).unwrap();
            if p.degree() != 1 {
                assert!(s.sup_exact);
            }
            assert!(lhs <= s.rhs, "ball bound fails for {:?} at r = {}", p, r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_composes(p in poly(3), r1 in 0u32..3, r2 in 0u32..3, quad in any::<bool>()) {
        let kind = if quad { LiftKind::Quadratic } else { LiftKind::Linear };
        let once = polya_lift(&p, r1 + r2, kind);
        let twice = polya_lift(&polya_lift(&p, r1, kind), r2, kind);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn quartic_is_quadratic_of_squares(m in sym_matrix(4), seed in proptest::collection::vec(rational(), 4)) {
        let n = m.n();
        let x: Vec<Rational> = seed[..n].to_vec();
        let sq: Vec<Rational> = x.iter().map(|v| v * v).collect();
        prop_assert_eq!(quartic_form(&m).eval(&x), quadratic_form(&m).eval(&sq));
        prop_assert_eq!(quadratic_form(&m).eval(&x), m.quad_eval(&x));
    }

    #[test]
    fn stored_terms_are_nonzero(p in poly(2), q in poly(2)) {
        let d = p.sub(&q).add(&q);
        prop_assert_eq!(&d, &p);
        prop_assert!(d.terms().all(|(a, c)| !c.is_zero() && a.nvars() == 2));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn lift_degree_grows(p in poly(3), r in 0u32..3) {
        prop_assume!(!p.is_zero() && p.is_homogeneous());
        prop_assert_eq!(polya_lift(&p, r, LiftKind::Linear).degree(), p.degree() + r);
        prop_assert_eq!(polya_lift(&p, r, LiftKind::Quadratic).degree(), p.degree() + 2 * r);
    }

    #[test]
    fn coeff_norm_is_below_max_coefficient(p in poly(3)) {
        prop_assert!(coeff_norm(&p) <= p.max_abs_coeff());
    }

    #[test]
    fn multinomial_matches_factorials(e in proptest::collection::vec(0u32..5, 1..4)) {
        let a = MultiIndex::new(e.clone());
        let fact = |k: u32| (1..=k as u64).map(BigInt::from).product::<BigInt>();
        let expect = fact(a.degree()) / e.iter().map(|&k| fact(k)).product::<BigInt>();
        prop_assert_eq!(BigInt::from(multinomial(&a)), expect);
    }
}
