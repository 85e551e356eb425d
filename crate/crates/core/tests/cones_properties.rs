use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use copo_core::cones::{
    build_k_membership, build_membership, build_q_membership, decide_membership,
    validate_certificate, ConeKind, Verdict,
};
use copo_core::pathology::{c5_matrix, c5_padded_matrix};
use copo_core::poly::{rat, ratio, SymMatrix};

const EPS: f64 = 1e-6;

/// `M = BBᵀ + I + N` with small integer `B` and `N ≥ 0`.
fn planted_spn(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    let k = rng.random_range(1..=n);
    let b: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..k).map(|_| rng.random_range(-3..=3)).collect())
        .collect();
    let mut m = SymMatrix::identity(n);
    for i in 0..n {
        for j in i..n {
            let p: i64 = (0..k).map(|t| b[i][t] * b[j][t]).sum();
            let nn = if rng.random_bool(0.5) {
                rng.random_range(0..=3)
            } else {
                0
            };
            m.set(i, j, m.get(i, j) + rat(p + if i == j { 0 } else { nn }));
        }
    }
    m
}

fn verdict(kind: ConeKind, m: &SymMatrix, r: u32) -> Verdict {
    decide_membership(&build_membership(kind, m, r).unwrap(), EPS).verdict
}

#[test]
fn spn_corpus_is_member_at_level_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..200 {
        let n = 2 + t % 4;
        let m = planted_spn(&mut rng, n);
        for kind in [ConeKind::K, ConeKind::Q] {
            let out = decide_membership(&build_membership(kind, &m, 0).unwrap(), EPS);
            assert_eq!(
                out.verdict,
                Verdict::Member,
                "instance {} kind {}: {:?}",
                t,
                kind,
                out.solver
            );
            let cert = out.certificate.unwrap();
            let rep = validate_certificate(&m, &cert, 10.0 * EPS).unwrap();
            assert!(rep.passed, "instance {}: {:?}", t, rep);
        }
    }
}

fn decided_corpus() -> Vec<(SymMatrix, Verdict)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out: Vec<(SymMatrix, Verdict)> = (0..6)
        .map(|i| (planted_spn(&mut rng, 2 + i % 3), Verdict::Member))
        .collect();
    out.push((
        SymMatrix::from_i64_rows(&[&[0, -1], &[-1, 0]]).unwrap(),
        Verdict::NotMember,
    ));
    out.push((SymMatrix::identity(3).scale(&rat(-1)), Verdict::NotMember));
    out.push((c5_matrix(), Verdict::NotMember));
    out
}

#[test]
fn membership_is_scale_invariant() {
    for (m, expect) in decided_corpus() {
        for kind in [ConeKind::K, ConeKind::Q] {
            assert_eq!(verdict(kind, &m, 0), expect);
            for c in [ratio(1, 3), rat(7)] {
                assert_eq!(
                    verdict(kind, &m.scale(&c), 0),
                    expect,
                    "scaling by {} changed the verdict",
                    c
                );
            }
        }
    }
}

#[test]
fn k_levels_are_nested_and_q_is_contained_in_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut corpus: Vec<SymMatrix> = (0..8).map(|i| planted_spn(&mut rng, 2 + i % 3)).collect();
    corpus.push(c5_matrix());
    // a copositive matrix outside SPN scaled towards the identity
    corpus.push(c5_matrix().add(&SymMatrix::identity(5).scale(&ratio(1, 10))));
    for m in &corpus {
        if verdict(ConeKind::K, m, 0) == Verdict::Member {
            assert_eq!(verdict(ConeKind::K, m, 1), Verdict::Member);
        }
        for r in [0, 1] {
            if verdict(ConeKind::Q, m, r) == Verdict::Member {
                assert_eq!(verdict(ConeKind::K, m, r), Verdict::Member);
            }
        }
    }
}

#[test]
fn small_examples() {
    assert_eq!(
        verdict(ConeKind::K, &SymMatrix::from_i64_rows(&[&[-1]]).unwrap(), 0),
        Verdict::NotMember
    );
    assert_eq!(
        verdict(
            ConeKind::Q,
            &SymMatrix::from_i64_rows(&[&[0, -1], &[-1, 0]]).unwrap(),
            0
        ),
        Verdict::NotMember
    );
    assert_eq!(
        verdict(ConeKind::Q, &SymMatrix::identity(3).scale(&rat(-1)), 2),
        Verdict::NotMember
    );
    for n in 1..=4 {
        for r in 0..=2 {
            assert_eq!(
                verdict(ConeKind::K, &SymMatrix::identity(n), r),
                Verdict::Member
            );
        }
    }
}

#[test]
fn i_plus_j_round_trip_at_level_one() {
    let m = SymMatrix::identity(4).add(&SymMatrix::ones(4));
    let out = decide_membership(&build_k_membership(&m, 1).unwrap(), EPS);
    assert_eq!(out.verdict, Verdict::Member);
    let rep = validate_certificate(&m, out.certificate.as_ref().unwrap(), EPS).unwrap();
    assert!(rep.residual <= 1e-6);
}

#[test]
fn padded_c5_matrix_is_not_member() {
    let m = c5_padded_matrix();
    for r in [0, 1] {
        assert_eq!(
            verdict(ConeKind::K, &m, r),
            Verdict::NotMember,
            "K level {}",
            r
        );
        assert_eq!(
            verdict(ConeKind::Q, &m, r),
            Verdict::NotMember,
            "Q level {}",
            r
        );
    }
    assert_eq!(verdict(ConeKind::K, &c5_matrix(), 0), Verdict::NotMember);
}

#[test]
fn horn_matrix_needs_one_level() {
    // 2(A+I) − J on the 5-cycle is the Horn matrix after the relabelling i ↦ 2i mod 5,
    // which is outside SPN and inside K^(1)
    let m = c5_matrix();
    let mut horn = SymMatrix::zeros(5);
    for i in 0..5 {
        for j in 0..5 {
            horn.set(i, j, m.get((2 * i) % 5, (2 * j) % 5).clone());
        }
    }
    for i in 0..5 {
        assert_eq!(horn.get(i, (i + 1) % 5), &rat(-1));
        assert_eq!(horn.get(i, (i + 2) % 5), &rat(1));
    }
    assert_eq!(verdict(ConeKind::K, &m, 1), Verdict::Member);
    assert_eq!(verdict(ConeKind::K, &horn, 1), Verdict::Member);
}

#[test]
fn q_layout_sizes() {
    let m = SymMatrix::identity(4);
    for r in 0..=2u32 {
        let p = build_q_membership(&m, r).unwrap();
        let grams = p.layout.grams.len() as u64;
        let expect =
            |n: u64, k: u64| -> u64 { (0..k).fold(1u64, |acc, i| acc * (n + i) / (i + 1)) };
        assert_eq!(grams, expect(4, r as u64));
        assert_eq!(p.layout.scalars.len() as u64, expect(4, r as u64 + 2));
    }
}
