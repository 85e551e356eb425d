//! Copositive programs whose relaxations misbehave without boundedness or
//! interiority assumptions, with exact verifiers for their necessary conditions.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::apps::ms_matrix;
use crate::apps::Graph;
use crate::error::{Error, Result};
use crate::poly::{rat, ratio, Rational, SymMatrix};
use crate::relax::{ConeConstraint, ConicProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathologyKind {
    Ex1,
    Ex2,
    Ex3,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

fn fact(name: &str, value: impl ToString) -> Fact {
    Fact {
        name: name.into(),
        value: value.to_string(),
    }
}

#[derive(Clone, Debug)]
pub struct PathologyInstance {
    pub kind: PathologyKind,
    pub n: usize,
    pub program: ConicProgram,
    pub variables: Vec<String>,
    pub optimal_value: Rational,
    pub facts: Vec<Fact>,
}

/// `2(A_{C5} + I) − J`
pub fn c5_matrix() -> SymMatrix {
    let b = ms_matrix(&Graph::cycle(5));
    b.scale(&rat(2)).sub(&SymMatrix::ones(5))
}

fn unit(side: usize, i: usize, j: usize, v: Rational) -> SymMatrix {
    let mut m = SymMatrix::zeros(side);
    m.set(i, j, v);
    m
}

/// `min { yₙ : M_y ∈ COP_{2n−1} }` with
/// `M_y = [[y₁, −y₂], [−y₂, 1]] ⊕ … ⊕ [[y_{n−1}, −yₙ], [−yₙ, 1]] ⊕ [yₙ − 2]`.
pub fn khachiyan_cp(n: usize) -> Result<PathologyInstance> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let side = 2 * n - 1;
    let mut a = vec![SymMatrix::zeros(side); n];
    for (i, ai) in a.iter_mut().enumerate() {
        let pos = 2 * i;
        *ai = ai.add(&unit(side, pos, pos, rat(1)));
        if i >= 1 {
            *ai = ai.add(&unit(side, 2 * (i - 1), 2 * (i - 1) + 1, rat(-1)));
        }
    }
    let mut c = SymMatrix::zeros(side);
    for i in 0..n - 1 {
        c.set(2 * i + 1, 2 * i + 1, rat(-1));
    }
    c.set(side - 1, side - 1, rat(2));
    let mut b = vec![rat(0); n];
    b[n - 1] = rat(1);
    let program = ConicProgram::new(b, vec![ConeConstraint { c, a }])?;
    Ok(PathologyInstance {
        kind: PathologyKind::Ex1,
        n,
        program,
        variables: (1..=n).map(|i| format!("y{}", i)).collect(),
        optimal_value: rat(2),
        facts: vec![
            fact("optimal_value", 2),
            fact(
                "feasible_point",
                format!("y_i = 2^(2^(n-i)), y_1 = {}", ex1_growth_bound(n)),
            ),
            fact("y1_lower_bound", ex1_growth_bound(n)),
        ],
    })
}

/// `2^{2^{n−1}}`
pub fn ex1_growth_bound(n: usize) -> BigInt {
    BigInt::from(2).pow(1u32 << (n - 1))
}

/// `yᵢ = 2^{2^{n−i}}`
pub fn ex1_pattern(n: usize) -> Vec<Rational> {
    (1..=n)
        .map(|i| Rational::from_integer(BigInt::from(2).pow(1u32 << (n - i))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Check {
    Accept,
    /// `block` is 1-based, in the order the blocks appear in the matrix.
    Reject {
        block: usize,
        reason: String,
    },
}

impl Check {
    pub fn accepted(&self) -> bool {
        matches!(self, Check::Accept)
    }
}

fn reject(block: usize, reason: impl Into<String>) -> Check {
    Check::Reject {
        block,
        reason: reason.into(),
    }
}

/// `yᵢ ≥ 0`, `yₙ ≥ 2` and `yᵢ ≥ y²ᵢ₊₁` (the value of the `i`-th block at
/// `(1, yᵢ₊₁)`).
pub fn verify_ex1_necessary(y: &[Rational]) -> Check {
    let n = y.len();
    if n < 2 {
        return reject(1, "need n ≥ 2");
    }
    for i in 0..n - 1 {
        if y[i].is_negative() {
            return reject(i + 1, format!("y{} < 0", i + 1));
        }
        if y[i] < &y[i + 1] * &y[i + 1] {
            return reject(i + 1, format!("y{} < y{}^2", i + 1, i + 2));
        }
    }
    if y[n - 1] < rat(2) {
        return reject(n, format!("y{} < 2", n));
    }
    Check::Accept
}

/// `min { y : M₁ ⊕ [y] ∈ COP₇ }` with `M₁ = (2(A_{C5}+I) − J) ⊕ 0`.
pub fn c5_padded_cp() -> PathologyInstance {
    let m1 = c5_matrix().pad_to(6);
    let c = m1.pad_to(7).scale(&rat(-1));
    let a = unit(7, 6, 6, rat(1));
    let program = ConicProgram::new(vec![rat(1)], vec![ConeConstraint { c, a: vec![a] }])
        .expect("well-formed");
    PathologyInstance {
        kind: PathologyKind::Ex2,
        n: 7,
        program,
        variables: vec!["y".into()],
        optimal_value: rat(0),
        facts: vec![
            fact("optimal_value", 0),
            fact("relaxations", "infeasible at every level"),
        ],
    }
}

/// The padded 6×6 matrix `M₁`.
pub fn c5_padded_matrix() -> SymMatrix {
    c5_matrix().pad_to(6)
}

/// Variable order `(w, y₁, …, yₙ, z)`, minimising `z + w` subject to
/// `(z(A_{C5}+I) − J) ⊕ M̃_{wyz} ⊕ [w − 2] ∈ COP_{2n+6}`.
pub fn ex3_cp(n: usize) -> Result<PathologyInstance> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let side = 2 * n + 6;
    let m = n + 2;
    let (wi, zi) = (0, n + 1);
    let yi = |i: usize| i + 1;
    let mut a = vec![SymMatrix::zeros(side); m];
    let mut c = SymMatrix::zeros(side);
    let b5 = ms_matrix(&Graph::cycle(5));
    for i in 0..5 {
        for j in 0..5 {
            a[zi].set(i, j, b5.get(i, j).clone());
            c.set(i, j, rat(1));
        }
    }
    let off = 5;
    for k in 0..n {
        let (p, q) = (off + 2 * k, off + 2 * k + 1);
        a[yi(k)].set(p, p, rat(1));
        c.set(q, q, rat(-1));
        if k + 1 < n {
            a[yi(k + 1)].set(p, q, ratio(-2, 3));
        } else {
            a[zi].set(p, q, ratio(-40, 3));
            a[wi].set(p, q, ratio(40, 3));
        }
    }
    a[wi].set(side - 1, side - 1, rat(1));
    c.set(side - 1, side - 1, rat(2));
    let mut b = vec![rat(0); m];
    b[wi] = rat(1);
    b[zi] = rat(1);
    let program = ConicProgram::new(b, vec![ConeConstraint { c, a }])?;
    let mut variables = vec!["w".to_string()];
    variables.extend((1..=n).map(|i| format!("y{}", i)));
    variables.push("z".into());
    Ok(PathologyInstance {
        kind: PathologyKind::Ex3,
        n,
        program,
        variables,
        optimal_value: rat(4),
        facts: vec![
            fact("optimal_value", 4),
            fact("optimal_point", "z = w = 2, y = 0"),
            fact("level0_value", "2 + sqrt(5)"),
            fact("level0_y1_lower_bound", ex3_min_y1(n)),
            fact("interior_point", "z = 121/20, w = 6, y = 1"),
        ],
    })
}

/// Packs `(w, y, z)` in the variable order of [`ex3_cp`].
pub fn ex3_point(w: &Rational, y: &[Rational], z: &Rational) -> Vec<Rational> {
    let mut v = vec![w.clone()];
    v.extend(y.iter().cloned());
    v.push(z.clone());
    v
}

/// Smallest `y₁` allowed by `yₙ ≥ 9` and `3yᵢ ≥ y²ᵢ₊₁`: `3^{2^{n−1}+1}`.
pub fn ex3_min_y1(n: usize) -> BigInt {
    BigInt::from(3).pow((1u32 << (n - 1)) + 1)
}

/// `yₙ = 9`, `yᵢ = y²ᵢ₊₁/3`
pub fn ex3_pattern(n: usize) -> Vec<Rational> {
    let mut y = vec![rat(9); n];
    for i in (0..n - 1).rev() {
        y[i] = &y[i + 1] * &y[i + 1] / rat(3);
    }
    y
}

/// Necessary conditions on optimal points of the level-0 relaxation:
/// `z ≥ √5 − tol`, `w ≥ 2`, `yₙ ≥ 9` and `3yᵢ ≥ y²ᵢ₊₁`.
///
/// Blocks are numbered: 1 for the `C5` block, `1 + i` for the `i`-th 2×2
/// block, `n + 2` for `[w − 2]`.
pub fn verify_ex3_necessary(w: &Rational, y: &[Rational], z: &Rational, tol: &Rational) -> Check {
    let n = y.len();
    if n < 2 {
        return reject(2, "need n ≥ 2");
    }
    let zt = z + tol;
    if zt.is_negative() || &zt * &zt < rat(5) {
        return reject(1, "z < sqrt(5) - tol");
    }
    for i in 0..n - 1 {
        if rat(3) * &y[i] < &y[i + 1] * &y[i + 1] {
            return reject(i + 2, format!("3 y{} < y{}^2", i + 1, i + 2));
        }
    }
    if y[n - 1] < rat(9) {
        return reject(n + 1, format!("y{} < 9", n));
    }
    if w < &rat(2) {
        return reject(n + 2, "w < 2");
    }
    Check::Accept
}

/// `[[a, b], [b, c]]` is copositive iff `a, c ≥ 0` and `b ≥ 0` or `b² ≤ ac`.
fn copositive_2x2(a: &Rational, b: &Rational, c: &Rational) -> bool {
    !a.is_negative() && !c.is_negative() && (!b.is_negative() || b * b <= a * c)
}

/// Exact copositivity of the matrix of [`ex3_cp`] at `(w, y, z)`; the `C5`
/// block `z(A+I) − J` is copositive iff `z ≥ 2`.
pub fn verify_ex3_cop(w: &Rational, y: &[Rational], z: &Rational) -> Check {
    let n = y.len();
    if n < 2 {
        return reject(2, "need n ≥ 2");
    }
    if z < &rat(2) {
        return reject(1, "z < 2");
    }
    for i in 0..n {
        let off = if i + 1 < n {
            ratio(-2, 3) * &y[i + 1]
        } else {
            ratio(-40, 3) * (z - w)
        };
        if !copositive_2x2(&y[i], &off, &Rational::one()) {
            return reject(i + 2, format!("block {} is not copositive", i + 1));
        }
    }
    if w < &rat(2) {
        return reject(n + 2, "w < 2");
    }
    Check::Accept
}
