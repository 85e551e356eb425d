use serde::Serialize;

use super::graph::{product_graph, Graph};
use super::sqp::AppBound;
use crate::cones::ConeKind;
use crate::error::{Error, Result};
use crate::poly::{rat, to_f64, Rational, SymMatrix};
use crate::relax::{
    solve_relaxation, to_bounded, witness_from_decomposition, ConeConstraint, ConicProgram,
    SpnWitness,
};

fn adjacency(g: &Graph) -> SymMatrix {
    let mut a = SymMatrix::zeros(g.n());
    for (i, j) in g.edges() {
        a.set(i, j, rat(1));
    }
    a
}

/// Variables `(y, z)`, minimising `−y` subject to, for `t = 1..n`,
/// `(1/n²)(t − y)J + z(n(I + A_{G_t}) − J) ∈ COP`.
pub fn chromatic_program(g: &Graph) -> Result<ConicProgram> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Dimension("graph has no vertices".into()));
    }
    let n2 = rat((n * n) as i64);
    let nq = rat(n as i64);
    let constraints = (1..=n)
        .map(|t| {
            let gt = product_graph(g, t);
            let side = gt.n();
            let j = SymMatrix::ones(side);
            let a1 = j.scale(&(rat(-1) / &n2));
            let a2 = SymMatrix::identity(side)
                .add(&adjacency(&gt))
                .scale(&nq)
                .sub(&j);
            let c = j.scale(&(rat(-(t as i64)) / &n2));
            ConeConstraint { c, a: vec![a1, a2] }
        })
        .collect();
    ConicProgram::new(vec![rat(-1), rat(0)], constraints)
}

/// `R = n² + 1`, covering `(χ(G), 1)` and `(−n², 1)`.
pub fn chromatic_box_bound(g: &Graph) -> Rational {
    rat((g.n() * g.n()) as i64 + 1)
}

/// Exact witnesses at `(−n², 1)` for the boxed program: `P = I ⊕ D`,
/// `N = (t/n²)J + nA_{G_t} + (n−1)I ⊕ 0`, where `D` is the box diagonal.
pub fn chromatic_witnesses(
    g: &Graph,
    bounded: &ConicProgram,
    r_box: &Rational,
) -> Result<Vec<SpnWitness>> {
    let n = g.n();
    let ybar = vec![rat(-((n * n) as i64)), rat(1)];
    let box_diag: Vec<Rational> = ybar
        .iter()
        .flat_map(|y| [r_box * rat(2) - y, r_box * rat(2) + y])
        .collect();
    let nq = rat(n as i64);
    bounded
        .constraints
        .iter()
        .enumerate()
        .map(|(k, cons)| {
            let t = k + 1;
            let gt = product_graph(g, t);
            let side = gt.n();
            let p = SymMatrix::identity(side).direct_sum(&SymMatrix::diag(&box_diag));
            let nn = SymMatrix::ones(side)
                .scale(&(rat(t as i64) / rat((n * n) as i64)))
                .add(&adjacency(&gt).scale(&nq))
                .add(&SymMatrix::identity(side).scale(&(&nq - rat(1))))
                .pad_to(side + box_diag.len());
            witness_from_decomposition(cons, &ybar, p, nn)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChromaticBound {
    #[serde(flatten)]
    pub bound: AppBound,
    /// Cone family actually used; `K` at level 0 is solved through `Q^(0)`, the same cone.
    pub formulation: ConeKind,
}

/// Lower bound on `χ(G)` from the relaxed program.
pub fn chromatic_bound(g: &Graph, r: u32, kind: ConeKind, eps: f64) -> Result<ChromaticBound> {
    let prog = chromatic_program(g)?;
    let r_box = chromatic_box_bound(g);
    let bounded = to_bounded(&prog, &r_box);
    let witnesses = chromatic_witnesses(g, &bounded, &r_box)?;
    let formulation = if r == 0 { ConeKind::Q } else { kind };
    let rb = to_f64(&r_box);
    let rel = solve_relaxation(&bounded, r, formulation, rb, eps, Some(&witnesses))?;
    Ok(ChromaticBound {
        bound: AppBound {
            value: rel.value.map(|v| -v),
            box_bound: rb,
            relaxation: rel,
        },
        formulation,
    })
}
