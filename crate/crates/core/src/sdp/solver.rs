//! Primal-dual interior-point method on the homogeneous self-dual embedding
//! with Nesterov–Todd scaling and a Mehrotra predictor-corrector step.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use super::problem::{Block, BlockKind, BlockMatrix, BlockSdp, Constraint, Entry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SdpStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasibleOrUnbounded,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tol_feas: f64,
    pub tol_gap: f64,
    pub tol_infeas: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol_feas: 1e-8,
            tol_gap: 1e-8,
            tol_infeas: 1e-8,
            max_iter: 200,
        }
    }
}

/// One line of the iteration log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub mu: f64,
    pub tau: f64,
    pub kappa: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub step: f64,
    /// Largest entry of `X`, `S` or `y` (the magnitude of the iterates).
    pub max_entry: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: BlockMatrix,
    pub y: DVector<f64>,
    pub s: BlockMatrix,
    /// `⟨C, X⟩` at the returned (normalized) point.
    pub primal_objective: f64,
    /// `b^T y` at the returned point.
    pub dual_objective: f64,
    /// Relative residuals and gap achieved at the returned point.
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    /// Infeasibility certificate quality when an infeasibility status is returned.
    pub certificate_quality: Option<f64>,
    pub iterations: usize,
    pub message: String,
    pub log: Vec<IterationLog>,
}

impl SdpSolution {
    pub fn value(&self) -> f64 {
        self.primal_objective
    }
}

/// Solves with default tolerances, using `eps` for feasibility and gap.
pub fn solve(sdp: &BlockSdp, eps: f64, max_iter: usize) -> SdpSolution {
    assert!(eps > 0.0, "eps must be positive");
    let settings = SolverSettings {
        tol_feas: eps,
        tol_gap: eps,
        tol_infeas: eps,
        max_iter,
    };
    solve_with(sdp, &settings)
}

/// Per-block Nesterov–Todd scaling.
enum Scaling {
    Dense {
        g: DMatrix<f64>,
        g_inv: DMatrix<f64>,
        w: DMatrix<f64>,
        lambda: DVector<f64>,
    },
    Diag {
        /// `sqrt(x/s)`
        w: DVector<f64>,
        /// `sqrt(x s)`
        lambda: DVector<f64>,
    },
}

struct Direction {
    dx: BlockMatrix,
    dy: DVector<f64>,
    ds: BlockMatrix,
    dtau: f64,
    dkappa: f64,
}

/// Row-normalized copy of the problem plus index structures for the Schur complement.
struct Prepared {
    sdp: BlockSdp,
    row_scale: Vec<f64>,
    /// For each block, the constraints touching it and their entries in that block.
    by_block: Vec<Vec<(usize, Vec<Entry>)>>,
}

fn prepare(sdp: &BlockSdp) -> Prepared {
    let mut row_scale = Vec::with_capacity(sdp.num_constraints());
    let constraints: Vec<Constraint> = sdp
        .constraints()
        .iter()
        .map(|c| {
            let nrm = c.a.frobenius();
            let s = if nrm > 0.0 { 1.0 / nrm } else { 1.0 };
            row_scale.push(s);
            Constraint {
                a: c.a.scaled(s),
                b: c.b * s,
            }
        })
        .collect();
    let scaled = BlockSdp::new(sdp.blocks().to_vec(), sdp.objective().clone(), constraints)
        .expect("scaling preserves conformance");
    let mut by_block: Vec<Vec<(usize, Vec<Entry>)>> = vec![Vec::new(); sdp.blocks().len()];
    for (i, c) in scaled.constraints().iter().enumerate() {
        let mut per: Vec<Vec<Entry>> = vec![Vec::new(); sdp.blocks().len()];
        for e in c.a.entries() {
            per[e.block].push(*e);
        }
        for (b, list) in per.into_iter().enumerate() {
            if !list.is_empty() {
                by_block[b].push((i, list));
            }
        }
    }
    Prepared {
        sdp: scaled,
        row_scale,
        by_block,
    }
}

fn sym_lower_chol(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let sym = (m + m.transpose()) * 0.5;
    Cholesky::new(sym).map(|c| c.l())
}

fn compute_scaling(kinds: &[BlockKind], x: &BlockMatrix, s: &BlockMatrix) -> Option<Vec<Scaling>> {
    let mut out = Vec::with_capacity(kinds.len());
    for (bx, bs) in x.blocks.iter().zip(&s.blocks) {
        match (bx, bs) {
            (Block::Dense(xm), Block::Dense(sm)) => {
                let k = xm.nrows();
                if k == 0 {
                    out.push(Scaling::Dense {
                        g: DMatrix::zeros(0, 0),
                        g_inv: DMatrix::zeros(0, 0),
                        w: DMatrix::zeros(0, 0),
                        lambda: DVector::zeros(0),
                    });
                    continue;
                }
                let l = sym_lower_chol(xm)?;
                let r = sym_lower_chol(sm)?;
                let rtl = r.transpose() * &l;
                let svd = rtl.svd(false, true);
                let v_t = svd.v_t?;
                let sig = svd.singular_values;
                if sig.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                    return None;
                }
                let v = v_t.transpose();
                let inv_sqrt = DMatrix::from_diagonal(&sig.map(|v| 1.0 / v.sqrt()));
                let sqrt = DMatrix::from_diagonal(&sig.map(|v| v.sqrt()));
                let g = &l * &v * inv_sqrt;
                let l_inv = l.solve_lower_triangular(&DMatrix::identity(k, k))?;
                let g_inv = sqrt * v_t * l_inv;
                let w = &g * g.transpose();
                out.push(Scaling::Dense {
                    g,
                    g_inv,
                    w,
                    lambda: sig,
                });
            }
            (Block::Diag(xd), Block::Diag(sd)) => {
                if xd.iter().chain(sd.iter()).any(|&v| !(v > 0.0)) {
                    return None;
                }
                let w = xd.zip_map(sd, |a, b| (a / b).sqrt());
                let lambda = xd.zip_map(sd, |a, b| (a * b).sqrt());
                out.push(Scaling::Diag { w, lambda });
            }
            _ => return None,
        }
    }
    Some(out)
}

/// `W Y W` blockwise.
fn apply_w(scal: &[Scaling], y: &BlockMatrix) -> BlockMatrix {
    BlockMatrix {
        blocks: scal
            .iter()
            .zip(&y.blocks)
            .map(|(sc, b)| match (sc, b) {
                (Scaling::Dense { w, .. }, Block::Dense(m)) => Block::Dense(w * m * w),
                (Scaling::Diag { w, .. }, Block::Diag(d)) => {
                    Block::Diag(d.zip_map(w, |a, wi| a * wi * wi))
                }
                _ => unreachable!(),
            })
            .collect(),
    }
}

fn schur(prep: &Prepared, scal: &[Scaling]) -> DMatrix<f64> {
    let m = prep.sdp.num_constraints();
    let mut out = DMatrix::zeros(m, m);
    for (b, touching) in prep.by_block.iter().enumerate() {
        match &scal[b] {
            Scaling::Dense { w, .. } => {
                let k = w.nrows();
                let mut t = DMatrix::zeros(k, k);
                for (j, ej) in touching {
                    t.fill(0.0);
                    for e in ej {
                        let wr = w.column(e.row);
                        let wc = w.column(e.col);
                        if e.row == e.col {
                            t.ger(e.value, &wr, &wr, 1.0);
                        } else {
                            t.ger(e.value, &wr, &wc, 1.0);
                            t.ger(e.value, &wc, &wr, 1.0);
                        }
                    }
                    for (i, ei) in touching {
                        if i > j {
                            continue;
                        }
                        let v: f64 = ei
                            .iter()
                            .map(|e| {
                                if e.row == e.col {
                                    e.value * t[(e.row, e.row)]
                                } else {
                                    2.0 * e.value * t[(e.row, e.col)]
                                }
                            })
                            .sum();
                        out[(*i, *j)] += v;
                    }
                }
            }
            Scaling::Diag { w, .. } => {
                // group constraint entries per diagonal index
                let mut per_index: Vec<Vec<(usize, f64)>> = vec![Vec::new(); w.len()];
                for (i, ei) in touching {
                    for e in ei {
                        per_index[e.row].push((*i, e.value));
                    }
                }
                for (k, list) in per_index.iter().enumerate() {
                    let w2 = w[k] * w[k];
                    for &(i, ai) in list {
                        for &(j, aj) in list {
                            if i <= j {
                                out[(i, j)] += ai * aj * w2;
                            }
                        }
                    }
                }
            }
        }
    }
    for j in 0..m {
        for i in 0..j {
            out[(j, i)] = out[(i, j)];
        }
    }
    out
}

struct Factor {
    chol: Option<Cholesky<f64, Dyn>>,
    /// Jacobi scaling `D^{-1/2}` applied on both sides before factoring.
    scale: DVector<f64>,
}

impl Factor {
    fn new(mut m: DMatrix<f64>) -> Option<Factor> {
        let n = m.nrows();
        if n == 0 {
            return Some(Factor {
                chol: None,
                scale: DVector::zeros(0),
            });
        }
        let scale = DVector::from_fn(n, |i, _| {
            let d = m[(i, i)];
            if d > 0.0 && d.is_finite() {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        });
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] *= scale[i] * scale[j];
            }
        }
        let mut reg = 0.0;
        for attempt in 0..8 {
            if let Some(c) = Cholesky::new(m.clone()) {
                return Some(Factor {
                    chol: Some(c),
                    scale,
                });
            }
            let next = 1e-14 * 100f64.powi(attempt);
            for i in 0..n {
                m[(i, i)] += next - reg;
            }
            reg = next;
        }
        None
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        match &self.chol {
            Some(c) => {
                let z = c.solve(&rhs.component_mul(&self.scale));
                z.component_mul(&self.scale)
            }
            None => DVector::zeros(0),
        }
    }
}

/// Maps a scaled-space right-hand side `T` to `G Z G^T` where `Λ Z + Z Λ = 2 T`.
fn lyap_back(scal: &[Scaling], t: &[Block]) -> BlockMatrix {
    BlockMatrix {
        blocks: scal
            .iter()
            .zip(t)
            .map(|(sc, tb)| match (sc, tb) {
                (Scaling::Dense { g, lambda, .. }, Block::Dense(tm)) => {
                    let k = lambda.len();
                    let z =
                        DMatrix::from_fn(k, k, |i, j| 2.0 * tm[(i, j)] / (lambda[i] + lambda[j]));
                    Block::Dense(g * z * g.transpose())
                }
                (Scaling::Diag { w, lambda }, Block::Diag(td)) => {
                    Block::Diag(DVector::from_fn(w.len(), |k, _| w[k] * td[k] / lambda[k]))
                }
                _ => unreachable!(),
            })
            .collect(),
    }
}

/// Scaled complementarity target `-Λ²` (predictor) or
/// `σμI − Λ² − (dX̃ ∘ dS̃)` (corrector).
fn comp_target(
    scal: &[Scaling],
    sigma_mu: f64,
    corr: Option<(&BlockMatrix, &BlockMatrix)>,
) -> Vec<Block> {
    scal.iter()
        .enumerate()
        .map(|(b, sc)| match sc {
            Scaling::Dense {
                g, g_inv, lambda, ..
            } => {
                let k = lambda.len();
                let mut t = DMatrix::from_fn(k, k, |i, j| {
                    if i == j {
                        sigma_mu - lambda[i] * lambda[i]
                    } else {
                        0.0
                    }
                });
                if let Some((dx, ds)) = corr {
                    let dxm = dx.dense(b).unwrap();
                    let dsm = ds.dense(b).unwrap();
                    let dxt = g_inv * dxm * g_inv.transpose();
                    let dst = g.transpose() * dsm * g;
                    let p = &dxt * &dst;
                    t -= (&p + p.transpose()) * 0.5;
                }
                Block::Dense(t)
            }
            Scaling::Diag { w, lambda } => {
                let mut t = lambda.map(|l| sigma_mu - l * l);
                if let Some((dx, ds)) = corr {
                    let dxd = dx.diag(b).unwrap();
                    let dsd = ds.diag(b).unwrap();
                    for k in 0..t.len() {
                        t[k] -= (dxd[k] / w[k]) * (dsd[k] * w[k]);
                    }
                }
                Block::Diag(t)
            }
        })
        .collect()
}

/// Shared data of one Newton system.
struct NewtonSystem<'a> {
    prep: &'a Prepared,
    scal: &'a [Scaling],
    factor: &'a Factor,
    u: &'a DVector<f64>,
    g_minus_b: &'a DVector<f64>,
    c_wcw: f64,
    tau: f64,
    kappa: f64,
}

/// Right-hand sides of the linearized embedding:
/// `A(dX) − b dτ = r1`, `A*(dy) + dS − C dτ = r2`, `⟨C,dX⟩ − b^T dy + dκ = r3`,
/// `dX + W dS W = r4`, `κ dτ + τ dκ = r5`.
struct NewtonRhs {
    r1: DVector<f64>,
    r2: BlockMatrix,
    r3: f64,
    r4: BlockMatrix,
    r5: f64,
}

impl NewtonSystem<'_> {
    fn solve_once(&self, rhs: &NewtonRhs) -> Direction {
        let sdp = &self.prep.sdp;
        let (tau, kappa) = (self.tau, self.kappa);
        let mut yy = rhs.r4.clone();
        yy.axpy(-1.0, &apply_w(self.scal, &rhs.r2));
        let h1 = &rhs.r1 - sdp.apply(&yy);
        let h3 = rhs.r3 - sdp.objective().inner(&yy) - rhs.r5 / tau;
        let v = self.factor.solve(&h1);
        let denom = self.g_minus_b.dot(self.u) - self.c_wcw - kappa / tau;
        let dtau = (h3 - self.g_minus_b.dot(&v)) / denom;
        let dy = &v + self.u * dtau;
        let mut ds = rhs.r2.clone();
        ds.axpy(-1.0, &sdp.adjoint(&dy));
        ds.add_sparse(sdp.objective(), dtau);
        let mut dx = rhs.r4.clone();
        dx.axpy(-1.0, &apply_w(self.scal, &ds));
        let dkappa = (rhs.r5 - kappa * dtau) / tau;
        Direction {
            dx,
            dy,
            ds,
            dtau,
            dkappa,
        }
    }

    fn residual(&self, rhs: &NewtonRhs, d: &Direction) -> NewtonRhs {
        let sdp = &self.prep.sdp;
        let b = sdp.rhs();
        let r1 = &rhs.r1 - sdp.apply(&d.dx) + &b * d.dtau;
        let mut r2 = rhs.r2.clone();
        r2.axpy(-1.0, &sdp.adjoint(&d.dy));
        r2.axpy(-1.0, &d.ds);
        r2.add_sparse(sdp.objective(), d.dtau);
        let r3 = rhs.r3 - sdp.objective().inner(&d.dx) + b.dot(&d.dy) - d.dkappa;
        let mut r4 = rhs.r4.clone();
        r4.axpy(-1.0, &d.dx);
        r4.axpy(-1.0, &apply_w(self.scal, &d.ds));
        let r5 = rhs.r5 - self.kappa * d.dtau - self.tau * d.dkappa;
        NewtonRhs { r1, r2, r3, r4, r5 }
    }

    /// Solve followed by a few rounds of iterative refinement.
    fn solve(&self, rhs: &NewtonRhs) -> Direction {
        let mut d = self.solve_once(rhs);
        let size = |r: &NewtonRhs| {
            let r1 = if r.r1.is_empty() { 0.0 } else { r.r1.amax() };
            r1.max(r.r2.max_abs())
                .max(r.r3.abs())
                .max(r.r4.max_abs())
                .max(r.r5.abs())
        };
        let mut err = size(&self.residual(rhs, &d));
        for _ in 0..3 {
            let res = self.residual(rhs, &d);
            let c = self.solve_once(&res);
            let mut trial = Direction {
                dx: d.dx.clone(),
                dy: &d.dy + &c.dy,
                ds: d.ds.clone(),
                dtau: d.dtau + c.dtau,
                dkappa: d.dkappa + c.dkappa,
            };
            trial.dx.axpy(1.0, &c.dx);
            trial.ds.axpy(1.0, &c.ds);
            let e = size(&self.residual(rhs, &trial));
            if e < err {
                d = trial;
                err = e;
            } else {
                break;
            }
        }
        d
    }
}

/// Largest `α` with `X + α dX ⪰ 0` per block (may be infinite).
fn max_step(x: &BlockMatrix, dx: &BlockMatrix) -> f64 {
    let mut alpha = f64::INFINITY;
    for (bx, bd) in x.blocks.iter().zip(&dx.blocks) {
        match (bx, bd) {
            (Block::Dense(xm), Block::Dense(dm)) => {
                if xm.nrows() == 0 {
                    continue;
                }
                let Some(l) = sym_lower_chol(xm) else {
                    return 0.0;
                };
                let Some(li) = l.solve_lower_triangular(&DMatrix::identity(xm.nrows(), xm.nrows()))
                else {
                    return 0.0;
                };
                let z = &li * dm * li.transpose();
                let z = (&z + z.transpose()) * 0.5;
                let lmin = z.symmetric_eigenvalues().min();
                if lmin < 0.0 {
                    alpha = alpha.min(-1.0 / lmin);
                }
            }
            (Block::Diag(xd), Block::Diag(dd)) => {
                for (a, d) in xd.iter().zip(dd.iter()) {
                    if *d < 0.0 {
                        alpha = alpha.min(-a / d);
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    alpha
}

fn step_bound(v: f64, dv: f64) -> f64 {
    if dv < 0.0 {
        -v / dv
    } else {
        f64::INFINITY
    }
}

fn max_entry(x: &BlockMatrix, y: &DVector<f64>, s: &BlockMatrix) -> f64 {
    x.max_abs()
        .max(s.max_abs())
        .max(if y.is_empty() { 0.0 } else { y.amax() })
}

fn dense_max_eigenvalue(m: &BlockMatrix) -> f64 {
    m.blocks
        .iter()
        .map(|b| match b {
            Block::Dense(d) if d.nrows() == 0 => f64::NEG_INFINITY,
            Block::Dense(d) => d.clone().symmetric_eigenvalues().max(),
            Block::Diag(d) if d.is_empty() => f64::NEG_INFINITY,
            Block::Diag(d) => d.max(),
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The best iterate is accepted when its residuals and gap are within this
/// multiple of the tolerances after the main loop fails to reach them.
const FALLBACK_FACTOR: f64 = 10.0;

/// Solves the block SDP `min ⟨C,X⟩ s.t. ⟨A_i,X⟩ = b_i, X ⪰ 0` and its dual
/// `max b^T y s.t. C − Σ y_i A_i = S ⪰ 0`.
pub fn solve_with(sdp: &BlockSdp, settings: &SolverSettings) -> SdpSolution {
    let prep = prepare(sdp);
    let p = &prep.sdp;
    let kinds = p.blocks().to_vec();
    let nu = p.degree() as f64;
    let b = p.rhs();
    let b_norm = if b.is_empty() { 0.0 } else { b.amax() };
    let c_norm = p.objective().max_abs();

    let mut x = BlockMatrix::identity(&kinds);
    let mut s = BlockMatrix::identity(&kinds);
    let mut y = DVector::zeros(p.num_constraints());
    let mut tau = 1.0f64;
    let mut kappa = 1.0f64;
    let mut log = Vec::new();
    let mut last_step = 0.0;
    let mut stall = 0usize;
    // best iterate by max(residuals, gap); used when the target accuracy is not reached
    let mut best: Option<(f64, BlockMatrix, DVector<f64>, BlockMatrix, f64, usize)> = None;

    let finish = |status: SdpStatus,
                  x: &BlockMatrix,
                  y: &DVector<f64>,
                  s: &BlockMatrix,
                  tau: f64,
                  quality: Option<f64>,
                  iterations: usize,
                  message: String,
                  log: Vec<IterationLog>| {
        let norm = if status == SdpStatus::Optimal || status == SdpStatus::Inconclusive {
            tau
        } else {
            1.0
        };
        let xo = x.scaled(1.0 / norm);
        let so = s.scaled(1.0 / norm);
        let yo_scaled = y / norm;
        let yo = DVector::from_iterator(
            yo_scaled.len(),
            yo_scaled.iter().zip(&prep.row_scale).map(|(v, r)| v * r),
        );
        let pobj = sdp.objective().inner(&xo);
        let dobj = sdp.rhs().dot(&yo);
        let bn = sdp.rhs().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let pres = sdp.max_violation(&xo) / (1.0 + bn);
        let mut rd = sdp.adjoint(&yo);
        rd.axpy(1.0, &so);
        rd.add_sparse(sdp.objective(), -1.0);
        let dres = rd.max_abs() / (1.0 + sdp.objective().max_abs());
        SdpSolution {
            status,
            x: xo,
            y: yo,
            s: so,
            primal_objective: pobj,
            dual_objective: dobj,
            primal_residual: pres,
            dual_residual: dres,
            gap: (pobj - dobj).abs(),
            certificate_quality: quality,
            iterations,
            message,
            log,
        }
    };

    let mut failure = ("iteration limit reached".to_string(), settings.max_iter);
    for iter in 0..=settings.max_iter {
        let ax = p.apply(&x);
        let rp = &ax - &b * tau;
        let mut rd = p.adjoint(&y);
        rd.axpy(1.0, &s);
        rd.add_sparse(p.objective(), -tau);
        let cx = p.objective().inner(&x);
        let by = b.dot(&y);
        let rg = cx - by + kappa;
        let mu = (x.inner(&s) + tau * kappa) / (nu + 1.0);

        let pres = if rp.is_empty() { 0.0 } else { rp.amax() } / tau / (1.0 + b_norm);
        let dres = rd.max_abs() / tau / (1.0 + c_norm);
        let pobj = cx / tau;
        let dobj = by / tau;
        let gap = (pobj - dobj).abs();
        log.push(IterationLog {
            iter,
            mu,
            tau,
            kappa,
            primal_residual: pres,
            dual_residual: dres,
            gap,
            step: last_step,
            max_entry: max_entry(&x, &y, &s),
        });

        let rel_gap = gap.min(gap / (1.0 + pobj.abs().max(dobj.abs())));
        if pres <= settings.tol_feas && dres <= settings.tol_feas && rel_gap <= settings.tol_gap {
            return finish(
                SdpStatus::Optimal,
                &x,
                &y,
                &s,
                tau,
                None,
                iter,
                "optimal".into(),
                log,
            );
        }
        let merit = (pres / settings.tol_feas)
            .max(dres / settings.tol_feas)
            .max(rel_gap / settings.tol_gap);
        if merit.is_finite() && best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, x.clone(), y.clone(), s.clone(), tau, iter));
        }
        if by > 0.0 {
            let aty = p.adjoint(&y);
            let q = dense_max_eigenvalue(&aty).max(0.0) / by;
            if q <= settings.tol_infeas {
                let yn = &y / by;
                let sn = aty.scaled(-1.0 / by);
                return finish(
                    SdpStatus::PrimalInfeasible,
                    &x.scaled(1.0 / by),
                    &yn,
                    &sn,
                    1.0,
                    Some(q),
                    iter,
                    "primal infeasibility certificate found".into(),
                    log,
                );
            }
        }
        if cx < 0.0 {
            let q = if ax.is_empty() { 0.0 } else { ax.amax() } / (-cx);
            if q <= settings.tol_infeas && x.min_eigenvalue() >= -settings.tol_infeas * x.max_abs()
            {
                return finish(
                    SdpStatus::DualInfeasibleOrUnbounded,
                    &x.scaled(-1.0 / cx),
                    &y,
                    &s,
                    1.0,
                    Some(q),
                    iter,
                    "dual infeasibility certificate found".into(),
                    log,
                );
            }
        }
        if iter == settings.max_iter {
            break;
        }
        if !(mu.is_finite() && tau.is_finite() && kappa.is_finite()) {
            failure = ("numerical breakdown".into(), iter);
            break;
        }

        let Some(scal) = compute_scaling(&kinds, &x, &s) else {
            failure = ("breakdown: iterate lost definiteness".into(), iter);
            break;
        };
        let Some(factor) = Factor::new(schur(&prep, &scal)) else {
            failure = (
                "breakdown: Schur complement not positive definite".into(),
                iter,
            );
            break;
        };
        let mut c_mat = BlockMatrix::zeros(&kinds);
        c_mat.add_sparse(p.objective(), 1.0);
        let wcw = apply_w(&scal, &c_mat);
        let g = p.apply(&wcw);
        let c_wcw = p.objective().inner(&wcw);
        let u = factor.solve(&(&g + &b));
        let g_minus_b = &g - &b;
        let sys = NewtonSystem {
            prep: &prep,
            scal: &scal,
            factor: &factor,
            u: &u,
            g_minus_b: &g_minus_b,
            c_wcw,
            tau,
            kappa,
        };

        // predictor
        let target = comp_target(&scal, 0.0, None);
        let aff = sys.solve(&NewtonRhs {
            r1: -&rp,
            r2: rd.scaled(-1.0),
            r3: -rg,
            r4: lyap_back(&scal, &target),
            r5: -tau * kappa,
        });
        let a_aff = max_step(&x, &aff.dx)
            .min(max_step(&s, &aff.ds))
            .min(step_bound(tau, aff.dtau))
            .min(step_bound(kappa, aff.dkappa))
            .min(1.0);
        let mut xa = x.clone();
        xa.axpy(a_aff, &aff.dx);
        let mut sa = s.clone();
        sa.axpy(a_aff, &aff.ds);
        let mu_aff =
            (xa.inner(&sa) + (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) / (nu + 1.0);
        let sigma = (mu_aff / mu).max(0.0).min(1.0).powi(3);

        // corrector
        let target = comp_target(&scal, sigma * mu, Some((&aff.dx, &aff.ds)));
        let r5 = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
        let eta = 1.0 - sigma;
        let dir = sys.solve(&NewtonRhs {
            r1: &rp * (-eta),
            r2: rd.scaled(-eta),
            r3: -eta * rg,
            r4: lyap_back(&scal, &target),
            r5,
        });
        let a_max = max_step(&x, &dir.dx)
            .min(max_step(&s, &dir.ds))
            .min(step_bound(tau, dir.dtau))
            .min(step_bound(kappa, dir.dkappa));
        let mut alpha = (0.98 * a_max).min(1.0);
        if !(alpha > 0.0) || !alpha.is_finite() {
            failure = ("breakdown: zero step".into(), iter);
            break;
        }
        // eigenvalue-based step lengths can overshoot by rounding; back off until both iterates factor
        let (mut xn, mut sn) = (x.clone(), s.clone());
        for _ in 0..30 {
            xn = x.clone();
            xn.axpy(alpha, &dir.dx);
            sn = s.clone();
            sn.axpy(alpha, &dir.ds);
            if compute_scaling(&kinds, &xn, &sn).is_some() {
                break;
            }
            alpha *= 0.5;
        }
        x = xn;
        s = sn;
        x.symmetrize();
        s.symmetrize();
        y += &dir.dy * alpha;
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
        last_step = alpha;

        if alpha < 1e-8 {
            stall += 1;
            if stall >= 5 {
                failure = ("stalled".into(), iter + 1);
                break;
            }
        } else {
            stall = 0;
        }

        // Rescale the homogeneous iterate when it drifts far from unit size.
        let size = tau + kappa;
        if !(1e-6..=1e6).contains(&size) {
            let f = 1.0 / size;
            x = x.scaled(f);
            s = s.scaled(f);
            y *= f;
            tau *= f;
            kappa *= f;
        }
    }
    let (message, iters) = failure;
    if let Some((merit, bx, by, bs, btau, biter)) = best {
        if merit <= FALLBACK_FACTOR {
            let msg = format!(
                "{}; best iterate ({}) accepted at reduced accuracy {:.1e}",
                message, biter, merit
            );
            return finish(
                SdpStatus::Optimal,
                &bx,
                &by,
                &bs,
                btau,
                None,
                iters,
                msg,
                log,
            );
        }
    }
    finish(
        SdpStatus::Inconclusive,
        &x,
        &y,
        &s,
        tau,
        None,
        iters,
        message,
        log,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::problem::SparseBlockMatrix;

    fn single(block: usize, row: usize, col: usize, v: f64) -> SparseBlockMatrix {
        let mut a = SparseBlockMatrix::new();
        a.push(block, row, col, v);
        a
    }

    #[test]
    fn scalar_equality() {
        let sdp = BlockSdp::new(
            vec![BlockKind::Psd(1)],
            single(0, 0, 0, 1.0),
            vec![Constraint {
                a: single(0, 0, 0, 1.0),
                b: 3.0,
            }],
        )
        .unwrap();
        let sol = solve(&sdp, 1e-8, 100);
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.value() - 3.0).abs() < 1e-7);
    }

    #[test]
    fn negative_scalar_is_infeasible() {
        let sdp = BlockSdp::new(
            vec![BlockKind::Psd(1)],
            SparseBlockMatrix::new(),
            vec![Constraint {
                a: single(0, 0, 0, 1.0),
                b: -1.0,
            }],
        )
        .unwrap();
        let sol = solve(&sdp, 1e-8, 100);
        assert_eq!(sol.status, SdpStatus::PrimalInfeasible);
    }

    #[test]
    fn am_gm_example() {
        let mut c = SparseBlockMatrix::new();
        c.push(0, 0, 0, 1.0);
        c.push(0, 1, 1, 1.0);
        let sdp = BlockSdp::new(
            vec![BlockKind::Psd(2)],
            c,
            vec![Constraint {
                a: single(0, 0, 1, 1.0),
                b: 2.0,
            }],
        )
        .unwrap();
        let sol = solve(&sdp, 1e-8, 100);
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.value() - 2.0).abs() < 1e-7);
        let x = sol.x.dense(0).unwrap();
        for v in x.iter() {
            assert!((v - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn unbounded_is_detected() {
        // min -x11 + x22 s.t. x12 = 0: unbounded below
        let mut c = SparseBlockMatrix::new();
        c.push(0, 0, 0, -1.0);
        c.push(0, 1, 1, 1.0);
        let sdp = BlockSdp::new(
            vec![BlockKind::Psd(2)],
            c,
            vec![Constraint {
                a: single(0, 0, 1, 1.0),
                b: 0.0,
            }],
        )
        .unwrap();
        let sol = solve(&sdp, 1e-8, 200);
        assert_eq!(sol.status, SdpStatus::DualInfeasibleOrUnbounded);
    }

    #[test]
    fn no_constraints() {
        let sdp = BlockSdp::new(vec![BlockKind::Nonneg(2)], single(0, 1, 1, 2.0), vec![]).unwrap();
        let sol = solve(&sdp, 1e-8, 100);
        assert_eq!(
            sol.status,
            SdpStatus::Optimal,
            "{} {:?}",
            sol.message,
            sol.log.iter().rev().take(3).collect::<Vec<_>>()
        );
        assert!(sol.value().abs() < 1e-7);
    }
}
