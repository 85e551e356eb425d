use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::poly::SymMatrix;

/// Result of sampling `xᵀMx` over the standard simplex.
#[derive(Clone, Debug, Serialize)]
pub struct ScreenReport {
    pub points: usize,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    /// `min_value` below `−tol·max|M_ij|`
    pub violation: bool,
}

/// Necessary-condition copositivity screen: evaluates `xᵀMx` at the simplex
/// vertices, edge midpoints and `samples` uniform random points.
pub fn screen_copositive(m: &SymMatrix, samples: usize, seed: u64) -> ScreenReport {
    let n = m.n();
    let a = m.to_f64();
    let eval = |x: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                s += a[(i, j)] * x[i] * x[j];
            }
        }
        s
    };
    let mut best = f64::INFINITY;
    let mut argmin = vec![0.0; n];
    let mut points = 0;
    let mut consider = |x: Vec<f64>| {
        let v = eval(&x);
        points += 1;
        if v < best {
            best = v;
            argmin = x;
        }
    };
    for i in 0..n {
        for j in i..n {
            let mut x = vec![0.0; n];
            x[i] += 0.5;
            x[j] += 0.5;
            consider(x);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        // normalised exponentials are uniform on the simplex
        let mut x: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        consider(x);
    }
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    ScreenReport {
        points,
        min_value: best,
        argmin,
        violation: best < -1e-12 * scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn screens() {
        let r = screen_copositive(&SymMatrix::identity(3), 100, 1);
        assert!(!r.violation);
        assert!((r.min_value - 1.0 / 3.0).abs() < 0.05);
        let mut m = SymMatrix::identity(2);
        m.set(0, 1, rat(-2));
        let r = screen_copositive(&m, 0, 1);
        assert!(r.violation);
        assert_eq!(r.argmin, vec![0.5, 0.5]);
    }
}
