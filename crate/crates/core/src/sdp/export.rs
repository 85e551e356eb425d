//! Plain-text sparse export in SDPA format.
//!
//! Layout: a comment line, `m`, the block count, the block sizes (negative
//! for nonnegative blocks), the right-hand sides, then one line per nonzero
//! `constraint block row col value` with 1-based block/row/col indices and
//! `row ≤ col`. Constraint index 0 holds the objective. SDPA maximizes
//! `⟨F0, Y⟩`, so the objective is written negated: the SDPA optimum is
//! `−(min ⟨C, X⟩)`.

use std::fmt::Write;

use super::problem::{BlockKind, BlockSdp, SparseBlockMatrix};

pub fn write_sdpa(sdp: &BlockSdp) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "* block SDP: min <C,X> s.t. <A_i,X> = b_i");
    let _ = writeln!(out, "{}", sdp.num_constraints());
    let _ = writeln!(out, "{}", sdp.blocks().len());
    let sizes: Vec<String> = sdp
        .blocks()
        .iter()
        .map(|b| match b {
            BlockKind::Psd(k) => k.to_string(),
            BlockKind::Nonneg(k) => format!("-{}", k),
        })
        .collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let rhs: Vec<String> = sdp
        .constraints()
        .iter()
        .map(|c| format!("{:e}", c.b))
        .collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    let mut emit = |idx: usize, m: &SparseBlockMatrix, sign: f64| {
        for e in m.entries() {
            let _ = writeln!(
                out,
                "{} {} {} {} {:e}",
                idx,
                e.block + 1,
                e.row + 1,
                e.col + 1,
                sign * e.value
            );
        }
    };
    emit(0, sdp.objective(), -1.0);
    for (i, c) in sdp.constraints().iter().enumerate() {
        emit(i + 1, &c.a, 1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::problem::Constraint;

    #[test]
    fn small_export() {
        let mut c = SparseBlockMatrix::new();
        c.push(0, 0, 0, 1.0);
        let mut a = SparseBlockMatrix::new();
        a.push(0, 1, 0, 0.5);
        a.push(1, 1, 1, 2.0);
        let sdp = BlockSdp::new(
            vec![BlockKind::Psd(2), BlockKind::Nonneg(3)],
            c,
            vec![Constraint { a, b: 1.0 }],
        )
        .unwrap();
        let text = write_sdpa(&sdp);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "1");
        assert_eq!(lines[2], "2");
        assert_eq!(lines[3], "2 -3");
        assert_eq!(lines[5], "0 1 1 1 -1e0");
        assert_eq!(lines[6], "1 1 1 2 5e-1");
        assert_eq!(lines[7], "1 2 2 2 2e0");
    }
}
