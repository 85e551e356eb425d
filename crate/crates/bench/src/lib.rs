//! Fixtures shared by the benchmarks.

use copo_core::apps::Graph;
use copo_core::pathology::c5_padded_matrix;
use copo_core::poly::{rat, SymMatrix};

/// `(name, matrix)` pairs for the membership benchmarks.
pub fn membership_fixtures() -> Vec<(&'static str, SymMatrix)> {
    vec![
        ("identity_5", SymMatrix::identity(5)),
        (
            "i_plus_j_4",
            SymMatrix::identity(4).add(&SymMatrix::ones(4)),
        ),
        ("c5_padded", c5_padded_matrix()),
    ]
}

/// `M = I + J/2` on `n` vertices, a dense SQP instance with a closed-form value.
pub fn sqp_fixture(n: usize) -> SymMatrix {
    SymMatrix::identity(n).add(&SymMatrix::ones(n).scale(&(rat(1) / rat(2))))
}

pub fn graph_fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("k3", Graph::complete(3)),
        ("p4", Graph::path(4)),
        ("c5", Graph::cycle(5)),
    ]
}
