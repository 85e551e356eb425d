//! Standard quadratic programs, weighted stability and chromatic-number
//! bounds built on the relaxations.

mod chromatic;
mod graph;
mod sqp;
mod stability;

pub use chromatic::{
    chromatic_bound, chromatic_box_bound, chromatic_program, chromatic_witnesses, ChromaticBound,
};
pub use graph::{
    brute_alpha, brute_alpha_weighted, brute_chi, product_graph, Graph, MAX_ALPHA_VERTICES,
    MAX_CHI_VERTICES,
};
pub use sqp::{
    reciprocal_program, reciprocal_witness, split_from_parts, spn_split, sqp_bound, sqp_box_bound,
    sqp_program, sqp_reciprocal_bound, sqp_witness, AppBound,
};
pub use stability::{ms_matrix, nu_r, stability_bound, theta_r, validate_ms_matrix};
