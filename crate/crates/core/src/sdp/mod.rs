//! Standard-form block semidefinite programs and an interior-point solver.

mod diagnostics;
mod export;
mod problem;
mod solver;

pub use diagnostics::{sandwich_diagnostics, SandwichReport, SANDWICH_TOL};
pub use export::write_sdpa;
pub use problem::{Block, BlockKind, BlockMatrix, BlockSdp, Constraint, Entry, SparseBlockMatrix};
pub use solver::{solve, solve_with, IterationLog, SdpSolution, SdpStatus, SolverSettings};
