//! Copositive programs and their SDP relaxations over `K^(r)` and `Q^(r)`.

mod builder;
mod interior;
mod intspn;
mod program;
mod solve;

pub use builder::{build_cpk_sdp, build_cpq_sdp, build_relaxation_sdp, RelaxationSdp};
pub use interior::{build_interior_start, max_entry, InteriorStart, MAX_HALVINGS};
pub use intspn::{
    check_intspn, witness_from_decomposition, IntSpnOutcome, IntSpnReport, SpnWitness,
};
pub use program::{to_bounded, ConeConstraint, ConicProgram};
pub use solve::{solve_built, solve_relaxation, RelaxationResult, SdpSize};
