//! Membership in the inner approximations `K^(r)` and `Q^(r)` of the
//! copositive cone, with sum-of-squares certificates.

mod certificate;
mod layout;
mod membership;
mod screen;

pub use certificate::{
    certificate_polynomial, is_exact, validate_certificate, CertificateTolerances, GramEntry,
    ScalarEntry, SosCertificate, ValidationReport,
};
pub use layout::{ConeKind, GramLayout, GramSpec, MAX_GRAM_SIDE, MAX_ROWS};
pub use membership::{
    build_k_membership, build_membership, build_q_membership, decide_membership,
    projected_certificate, solver_settings_for, MembershipOutcome, MembershipProblem,
    SolverSummary, Verdict,
};
pub use screen::{screen_copositive, ScreenReport};
