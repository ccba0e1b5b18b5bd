//! Immersion certificates, exact search, and constructive solvers.

mod brute;
mod certificate;
mod k22;
mod small;
mod structural;

pub use brute::{
    brute_force_immersion, brute_force_immersion_with, BruteOptions, BruteOutcome, BruteResult, DEFAULT_BUDGET,
};
pub use certificate::{verify_certificate, ImmersionCertificate, Verification, Violation, CERTIFICATE_SCHEMA_VERSION};
pub use k22::{has_k22, has_k22_with_budget, K22Outcome, PairEvidence, PairRefutation};
pub use small::solve_small_complete;
pub use structural::{quadratic_pipeline, structural_immersion, StructuralImmersion};
