//! Dependence measures on finite joint distributions, and verified bounds
//! on the probability a joint distribution assigns to an event in terms of
//! the probability under the product of its marginals.
//!
//! The crate has four layers:
//!
//! - [`dist`]: probability vectors, row-major joints, boolean event masks,
//!   and the exact brute-force event probabilities everything else is
//!   checked against;
//! - [`measures`]: mutual information, lautum information, maximal
//!   leakage, `D_inf`, and `J_inf`, all computed exactly in nats;
//! - [`bounds`]: scalar evaluators for each bound family plus joint-level
//!   wrappers producing [`BoundReport`]s with clamped values and
//!   applicability flags;
//! - [`verify`]: seeded random instances and the soundness loop comparing
//!   every applicable bound against the exact probability.
//!
//! All randomness is deterministic given a seed; suites are
//! order-independent and parallelizable.

pub mod bounds;
pub mod dist;
pub mod error;
pub mod instance;
pub mod measures;
pub mod verify;

pub use bounds::{
    cor1_closed_form, default_beta, dv_bound, dv_bound_infimum, ell_star, ell_star_inverse_bound,
    evaluate_all, expectation_gap_bound, invert_binary_kl, jinf_bound, lautum_bound,
    lautum_dv_bound, leakage_bound, literature_bound, subgaussian_bound, BoundReport,
    ExpectationGap, Method, LN_4, VIOLATION_TOLERANCE,
};
pub use dist::{Channel, EventMask, Joint, Pmf, NEG_SNAP, SUM_TOLERANCE};
pub use error::{Error, Result};
pub use instance::Instance;
pub use measures::{
    binary_entropy, binary_kl, d_infinity, j_infinity, kl_divergence, lautum_information,
    max_leakage, mutual_information, MeasureSet,
};
pub use verify::{
    random_instance, run_suite, spec_for_index, tightness_witness, verify_instance, InstanceSpec,
    MethodMargin, MethodSummary, SuiteConfig, SuiteSummary, TightnessWitness, VerifyRecord,
};
