//! Maximin share allocation of indivisible goods.
//!
//! Values are integers (`Value`) and every threshold comparison is exact over
//! rationals (`Ratio`). The crate is `no_std` with `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod half;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod round_robin;
pub mod ternary;
pub mod three_agents;
pub mod two_thirds;
pub mod value;
pub mod verify;

pub use error::{Error, Result};
pub use half::{apx_mms_half, apx_mms_half_traced, HalfRun, Singleton};
pub use instance::{bundle_value, proportional_upper_bound, Allocation, Instance};
pub use matching::{
    build_preference_graph, compute_x_plus, maximum_matching, Matching, PreferenceGraph,
    XPlusDecomposition,
};
pub use oracle::{
    feasible_cover, mms_approx, mms_exact, mms_exact_with_cap, mms_greedy, xi_vector, CertificateMode,
    MaximinCertificate, Oracle, DEFAULT_EXACT_CAP,
};
pub use round_robin::{
    greedy_round_robin, modified_greedy_round_robin, modified_greedy_round_robin_traced,
    round_robin, ModifiedRun,
};
pub use ternary::{exact_mms_012, exact_mms_012_traced, TernaryRun};
pub use three_agents::{apx_3_mms, apx_3_mms_traced, Branch, ThreeAgentRun};
pub use two_thirds::{apx_mms, apx_mms_traced, rho, Level, OracleMode, TwoThirdsRun};
pub use value::{Epsilon, Ratio, Value};
pub use verify::{verify_allocation, AgentCheck, VerificationReport};
