//! Membership tests and witnesses for the no-signalling (NS) and
//! sub-no-signalling (SNOS) sets, plus the distance and fidelity functionals
//! used to compare distributions against them.
//!
//! Membership and trace distances are exact. Fidelities involve square roots
//! and are computed in binary64.

mod functional;
mod membership;

pub use functional::{
    fidelity, fidelity_f64, fidelity_weights, marginal_consistency_distance, max_consistency_distance,
    p_epsilon_membership, tilde_fidelity, trace_distance, ConsistencyDistance,
};
pub use membership::{
    is_ns, is_snos, minimal_dominating_marginal, snos_feasible_by_lp, MarginalBound, MembershipReport, NsMode,
    Violation,
};

#[cfg(test)]
mod tests;
