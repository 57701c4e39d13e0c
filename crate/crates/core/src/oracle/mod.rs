//! Exact worst-case values over adaptive adversaries, brute-force
//! cross-checks and the certificate suite.

mod brute;
mod certify;
mod dp;
pub mod lattice;

pub use brute::{
    brute_force_closest_pair, brute_force_closest_pair_with_budget, check_submartingale_step, BRUTE_FORCE_BUDGET,
};
pub use certify::{certify, Certificate, CertifyConfig, CertifyReport};
pub use dp::{
    compile_spec, dp_evaluate_strategy, dp_expected_tau_bound_check, dp_stop_prob_exceeds_n, dp_worst_case,
    dp_worst_case_compiled, DPResult, DpOptions, Objective, Policy, TauBound, TruncationRule,
};

#[cfg(test)]
mod tests;
