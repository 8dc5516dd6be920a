//! Exact integer arithmetic: divisors, GCD reduction, divisor-power sums,
//! smooth-number blocks, and the averaging/extremal diagnostics for
//! `sigma_{-1}`.
//!
//! Everything here is a pure function of its inputs. Tables are immutable once
//! built and can be shared across threads.

mod diagnostics;
mod divisor;
mod smooth;

pub use diagnostics::{
    gronwall_ratio_scan, mean_sigma_minus1, mean_sigma_minus1_exact, sigma_minus1_summatory_exact,
    GronwallRecord, GronwallScan, EULER_GAMMA,
};
pub use divisor::{
    divisor_count, divisors, factorize, gcd_reduce, sieve_divisor_function,
    sieve_divisor_function_with, sigma_minus1, sigma_minus1_f64, DivisorFunctionTable, DivisorKind,
    Exponent, GcdReduction, SieveConfig, DEFAULT_EXACT_LIMIT,
};
pub use smooth::{
    enumerate_smooth_block, enumerate_smooth_block_with_cap, find_doubling_t, first_primes,
    DoublingWitness, SmoothSet, DEFAULT_SMOOTH_CAP,
};
