//! Exact arithmetic in Z[ζ_m], Gauss and Jacobi sums, and their reductions.

mod cycint;
mod ratio;
mod stickelberger;
mod sums;

pub use cycint::{cyclotomic_poly, CycInt};
pub use ratio::{
    gauss_ratio_not_root_of_unity, ratio_case, ratio_case_refined, ratio_is_root_of_unity, CaseLabel, JacobiRatioClass,
    RatioVerdict,
};
pub use stickelberger::{reduce_mod_prime_ideal, stickelberger_reduce, StickelbergerReduction};
pub use sums::{gauss_conductor, gauss_sum_exact, jacobi_sum_exact};
